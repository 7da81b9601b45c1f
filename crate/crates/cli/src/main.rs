//! `iwasawa-kit`: emits JSON certificates for the checks of the library.
//!
//! Exit codes: 0 success, 2 precondition violation, 3 a mathematical check came out negative,
//! 4 I/O, schema or usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use iwasawa_kit::cert::{
    load_verify_inputs, Certificate, ComplexInput, FittingInput, ThetaInput, TowerInput, VerifyInput,
};
use iwasawa_kit::classmod::ClassModuleData;
use iwasawa_kit::field::{AbelianFieldSpec, PlaceSet};
use iwasawa_kit::iwasawa::{default_tower_smoothing, minimal_tower_places, TowerElement};
use iwasawa_kit::selftest::{self, Bounds};
use iwasawa_kit::Error;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::Precondition(_) | Error::Precision(_) | Error::NonUnit(_)) => 2,
            CliError::Lib(Error::CheckFailed(_)) => 3,
            CliError::Lib(Error::Malformed(_) | Error::Mismatch(_)) | CliError::Io { .. } | CliError::Usage(_) => 4,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "iwasawa-kit", version, about = "Exact Stickelberger, tower, Fitting and complex checks with JSON certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Θ_{S,T}(r) with the Hyp(S, T) and integrality verdicts.
    Theta(FieldArgs),
    /// Θ over the layers of the cyclotomic Z_p-tower: coherence and the Kummer congruence.
    /// Without `--T`, T is the least prime outside S that is prime to 2mp.
    Tower(TowerArgs),
    /// Annihilation and Fitting membership against class-module data.
    Verify(VerifyArgs),
    /// Fitting ideal of a finitely presented module.
    Fitting(DataArg),
    /// Cohomology and the Euler–Fitting invariant of a bounded complex.
    Complex(DataArg),
    /// All property suites under a seed.
    Selftest(SelftestArgs),
    /// Re-runs the check embedded in a certificate and compares the outcome.
    Revalidate(DataArg),
}

#[derive(Args)]
struct FieldArgs {
    /// JSON file, inline JSON, or `cyclotomic:M`.
    #[arg(long)]
    spec: String,
    #[arg(long = "S")]
    s: Option<String>,
    #[arg(long = "T", default_value = "")]
    t: String,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    r: i64,
}

#[derive(Args)]
struct TowerArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    p: u64,
    #[arg(long = "N")]
    n: u32,
    #[arg(long)]
    levels: u32,
    /// A tower (or a tower certificate) to check instead of recomputing.
    #[arg(long)]
    data: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// A verify input (or an array of them), or bare class-module data combined with the flags.
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    spec: Option<String>,
    #[arg(long = "S")]
    s: Option<String>,
    #[arg(long = "T")]
    t: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<i64>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long = "N")]
    n: Option<u32>,
}

#[derive(Args)]
struct DataArg {
    #[arg(long)]
    data: PathBuf,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Smaller corpus and trial counts.
    #[arg(long)]
    reduced: bool,
    /// Class-module data: a JSON file or a directory of them.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Tower depth n_max.
    #[arg(long)]
    levels: Option<u32>,
    /// Largest tower precision N.
    #[arg(long = "N")]
    n: Option<u32>,
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn read_json(path: &Path) -> CliResult<Value> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::malformed(format!("{}: {e}", path.display())).into())
}

fn from_json<T: serde::de::DeserializeOwned>(v: Value) -> CliResult<T> {
    serde_json::from_value(v).map_err(|e| Error::malformed(e.to_string()).into())
}

fn parse_spec(arg: &str) -> CliResult<AbelianFieldSpec> {
    if let Some(m) = arg.strip_prefix("cyclotomic:") {
        let m: u64 = m.parse().map_err(|_| CliError::Usage(format!("bad modulus in {arg:?}")))?;
        return AbelianFieldSpec::new(m, vec![], format!("Q(zeta_{m})")).map_err(Into::into);
    }
    let value = if arg.trim_start().starts_with('{') {
        serde_json::from_str(arg).map_err(|e| Error::malformed(e.to_string()))?
    } else {
        read_json(Path::new(arg))?
    };
    from_json(value)
}

fn parse_places(arg: &str) -> CliResult<PlaceSet> {
    Ok(arg.parse()?)
}

/// `S` defaults to the ramified primes and the infinite place.
fn places_or_default(arg: &Option<String>, default: impl FnOnce() -> PlaceSet) -> CliResult<PlaceSet> {
    match arg {
        Some(s) => parse_places(s),
        None => Ok(default()),
    }
}

fn theta(args: &FieldArgs) -> CliResult<Outcome> {
    let spec = parse_spec(&args.spec)?;
    let s = places_or_default(&args.s, || PlaceSet::with_infinity(&spec.ramified_primes()))?;
    let input = ThetaInput { spec, s, t: parse_places(&args.t)?, r: args.r };
    certificate(Certificate::theta(&input)?)
}

fn tower(args: &TowerArgs) -> CliResult<Outcome> {
    let spec = parse_spec(&args.field.spec)?;
    let s = places_or_default(&args.field.s, || minimal_tower_places(&spec, args.p))?;
    let replay = match &args.data {
        None => None,
        Some(path) => {
            let v = read_json(path)?;
            let tower = match v.pointer("/witness/tower") {
                Some(t) => t.clone(),
                None => v,
            };
            Some(from_json::<TowerElement>(tower)?)
        }
    };
    let t = if args.field.t.trim().is_empty() {
        default_tower_smoothing(&spec, args.p, &s)
    } else {
        parse_places(&args.field.t)?
    };
    let input = TowerInput {
        spec,
        s,
        t,
        r: args.field.r,
        p: args.p,
        precision: args.n,
        levels: args.levels,
        replay,
    };
    certificate(Certificate::tower(&input)?)
}

fn verify(args: &VerifyArgs) -> CliResult<Outcome> {
    let value = read_json(&args.data)?;
    let cases = if value.is_array() || value.get("data").is_some() {
        load_verify_inputs(&args.data)?.into_iter().map(|(_, c)| c).collect()
    } else {
        let data: ClassModuleData = from_json(value)?;
        let missing = |flag: &str| CliError::Usage(format!("bare class-module data needs --{flag}"));
        let spec = parse_spec(args.spec.as_deref().ok_or_else(|| missing("spec"))?)?;
        let s = places_or_default(&args.s, || PlaceSet::with_infinity(&spec.ramified_primes()))?;
        vec![VerifyInput {
            spec,
            s,
            t: parse_places(args.t.as_deref().unwrap_or(""))?,
            r: args.r.unwrap_or(0),
            p: args.p.ok_or_else(|| missing("p"))?,
            precision: args.n.ok_or_else(|| missing("N"))?,
            data,
            theta: None,
        }]
    };
    let certs = cases
        .into_iter()
        .map(|mut c| {
            if let Some(spec) = &args.spec {
                c.spec = parse_spec(spec)?;
            }
            if let Some(s) = &args.s {
                c.s = parse_places(s)?;
            }
            if let Some(t) = &args.t {
                c.t = parse_places(t)?;
            }
            c.r = args.r.unwrap_or(c.r);
            c.p = args.p.unwrap_or(c.p);
            c.precision = args.n.unwrap_or(c.precision);
            Ok(Certificate::verify(&c)?)
        })
        .collect::<CliResult<Vec<_>>>()?;
    match <[Certificate; 1]>::try_from(certs) {
        Ok([c]) => certificate(c),
        Err(certs) => Ok(Outcome {
            passed: certs.iter().all(Certificate::passed),
            value: serde_json::to_value(&certs).expect("certificates serialise"),
        }),
    }
}

fn fitting(args: &DataArg) -> CliResult<Outcome> {
    let v = read_json(&args.data)?;
    let input: FittingInput = if v.get("module").is_some() { from_json(v)? } else { FittingInput { module: from_json(v)? } };
    certificate(Certificate::fitting(&input)?)
}

fn complex(args: &DataArg) -> CliResult<Outcome> {
    let v = read_json(&args.data)?;
    let input: ComplexInput = if v.get("complex").is_some() { from_json(v)? } else { ComplexInput { complex: from_json(v)? } };
    certificate(Certificate::complex(&input)?)
}

fn run_selftest(args: &SelftestArgs) -> CliResult<Outcome> {
    let mut bounds = if args.reduced { Bounds::reduced() } else { Bounds::default() };
    bounds.tower_levels = args.levels.unwrap_or(bounds.tower_levels);
    bounds.tower_precision = args.n.unwrap_or(bounds.tower_precision);
    let cases = match &args.data {
        Some(path) => load_verify_inputs(path)?,
        None => vec![],
    };
    let report = selftest::run(args.seed, &bounds, &cases);
    Ok(Outcome { passed: report.passed(), value: serde_json::to_value(&report).expect("reports serialise") })
}

fn revalidate(args: &DataArg) -> CliResult<Outcome> {
    let cert = Certificate::from_json(&read(&args.data)?)?;
    let revalidated = cert.revalidate()?;
    Ok(Outcome { passed: revalidated, value: json!({ "check": cert.check, "revalidated": revalidated, "passed": cert.passed() }) })
}

/// JSON output and whether every check in it came out positive; negative outcomes exit with 3.
struct Outcome {
    value: Value,
    passed: bool,
}

fn certificate(c: Certificate) -> CliResult<Outcome> {
    Ok(Outcome { passed: c.passed(), value: serde_json::to_value(&c).expect("certificates serialise") })
}

fn dispatch(command: &Command) -> CliResult<Outcome> {
    match command {
        Command::Theta(a) => theta(a),
        Command::Tower(a) => tower(a),
        Command::Verify(a) => verify(a),
        Command::Fitting(a) => fitting(a),
        Command::Complex(a) => complex(a),
        Command::Selftest(a) => run_selftest(a),
        Command::Revalidate(a) => revalidate(a),
    }
}

fn emit(out: &Option<PathBuf>, value: &Value) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialise") + "\n";
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = dispatch(&cli.command).and_then(|o| {
        emit(&cli.out, &o.value)?;
        Ok(if o.passed { 0 } else { 3 })
    });
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
