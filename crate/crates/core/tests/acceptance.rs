//! Acceptance criteria 1–8. Each criterion runs the library check and an oracle written here
//! from first principles: partial zeta values through Hurwitz zeta and Bernoulli polynomials,
//! spans by closure under addition, Galois modules by acting on every element.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;

use iwasawa_kit::algebra::{AlgElem, FiniteCommAlgebra};
use iwasawa_kit::arith::CyclotomicInt;
use iwasawa_kit::cert::{load_verify_inputs, VerifyInput};
use iwasawa_kit::character::CharacterTable;
use iwasawa_kit::classmod::{annihilation_check, fitting_membership_check};
use iwasawa_kit::complex::{acyclic_pair, inclusion_into_sum, projection_from_sum, random_complex, BoundedComplex};
use iwasawa_kit::field::{check_hyp, AbelianFieldSpec, PlaceSet};
use iwasawa_kit::ideal::IdealHandle;
use iwasawa_kit::iwasawa::{coherence_check, theta_tower, twist_congruence_check, TowerElement};
use iwasawa_kit::lvalues::{dirichlet_l_nonpos, theta};
use iwasawa_kit::selftest::{
    character_suite, complex_suites, integrality_suite, kummer_suite, lemma_suites, lemma_trial, tower_cases,
    tower_coherence_suite, trial_rng, Bounds, Lemma, LemmaAlgebra, SuiteReport,
};
use iwasawa_kit::zmod::ZMod;

type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

// ---------------------------------------------------------------------------------------------
// Oracle arithmetic

fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

fn binom(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `B_0, …, B_n` with `B_1 = -1/2`, from `Σ_{j≤m} C(m+1, j) B_j = 0`.
fn bernoulli_numbers(n: usize) -> Vec<Q> {
    let mut b = vec![Q::one()];
    for m in 1..=n {
        let acc = (0..m).fold(Q::zero(), |acc, j| acc + Q::from_integer(binom(m + 1, j)) * &b[j]);
        b.push(-acc / q(m as i64 + 1));
    }
    b
}

fn bernoulli_poly(k: usize, x: &Q, b: &[Q]) -> Q {
    (0..=k).fold(Q::zero(), |acc, j| acc + Q::from_integer(binom(k, j)) * &b[j] * pow(x, (k - j) as u32))
}

fn pow(x: &Q, e: u32) -> Q {
    (0..e).fold(Q::one(), |acc, _| acc * x)
}

fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1, mut s0, mut s1) = (m as i128, (a % m) as i128, 0i128, 1i128);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    assert_eq!(r0, 1, "{a} is not invertible mod {m}");
    s0.rem_euclid(m as i128) as u64
}

fn pow_mod(a: u64, e: u64, m: u64) -> u64 {
    (0..e).fold(1 % m, |acc, _| ((acc as u128 * a as u128) % m as u128) as u64)
}

/// `x mod m` for a rational with denominator prime to `m`.
fn rat_mod(x: &Q, m: u64) -> Option<u64> {
    let den = (x.denom() % BigInt::from(m)).to_u64()?;
    if gcd(den, m) != 1 {
        return None;
    }
    let num = x.numer().mod_floor(&BigInt::from(m)).to_u64()?;
    Some(((num as u128 * inv_mod(den, m) as u128) % m as u128) as u64)
}

fn primes_dividing(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// ---------------------------------------------------------------------------------------------
// Oracle fields: cosets of H in (Z/m)^×, keyed by their least element

#[derive(Clone, Debug)]
struct Field {
    m: u64,
    h: Vec<u64>,
}

impl Field {
    fn new(m: u64, h: impl IntoIterator<Item = u64>) -> Self {
        let mut h: BTreeSet<u64> = h.into_iter().map(|x| x % m).collect();
        h.insert(1 % m);
        Field { m, h: h.into_iter().collect() }
    }

    fn of(spec: &AbelianFieldSpec) -> Self {
        Field::new(spec.modulus, spec.fixing.iter().copied())
    }

    fn units(&self) -> Vec<u64> {
        (1..self.m).filter(|&a| gcd(a, self.m) == 1).collect()
    }

    fn key(&self, a: u64) -> u64 {
        self.h.iter().map(|&h| (a % self.m) * h % self.m).min().expect("H is non-empty")
    }

    fn keys(&self) -> BTreeSet<u64> {
        self.units().into_iter().map(|a| self.key(a)).collect()
    }

    /// `w_L`: ζ_d ∈ L iff every element of H is 1 mod d; −1 always lies in L.
    fn roots_of_unity(&self) -> u64 {
        let d = (1..=self.m).filter(|d| self.m % d == 0 && self.h.iter().all(|&h| h % d == 1 % d)).max().unwrap_or(1);
        d.lcm(&2)
    }

    fn conductor(&self) -> u64 {
        (1..=self.m)
            .filter(|f| self.m % f == 0)
            .find(|&f| self.units().into_iter().filter(|a| a % f == 1 % f).all(|a| self.h.contains(&a)))
            .unwrap_or(self.m)
    }

    fn is_totally_real(&self) -> bool {
        self.h.contains(&(self.m - 1))
    }
}

/// `ζ(r; c mod m) = Σ_{n ≡ c (m)} n^{-s}` at `s = r ≤ 0`, namely `-m^{-r} B_k(c/m)/k` with `k = 1 - r`.
fn residue_zeta(r: i64, c: u64, m: u64, b: &[Q]) -> Q {
    let k = (1 - r) as usize;
    let c = if c % m == 0 { m } else { c % m };
    -pow(&q(m as i64), (-r) as u32) * bernoulli_poly(k, &(q(c as i64) / q(m as i64)), b) / q(k as i64)
}

/// Partial zeta of the residue `a mod m` with the primes `extra ∤ m` removed by inclusion–exclusion.
fn partial_zeta(r: i64, a: u64, m: u64, extra: &[u64], b: &[Q]) -> Q {
    let mut total = Q::zero();
    for mask in 0..1u32 << extra.len() {
        let ds: Vec<u64> = extra.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &d)| d).collect();
        let d: u64 = ds.iter().product();
        let sign = if ds.len() % 2 == 0 { q(1) } else { q(-1) };
        let c = a * inv_mod(d % m, m) % m;
        total += sign * pow(&q(d as i64), (-r) as u32) * residue_zeta(r, c, m, b);
    }
    total
}

/// `Θ_{S,T}(r) = Π_{v∈T}(1 - v^{1-r} σ_v^{-1}) Σ_σ ζ_S(r, σ) σ^{-1}`, keyed by coset.
/// `S` must contain every prime dividing `m`.
fn oracle_theta(field: &Field, s_primes: &[u64], t_primes: &[u64], r: i64) -> BTreeMap<u64, Q> {
    let m = field.m;
    let b = bernoulli_numbers((1 - r) as usize);
    let extra: Vec<u64> = s_primes.iter().copied().filter(|&p| m % p != 0).collect();
    let mut theta: BTreeMap<u64, Q> = field.keys().into_iter().map(|k| (k, Q::zero())).collect();
    for a in field.units() {
        *theta.get_mut(&field.key(inv_mod(a, m))).unwrap() += partial_zeta(r, a, m, &extra, &b);
    }
    for &v in t_primes {
        let nv = pow(&q(v as i64), (1 - r) as u32);
        theta = theta.keys().map(|&k| (k, &theta[&k] - &nv * &theta[&field.key(k * v % m)])).collect();
    }
    theta
}

fn library_coefficients(spec: &AbelianFieldSpec, s: &PlaceSet, t: &PlaceSet, r: i64) -> BTreeMap<u64, Q> {
    let th = theta(spec, s, t, r).expect("theta");
    let gal = th.galois_group().expect("galois group");
    let field = Field::of(spec);
    let mut out: BTreeMap<u64, Q> = field.keys().into_iter().map(|k| (k, Q::zero())).collect();
    for (a, c) in th.coefficient_map(&gal) {
        *out.get_mut(&field.key(a)).unwrap() += c.as_big();
    }
    out
}

// ---------------------------------------------------------------------------------------------
// Reporting

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    OutOfScope,
}

struct Outcome {
    id: u8,
    title: &'static str,
    status: Status,
    summary: String,
    failures: Vec<String>,
    elapsed: Duration,
    budget: Duration,
}

impl Outcome {
    fn line(&self) -> String {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::OutOfScope => "OUT OF SCOPE",
        };
        let time = if self.budget.is_zero() {
            String::new()
        } else {
            format!(" [{:.2?} of {:?}]", self.elapsed, self.budget)
        };
        format!("criterion {} {tag}: {}; {}{time}", self.id, self.title, self.summary)
    }
}

fn run(id: u8, title: &'static str, budget_s: u64, body: impl FnOnce() -> (String, Vec<String>)) -> Outcome {
    let start = Instant::now();
    let (summary, failures) = body();
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget_s);
    let mut failures = failures;
    if elapsed > budget {
        failures.push(format!("runtime {elapsed:.2?} exceeds {budget:?}"));
    }
    let status = if failures.is_empty() { Status::Pass } else { Status::Fail };
    Outcome { id, title, status, summary, failures, elapsed, budget }
}

fn suite_failures(reports: &[SuiteReport]) -> Vec<String> {
    reports.iter().flat_map(|r| r.failures.iter().map(move |f| format!("{}: {f}", r.name))).collect()
}

fn suite_count(reports: &[SuiteReport]) -> usize {
    reports.iter().map(|r| r.checked).sum()
}

// ---------------------------------------------------------------------------------------------
// Criterion 1: integrality under Hyp

struct CorpusTuple {
    spec: AbelianFieldSpec,
    s: Vec<u64>,
    t: Vec<u64>,
    hyp: bool,
}

/// CM fields of conductor ≤ `max`, by closing every set of at most three generators.
fn oracle_cm_fields(max: u64) -> Vec<Field> {
    let mut out = Vec::new();
    for f in 3..=max {
        let field = Field::new(f, []);
        let units = field.units();
        let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
        for a in &units {
            for b in &units {
                for c in &units {
                    let mut h: BTreeSet<u64> = BTreeSet::from([1]);
                    let mut frontier = vec![1u64];
                    while let Some(x) = frontier.pop() {
                        for g in [a, b, c] {
                            let y = x * g % f;
                            if h.insert(y) {
                                frontier.push(y);
                            }
                        }
                    }
                    seen.insert(h.into_iter().collect());
                }
            }
        }
        for h in seen {
            let cand = Field::new(f, h);
            if !cand.is_totally_real() && cand.conductor() == f {
                out.push(cand);
            }
        }
    }
    out
}

fn oracle_corpus(bounds: &Bounds) -> Vec<CorpusTuple> {
    let mut out = Vec::new();
    for field in oracle_cm_fields(bounds.max_conductor) {
        let spec = AbelianFieldSpec::new(field.m, field.h.clone(), "").expect("valid subgroup");
        let ram = primes_dividing(field.m);
        let mut s_choices = vec![ram.clone()];
        for &x in &bounds.extra_s_primes {
            if !ram.contains(&x) {
                let mut s = ram.clone();
                s.push(x);
                s_choices.push(s);
            }
        }
        let w = field.roots_of_unity();
        for s in s_choices {
            let allowed: Vec<u64> = bounds.t_primes.iter().copied().filter(|v| !s.contains(v)).collect();
            for mask in 0..1u32 << allowed.len() {
                let t: Vec<u64> = allowed.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
                let hyp = primes_dividing(w).iter().all(|&ell| t.iter().any(|&v| v != ell));
                out.push(CorpusTuple { spec: spec.clone(), s: s.clone(), t, hyp });
            }
        }
    }
    out
}

fn place_set(primes: &[u64], infinity: bool) -> PlaceSet {
    if infinity {
        PlaceSet::with_infinity(primes)
    } else {
        PlaceSet::finite(primes)
    }
}

fn criterion_1(bounds: &Bounds) -> (String, Vec<String>) {
    let mut failures = Vec::new();
    let fields = oracle_cm_fields(bounds.max_conductor);
    let library_fields = AbelianFieldSpec::cm_fields_up_to(bounds.max_conductor);
    let ours: BTreeSet<(u64, Vec<u64>)> = fields.iter().map(|f| (f.m, f.h.clone())).collect();
    let theirs: BTreeSet<(u64, Vec<u64>)> = library_fields.iter().map(|s| (s.modulus, s.fixing.clone())).collect();
    if ours != theirs {
        failures.push(format!("CM field enumeration differs: {} here, {} in the library", ours.len(), theirs.len()));
    }
    let corpus = oracle_corpus(bounds);
    let checks: Vec<(bool, Vec<String>)> = corpus
        .par_iter()
        .map(|c| {
            let mut bad = Vec::new();
            let (s, t) = (place_set(&c.s, true), place_set(&c.t, false));
            let lib_hyp = check_hyp(&c.spec, &s, &t).map(|h| h.holds).unwrap_or(false);
            if lib_hyp != c.hyp {
                bad.push(format!("m={} H={:?} S={:?} T={:?}: Hyp {lib_hyp} vs oracle {}", c.spec.modulus, c.spec.fixing, c.s, c.t, c.hyp));
            }
            if !c.hyp {
                return (false, bad);
            }
            let field = Field::of(&c.spec);
            for &r in &bounds.r_values {
                let expected = oracle_theta(&field, &c.s, &c.t, r);
                if expected.values().any(|x| !x.is_integer()) {
                    bad.push(format!("m={} H={:?} S={:?} T={:?} r={r}: oracle θ not integral", c.spec.modulus, c.spec.fixing, c.s, c.t));
                }
                if library_coefficients(&c.spec, &s, &t, r) != expected {
                    bad.push(format!("m={} H={:?} S={:?} T={:?} r={r}: θ differs from the oracle", c.spec.modulus, c.spec.fixing, c.s, c.t));
                }
            }
            (true, bad)
        })
        .collect();
    let hyp_tuples = checks.iter().filter(|(h, _)| *h).count() * bounds.r_values.len();
    failures.extend(checks.into_iter().flat_map(|(_, b)| b));
    let suite = integrality_suite(bounds);
    if suite.checked != hyp_tuples {
        failures.push(format!("library corpus has {} tuples, oracle corpus {hyp_tuples}", suite.checked));
    }
    failures.extend(suite_failures(&[suite]));
    (
        format!(
            "{} CM fields, {} (S, T) pairs, {hyp_tuples} Hyp tuples integral and equal to the Hurwitz oracle",
            fields.len(),
            corpus.len()
        ),
        failures,
    )
}

// ---------------------------------------------------------------------------------------------
// Criterion 2: character cross-validation

fn criterion_2(bounds: &Bounds) -> (String, Vec<String>) {
    let mut cases = Vec::new();
    for field in oracle_cm_fields(bounds.max_conductor) {
        let ram = primes_dividing(field.m);
        let mut s_choices = vec![ram.clone()];
        for &x in &bounds.extra_s_primes {
            if !ram.contains(&x) {
                s_choices.push([ram.clone(), vec![x]].concat());
            }
        }
        for s in s_choices {
            for &r in &bounds.r_values {
                cases.push((field.clone(), s.clone(), r));
            }
        }
    }
    let results: Vec<(usize, Vec<String>)> = cases
        .par_iter()
        .map(|(field, s_primes, r)| {
            let spec = AbelianFieldSpec::new(field.m, field.h.clone(), "").expect("valid");
            let gal = spec.galois_group().expect("galois group");
            let table = CharacterTable::new(gal.group().clone());
            let e = table.value_order();
            let s = place_set(s_primes, true);
            let b = bernoulli_numbers((1 - r) as usize);
            let extra: Vec<u64> = s_primes.iter().copied().filter(|&p| field.m % p != 0).collect();
            let zetas: BTreeMap<u64, Q> = field.units().into_iter().map(|a| (a, partial_zeta(*r, a, field.m, &extra, &b))).collect();
            let theta_s = oracle_theta(field, s_primes, &[], *r);
            let mut bad = Vec::new();
            for chi in 0..table.len() {
                // component of θ_S(r) at χ, from oracle coefficients
                let mut comp = vec![iwasawa_kit::arith::Rational::zero(); e as usize];
                for (&a, c) in &theta_s {
                    let k = table.value_exponent(chi, gal.class_of(a as i64).unwrap()) as usize;
                    comp[k] = &comp[k] + &iwasawa_kit::arith::Rational::from(c.clone());
                }
                let component = CyclotomicInt::from_power_sums(e, comp);
                // L_S(r, χ̌) = Σ_a χ̌(a) ζ_S(r; a) over residues mod m
                let dual = gal.dirichlet_character(&table, table.dual(chi));
                let mut sums = vec![iwasawa_kit::arith::Rational::zero(); e as usize];
                for (&a, z) in &zetas {
                    let k = dual.exponent_at(a as i64).expect("unit") as usize;
                    sums[k] = &sums[k] + &iwasawa_kit::arith::Rational::from(z.clone());
                }
                let l_hurwitz = CyclotomicInt::from_power_sums(e, sums);
                let l_bernoulli = dirichlet_l_nonpos(&dual.primitive(), &s, *r).expect("L-value");
                if component != l_hurwitz || l_hurwitz != l_bernoulli {
                    bad.push(format!("m={} H={:?} S={s_primes:?} r={r}: character {chi} disagrees", field.m, field.h));
                }
            }
            (table.len(), bad)
        })
        .collect();
    let n_chars: usize = results.iter().map(|(n, _)| n).sum();
    let mut failures: Vec<String> = results.into_iter().flat_map(|(_, b)| b).collect();
    let suite = character_suite(bounds);
    failures.extend(suite_failures(&[suite.clone()]));
    (
        format!(
            "{} (field, S, r) cases, {n_chars} characters: θ components = Hurwitz sums = generalised Bernoulli values; library suite {} cases",
            cases.len(),
            suite.checked
        ),
        failures,
    )
}

// ---------------------------------------------------------------------------------------------
// Criteria 3 and 4: towers

fn layer_field(base_modulus: u64, p: u64, n: u32) -> Field {
    Field::new(base_modulus.lcm(&p.pow(n + 1)), [])
}

/// Oracle level entries mod `p^N`, keyed by coset.
fn oracle_tower(m: u64, p: u64, s: &[u64], t: &[u64], precision: u32, levels: u32, r: i64) -> Result<Vec<BTreeMap<u64, u64>>, String> {
    let pn = p.pow(precision);
    (0..=levels)
        .map(|n| {
            let field = layer_field(m, p, n);
            oracle_theta(&field, s, t, r)
                .into_iter()
                .map(|(k, x)| rat_mod(&x, pn).map(|v| (k, v)).ok_or_else(|| format!("level {n}: θ not p-integral")))
                .collect()
        })
        .collect()
}

fn tower_entries(tower: &TowerElement, m: u64, p: u64) -> Vec<BTreeMap<u64, u64>> {
    tower
        .levels
        .iter()
        .map(|level| {
            let field = layer_field(m, p, level.n);
            let mut out: BTreeMap<u64, u64> = field.keys().into_iter().map(|k| (k, 0)).collect();
            let pn = p.pow(tower.precision);
            for (&a, &c) in &level.coeffs {
                let e = out.get_mut(&field.key(a)).expect("unit residue");
                *e = (*e + c) % pn;
            }
            out
        })
        .collect()
}

fn oracle_coherent(entries: &[BTreeMap<u64, u64>], m: u64, p: u64, pn: u64) -> bool {
    (1..entries.len()).all(|n| {
        let lower = layer_field(m, p, n as u32 - 1);
        let mut projected: BTreeMap<u64, u64> = lower.keys().into_iter().map(|k| (k, 0)).collect();
        for (&a, &c) in &entries[n] {
            let e = projected.get_mut(&lower.key(a % lower.m)).unwrap();
            *e = (*e + c) % pn;
        }
        projected == entries[n - 1]
    })
}

fn criterion_3(bounds: &Bounds) -> (String, Vec<String>) {
    let mut r_values = vec![0];
    r_values.extend(bounds.kummer_r.iter().copied());
    let mut cases = Vec::new();
    for (spec, p, s, t) in tower_cases() {
        for n in 1..=bounds.tower_precision {
            for &r in &r_values {
                cases.push((spec.clone(), p, s.clone(), t.clone(), n, r));
            }
        }
    }
    let failures: Vec<String> = cases
        .par_iter()
        .flat_map_iter(|(spec, p, s, t, n, r)| {
            let tag = format!("{} p={p} N={n} r={r}", spec.label);
            let mut bad = Vec::new();
            let tower = match theta_tower(spec, s, t, *p, *n, bounds.tower_levels, *r) {
                Ok(x) => x,
                Err(e) => return vec![format!("{tag}: {e}")],
            };
            for level in 0..=bounds.tower_levels {
                let lib = spec.layer(*p, level).expect("layer");
                let ours = layer_field(spec.modulus, *p, level);
                if lib.modulus != ours.m || Field::of(&lib).h != ours.h {
                    bad.push(format!("{tag}: layer {level} differs from Q(ζ_{})", ours.m));
                }
            }
            let oracle = match oracle_tower(spec.modulus, *p, &s.primes(), &t.primes(), *n, bounds.tower_levels, *r) {
                Ok(x) => x,
                Err(e) => return vec![format!("{tag}: {e}")],
            };
            if tower_entries(&tower, spec.modulus, *p) != oracle {
                bad.push(format!("{tag}: level entries differ from the oracle"));
            }
            if !oracle_coherent(&oracle, spec.modulus, *p, p.pow(*n)) {
                bad.push(format!("{tag}: oracle projections incoherent"));
            }
            match coherence_check(&tower) {
                Ok(rep) if rep.coherent => {}
                Ok(rep) => bad.push(format!("{tag}: library reports incoherence at {:?}", rep.first_bad_level)),
                Err(e) => bad.push(format!("{tag}: {e}")),
            }
            bad
        })
        .collect();
    let suite = tower_coherence_suite(bounds);
    let mut failures = failures;
    failures.extend(suite_failures(&[suite]));
    (
        format!(
            "{} (field, N, r) towers with n ≤ {}: entries equal the oracle mod p^N and project coherently",
            cases.len(),
            bounds.tower_levels
        ),
        failures,
    )
}

fn criterion_4(bounds: &Bounds) -> (String, Vec<String>) {
    let mut cases = Vec::new();
    for (spec, p, s, t) in tower_cases() {
        for n in 1..=bounds.tower_precision {
            for &r in &bounds.kummer_r {
                cases.push((spec.clone(), p, s.clone(), t.clone(), n, r));
            }
        }
    }
    let failures: Vec<String> = cases
        .par_iter()
        .flat_map_iter(|(spec, p, s, t, n, r)| {
            let tag = format!("{} p={p} N={n} r={r}", spec.label);
            let (sp, tp) = (s.primes(), t.primes());
            let (twisted, base) = match (
                oracle_tower(spec.modulus, *p, &sp, &tp, *n, bounds.tower_levels, *r),
                oracle_tower(spec.modulus, *p, &sp, &tp, *n, bounds.tower_levels, 0),
            ) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => return vec![format!("{tag}: {e}")],
            };
            let mut bad = Vec::new();
            for level in 0..=bounds.tower_levels {
                let k = (*n).min(level + 1);
                let pk = p.pow(k);
                let congruent = twisted[level as usize].iter().all(|(&b, &x)| {
                    let chi = pow_mod(inv_mod(b % pk, pk), r.unsigned_abs(), pk);
                    (x % pk) == (base[level as usize][&b] % pk) * chi % pk
                });
                if !congruent {
                    bad.push(format!("{tag}: oracle congruence fails at level {level} mod {p}^{k}"));
                }
            }
            let lib = theta_tower(spec, s, t, *p, *n, bounds.tower_levels, *r)
                .and_then(|tr| Ok((tr, theta_tower(spec, s, t, *p, *n, bounds.tower_levels, 0)?)))
                .and_then(|(tr, t0)| twist_congruence_check(&tr, &t0));
            match lib {
                Ok(rep) if rep.congruent => {}
                Ok(rep) => bad.push(format!("{tag}: library congruence fails at {:?}", rep.first_bad_level)),
                Err(e) => bad.push(format!("{tag}: {e}")),
            }
            bad
        })
        .collect();
    let suite = kummer_suite(bounds);
    let mut failures = failures;
    failures.extend(suite_failures(&[suite]));
    (
        format!(
            "{} (field, N, r) cases: Θ(L_n, r)_b ≡ b^r Θ(L_n, 0)_b mod p^min(N, n+1) at every level n ≤ {}",
            cases.len(),
            bounds.tower_levels
        ),
        failures,
    )
}

// ---------------------------------------------------------------------------------------------
// Criterion 5: Fitting lemmas

const SPAN_ORACLE_LIMIT: u64 = 1 << 10;

fn ring_size(alg: &FiniteCommAlgebra) -> Option<u64> {
    alg.ring().modulus().checked_pow(alg.dim() as u32)
}

/// The additive closure of `gens`.
fn additive_span(alg: &FiniteCommAlgebra, gens: &[AlgElem]) -> HashSet<AlgElem> {
    let mut seen: HashSet<AlgElem> = HashSet::from([alg.zero()]);
    let mut queue = VecDeque::from([alg.zero()]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = alg.add(&x, g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// The ideal generated by `gens`: the additive span of every `g·e_i`.
fn ideal_span(ideal: &IdealHandle) -> HashSet<AlgElem> {
    let alg = ideal.algebra();
    let products: Vec<AlgElem> =
        ideal.generators().iter().flat_map(|g| (0..alg.dim()).map(move |i| alg.mul(g, &alg.basis(i)))).collect();
    additive_span(alg, &products)
}

struct LemmaTally {
    trials: usize,
    span_checked: usize,
    failures: Vec<String>,
}

fn lemma_oracle(lemma: Lemma, la: &LemmaAlgebra, trials: usize, seed: u64) -> LemmaTally {
    let name = format!("{} over {}", lemma.name(), la.name);
    let results: Vec<(usize, Vec<String>)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, &format!("oracle {name}"), i);
            let pairs = match lemma_trial(lemma, la, &mut rng) {
                Ok(p) => p,
                Err(e) => return (0, vec![format!("{name} trial {i}: {e}")]),
            };
            let mut bad = Vec::new();
            let mut spans = 0;
            for (lhs, rhs) in pairs {
                let howell_equal = lhs.equals(&rhs).unwrap_or(false);
                if !howell_equal {
                    bad.push(format!("{name} trial {i}: Howell forms differ"));
                }
                let alg = lhs.algebra();
                if ring_size(alg).is_some_and(|n| n <= SPAN_ORACLE_LIMIT) {
                    spans += 1;
                    let (a, b) = (ideal_span(&lhs), ideal_span(&rhs));
                    if (a == b) != howell_equal || a != b {
                        bad.push(format!("{name} trial {i}: spans of sizes {} and {}", a.len(), b.len()));
                    }
                    for side in [&lhs, &rhs] {
                        if additive_span(alg, side.howell().rows()) != ideal_span(side) {
                            bad.push(format!("{name} trial {i}: Howell rows do not span the ideal"));
                        }
                    }
                }
            }
            (spans, bad)
        })
        .collect();
    LemmaTally {
        trials,
        span_checked: results.iter().map(|(s, _)| s).sum(),
        failures: results.into_iter().flat_map(|(_, b)| b).collect(),
    }
}

fn criterion_5(bounds: &Bounds, seed: u64) -> (String, Vec<String>) {
    let algebras = LemmaAlgebra::standard();
    let mut failures = Vec::new();
    let mut lines = Vec::new();
    for lemma in Lemma::ALL {
        for la in &algebras {
            let tally = lemma_oracle(lemma, la, bounds.lemma_trials, seed);
            if tally.trials < 200 {
                failures.push(format!("{} over {}: only {} trials", lemma.name(), la.name, tally.trials));
            }
            lines.push(tally.span_checked);
            failures.extend(tally.failures);
        }
    }
    let suites = lemma_suites(seed, bounds);
    failures.extend(suite_failures(&suites));
    (
        format!(
            "4 lemmas × 3 algebras × {} trials equal in Howell form, {} ideal pairs confirmed by span enumeration; library suites {} trials",
            bounds.lemma_trials,
            lines.iter().sum::<usize>(),
            suite_count(&suites)
        ),
        failures,
    )
}

// ---------------------------------------------------------------------------------------------
// Criterion 6: complexes

/// `Σ (-1)^i log|H^i| = Σ (-1)^i log|C^i|` for complexes of finite modules.
fn size_euler_characteristic(c: &BoundedComplex) -> (i64, i64) {
    let sign = |i: i64| if i.rem_euclid(2) == 0 { 1 } else { -1 };
    let h = (c.start()..=c.end()).map(|i| sign(i) * c.cohomology(i).log_size() as i64).sum();
    let m = (c.start()..=c.end()).map(|i| sign(i) * c.module(i).log_size() as i64).sum();
    (h, m)
}

fn criterion_6(bounds: &Bounds, seed: u64) -> (String, Vec<String>) {
    let z9 = ZMod::new(3, 2).unwrap();
    let algebras: Vec<Arc<FiniteCommAlgebra>> = vec![
        Arc::new(FiniteCommAlgebra::group_algebra(z9, &iwasawa_kit::group::FiniteAbelianGroup::new(vec![2]).unwrap())),
        Arc::new(FiniteCommAlgebra::scalars(z9)),
    ];
    let n = bounds.complex_trials;
    let oracle_failures: Vec<String> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut rng = trial_rng(seed, "oracle complexes", i);
            let alg = &algebras[i % algebras.len()];
            let start = rng.gen_range(-1..=1);
            let len = rng.gen_range(1..=3);
            let c = random_complex(alg, &mut rng, start, len);
            let mut bad = Vec::new();
            let (h, m) = size_euler_characteristic(&c);
            if h != m {
                bad.push(format!("trial {i}: cohomology sizes give {h}, module sizes {m}"));
            }
            let x = iwasawa_kit::lemmas::random_module(alg, &mut rng, 2, 2);
            let a = acyclic_pair(&x, rng.gen_range(c.start()..=c.end()));
            for f in [inclusion_into_sum(&c, &a), projection_from_sum(&c, &a)] {
                let f = match f {
                    Ok(f) => f,
                    Err(e) => {
                        bad.push(format!("trial {i}: {e}"));
                        continue;
                    }
                };
                let lo = f.source().start().min(f.target().start());
                let hi = f.source().end().max(f.target().end());
                for d in lo..=hi {
                    if f.source().cohomology(d).log_size() != f.target().cohomology(d).log_size() {
                        bad.push(format!("trial {i}: H^{d} sizes differ across a quasi-isomorphism"));
                    }
                }
            }
            bad
        })
        .collect();
    let suites = complex_suites(seed, bounds);
    let mut failures = oracle_failures;
    for s in &suites {
        if s.checked < 100 {
            failures.push(format!("{}: only {} instances", s.name, s.checked));
        }
    }
    failures.extend(suite_failures(&suites));
    (
        format!(
            "{}: {} instances each; {n} further complexes satisfy the size Euler characteristic and degreewise cohomology sizes",
            suites.iter().map(|s| s.name.as_str()).collect::<Vec<_>>().join(", "),
            bounds.complex_trials
        ),
        failures,
    )
}

// ---------------------------------------------------------------------------------------------
// Criterion 7: class modules

type Vector = Vec<u64>;

struct Module {
    orders: Vec<u64>,
    /// coset key → matrix acting on column vectors
    action: BTreeMap<u64, Vec<Vec<i64>>>,
}

impl Module {
    fn build(input: &VerifyInput, field: &Field) -> Module {
        let orders = input.data.orders.clone();
        let k = orders.len();
        let gens = match &input.data.generators {
            Some(g) => g.clone(),
            None => input.spec.galois_group().unwrap().generator_residues(),
        };
        let mats: Vec<Vec<Vec<i64>>> = (0..gens.len())
            .map(|i| input.data.action.get(&format!("g{i}")).cloned().unwrap_or_else(|| identity(k)))
            .collect();
        let mut action = BTreeMap::from([(field.key(1), identity(k))]);
        let mut queue = VecDeque::from([field.key(1)]);
        while let Some(x) = queue.pop_front() {
            for (g, a) in gens.iter().zip(&mats) {
                let y = field.key(x * g % field.m);
                if !action.contains_key(&y) {
                    let composed = mat_mul(a, &action[&x], &orders);
                    action.insert(y, composed);
                    queue.push_back(y);
                }
            }
        }
        Module { orders, action }
    }

    fn elements(&self) -> Vec<Vector> {
        let mut out = vec![vec![]];
        for &o in &self.orders {
            out = out.into_iter().flat_map(|v: Vector| (0..o).map(move |c| [v.clone(), vec![c]].concat())).collect();
        }
        out
    }

    fn apply(&self, a: &[Vec<i64>], x: &[u64]) -> Vector {
        self.orders
            .iter()
            .enumerate()
            .map(|(r, &o)| {
                let s: i128 = a[r].iter().zip(x).map(|(&c, &v)| c as i128 * v as i128).sum();
                s.rem_euclid(o as i128) as u64
            })
            .collect()
    }

    /// `θ x` for integer coefficients keyed by coset.
    fn act(&self, theta: &BTreeMap<u64, i64>, x: &[u64]) -> Vector {
        let mut acc = vec![0u64; x.len()];
        for (k, &c) in theta {
            let y = self.apply(&self.action[k], x);
            for (i, o) in self.orders.iter().enumerate() {
                acc[i] = ((acc[i] as i128 + c as i128 * y[i] as i128).rem_euclid(*o as i128)) as u64;
            }
        }
        acc
    }

    fn order_of(&self, x: &[u64]) -> u64 {
        self.orders.iter().zip(x).fold(1, |acc, (&o, &c)| acc.lcm(&(o / gcd(c, o))))
    }

    fn neg(&self, x: &[u64]) -> Vector {
        x.iter().zip(&self.orders).map(|(&c, &o)| (o - c) % o).collect()
    }
}

fn identity(k: usize) -> Vec<Vec<i64>> {
    (0..k).map(|i| (0..k).map(|j| (i == j) as i64).collect()).collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>], orders: &[u64]) -> Vec<Vec<i64>> {
    let k = orders.len();
    (0..k)
        .map(|i| (0..k).map(|j| (0..k).map(|l| a[i][l] as i128 * b[l][j] as i128).sum::<i128>().rem_euclid(orders[i] as i128) as i64).collect())
        .collect()
}

fn is_p_power(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// Whether some character `f` of `M_-` generates the dual: no nonzero `x` has `f(gx) = 0` for all `g`.
fn dual_is_cyclic(module: &Module, minus: &[Vector]) -> bool {
    let l = module.orders.iter().fold(1u64, |acc, &o| acc.lcm(&o));
    let nonzero: Vec<&Vector> = minus.iter().filter(|x| x.iter().any(|&c| c != 0)).collect();
    if nonzero.is_empty() {
        return true;
    }
    let orbits: Vec<Vec<Vector>> = nonzero.iter().map(|x| module.action.values().map(|a| module.apply(a, x)).collect()).collect();
    module.elements().into_iter().any(|c| {
        let f = |y: &Vector| {
            y.iter().zip(&c).zip(&module.orders).map(|((&yi, &ci), &o)| yi as u128 * ci as u128 * (l / o) as u128).sum::<u128>() % l as u128
        };
        orbits.iter().all(|orbit| orbit.iter().any(|y| f(y) != 0))
    })
}

/// `v_p(Σ_g c_g ω(s_g))` capped at `cap`, where `g` acts on `M_-` by the scalar `s_g`.
fn scalar_valuation(theta: &BTreeMap<u64, i64>, scalars: &BTreeMap<u64, u64>, p: u64, cap: u32) -> u32 {
    let pk = p.pow(cap);
    let teich = |s: u64| pow_mod(s % pk, pk, pk);
    let total = theta.iter().fold(0i128, |acc, (k, &c)| (acc + c as i128 * teich(scalars[k]) as i128).rem_euclid(pk as i128)) as u64;
    (0..cap).find(|&v| total % p.pow(v + 1) != 0).unwrap_or(cap)
}

struct ClassTally {
    tiers: BTreeMap<&'static str, usize>,
    table: usize,
    failures: Vec<String>,
}

fn class_oracle(name: &str, input: &VerifyInput) -> Result<&'static str, String> {
    let fail = |m: String| format!("{name}: {m}");
    let field = Field::of(&input.spec);
    let module = Module::build(input, &field);
    let card: u64 = module.orders.iter().product();
    if card > 729 {
        return Err(fail(format!("cardinality {card} exceeds 3^6")));
    }
    let theta_q: BTreeMap<u64, Q> = match &input.theta {
        Some(map) => {
            let mut out = BTreeMap::new();
            for (&a, c) in map {
                *out.entry(field.key(a)).or_insert_with(Q::zero) += c.as_big();
            }
            out
        }
        None => {
            if input.spec.modulus != field.conductor() {
                return Err(fail("oracle θ needs the field presented at its conductor".into()));
            }
            let expected = oracle_theta(&field, &input.s.primes(), &input.t.primes(), input.r);
            if library_coefficients(&input.spec, &input.s, &input.t, input.r) != expected {
                return Err(fail("library θ differs from the oracle".into()));
            }
            expected
        }
    };
    let lib = input.stickelberger().map_err(|e| fail(e.to_string()))?;
    let ann = annihilation_check(&lib, &input.data);
    if theta_q.values().any(|c| !c.is_integer()) {
        return if ann.is_err() { Ok("non-integral") } else { Err(fail("non-integral θ accepted".into())) };
    }
    let theta: BTreeMap<u64, i64> = theta_q.iter().map(|(&k, c)| (k, c.to_integer().to_i64().expect("small"))).collect();
    let elements = module.elements();
    let kills = |x: &Vector| module.act(&theta, x).iter().all(|&c| c == 0);
    let annihilates = elements.iter().all(kills);
    let ann = ann.map_err(|e| fail(e.to_string()))?;
    if ann.annihilates != annihilates {
        return Err(fail(format!("annihilation {} but the elementwise action says {annihilates}", ann.annihilates)));
    }

    let p = input.p;
    let j = field.key(field.m - 1);
    let minus: Vec<Vector> = elements
        .iter()
        .filter(|x| is_p_power(module.order_of(x), p) && module.apply(&module.action[&j], x) == module.neg(x))
        .cloned()
        .collect();
    let pn = p.pow(input.precision);
    let minus_pn: Vec<&Vector> = minus.iter().filter(|x| pn % module.order_of(x) == 0).collect();
    let kills_minus = minus.iter().all(kills);
    let kills_minus_pn = minus_pn.iter().all(|x| kills(x));

    let fitt = fitting_membership_check(&lib, &input.data, p, input.precision).map_err(|e| fail(e.to_string()))?;
    let expect = |what: &str, got: bool, want: bool| if got == want { Ok(()) } else { Err(fail(format!("{what} {got}, oracle {want}"))) };

    if dual_is_cyclic(&module, &minus) {
        expect("Fitting membership", fitt.member, kills_minus)?;
        expect("Fitting membership mod p^N", fitt.member_mod_p_n, kills_minus_pn)?;
        return Ok("cyclic");
    }
    let group_order = field.keys().len() as u64;
    let scalars: Option<BTreeMap<u64, u64>> = (group_order % p != 0)
        .then(|| {
            let ex = module.orders.iter().fold(1u64, |acc, &o| acc.lcm(&o));
            module
                .action
                .iter()
                .map(|(&k, a)| {
                    (0..ex).find(|&s| minus.iter().all(|x| module.apply(a, x) == x.iter().zip(&module.orders).map(|(&c, &o)| c * s % o).collect::<Vector>())).map(|s| (k, s))
                })
                .collect()
        })
        .flatten();
    if let Some(scalars) = scalars {
        let len = (minus.len() as f64).log(p as f64).round() as u32;
        let v = scalar_valuation(&theta, &scalars, p, len + 1);
        expect("Fitting membership", fitt.member, v >= len)?;
        expect("Fitting membership mod p^N", fitt.member_mod_p_n, v >= len.min(input.precision))?;
        return Ok("scalar");
    }
    if fitt.member && !kills_minus {
        return Err(fail("θ^# in the Fitting ideal but θ does not kill M_-".into()));
    }
    if fitt.member_mod_p_n && !kills_minus_pn {
        return Err(fail("θ^# in Fitt + p^N but θ does not kill M_-[p^N]".into()));
    }
    Ok("implication")
}

fn class_data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/class_modules")
}

fn criterion_7() -> (String, Vec<String>) {
    let cases = match load_verify_inputs(&class_data_dir()) {
        Ok(c) => c,
        Err(e) => return ("class data unreadable".into(), vec![e.to_string()]),
    };
    let results: Vec<Result<&'static str, String>> = cases.par_iter().map(|(name, input)| class_oracle(name, input)).collect();
    let mut tally = ClassTally { tiers: BTreeMap::new(), table: 0, failures: Vec::new() };
    for ((_, input), r) in cases.iter().zip(results) {
        match r {
            Ok(tier) => *tally.tiers.entry(tier).or_default() += 1,
            Err(e) => tally.failures.push(e),
        }
        if input.data.provenance.starts_with("class number table") {
            tally.table += 1;
            match iwasawa_kit::cert::Certificate::verify(input) {
                Ok(c) if c.result["annihilation"] == true => {}
                Ok(_) => tally.failures.push(format!("{}: tabulated class group not annihilated", input.spec.label)),
                Err(e) => tally.failures.push(format!("{}: {e}", input.spec.label)),
            }
        }
    }
    let tiers = tally.tiers.iter().map(|(k, v)| format!("{v} {k}")).collect::<Vec<_>>().join(", ");
    (
        format!("{} modules ({} from class number tables); Fitting oracle tiers: {tiers}", cases.len(), tally.table),
        tally.failures,
    )
}

// ---------------------------------------------------------------------------------------------

#[test]
fn acceptance_criteria() {
    let bounds = Bounds::default();
    let seed = 20240601;
    let mut outcomes = vec![
        run(1, "integrality under Hyp", 30, || criterion_1(&bounds)),
        run(2, "character cross-validation", 60, || criterion_2(&bounds)),
        run(3, "tower coherence", 120, || criterion_3(&bounds)),
        run(4, "equivariant Kummer congruence", 120, || criterion_4(&bounds)),
        run(5, "Fitting lemma suite", 300, || criterion_5(&bounds, seed)),
        run(6, "complex invariants", 120, || criterion_6(&bounds, seed)),
        run(7, "annihilation on class-module data", 60, criterion_7),
    ];
    outcomes.push(Outcome {
        id: 8,
        title: "EIMC, μ-invariants, ETNC vanishing",
        status: Status::OutOfScope,
        summary: "not computable at this scale; only the consequences in criteria 1–7 are checked".into(),
        failures: vec![],
        elapsed: Duration::ZERO,
        budget: Duration::ZERO,
    });
    for o in &outcomes {
        println!("{}", o.line());
        for f in o.failures.iter().take(10) {
            println!("    {f}");
        }
    }
    let failed: Vec<u8> = outcomes.iter().filter(|o| o.status == Status::Fail).map(|o| o.id).collect();
    assert!(failed.is_empty(), "criteria {failed:?} failed");
}
