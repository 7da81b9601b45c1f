//! Replayable certificates `{input, check, result, witness}`.
//!
//! A certificate is produced from its input alone, so re-validation re-runs the check on the
//! embedded input and compares verdicts and witnesses field by field.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::Rational;
use crate::classmod::{annihilation_check, fitting_membership_check, ClassModuleData};
use crate::complex::ComplexSpec;
use crate::error::{Error, Result};
use crate::field::{check_hyp, AbelianFieldSpec, PlaceSet};
use crate::iwasawa::{coherence_check, theta_tower, twist_congruence_check, TowerElement};
use crate::lvalues::{theta, StickelbergerElement};
use crate::module::FinPresSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Theta,
    Tower,
    Verify,
    Fitting,
    Complex,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaInput {
    pub spec: AbelianFieldSpec,
    #[serde(rename = "S")]
    pub s: PlaceSet,
    #[serde(rename = "T", default)]
    pub t: PlaceSet,
    #[serde(default)]
    pub r: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TowerInput {
    pub spec: AbelianFieldSpec,
    #[serde(rename = "S")]
    pub s: PlaceSet,
    #[serde(rename = "T", default)]
    pub t: PlaceSet,
    #[serde(default)]
    pub r: i64,
    pub p: u64,
    #[serde(rename = "N")]
    pub precision: u32,
    pub levels: u32,
    /// A previously emitted tower to check instead of recomputing level entries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replay: Option<TowerElement>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyInput {
    pub spec: AbelianFieldSpec,
    #[serde(rename = "S")]
    pub s: PlaceSet,
    #[serde(rename = "T", default)]
    pub t: PlaceSet,
    #[serde(default)]
    pub r: i64,
    pub p: u64,
    #[serde(rename = "N")]
    pub precision: u32,
    pub data: ClassModuleData,
    /// Replaces `Θ_{S,T}(r)` by explicit integer coefficients keyed by residues `a` of `σ_a`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<BTreeMap<u64, Rational>>,
}

impl VerifyInput {
    /// The element under test: the override if present, else `Θ_{S,T}(r)`.
    pub fn stickelberger(&self) -> Result<StickelbergerElement> {
        let computed = theta(&self.spec, &self.s, &self.t, self.r)?;
        let Some(coeffs) = &self.theta else { return Ok(computed) };
        let gal = self.spec.galois_group()?;
        let mut value = vec![Rational::zero(); gal.order()];
        for (&a, c) in coeffs {
            let g = gal.class_of(a as i64)?;
            value[g] = &value[g] + c;
        }
        Ok(StickelbergerElement { value, ..computed })
    }
}

/// Class-module cases from a JSON file (one object or an array) or from every `.json` file of a
/// directory, named by file and position.
pub fn load_verify_inputs(path: &Path) -> Result<Vec<(String, VerifyInput)>> {
    let io = |e: std::io::Error| Error::malformed(format!("{}: {e}", path.display()));
    if path.is_dir() {
        let mut files: Vec<_> = std::fs::read_dir(path)
            .map_err(io)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        let mut out = Vec::new();
        for f in files {
            out.extend(load_verify_inputs(&f)?);
        }
        return Ok(out);
    }
    let text = std::fs::read_to_string(path).map_err(io)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Error::malformed(format!("{}: {e}", path.display())))?;
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    match value {
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(i, v)| Ok((format!("{stem}[{i}]"), from_value(v)?)))
            .collect(),
        v => Ok(vec![(stem, from_value(&v)?)]),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FittingInput {
    pub module: FinPresSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexInput {
    pub complex: ComplexSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub input: Value,
    pub check: CheckKind,
    pub result: Value,
    pub witness: Value,
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::malformed(e.to_string()))
}

fn from_value<T: for<'de> Deserialize<'de>>(v: &Value) -> Result<T> {
    T::deserialize(v).map_err(|e| Error::malformed(e.to_string()))
}

impl Certificate {
    /// Runs `check` on a JSON input.
    pub fn issue(check: CheckKind, input: &Value) -> Result<Certificate> {
        match check {
            CheckKind::Theta => Certificate::theta(&from_value(input)?),
            CheckKind::Tower => Certificate::tower(&from_value(input)?),
            CheckKind::Verify => Certificate::verify(&from_value(input)?),
            CheckKind::Fitting => Certificate::fitting(&from_value(input)?),
            CheckKind::Complex => Certificate::complex(&from_value(input)?),
        }
    }

    pub fn theta(input: &ThetaInput) -> Result<Certificate> {
        let th = theta(&input.spec, &input.s, &input.t, input.r)?;
        let gal = th.galois_group()?;
        let hyp = check_hyp(&input.spec, &input.s, &input.t)?;
        let coefficients: BTreeMap<u64, Rational> = th.coefficient_map(&gal);
        Ok(Certificate {
            input: to_value(input)?,
            check: CheckKind::Theta,
            result: json!({
                "coefficients": coefficients,
                "hyp": hyp.holds,
                "integral": th.is_integral(),
            }),
            witness: json!({ "hyp_reason": hyp.reason, "group_order": gal.order() }),
        })
    }

    /// Coherence of the tower and, for `r ≠ 0`, the Kummer congruence against the `r = 0` tower.
    pub fn tower(input: &TowerInput) -> Result<Certificate> {
        if input.r != 0 && input.precision > input.levels + 1 {
            return Err(Error::Precision(format!(
                "N = {} exceeds n + 1 at every level up to n = {}; the congruence would never reach p^N",
                input.precision, input.levels
            )));
        }
        if input.r != 0 && !input.spec.contains_roots_of_unity(input.p) {
            return Err(Error::pre(format!(
                "μ_{} is not contained in L, so χ_cyc does not factor through G_n",
                input.p
            )));
        }
        let tower = match &input.replay {
            Some(t) => {
                if t.spec != input.spec || t.p != input.p || t.precision != input.precision || t.meta.r != input.r {
                    return Err(Error::mismatch("replayed tower does not match the input parameters"));
                }
                t.clone()
            }
            None => theta_tower(&input.spec, &input.s, &input.t, input.p, input.precision, input.levels, input.r)?,
        };
        let coherence = coherence_check(&tower)?;
        let twist = if input.r == 0 {
            None
        } else {
            let base = theta_tower(&input.spec, &input.s, &input.t, input.p, input.precision, input.levels, 0)?;
            Some(twist_congruence_check(&tower, &base)?)
        };
        Ok(Certificate {
            input: to_value(input)?,
            check: CheckKind::Tower,
            result: json!({
                "coherent": coherence.coherent,
                "first_bad_level": coherence.first_bad_level,
                "twist_congruent": twist.as_ref().map(|t| t.congruent),
                "twist_first_bad_level": twist.as_ref().and_then(|t| t.first_bad_level),
            }),
            witness: json!({
                "tower": tower,
                "twist_moduli": twist.map(|t| t.moduli),
            }),
        })
    }

    pub fn verify(input: &VerifyInput) -> Result<Certificate> {
        let th = input.stickelberger()?;
        let ann = annihilation_check(&th, &input.data)?;
        let fitt = fitting_membership_check(&th, &input.data, input.p, input.precision)?;
        Ok(Certificate {
            input: to_value(input)?,
            check: CheckKind::Verify,
            result: json!({
                "annihilation": ann.annihilates,
                "fitting": fitt.member,
                "fitting_mod_p_n": fitt.member_mod_p_n,
            }),
            witness: json!({
                "acting_matrix": ann.acting_matrix,
                "theta_sharp": fitt.theta_sharp,
                "residual": fitt.residual,
                "fitting_generators": fitt.fitting_generators,
                "working_precision": fitt.working_precision,
                "dual_log_size": fitt.dual_log_size,
            }),
        })
    }

    pub fn fitting(input: &FittingInput) -> Result<Certificate> {
        let m = input.module.build()?;
        let fitt = m.fitting_ideal();
        let ann = m.annihilator();
        Ok(Certificate {
            input: to_value(input)?,
            check: CheckKind::Fitting,
            result: json!({
                "fitting_ideal": fitt.howell().rows(),
                "log_size": m.log_size(),
                "quadratic_presentation": m.has_quadratic_presentation(),
                "fitting_in_annihilator": ann.contains_ideal(&fitt)?,
            }),
            witness: json!({ "annihilator": ann.howell().rows() }),
        })
    }

    pub fn complex(input: &ComplexInput) -> Result<Certificate> {
        let c = input.complex.build()?;
        let cohomology: Vec<Value> = (c.start()..=c.end())
            .map(|i| {
                let h = c.cohomology(i);
                json!({ "degree": i, "log_size": h.log_size(), "fitting_ideal": h.fitting_ideal().howell().rows() })
            })
            .collect();
        let ef = c.euler_fitting()?;
        Ok(Certificate {
            input: to_value(input)?,
            check: CheckKind::Complex,
            result: json!({
                "acyclic": c.is_acyclic(),
                "euler_fitting": {
                    "numerator": ef.numerator.howell().rows(),
                    "denominator": ef.denominator.howell().rows(),
                },
            }),
            witness: json!({ "cohomology": cohomology }),
        })
    }

    /// `false` when a mathematical check came out negative: non-integral `θ` under `Hyp`,
    /// an incoherent tower, a failed congruence, or a failed membership.
    pub fn passed(&self) -> bool {
        let flag = |k: &str| self.result.get(k).and_then(Value::as_bool);
        match self.check {
            CheckKind::Theta => !(flag("hyp") == Some(true) && flag("integral") == Some(false)),
            CheckKind::Tower => flag("coherent") == Some(true) && flag("twist_congruent") != Some(false),
            CheckKind::Verify => flag("annihilation") == Some(true) && flag("fitting") == Some(true),
            CheckKind::Fitting => flag("fitting_in_annihilator") == Some(true),
            CheckKind::Complex => true,
        }
    }

    /// Re-runs the check on the embedded input; `Ok(true)` iff result and witness agree.
    pub fn revalidate(&self) -> Result<bool> {
        let again = Certificate::issue(self.check, &self.input)?;
        Ok(again.result == self.result && again.witness == self.witness)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialise")
    }

    pub fn from_json(s: &str) -> Result<Certificate> {
        serde_json::from_str(s).map_err(|e| Error::malformed(e.to_string()))
    }
}
