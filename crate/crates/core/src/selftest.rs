//! Seeded property campaigns over every layer of the crate.
//!
//! Each trial draws from its own ChaCha stream keyed by `(seed, suite, trial)`, so reports do
//! not depend on thread scheduling.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraHom, FiniteCommAlgebra};
use crate::cert::VerifyInput;
use crate::classmod::{annihilation_check, fitting_membership_check, GaloisModule};
use crate::complex::{acyclic_pair, inclusion_into_sum, projection_from_sum, random_chain_map, random_complex, ShortExactSequence};
use crate::error::Result;
use crate::field::{check_hyp, AbelianFieldSpec, PlaceSet};
use crate::group::FiniteAbelianGroup;
use crate::ideal::IdealHandle;
use crate::iwasawa::{coherence_check, minimal_tower_places, theta_tower, twist_congruence_check};
use crate::lemmas::{
    base_change_sides, e1_sharp_sides, multiplicativity_sides, random_endomorphism, random_map, random_module,
    random_quadratic, FourTermSequence,
};
use crate::lvalues::{character_mismatches, theta};
use crate::zmod::ZMod;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub max_conductor: u64,
    pub t_primes: Vec<u64>,
    pub extra_s_primes: Vec<u64>,
    pub r_values: Vec<i64>,
    pub tower_levels: u32,
    pub tower_precision: u32,
    pub kummer_r: Vec<i64>,
    pub lemma_trials: usize,
    pub complex_trials: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_conductor: 24,
            t_primes: vec![2, 5, 7, 11, 13],
            extra_s_primes: vec![3, 5, 7],
            r_values: vec![0, -1, -2],
            tower_levels: 2,
            tower_precision: 3,
            kummer_r: vec![-1, -2, -3],
            lemma_trials: 200,
            complex_trials: 100,
        }
    }
}

impl Bounds {
    pub fn reduced() -> Self {
        Bounds {
            max_conductor: 12,
            t_primes: vec![2, 5, 7],
            extra_s_primes: vec![],
            r_values: vec![0, -1],
            tower_levels: 1,
            tower_precision: 2,
            kummer_r: vec![-1],
            lemma_trials: 20,
            complex_trials: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn from_outcomes(name: impl Into<String>, outcomes: Vec<std::result::Result<(), String>>) -> Self {
        let checked = outcomes.len();
        let failures = outcomes.into_iter().filter_map(|o| o.err()).collect();
        SuiteReport { name: name.into(), checked, failures }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub bounds: Bounds,
    pub suites: Vec<SuiteReport>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

pub fn trial_rng(seed: u64, suite: &str, trial: usize) -> ChaCha8Rng {
    let tag = suite.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3));
    ChaCha8Rng::seed_from_u64(seed ^ tag.rotate_left(17) ^ (trial as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Runs every suite; `class_cases` are ingested class-module files.
pub fn run(seed: u64, bounds: &Bounds, class_cases: &[(String, VerifyInput)]) -> SelftestReport {
    let mut suites = vec![
        integrality_suite(bounds),
        character_suite(bounds),
        tower_coherence_suite(bounds),
        kummer_suite(bounds),
    ];
    suites.extend(lemma_suites(seed, bounds));
    suites.extend(complex_suites(seed, bounds));
    suites.push(class_module_suite(class_cases));
    SelftestReport { seed, bounds: bounds.clone(), suites }
}

fn sorted_subsets(items: &[u64]) -> Vec<Vec<u64>> {
    (0..1u32 << items.len())
        .map(|mask| items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect())
        .collect()
}

/// `S_ram ∪ {∞}` and its enlargements by one extra unramified prime.
pub fn s_choices(spec: &AbelianFieldSpec, extra: &[u64]) -> Vec<PlaceSet> {
    let ram = spec.ramified_primes();
    let base = PlaceSet::with_infinity(&ram);
    let mut out = vec![base.clone()];
    for &q in extra {
        if !ram.contains(&q) {
            out.push(base.union(&PlaceSet::finite(&[q])));
        }
    }
    out
}

/// `(spec, S, T, r)` tuples of the CM corpus with `Hyp(S, T)`.
pub fn hyp_corpus(bounds: &Bounds) -> Vec<(AbelianFieldSpec, PlaceSet, PlaceSet, i64)> {
    let mut out = Vec::new();
    for spec in AbelianFieldSpec::cm_fields_up_to(bounds.max_conductor) {
        for s in s_choices(&spec, &bounds.extra_s_primes) {
            let allowed: Vec<u64> = bounds.t_primes.iter().copied().filter(|&v| !s.contains_prime(v) && spec.conductor() % v != 0).collect();
            for t in sorted_subsets(&allowed) {
                let t = PlaceSet::finite(&t);
                if check_hyp(&spec, &s, &t).map(|h| h.holds).unwrap_or(false) {
                    for &r in &bounds.r_values {
                        out.push((spec.clone(), s.clone(), t.clone(), r));
                    }
                }
            }
        }
    }
    out
}

pub fn integrality_suite(bounds: &Bounds) -> SuiteReport {
    let outcomes = hyp_corpus(bounds)
        .par_iter()
        .map(|(spec, s, t, r)| match theta(spec, s, t, *r) {
            Ok(th) if th.is_integral() => Ok(()),
            Ok(_) => Err(format!("{}: S={s:?} T={t:?} r={r}: θ not integral", spec.label)),
            Err(e) => Err(format!("{}: {e}", spec.label)),
        })
        .collect();
    SuiteReport::from_outcomes("integrality under Hyp", outcomes)
}

pub fn character_suite(bounds: &Bounds) -> SuiteReport {
    let mut cases: Vec<(AbelianFieldSpec, PlaceSet, i64)> = Vec::new();
    for spec in AbelianFieldSpec::cm_fields_up_to(bounds.max_conductor) {
        for s in s_choices(&spec, &bounds.extra_s_primes) {
            for &r in &bounds.r_values {
                cases.push((spec.clone(), s.clone(), r));
            }
        }
    }
    let outcomes = cases
        .par_iter()
        .map(|(spec, s, r)| {
            let gal = spec.galois_group().map_err(|e| e.to_string())?;
            match character_mismatches(&gal, s, *r) {
                Ok(bad) if bad.is_empty() => Ok(()),
                Ok(bad) => Err(format!("{}: S={s:?} r={r}: characters {bad:?} disagree", spec.label)),
                Err(e) => Err(format!("{}: {e}", spec.label)),
            }
        })
        .collect();
    SuiteReport::from_outcomes("character cross-validation", outcomes)
}

/// Fields containing `μ_p` with a compatible `p`, with `S` minimal and a one-prime `T`.
pub fn tower_cases() -> Vec<(AbelianFieldSpec, u64, PlaceSet, PlaceSet)> {
    [(3u64, 3u64, 2u64), (5, 5, 2), (7, 7, 2), (12, 3, 5)]
        .into_iter()
        .map(|(m, p, v)| {
            let spec = AbelianFieldSpec::cyclotomic(m);
            let s = minimal_tower_places(&spec, p);
            (spec, p, s, PlaceSet::finite(&[v]))
        })
        .collect()
}

pub fn tower_coherence_suite(bounds: &Bounds) -> SuiteReport {
    let mut r_values = vec![0];
    r_values.extend(bounds.kummer_r.iter().copied());
    let cases: Vec<_> = tower_cases()
        .into_iter()
        .flat_map(|c| {
            let r_values = r_values.clone();
            (1..=bounds.tower_precision).flat_map(move |n| {
                let c = c.clone();
                r_values.clone().into_iter().map(move |r| (c.clone(), n, r))
            })
        })
        .collect();
    let outcomes = cases
        .par_iter()
        .map(|((spec, p, s, t), n, r)| {
            let tower = theta_tower(spec, s, t, *p, *n, bounds.tower_levels, *r).map_err(|e| e.to_string())?;
            let report = coherence_check(&tower).map_err(|e| e.to_string())?;
            if report.coherent {
                Ok(())
            } else {
                Err(format!("{} p={p} N={n} r={r}: incoherent at level {:?}", spec.label, report.first_bad_level))
            }
        })
        .collect();
    SuiteReport::from_outcomes("tower coherence", outcomes)
}

pub fn kummer_suite(bounds: &Bounds) -> SuiteReport {
    let cases: Vec<_> = tower_cases()
        .into_iter()
        .flat_map(|c| (1..=bounds.tower_precision).map(move |n| (c.clone(), n)))
        .collect();
    let outcomes: Vec<Vec<std::result::Result<(), String>>> = cases
        .par_iter()
        .map(|((spec, p, s, t), n)| {
            let base = match theta_tower(spec, s, t, *p, *n, bounds.tower_levels, 0) {
                Ok(b) => b,
                Err(e) => return vec![Err(e.to_string())],
            };
            bounds
                .kummer_r
                .iter()
                .map(|&r| {
                    let tr = theta_tower(spec, s, t, *p, *n, bounds.tower_levels, r).map_err(|e| e.to_string())?;
                    let report = twist_congruence_check(&tr, &base).map_err(|e| e.to_string())?;
                    if report.congruent {
                        Ok(())
                    } else {
                        Err(format!("{} p={p} N={n} r={r}: congruence fails at level {:?}", spec.label, report.first_bad_level))
                    }
                })
                .collect()
        })
        .collect();
    SuiteReport::from_outcomes("equivariant Kummer congruence", outcomes.into_iter().flatten().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lemma {
    Multiplicativity,
    BaseChange,
    E1Sharp,
    FourTerm,
}

impl Lemma {
    pub const ALL: [Lemma; 4] = [Lemma::Multiplicativity, Lemma::BaseChange, Lemma::E1Sharp, Lemma::FourTerm];

    pub fn name(self) -> &'static str {
        match self {
            Lemma::Multiplicativity => "Fitting multiplicativity",
            Lemma::BaseChange => "Fitting base change",
            Lemma::E1Sharp => "E1-sharp equality",
            Lemma::FourTerm => "four-term equality",
        }
    }
}

/// A group algebra together with the maps used for base change.
#[derive(Clone, Debug)]
pub struct LemmaAlgebra {
    pub name: String,
    pub group: FiniteAbelianGroup,
    pub alg: Arc<FiniteCommAlgebra>,
    pub homs: Vec<AlgebraHom>,
}

impl LemmaAlgebra {
    pub fn new(p: u64, precision: u32, orders: &[u64]) -> Result<Self> {
        let group = FiniteAbelianGroup::new(orders.to_vec())?;
        let ring = ZMod::new(p, precision)?;
        let alg = Arc::new(FiniteCommAlgebra::group_algebra(ring, &group));
        let n = group.order();
        let scalars = Arc::new(FiniteCommAlgebra::scalars(ring));
        let mut homs = vec![
            AlgebraHom::identity(alg.clone()),
            AlgebraHom::new(alg.clone(), scalars, vec![vec![1]; n])?,
        ];
        if let Some(j) = (0..n).find(|&g| group.element_order(g) == 2) {
            homs.push(FiniteCommAlgebra::minus_quotient(ring, &group, j)?.1);
        }
        if group.rank() >= 2 {
            let quotient = FiniteAbelianGroup::new(vec![orders[0]])?;
            let target = Arc::new(FiniteCommAlgebra::group_algebra(ring, &quotient));
            let images = (0..n).map(|g| target.basis(group.element(g)[0] as usize)).collect();
            homs.push(AlgebraHom::new(alg.clone(), target, images)?);
        }
        if precision > 1 {
            let coarse = Arc::new(FiniteCommAlgebra::group_algebra(ZMod::new(p, precision - 1)?, &group));
            let images = (0..n).map(|g| coarse.basis(g)).collect();
            homs.push(AlgebraHom::new(alg.clone(), coarse, images)?);
        }
        let name = format!("(Z/{})[{}]", ring.modulus(), orders.iter().map(|o| format!("C{o}")).collect::<Vec<_>>().join("×"));
        Ok(LemmaAlgebra { name, group, alg, homs })
    }

    /// `(Z/8)[C_2]`, `(Z/9)[C_3]`, `(Z/9)[C_2 × C_2]`.
    pub fn standard() -> Vec<LemmaAlgebra> {
        vec![
            LemmaAlgebra::new(2, 3, &[2]).expect("valid"),
            LemmaAlgebra::new(3, 2, &[3]).expect("valid"),
            LemmaAlgebra::new(3, 2, &[2, 2]).expect("valid"),
        ]
    }
}

/// The ideal pairs a lemma asserts equal, for one random instance.
pub fn lemma_trial<R: Rng>(lemma: Lemma, la: &LemmaAlgebra, rng: &mut R) -> Result<Vec<(IdealHandle, IdealHandle)>> {
    let alg = &la.alg;
    match lemma {
        Lemma::Multiplicativity => {
            let m1 = random_module(alg, rng, 2, 2);
            let m2 = random_module(alg, rng, 2, 2);
            Ok(vec![multiplicativity_sides(&m1, &m2)?])
        }
        Lemma::BaseChange => {
            let m = random_module(alg, rng, 2, 3);
            let hom = &la.homs[rng.gen_range(0..la.homs.len())];
            Ok(vec![base_change_sides(&m, hom)?])
        }
        Lemma::E1Sharp => {
            let n = rng.gen_range(1..=3);
            let m = random_quadratic(alg, rng, n);
            Ok(e1_sharp_sides(&m)?.to_vec())
        }
        Lemma::FourTerm => {
            let n = rng.gen_range(1..=2);
            let c = random_quadratic(alg, rng, n);
            let phi = if rng.gen_bool(0.5) {
                random_endomorphism(&c, rng)
            } else {
                let n2 = rng.gen_range(1..=2);
                let c2 = random_quadratic(alg, rng, n2);
                random_map(&c, &c2, rng)
            };
            Ok(vec![FourTermSequence::from_map(phi)?.sides()?])
        }
    }
}

pub fn lemma_suites(seed: u64, bounds: &Bounds) -> Vec<SuiteReport> {
    let algebras = LemmaAlgebra::standard();
    let mut out = Vec::new();
    for lemma in Lemma::ALL {
        for la in &algebras {
            let name = format!("{} over {}", lemma.name(), la.name);
            let outcomes = (0..bounds.lemma_trials)
                .into_par_iter()
                .map(|i| {
                    let mut rng = trial_rng(seed, &name, i);
                    let pairs = lemma_trial(lemma, la, &mut rng).map_err(|e| format!("trial {i}: {e}"))?;
                    for (lhs, rhs) in pairs {
                        if !lhs.equals(&rhs).map_err(|e| e.to_string())? {
                            return Err(format!("trial {i}: ideals differ"));
                        }
                    }
                    Ok(())
                })
                .collect();
            out.push(SuiteReport::from_outcomes(name, outcomes));
        }
    }
    out
}

fn complex_algebras() -> Vec<(String, Arc<FiniteCommAlgebra>)> {
    let z9 = ZMod::new(3, 2).expect("valid");
    vec![
        ("(Z/9)[C2]".into(), Arc::new(FiniteCommAlgebra::group_algebra(z9, &FiniteAbelianGroup::new(vec![2]).expect("valid")))),
        ("Z/9".into(), Arc::new(FiniteCommAlgebra::scalars(z9))),
    ]
}

pub fn complex_suites(seed: u64, bounds: &Bounds) -> Vec<SuiteReport> {
    let algebras = complex_algebras();
    let n = bounds.complex_trials;
    let qi = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, "qi", i);
            let (_, alg) = &algebras[i % algebras.len()];
            let start = rng.gen_range(-1..=1);
            let len = rng.gen_range(2..=3);
            let c = random_complex(alg, &mut rng, start, len);
            let x = random_module(alg, &mut rng, 2, 2);
            let a = acyclic_pair(&x, rng.gen_range(c.start()..c.end()));
            let f = if rng.gen_bool(0.5) { inclusion_into_sum(&c, &a) } else { projection_from_sum(&c, &a) }
                .map_err(|e| format!("trial {i}: {e}"))?;
            if !f.is_quasi_isomorphism() {
                return Err(format!("trial {i}: constructed map is not a quasi-isomorphism"));
            }
            let (ef, eg) = (f.source().euler_fitting(), f.target().euler_fitting());
            match (ef, eg) {
                (Ok(a), Ok(b)) if a.equivalent(&b).unwrap_or(false) => Ok(()),
                _ => Err(format!("trial {i}: Euler–Fitting invariants differ")),
            }
        })
        .collect();
    let additivity = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, "additivity", i);
            let (_, alg) = &algebras[i % algebras.len()];
            let start = rng.gen_range(-1..=1);
            let len = rng.gen_range(1..=3);
            let c = random_complex(alg, &mut rng, start, len);
            let d = random_complex(alg, &mut rng, start, len);
            let f = random_chain_map(&c, &d, &mut rng);
            let ses = ShortExactSequence::of_cone(&f).map_err(|e| format!("trial {i}: {e}"))?;
            match ses.additivity_holds() {
                Ok(true) => Ok(()),
                Ok(false) => Err(format!("trial {i}: additivity fails")),
                Err(e) => Err(format!("trial {i}: {e}")),
            }
        })
        .collect();
    let shift = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, "shift", i);
            let (_, alg) = &algebras[i % algebras.len()];
            let (start, len) = (rng.gen_range(-1..=1), rng.gen_range(1..=3));
            let c = random_complex(alg, &mut rng, start, len);
            let k = rng.gen_range(-2..=2i64);
            let base = c.euler_fitting().map_err(|e| e.to_string())?;
            let expected = if k % 2 == 0 { base } else { base.inverse() };
            let shifted = c.shift(k).euler_fitting().map_err(|e| e.to_string())?;
            if shifted.equivalent(&expected).map_err(|e| e.to_string())? {
                Ok(())
            } else {
                Err(format!("trial {i}: shift by {k} breaks the parity law"))
            }
        })
        .collect();
    vec![
        SuiteReport::from_outcomes("Euler–Fitting invariance under quasi-isomorphism", qi),
        SuiteReport::from_outcomes("Euler–Fitting additivity", additivity),
        SuiteReport::from_outcomes("shift parity", shift),
    ]
}

/// Verdicts on ingested class modules, cross-checked by acting on every element, and
/// `Fitt ⊆ Ann`: Fitting membership forces `θ` to kill the minus part of the p-part.
pub fn class_module_suite(cases: &[(String, VerifyInput)]) -> SuiteReport {
    let outcomes = cases
        .par_iter()
        .map(|(name, case)| {
            let fail = |msg: String| format!("{name}: {msg}");
            let th = case.stickelberger().map_err(|e| fail(e.to_string()))?;
            let gal = th.galois_group().map_err(|e| fail(e.to_string()))?;
            let module = GaloisModule::new(&gal, &case.data).map_err(|e| fail(e.to_string()))?;
            let ann = annihilation_check(&th, &case.data).map_err(|e| fail(e.to_string()))?;
            let elements = module.elements();
            let kills = |x: &Vec<u64>| module.apply(&ann.acting_matrix, x).iter().all(|&c| c == 0);
            if ann.annihilates != elements.iter().all(kills) {
                return Err(fail("annihilation verdict disagrees with the elementwise action".into()));
            }
            let fitt = fitting_membership_check(&th, &case.data, case.p, case.precision).map_err(|e| fail(e.to_string()))?;
            if fitt.member {
                let j = gal.class_of(-1).map_err(|e| fail(e.to_string()))?;
                let minus_p = elements.iter().filter(|x| {
                    let jx = module.apply(module.matrix(j), x);
                    module.is_p_power_torsion(x, case.p) && jx == module.negate(x)
                });
                if !minus_p.clone().all(kills) {
                    return Err(fail("θ^# lies in the Fitting ideal but θ does not kill the minus part".into()));
                }
            }
            Ok(())
        })
        .collect();
    SuiteReport::from_outcomes("class-module verdicts", outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_run_passes_and_is_deterministic() {
        let bounds = Bounds { lemma_trials: 4, complex_trials: 4, ..Bounds::reduced() };
        let a = run(11, &bounds, &[]);
        assert!(a.passed(), "{:#?}", a.suites.iter().filter(|s| !s.passed()).collect::<Vec<_>>());
        let b = run(11, &bounds, &[]);
        assert_eq!(a, b);
        assert!(a.suites.iter().all(|s| s.checked > 0 || s.name == "class-module verdicts"));
    }

    #[test]
    fn corpus_has_hyp_tuples_for_every_field() {
        let bounds = Bounds::reduced();
        let corpus = hyp_corpus(&bounds);
        for spec in AbelianFieldSpec::cm_fields_up_to(bounds.max_conductor) {
            assert!(corpus.iter().any(|(s, ..)| *s == spec), "{}", spec.label);
        }
    }

    #[test]
    fn base_change_targets() {
        let la = LemmaAlgebra::new(3, 2, &[2, 2]).unwrap();
        assert_eq!(la.homs.len(), 5);
        assert_eq!(la.name, "(Z/9)[C2×C2]");
    }
}
