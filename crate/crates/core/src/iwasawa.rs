//! Finite levels `(Z/p^N)[G_n]` of the Iwasawa algebra along the cyclotomic `Z_p`-tower, and
//! coherent towers of Stickelberger elements.
//!
//! Level `n` is the group algebra of `G_n = Gal(L_n/Q)` with `L_n` realised by
//! [`AbelianFieldSpec::layer`]. The cyclotomic character is `χ_cyc(σ_a) = a mod p^N`, which is a
//! character of `G_n` exactly when `μ_p ⊆ L` and `N ≤ n + 1`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgElem, FiniteCommAlgebra};
use crate::arith::nt;
use crate::error::{Error, Result};
use crate::field::{AbelianFieldSpec, GaloisGroup, Place, PlaceSet};
use crate::lvalues::theta_on;
use crate::zmod::ZMod;

#[derive(Clone, Debug)]
pub struct FiniteLevelAlgebra {
    base: AbelianFieldSpec,
    level: u32,
    gal: GaloisGroup,
    alg: Arc<FiniteCommAlgebra>,
}

impl FiniteLevelAlgebra {
    pub fn new(base: &AbelianFieldSpec, p: u64, precision: u32, level: u32) -> Result<Self> {
        let spec = base.layer(p, level)?;
        let gal = spec.galois_group()?;
        let ring = ZMod::new(p, precision)?;
        let alg = Arc::new(FiniteCommAlgebra::group_algebra(ring, gal.group()));
        Ok(FiniteLevelAlgebra { base: base.clone(), level, gal, alg })
    }

    pub fn p(&self) -> u64 {
        self.alg.ring().p()
    }

    pub fn precision(&self) -> u32 {
        self.alg.ring().precision()
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn galois_group(&self) -> &GaloisGroup {
        &self.gal
    }

    pub fn algebra(&self) -> &Arc<FiniteCommAlgebra> {
        &self.alg
    }

    pub fn ring(&self) -> ZMod {
        self.alg.ring()
    }

    /// `σ_a` for an integer `a` prime to the modulus.
    pub fn sigma(&self, a: i64) -> Result<usize> {
        self.gal.class_of(a)
    }

    /// `γ = σ_a` with `a ≡ 1 + p mod p^{n+1}` and `a ≡ 1` mod the prime-to-`p` part.
    pub fn gamma(&self) -> usize {
        let m = self.gal.modulus();
        let p = self.p();
        let ppow = p.pow(self.level + 1);
        let prime_to_p = m / ppow;
        let a = (1..m)
            .find(|&a| a % ppow == (1 + p) % ppow && a % prime_to_p == 1 % prime_to_p)
            .unwrap_or(1);
        self.gal.class_of(a as i64).expect("a is a unit")
    }

    /// Pushforward along `G_n → G_k`, `k ≤ n`.
    pub fn aug_project(&self, x: &[u64], target: &FiniteLevelAlgebra) -> Result<AlgElem> {
        if target.level > self.level || target.p() != self.p() || target.base != self.base {
            return Err(Error::mismatch(format!(
                "cannot project level {} onto level {}",
                self.level, target.level
            )));
        }
        let map = self.gal.projection_to(&target.gal)?;
        let ring = target.ring();
        let mut out = target.alg.zero();
        for (g, &c) in x.iter().enumerate() {
            out[map[g]] = ring.add(out[map[g]], c % ring.modulus());
        }
        Ok(out)
    }

    pub fn sharp(&self, x: &[u64]) -> AlgElem {
        self.alg.sharp(x).expect("group algebras carry #")
    }

    fn check_twist(&self) -> Result<()> {
        let p = self.p();
        if !self.base.contains_roots_of_unity(p) {
            return Err(Error::pre(format!(
                "μ_{p} is not contained in L, so χ_cyc does not factor through G_n"
            )));
        }
        if self.precision() > self.level + 1 {
            return Err(Error::Precision(format!(
                "twist at level {} needs N ≤ {}, got N = {}",
                self.level,
                self.level + 1,
                self.precision()
            )));
        }
        Ok(())
    }

    /// `χ_cyc(g) ∈ (Z/p^N)^×`.
    pub fn chi_cyc(&self, g: usize) -> Result<u64> {
        self.check_twist()?;
        Ok(self.gal.representative(g) % self.ring().modulus())
    }

    /// `g ↦ χ_cyc(g)^r g`, extended linearly.
    pub fn twist(&self, x: &[u64], r: i64) -> Result<AlgElem> {
        self.check_twist()?;
        let ring = self.ring();
        let q = ring.modulus();
        x.iter()
            .enumerate()
            .map(|(g, &c)| {
                let chi = self.gal.representative(g) % q;
                let factor = if r >= 0 {
                    nt::pow_mod(chi, r as u64, q)
                } else {
                    nt::pow_mod(ring.inv(chi)?, r.unsigned_abs(), q)
                };
                Ok(ring.mul(c, factor))
            })
            .collect()
    }

    /// `ξ_v = 1 - χ_cyc(σ_v) σ_v`.
    pub fn xi(&self, v: u64) -> Result<AlgElem> {
        let sigma = self.sigma(v as i64)?;
        let chi = self.chi_cyc(sigma)?;
        let ring = self.ring();
        let mut x = self.alg.one();
        x[sigma] = ring.sub(x[sigma], chi);
        Ok(x)
    }

    /// `Θ_{S,T}(L_n, r)` reduced mod `p^N`; requires `p`-integral coefficients.
    pub fn theta(&self, s: &PlaceSet, t: &PlaceSet, r: i64) -> Result<AlgElem> {
        let theta = theta_on(&self.gal, s, t, r)?;
        let q = self.ring().modulus();
        theta
            .value
            .iter()
            .map(|c| {
                c.residue_mod(q).map_err(|_| {
                    Error::CheckFailed(format!(
                        "Θ is not p-integral at layer {} (coefficient {c})",
                        self.level
                    ))
                })
            })
            .collect()
    }

    /// Coefficients keyed by the least positive residue representing each group element.
    pub fn coefficient_map(&self, x: &[u64]) -> BTreeMap<u64, u64> {
        x.iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(g, &c)| (self.gal.representative(g), c))
            .collect()
    }

    pub fn from_coefficient_map(&self, map: &BTreeMap<u64, u64>) -> Result<AlgElem> {
        let mut x = self.alg.zero();
        let q = self.ring().modulus();
        for (&a, &c) in map {
            let g = self.sigma(a as i64)?;
            x[g] = (x[g] + c) % q;
        }
        Ok(x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerLevel {
    pub n: u32,
    pub coeffs: BTreeMap<u64, u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerMeta {
    #[serde(rename = "S")]
    pub s: PlaceSet,
    #[serde(rename = "T")]
    pub t: PlaceSet,
    pub r: i64,
}

/// Elements of `(Z/p^N)[G_n]` for `n = 0..=n_max`, keyed by residues mod the level modulus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerElement {
    pub spec: AbelianFieldSpec,
    pub p: u64,
    #[serde(rename = "N")]
    pub precision: u32,
    pub levels: Vec<TowerLevel>,
    pub meta: TowerMeta,
}

impl TowerElement {
    pub fn algebras(&self) -> Result<Vec<FiniteLevelAlgebra>> {
        self.levels
            .iter()
            .map(|l| FiniteLevelAlgebra::new(&self.spec, self.p, self.precision, l.n))
            .collect()
    }

    /// Dense level entries together with their algebras.
    pub fn dense(&self) -> Result<Vec<(FiniteLevelAlgebra, AlgElem)>> {
        self.algebras()?
            .into_iter()
            .zip(&self.levels)
            .map(|(a, l)| {
                let x = a.from_coefficient_map(&l.coeffs)?;
                Ok((a, x))
            })
            .collect()
    }
}

/// Checks the tower preconditions: odd `p`, `v_p(conductor) ≤ 1`, and `S ⊇ S_ram(L_∞) ∪ {p, ∞}`.
pub fn check_tower_places(spec: &AbelianFieldSpec, p: u64, s: &PlaceSet) -> Result<()> {
    if p == 2 || !nt::is_prime(p) {
        return Err(Error::pre(format!("the tower needs an odd prime, got {p}")));
    }
    if !s.has_infinite() || !s.contains_prime(p) {
        return Err(Error::pre(format!("S must contain ∞ and p = {p}")));
    }
    for q in spec.ramified_primes() {
        if !s.contains_prime(q) {
            return Err(Error::pre(format!("S misses the ramified prime {q}")));
        }
    }
    Ok(())
}

/// `(Θ_{S,T}(L_n, r) mod p^N)_{n ≤ n_max}`.
pub fn theta_tower(
    spec: &AbelianFieldSpec,
    s: &PlaceSet,
    t: &PlaceSet,
    p: u64,
    precision: u32,
    n_max: u32,
    r: i64,
) -> Result<TowerElement> {
    check_tower_places(spec, p, s)?;
    let levels = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let a = FiniteLevelAlgebra::new(spec, p, precision, n)?;
            let x = a.theta(s, t, r)?;
            Ok(TowerLevel { n, coeffs: a.coefficient_map(&x) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TowerElement {
        spec: spec.clone(),
        p,
        precision,
        levels,
        meta: TowerMeta { s: s.clone(), t: t.clone(), r },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoherenceReport {
    pub coherent: bool,
    /// The first level whose projection disagrees with the level below it.
    pub first_bad_level: Option<u32>,
}

/// Adjacent projections `aug(level n+1) = level n`.
pub fn coherence_check(tower: &TowerElement) -> Result<CoherenceReport> {
    let dense = tower.dense()?;
    for pair in dense.windows(2) {
        let (lo, x_lo) = &pair[0];
        let (hi, x_hi) = &pair[1];
        if hi.aug_project(x_hi, lo)? != *x_lo {
            return Ok(CoherenceReport { coherent: false, first_bad_level: Some(hi.level()) });
        }
    }
    Ok(CoherenceReport { coherent: true, first_bad_level: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistReport {
    pub congruent: bool,
    /// `(n, k)` with the comparison made mod `p^k`.
    pub moduli: Vec<(u32, u32)>,
    pub first_bad_level: Option<u32>,
}

/// `Θ(L_n, r) ≡ t^r(Θ(L_n, 0)) mod p^{min(N, n+1)}` at every level.
pub fn twist_congruence_check(t_r: &TowerElement, t_0: &TowerElement) -> Result<TwistReport> {
    if t_r.spec != t_0.spec || t_r.p != t_0.p || t_r.meta.s != t_0.meta.s || t_r.meta.t != t_0.meta.t {
        return Err(Error::mismatch("towers come from different data"));
    }
    if t_0.meta.r != 0 {
        return Err(Error::pre("the reference tower must be at r = 0"));
    }
    let r = t_r.meta.r;
    let a = t_r.dense()?;
    let b = t_0.dense()?;
    let mut moduli = Vec::new();
    for ((alg_r, x_r), (_, x_0)) in a.iter().zip(&b) {
        let n = alg_r.level();
        let k = t_r.precision.min(t_0.precision).min(n + 1);
        let reduced = FiniteLevelAlgebra::new(&t_r.spec, t_r.p, k, n)?;
        let lhs: AlgElem = x_r.iter().map(|&c| c % reduced.ring().modulus()).collect();
        let base: AlgElem = x_0.iter().map(|&c| c % reduced.ring().modulus()).collect();
        let rhs = reduced.twist(&base, r)?;
        moduli.push((n, k));
        if lhs != rhs {
            return Ok(TwistReport { congruent: false, moduli, first_bad_level: Some(n) });
        }
    }
    Ok(TwistReport { congruent: true, moduli, first_bad_level: None })
}

/// `S = S_ram(L_∞) ∪ {p, ∞}`.
pub fn minimal_tower_places(spec: &AbelianFieldSpec, p: u64) -> PlaceSet {
    let mut primes = spec.ramified_primes();
    primes.push(p);
    PlaceSet::new(primes.into_iter().map(Place::Finite).chain([Place::Infinite]))
}

/// `T = {ℓ}` for the least prime `ℓ ∉ S` prime to `2mp`. Every root of unity of every layer has
/// order prime to `ℓ`, so `Hyp(S, T)` holds along the whole tower.
pub fn default_tower_smoothing(spec: &AbelianFieldSpec, p: u64, s: &PlaceSet) -> PlaceSet {
    let bad = 2 * spec.modulus * p;
    let l = (2u64..)
        .find(|&l| nt::is_prime(l) && bad % l != 0 && !s.contains_prime(l))
        .expect("primes are unbounded");
    PlaceSet::finite(&[l])
}
