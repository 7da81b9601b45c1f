//! Partial zeta values at non-positive integers and the equivariant elements built from them:
//! `θ_S(r)`, `δ_T(r)` and `Θ_{S,T}(r) = δ_T(r)·L_S(r)^#` in `Q[G]`.
//!
//! Group-ring elements live on the Galois group of the field as presented (its own modulus).
//! Partial zeta values are summed over residues mod the conductor and lifted to that modulus.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{bernoulli_polynomial, eval_poly, hurwitz_zeta_nonpos, nt, CyclotomicInt, Rational};
use crate::character::{CharacterTable, DirichletCharacter};
use crate::error::{Error, Result};
use crate::field::{AbelianFieldSpec, GaloisGroup, Place, PlaceSet};
use crate::group_ring::GroupRingElement;

/// `Θ_{S,T}(r)` together with the data that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StickelbergerElement {
    pub spec: AbelianFieldSpec,
    #[serde(rename = "S")]
    pub s: PlaceSet,
    #[serde(rename = "T")]
    pub t: PlaceSet,
    pub r: i64,
    /// Coefficients indexed by the canonical element order of the Galois group.
    pub value: Vec<Rational>,
}

impl StickelbergerElement {
    pub fn galois_group(&self) -> Result<GaloisGroup> {
        self.spec.galois_group()
    }

    pub fn element(&self, gal: &GaloisGroup) -> Result<GroupRingElement<Rational>> {
        GroupRingElement::from_coeffs(gal.group().clone(), self.value.clone())
    }

    /// Coefficients keyed by the least positive residue representing each group element.
    pub fn coefficient_map(&self, gal: &GaloisGroup) -> BTreeMap<u64, Rational> {
        self.value
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(g, c)| (gal.representative(g), c.clone()))
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.value.iter().all(Rational::is_integer)
    }
}

/// `true` iff every coefficient is an integer.
pub fn verify_integrality(theta: &StickelbergerElement) -> bool {
    theta.is_integral()
}

/// A unit mod `m` congruent to `b` mod `f` (`f | m`).
fn lift_residue(b: u64, f: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    (0..m / f)
        .map(|k| (b % f + k * f) % m)
        .find(|&a| nt::gcd(a, m) == 1)
        .expect("units mod f lift to units mod m")
}

/// Artin symbol of an unramified prime, also when `v` divides the ambient modulus.
pub fn artin_symbol(gal: &GaloisGroup, v: u64) -> Result<usize> {
    let spec = gal.spec();
    let f = spec.conductor();
    if f > 1 && f % v == 0 {
        return Err(Error::pre(format!("{v} is ramified in {}", label(spec))));
    }
    let m = spec.modulus;
    if m == 1 || m % v != 0 {
        return gal.frobenius(v);
    }
    gal.class_of(lift_residue(v % f, f, m) as i64)
}

fn label(spec: &AbelianFieldSpec) -> String {
    if spec.label.is_empty() {
        format!("the field of modulus {}", spec.modulus)
    } else {
        spec.label.clone()
    }
}

fn check_s(spec: &AbelianFieldSpec, s: &PlaceSet) -> Result<()> {
    if !s.has_infinite() {
        return Err(Error::pre("S must contain the infinite place"));
    }
    for q in spec.ramified_primes() {
        if !s.contains_prime(q) {
            return Err(Error::pre(format!("S misses the ramified prime {q}")));
        }
    }
    Ok(())
}

fn check_r(r: i64) -> Result<()> {
    if r > 0 {
        return Err(Error::pre(format!("only non-positive integers r are supported, got {r}")));
    }
    Ok(())
}

/// `Σ_σ ζ_{S_ram ∪ S_∞}(r, σ) σ^{-1}` summed over residues mod the conductor.
fn base_l_sharp(gal: &GaloisGroup, r: i64) -> Result<GroupRingElement<Rational>> {
    let spec = gal.spec();
    let f = spec.conductor();
    let m = spec.modulus;
    let group = gal.group();
    let scale = Rational::from(f as i64).pow(-r as i32);
    let mut coeffs = vec![Rational::zero(); group.order()];
    for b in 1..=f {
        if f > 1 && nt::gcd(b, f) != 1 {
            continue;
        }
        let sigma = gal.class_of(lift_residue(b, f, m) as i64)?;
        let z = hurwitz_zeta_nonpos(r, b, f)?;
        let slot = group.inv(sigma);
        coeffs[slot] = &coeffs[slot] + &(&scale * &z);
    }
    GroupRingElement::from_coeffs(group.clone(), coeffs)
}

/// Multiplies a `θ`-like element by `1 - v^{-r} σ_v^{-1}`.
pub fn euler_enlarge(
    x: &GroupRingElement<Rational>,
    gal: &GaloisGroup,
    s: &PlaceSet,
    v: u64,
    r: i64,
) -> Result<GroupRingElement<Rational>> {
    check_r(r)?;
    if s.contains_prime(v) {
        return Err(Error::pre(format!("{v} is already in S")));
    }
    let sigma = artin_symbol(gal, v)?;
    let group = gal.group();
    let factor = GroupRingElement::one(group.clone(), Rational::zero()).sub(&GroupRingElement::basis(
        group.clone(),
        group.inv(sigma),
        Rational::from(v as i64).pow(-r as i32),
    ));
    Ok(x.mul(&factor))
}

/// `L_S(r)^# = Σ_σ ζ_S(r, σ) σ^{-1}`.
pub fn l_sharp(gal: &GaloisGroup, s: &PlaceSet, r: i64) -> Result<GroupRingElement<Rational>> {
    check_r(r)?;
    check_s(gal.spec(), s)?;
    let ramified = gal.spec().ramified_primes();
    let mut x = base_l_sharp(gal, r)?;
    let mut current = PlaceSet::new(ramified.iter().map(|&q| Place::Finite(q)).chain([Place::Infinite]));
    for v in s.primes() {
        if ramified.contains(&v) {
            continue;
        }
        x = euler_enlarge(&x, gal, &current, v, r)?;
        current = current.union(&PlaceSet::finite(&[v]));
    }
    Ok(x)
}

/// `σ ↦ ζ_S(r, σ)`, indexed by the canonical element order of the Galois group.
pub fn partial_zeta_vector(gal: &GaloisGroup, s: &PlaceSet, r: i64) -> Result<Vec<Rational>> {
    let x = l_sharp(gal, s, r)?;
    let group = gal.group();
    Ok((0..group.order()).map(|g| x.coeff(group.inv(g)).clone()).collect())
}

/// `δ_T(r) = Π_{v∈T} (1 - v^{1-r} σ_v^{-1})`.
pub fn delta_t(gal: &GaloisGroup, t: &PlaceSet, r: i64) -> Result<GroupRingElement<Rational>> {
    if t.has_infinite() {
        return Err(Error::malformed("T must consist of finite primes"));
    }
    let group = gal.group();
    let mut acc = GroupRingElement::one(group.clone(), Rational::zero());
    for v in t.primes() {
        let sigma = artin_symbol(gal, v)?;
        let nv = Rational::from(v as i64).pow((1 - r) as i32);
        let factor = GroupRingElement::one(group.clone(), Rational::zero())
            .sub(&GroupRingElement::basis(group.clone(), group.inv(sigma), nv));
        acc = acc.mul(&factor);
    }
    Ok(acc)
}

/// `Θ_{S,T}(r) = δ_T(r) · L_S(r)^#`.
pub fn theta(spec: &AbelianFieldSpec, s: &PlaceSet, t: &PlaceSet, r: i64) -> Result<StickelbergerElement> {
    let gal = spec.galois_group()?;
    theta_on(&gal, s, t, r)
}

/// As [`theta`], reusing an already computed Galois group.
pub fn theta_on(gal: &GaloisGroup, s: &PlaceSet, t: &PlaceSet, r: i64) -> Result<StickelbergerElement> {
    for v in t.primes() {
        if s.contains_prime(v) {
            return Err(Error::pre(format!("{v} lies in both S and T")));
        }
    }
    let value = delta_t(gal, t, r)?.mul(&l_sharp(gal, s, r)?);
    Ok(StickelbergerElement {
        spec: gal.spec().clone(),
        s: s.clone(),
        t: t.clone(),
        r,
        value: value.coeffs().to_vec(),
    })
}

/// Generalised Bernoulli number `B_{n,χ} = f^{n-1} Σ_{a=1}^{f} χ(a) B_n(a/f)`.
pub fn generalized_bernoulli(chi: &DirichletCharacter, n: usize) -> CyclotomicInt {
    let f = chi.modulus();
    let e = chi.value_order();
    let poly = bernoulli_polynomial(n);
    let mut sums = vec![Rational::zero(); e as usize];
    for a in 1..=f {
        if let Some(k) = chi.exponent_at(a as i64) {
            let b = eval_poly(&poly, &Rational::new(a as i64, f as i64));
            sums[k as usize] = &sums[k as usize] + &b;
        }
    }
    let scale = Rational::from(f as i64).pow(n as i32 - 1);
    CyclotomicInt::from_power_sums(e, sums).scale(&scale)
}

/// `L_S(r, χ) = -B_{1-r,χ}/(1-r) · Π_{v∈S, v∤f} (1 - χ(v) v^{-r})` for primitive `χ`.
pub fn dirichlet_l_nonpos(chi: &DirichletCharacter, s: &PlaceSet, r: i64) -> Result<CyclotomicInt> {
    check_r(r)?;
    if !chi.is_primitive() {
        return Err(Error::pre(format!(
            "character modulo {} is imprimitive (conductor {})",
            chi.modulus(),
            chi.conductor()
        )));
    }
    let n = (1 - r) as usize;
    let e = chi.value_order();
    let mut value = generalized_bernoulli(chi, n).scale(&Rational::new(-1, n as i64));
    let f = chi.modulus();
    for v in s.primes() {
        if f > 1 && f % v == 0 {
            continue;
        }
        let vr = Rational::from(v as i64).pow(-r as i32);
        let factor = CyclotomicInt::from_rational(e, Rational::one()).sub(&chi.value(v as i64).scale(&vr));
        value = value.mul(&factor);
    }
    Ok(value)
}

/// `L_S(r, χ̌)` for every character `χ` of the Galois group, through generalised Bernoulli
/// numbers of the primitive characters.
pub fn l_values_by_character(gal: &GaloisGroup, table: &CharacterTable, s: &PlaceSet, r: i64) -> Result<Vec<CyclotomicInt>> {
    check_s(gal.spec(), s)?;
    (0..table.len())
        .map(|chi| {
            let dual = gal.dirichlet_character(table, table.dual(chi)).primitive();
            dirichlet_l_nonpos(&dual, s, r)
        })
        .collect()
}

/// Compares the character components of `θ_S(r)` with `L_S(r, χ̌)`; returns the characters
/// where they differ.
pub fn character_mismatches(gal: &GaloisGroup, s: &PlaceSet, r: i64) -> Result<Vec<usize>> {
    let table = CharacterTable::new(gal.group().clone());
    let x = l_sharp(gal, s, r)?;
    let comps = table.decompose_rational(&x)?;
    let expected = l_values_by_character(gal, &table, s, r)?;
    Ok((0..table.len()).filter(|&c| comps[c] != expected[c]).collect())
}
