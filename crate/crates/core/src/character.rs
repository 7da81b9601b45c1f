//! Character tables of finite abelian groups with values in `Q(ζ_e)`, `e` the exponent.

use std::sync::Arc;

use crate::arith::{nt, Coeff, CyclotomicInt, Rational};
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::group_ring::GroupRingElement;

/// All characters `χ_c(g) = ζ_e^{Σ_i c_i g_i e/d_i}` of `G = ⊕ Z/d_i`.
///
/// Characters are indexed exactly like group elements: character `c` is the one with
/// exponent vector `c`, so index 0 is the trivial character.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    group: Arc<FiniteAbelianGroup>,
    exponent: u64,
}

impl CharacterTable {
    pub fn new(group: Arc<FiniteAbelianGroup>) -> Self {
        let exponent = group.exponent();
        CharacterTable { group, exponent }
    }

    pub fn group(&self) -> &Arc<FiniteAbelianGroup> {
        &self.group
    }

    /// Order `e` of the cyclotomic field holding all values.
    pub fn value_order(&self) -> u64 {
        self.exponent
    }

    pub fn len(&self) -> usize {
        self.group.order()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `χ(g) = ζ_e^k`; returns `k mod e`.
    pub fn value_exponent(&self, chi: usize, g: usize) -> u64 {
        let c = self.group.element(chi);
        let x = self.group.element(g);
        let e = self.exponent;
        let mut k = 0u64;
        for ((ci, xi), &d) in c.iter().zip(&x).zip(self.group.orders()) {
            k = (k + ci * xi % d * (e / d)) % e;
        }
        k
    }

    pub fn value(&self, chi: usize, g: usize) -> CyclotomicInt {
        CyclotomicInt::root_power(self.exponent, self.value_exponent(chi, g) as i64)
    }

    /// The contragredient `χ̌ = χ^{-1}`.
    pub fn dual(&self, chi: usize) -> usize {
        self.group.inv(chi)
    }

    pub fn order_of(&self, chi: usize) -> u64 {
        self.group.element_order(chi)
    }

    /// Whether `χ(j) = 1` for the given involution `j`.
    pub fn is_even(&self, chi: usize, j: usize) -> bool {
        self.value_exponent(chi, j) == 0
    }

    /// `e(χ) = |G|^{-1} Σ_g χ(g^{-1}) g`.
    pub fn idempotent(&self, chi: usize) -> GroupRingElement<CyclotomicInt> {
        let e = self.exponent;
        let inv_order = Rational::new(1, self.group.order() as i64);
        let coeffs = (0..self.group.order())
            .map(|g| {
                let k = self.value_exponent(chi, g) as i64;
                CyclotomicInt::root_power(e, -k).scale(&inv_order)
            })
            .collect();
        GroupRingElement::from_coeffs(self.group.clone(), coeffs).expect("sized by group")
    }

    /// Components `Σ_g x_g χ(g)` for every character, in character order.
    pub fn decompose_rational(&self, x: &GroupRingElement<Rational>) -> Result<Vec<CyclotomicInt>> {
        self.check_group(x.group())?;
        let e = self.exponent;
        Ok((0..self.len())
            .map(|chi| {
                let mut sums = vec![Rational::zero(); e as usize];
                for (g, c) in x.support() {
                    let k = self.value_exponent(chi, g) as usize;
                    sums[k] = &sums[k] + c;
                }
                CyclotomicInt::from_power_sums(e, sums)
            })
            .collect())
    }

    /// Components of an element with cyclotomic coefficients (of order `e`).
    pub fn decompose(&self, x: &GroupRingElement<CyclotomicInt>) -> Result<Vec<CyclotomicInt>> {
        self.check_group(x.group())?;
        let e = self.exponent;
        Ok((0..self.len())
            .map(|chi| {
                let mut acc = CyclotomicInt::zero(e);
                for (g, c) in x.support() {
                    let k = self.value_exponent(chi, g) as i64;
                    acc = acc.add(&c.mul_root_power(k));
                }
                acc
            })
            .collect())
    }

    /// `x = Σ_χ x_χ e(χ)`.
    pub fn reconstruct(&self, components: &[CyclotomicInt]) -> Result<GroupRingElement<CyclotomicInt>> {
        if components.len() != self.len() {
            return Err(Error::mismatch(format!(
                "{} components for {} characters",
                components.len(),
                self.len()
            )));
        }
        let e = self.exponent;
        let inv_order = Rational::new(1, self.group.order() as i64);
        let coeffs = (0..self.group.order())
            .map(|g| {
                let mut acc = CyclotomicInt::zero(e);
                for (chi, comp) in components.iter().enumerate() {
                    if comp.is_zero() {
                        continue;
                    }
                    let k = self.value_exponent(chi, g) as i64;
                    acc = acc.add(&comp.mul_root_power(-k));
                }
                acc.scale(&inv_order)
            })
            .collect();
        GroupRingElement::from_coeffs(self.group.clone(), coeffs)
    }

    fn check_group(&self, g: &Arc<FiniteAbelianGroup>) -> Result<()> {
        if **g != *self.group {
            return Err(Error::mismatch("element and character table live on different groups"));
        }
        Ok(())
    }
}

/// Lift of a rational group-ring element to cyclotomic coefficients of order `e`.
pub fn to_cyclotomic(x: &GroupRingElement<Rational>, e: u64) -> GroupRingElement<CyclotomicInt> {
    x.map_coeffs(|c| CyclotomicInt::from_rational(e, c.clone()))
}

/// The element back in `Q[G]`, when all coefficients are rational.
pub fn to_rational(x: &GroupRingElement<CyclotomicInt>) -> Option<GroupRingElement<Rational>> {
    let coeffs = x.coeffs().iter().map(CyclotomicInt::as_rational).collect::<Option<Vec<_>>>()?;
    GroupRingElement::from_coeffs(x.group().clone(), coeffs).ok()
}

/// Dirichlet character modulo `modulus` with values `ζ_order^{k(a)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u64,
    /// Exponent `k(a)` for `a` in `0..modulus`, `None` when `gcd(a, modulus) > 1`.
    exponents: Vec<Option<u64>>,
}

impl DirichletCharacter {
    pub fn new(modulus: u64, order: u64, exponents: Vec<Option<u64>>) -> Result<Self> {
        if exponents.len() != modulus as usize {
            return Err(Error::malformed("exponent table must have one entry per residue"));
        }
        Ok(DirichletCharacter { modulus, order, exponents })
    }

    pub fn trivial() -> Self {
        DirichletCharacter { modulus: 1, order: 1, exponents: vec![Some(0)] }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn value_order(&self) -> u64 {
        self.order
    }

    pub fn exponent_at(&self, a: i64) -> Option<u64> {
        self.exponents[nt::reduce_signed(a, self.modulus) as usize]
    }

    pub fn value(&self, a: i64) -> CyclotomicInt {
        match self.exponent_at(a) {
            Some(k) => CyclotomicInt::root_power(self.order, k as i64),
            None => CyclotomicInt::zero(self.order),
        }
    }

    /// Conductor: the least `f | modulus` such that `χ` is trivial on units `≡ 1 mod f`.
    pub fn conductor(&self) -> u64 {
        let m = self.modulus;
        nt::divisors(m)
            .into_iter()
            .find(|&f| {
                (0..m).all(|a| match self.exponents[a as usize] {
                    Some(k) if a % f == 1 % f => k == 0,
                    _ => true,
                })
            })
            .unwrap_or(m)
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }

    /// The primitive character inducing `χ`.
    pub fn primitive(&self) -> Self {
        let f = self.conductor();
        let m = self.modulus;
        let exponents = (0..f)
            .map(|b| {
                if f > 1 && nt::gcd(b, f) != 1 {
                    return None;
                }
                // any lift of b mod f that is a unit mod m has the same value
                (0..m / f)
                    .map(|t| b + t * f)
                    .find_map(|a| self.exponents[(a % m) as usize])
            })
            .collect();
        DirichletCharacter { modulus: f, order: self.order, exponents }
    }

    pub fn conj(&self) -> Self {
        let exponents = self
            .exponents
            .iter()
            .map(|k| k.map(|k| (self.order - k) % self.order))
            .collect();
        DirichletCharacter { exponents, ..self.clone() }
    }

    /// `χ(-1) = 1`.
    pub fn is_even(&self) -> bool {
        self.exponent_at(-1) == Some(0)
    }
}

impl crate::field::GaloisGroup {
    /// The Dirichlet character modulo the field's modulus attached to a character of `Gal(L/Q)`.
    pub fn dirichlet_character(&self, table: &CharacterTable, chi: usize) -> DirichletCharacter {
        let m = self.modulus();
        let e = table.value_order();
        let exponents = (0..m)
            .map(|a| {
                if m > 1 && nt::gcd(a, m) != 1 {
                    None
                } else {
                    let g = self.class_of(a as i64).expect("unit");
                    Some(table.value_exponent(chi, g))
                }
            })
            .collect();
        DirichletCharacter { modulus: m, order: e, exponents }
    }
}

/// Orthogonality check `Σ_g χ(g) χ'(g^{-1}) = |G| [χ = χ']`, evaluated exactly.
pub fn orthogonality_holds(table: &CharacterTable) -> bool {
    let g = table.group();
    let n = g.order();
    let e = table.value_order();
    for a in 0..n {
        for b in 0..n {
            let mut sums = vec![Rational::zero(); e as usize];
            for x in 0..n {
                let k = (table.value_exponent(a, x) + table.value_exponent(b, g.inv(x))) % e;
                sums[k as usize] = &sums[k as usize] + &Rational::one();
            }
            let total = CyclotomicInt::from_power_sums(e, sums);
            let expected = if a == b { Rational::from(n as i64) } else { Rational::zero() };
            if total != CyclotomicInt::from_rational(e, expected) {
                return false;
            }
        }
    }
    true
}

/// `Σ_χ e(χ) = 1`.
pub fn idempotents_sum_to_one(table: &CharacterTable) -> bool {
    let e = table.value_order();
    let zero = CyclotomicInt::zero(e);
    let mut acc = GroupRingElement::zero(table.group().clone(), zero.clone());
    for chi in 0..table.len() {
        acc = acc.add(&table.idempotent(chi));
    }
    acc == GroupRingElement::one(table.group().clone(), zero.one_like()).map_coeffs(|c| c.clone())
}
