//! Group rings `C[G]` of finite abelian groups over an exact coefficient domain.

use std::sync::Arc;

use crate::arith::{Coeff, PadicInt, Rational};
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;

/// Dense element `Σ_g c_g g` of `C[G]`, indexed by the canonical element order of `G`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupRingElement<C> {
    group: Arc<FiniteAbelianGroup>,
    coeffs: Vec<C>,
}

impl<C: Coeff> GroupRingElement<C> {
    pub fn zero(group: Arc<FiniteAbelianGroup>, zero: C) -> Self {
        let coeffs = vec![zero.zero_like(); group.order()];
        GroupRingElement { group, coeffs }
    }

    pub fn one(group: Arc<FiniteAbelianGroup>, zero: C) -> Self {
        let one = zero.one_like();
        Self::basis(group, 0, one)
    }

    /// `c · g`.
    pub fn basis(group: Arc<FiniteAbelianGroup>, g: usize, c: C) -> Self {
        let mut coeffs = vec![c.zero_like(); group.order()];
        coeffs[g] = c;
        GroupRingElement { group, coeffs }
    }

    pub fn from_coeffs(group: Arc<FiniteAbelianGroup>, coeffs: Vec<C>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::mismatch(format!(
                "{} coefficients for a group of order {}",
                coeffs.len(),
                group.order()
            )));
        }
        Ok(GroupRingElement { group, coeffs })
    }

    pub fn group(&self) -> &Arc<FiniteAbelianGroup> {
        &self.group
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, g: usize) -> &C {
        &self.coeffs[g]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Coeff::is_zero)
    }

    fn same_group(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.group, &other.group) || self.group == other.group,
            "group ring elements over different groups"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_group(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect();
        GroupRingElement { group: self.group.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_group(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect();
        GroupRingElement { group: self.group.clone(), coeffs }
    }

    pub fn neg(&self) -> Self {
        GroupRingElement { group: self.group.clone(), coeffs: self.coeffs.iter().map(Coeff::neg).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        GroupRingElement { group: self.group.clone(), coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_group(other);
        let g = &self.group;
        let mut out = vec![self.coeffs[0].zero_like(); g.order()];
        for (a, ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in other.coeffs.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let k = g.mul(a, b);
                out[k] = out[k].add(&ca.mul(cb));
            }
        }
        GroupRingElement { group: self.group.clone(), coeffs: out }
    }

    /// The involution `#` induced by `g ↦ g^{-1}`.
    pub fn sharp(&self) -> Self {
        let g = &self.group;
        let mut out = vec![self.coeffs[0].zero_like(); g.order()];
        for (a, ca) in self.coeffs.iter().enumerate() {
            out[g.inv(a)] = ca.clone();
        }
        GroupRingElement { group: self.group.clone(), coeffs: out }
    }

    /// Pushforward along a group homomorphism given as an index map.
    pub fn pushforward(&self, target: Arc<FiniteAbelianGroup>, map: &[usize]) -> Self {
        let mut out = vec![self.coeffs[0].zero_like(); target.order()];
        for (a, ca) in self.coeffs.iter().enumerate() {
            out[map[a]] = out[map[a]].add(ca);
        }
        GroupRingElement { group: target, coeffs: out }
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> GroupRingElement<D> {
        GroupRingElement { group: self.group.clone(), coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn try_map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> Result<D>) -> Result<GroupRingElement<D>> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(GroupRingElement { group: self.group.clone(), coeffs })
    }

    /// Non-zero coefficients as `(element index, coefficient)` pairs.
    pub fn support(&self) -> impl Iterator<Item = (usize, &C)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }
}

impl GroupRingElement<Rational> {
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(Rational::is_integer)
    }

    pub fn is_p_integral(&self, p: u64) -> bool {
        self.coeffs.iter().all(|c| c.is_p_integral(p))
    }

    /// Reduction into `(Z/p^N)[G]`; the coefficients must be `p`-integral.
    pub fn reduce_mod(&self, p: u64, precision: u32) -> Result<GroupRingElement<PadicInt>> {
        let m = p.pow(precision);
        self.try_map_coeffs(|c| Ok(PadicInt::from_int(c.residue_mod(m)? as i64, p, precision)))
    }
}

impl GroupRingElement<PadicInt> {
    pub fn truncate(&self, precision: u32) -> Self {
        self.map_coeffs(|c| c.truncate(precision))
    }
}
