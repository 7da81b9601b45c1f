//! Ideals of a finite commutative algebra, kept as the Howell form of their underlying
//! `Z/p^N`-module inside the regular representation.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{same_algebra, AlgElem, AlgebraHom, FiniteCommAlgebra};
use crate::error::{Error, Result};
use crate::zmod::HowellForm;

#[derive(Clone)]
pub struct IdealHandle {
    alg: Arc<FiniteCommAlgebra>,
    gens: Vec<AlgElem>,
    span: HowellForm,
}

impl IdealHandle {
    pub fn new(alg: Arc<FiniteCommAlgebra>, gens: Vec<AlgElem>) -> Self {
        let d = alg.dim();
        let rows: Vec<Vec<u64>> = gens
            .iter()
            .flat_map(|g| (0..d).map(|k| alg.mul(g, &alg.basis(k))).collect::<Vec<_>>())
            .collect();
        let span = alg.ring().howell(&rows, d);
        IdealHandle { alg, gens, span }
    }

    pub fn principal(alg: Arc<FiniteCommAlgebra>, x: AlgElem) -> Self {
        IdealHandle::new(alg, vec![x])
    }

    pub fn zero(alg: Arc<FiniteCommAlgebra>) -> Self {
        IdealHandle::new(alg, vec![])
    }

    pub fn unit(alg: Arc<FiniteCommAlgebra>) -> Self {
        let one = alg.one();
        IdealHandle::new(alg, vec![one])
    }

    pub fn algebra(&self) -> &Arc<FiniteCommAlgebra> {
        &self.alg
    }

    pub fn generators(&self) -> &[AlgElem] {
        &self.gens
    }

    /// Canonical Howell form of the ideal as a `Z/p^N`-module.
    pub fn howell(&self) -> &HowellForm {
        &self.span
    }

    /// `log_p |I|`.
    pub fn log_size(&self) -> u32 {
        self.span.log_size()
    }

    pub fn is_zero(&self) -> bool {
        self.span.is_zero()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.span.log_size() == self.alg.log_size()
    }

    fn check_same(&self, other: &IdealHandle) -> Result<()> {
        if !same_algebra(&self.alg, &other.alg) {
            return Err(Error::mismatch("ideals live in different algebras"));
        }
        Ok(())
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        self.span.contains(x)
    }

    /// `x` modulo the ideal, canonically.
    pub fn residual(&self, x: &[u64]) -> AlgElem {
        self.span.reduce(x)
    }

    pub fn contains_ideal(&self, other: &IdealHandle) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.span.contains_span(&other.span))
    }

    pub fn equals(&self, other: &IdealHandle) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.span == other.span)
    }

    pub fn product(&self, other: &IdealHandle) -> Result<IdealHandle> {
        self.check_same(other)?;
        let gens = self
            .gens
            .iter()
            .flat_map(|a| other.gens.iter().map(|b| self.alg.mul(a, b)).collect::<Vec<_>>())
            .collect();
        Ok(IdealHandle::new(self.alg.clone(), gens))
    }

    pub fn sum(&self, other: &IdealHandle) -> Result<IdealHandle> {
        self.check_same(other)?;
        let gens = self.gens.iter().chain(&other.gens).cloned().collect();
        Ok(IdealHandle::new(self.alg.clone(), gens))
    }

    /// `I^# = {x^# : x ∈ I}`.
    pub fn sharp(&self) -> Result<IdealHandle> {
        let gens = self.gens.iter().map(|g| self.alg.sharp(g)).collect::<Result<Vec<_>>>()?;
        Ok(IdealHandle::new(self.alg.clone(), gens))
    }

    /// The ideal generated by the image of `I` under `φ`.
    pub fn extend(&self, hom: &AlgebraHom) -> Result<IdealHandle> {
        if !same_algebra(&self.alg, hom.source()) {
            return Err(Error::mismatch("ideal does not live in the source of the map"));
        }
        let gens = self.gens.iter().map(|g| hom.apply(g)).collect();
        Ok(IdealHandle::new(hom.target().clone(), gens))
    }

    /// Whether the image of `I` under `φ` is contained in `J` (a containment of `Z/p^N`-spans).
    pub fn image_within(&self, hom: &AlgebraHom, target: &IdealHandle) -> Result<bool> {
        let ext = self.extend(hom)?;
        ext.check_same(target)?;
        Ok(target.span.contains_span(&ext.span))
    }

    /// Minimal-ish generating set obtained greedily from the Howell rows.
    pub fn simplified(&self) -> IdealHandle {
        let mut chosen: Vec<AlgElem> = Vec::new();
        let mut current = IdealHandle::zero(self.alg.clone());
        for g in self.gens.iter().chain(self.span.rows()) {
            if !current.contains(g) {
                chosen.push(g.clone());
                current = IdealHandle::new(self.alg.clone(), chosen.clone());
                if current.span == self.span {
                    break;
                }
            }
        }
        current
    }
}

impl PartialEq for IdealHandle {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.alg, &other.alg) && self.span == other.span
    }
}

impl Eq for IdealHandle {}

impl fmt::Debug for IdealHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdealHandle")
            .field("generators", &self.gens)
            .field("log_size", &self.log_size())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteAbelianGroup;
    use crate::zmod::ZMod;
    use std::collections::BTreeSet;

    fn group_alg(p: u64, n: u32, orders: &[u64]) -> Arc<FiniteCommAlgebra> {
        let g = FiniteAbelianGroup::new(orders.to_vec()).unwrap();
        Arc::new(FiniteCommAlgebra::group_algebra(ZMod::new(p, n).unwrap(), &g))
    }

    /// `{Σ r_i g_i}` by enumerating all of `R`.
    fn ideal_oracle(alg: &FiniteCommAlgebra, gens: &[AlgElem]) -> BTreeSet<AlgElem> {
        let mut set = BTreeSet::new();
        set.insert(alg.zero());
        for g in gens {
            let multiples: Vec<AlgElem> = alg.elements().map(|r| alg.mul(&r, g)).collect();
            let mut next = BTreeSet::new();
            for x in &set {
                for m in &multiples {
                    next.insert(alg.add(x, m));
                }
            }
            set = next;
        }
        set
    }

    #[test]
    fn membership_examples() {
        let r = group_alg(3, 2, &[2]);
        let three = IdealHandle::principal(r.clone(), r.scalar(3));
        assert!(three.contains(&r.zero()));
        assert!(three.contains(&r.scalar(3)));
        assert!(!three.contains(&r.one()));

        let r8 = group_alg(2, 3, &[2]);
        let one_minus = IdealHandle::principal(r8.clone(), vec![1, 7]);
        assert!(!one_minus.contains(&[1, 1]));
        let oracle = ideal_oracle(&r8, &[vec![1, 7]]);
        assert_eq!(oracle.contains(&vec![1, 1]), one_minus.contains(&[1, 1]));
        assert_eq!(oracle.len() as u64, 2u64.pow(one_minus.log_size()));
    }

    #[test]
    fn product_examples() {
        let z8 = Arc::new(FiniteCommAlgebra::scalars(ZMod::new(2, 3).unwrap()));
        let two = IdealHandle::principal(z8.clone(), vec![2]);
        let four = IdealHandle::principal(z8.clone(), vec![4]);
        assert_eq!(two.product(&two).unwrap(), four);
        let unit = IdealHandle::unit(z8.clone());
        assert_eq!(two.product(&unit).unwrap(), two);

        // (p, T)^2 = (p^2, pT, T^2) in (Z/27)[T]/(T^4)
        let ring = ZMod::new(3, 3).unwrap();
        let t = Arc::new(
            FiniteCommAlgebra::truncated_polynomial(ring, &FiniteAbelianGroup::trivial(), 4).unwrap(),
        );
        let p = t.scalar(3);
        let tt = t.basis(1);
        let m = IdealHandle::new(t.clone(), vec![p.clone(), tt.clone()]);
        let expected = IdealHandle::new(t.clone(), vec![t.scalar(9), t.mul(&p, &tt), t.mul(&tt, &tt)]);
        assert_eq!(m.product(&m).unwrap(), expected);
    }

    #[test]
    fn spans_match_oracle_on_small_rings() {
        let r = group_alg(3, 1, &[3]);
        let gens = [vec![1, 2, 0], vec![0, 1, 2]];
        for k in 0..=gens.len() {
            let i = IdealHandle::new(r.clone(), gens[..k].to_vec());
            let oracle = ideal_oracle(&r, &gens[..k]);
            for x in r.elements() {
                assert_eq!(i.contains(&x), oracle.contains(&x));
            }
        }
    }

    #[test]
    fn sharp_and_simplify() {
        let r = group_alg(3, 2, &[3]);
        let i = IdealHandle::new(r.clone(), vec![vec![1, 8, 0], vec![3, 0, 0], vec![0, 3, 0]]);
        let s = i.simplified();
        assert_eq!(s, i);
        assert!(s.generators().len() <= 2);
        assert_eq!(i.sharp().unwrap().sharp().unwrap(), i);
    }
}
