//! Finite commutative `Z/p^N`-algebras given by a basis and structure constants, with an
//! optional involution `#`, and homomorphisms between them.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::zmod::ZMod;

/// Coordinates with respect to the algebra basis.
pub type AlgElem = Vec<u64>;

/// Sparse product `b_i · b_j`.
type Product = Vec<(usize, u64)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCommAlgebra {
    ring: ZMod,
    labels: Vec<String>,
    mult: Vec<Vec<Product>>,
    unit: AlgElem,
    /// `b_i^# = c_i · b_{π(i)}` as `(π(i), c_i)`.
    sharp: Option<Vec<(usize, u64)>>,
}

/// JSON shape of an algebra: `mult[i][j]` is the coordinate vector of `b_i b_j`. Alternatively
/// `group` lists cyclic orders and selects the group algebra `(Z/p^N)[A]` with its `#`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub p: u64,
    #[serde(rename = "N")]
    pub precision: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<Vec<u64>>,
    #[serde(default)]
    pub basis: Vec<String>,
    #[serde(default)]
    pub mult: Vec<Vec<Vec<i64>>>,
    #[serde(default)]
    pub unit: Option<Vec<i64>>,
    /// `[target index, sign]` per basis element.
    #[serde(default)]
    pub sharp: Option<Vec<(usize, i64)>>,
}

impl FiniteCommAlgebra {
    /// Builds and validates an algebra from dense structure constants.
    pub fn from_structure(
        ring: ZMod,
        labels: Vec<String>,
        dense: Vec<Vec<Vec<u64>>>,
        unit: AlgElem,
        sharp: Option<Vec<(usize, u64)>>,
    ) -> Result<Self> {
        let d = labels.len();
        if dense.len() != d || dense.iter().any(|r| r.len() != d || r.iter().any(|v| v.len() != d)) {
            return Err(Error::malformed(format!("structure constants must be {d}×{d}×{d}")));
        }
        if unit.len() != d {
            return Err(Error::malformed("unit has the wrong length"));
        }
        let mult = dense
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| {
                        v.into_iter()
                            .enumerate()
                            .map(|(k, c)| (k, c % ring.modulus()))
                            .filter(|&(_, c)| c != 0)
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let alg = FiniteCommAlgebra { ring, labels, mult, unit, sharp };
        alg.check_axioms()?;
        Ok(alg)
    }

    pub fn from_spec(spec: &AlgebraSpec) -> Result<Self> {
        let ring = ZMod::new(spec.p, spec.precision)?;
        if let Some(orders) = &spec.group {
            if !spec.basis.is_empty() || !spec.mult.is_empty() {
                return Err(Error::malformed("give either a group or structure constants, not both"));
            }
            return Ok(FiniteCommAlgebra::group_algebra(ring, &FiniteAbelianGroup::new(orders.clone())?));
        }
        let d = spec.basis.len();
        let dense = spec
            .mult
            .iter()
            .map(|row| row.iter().map(|v| v.iter().map(|&c| ring.reduce(c)).collect()).collect())
            .collect();
        let unit = match &spec.unit {
            Some(u) => u.iter().map(|&c| ring.reduce(c)).collect(),
            None => (0..d).map(|i| u64::from(i == 0)).collect(),
        };
        let sharp = spec
            .sharp
            .as_ref()
            .map(|s| s.iter().map(|&(t, c)| (t, ring.reduce(c))).collect());
        FiniteCommAlgebra::from_structure(ring, spec.basis.clone(), dense, unit, sharp)
    }

    pub fn to_spec(&self) -> AlgebraSpec {
        let d = self.dim();
        let signed = |c: u64| -> i64 {
            if c > self.ring.modulus() / 2 {
                c as i64 - self.ring.modulus() as i64
            } else {
                c as i64
            }
        };
        AlgebraSpec {
            group: None,
            p: self.ring.p(),
            precision: self.ring.precision(),
            basis: self.labels.clone(),
            mult: (0..d)
                .map(|i| (0..d).map(|j| self.basis_product(i, j).into_iter().map(signed).collect()).collect())
                .collect(),
            unit: Some(self.unit.iter().map(|&c| signed(c)).collect()),
            sharp: self.sharp.as_ref().map(|s| s.iter().map(|&(t, c)| (t, signed(c))).collect()),
        }
    }

    /// `(Z/p^N)[A]`, basis the group elements in canonical order, `#` the inversion.
    pub fn group_algebra(ring: ZMod, group: &FiniteAbelianGroup) -> Self {
        let n = group.order();
        let labels = (0..n).map(|g| format!("{:?}", group.element(g))).collect();
        let mult = (0..n)
            .map(|a| (0..n).map(|b| vec![(group.mul(a, b), 1)]).collect())
            .collect();
        let mut unit = vec![0; n];
        unit[0] = 1;
        let sharp = Some((0..n).map(|g| (group.inv(g), 1)).collect());
        FiniteCommAlgebra { ring, labels, mult, unit, sharp }
    }

    pub fn scalars(ring: ZMod) -> Self {
        FiniteCommAlgebra::group_algebra(ring, &FiniteAbelianGroup::trivial())
    }

    /// `(Z/p^N)[A][T]/(T^m)`, basis `g·T^k` at index `g·m + k`; no involution.
    pub fn truncated_polynomial(ring: ZMod, group: &FiniteAbelianGroup, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::malformed("truncation degree must be positive"));
        }
        let n = group.order();
        let d = n * m;
        let labels = (0..d).map(|i| format!("{:?}T^{}", group.element(i / m), i % m)).collect();
        let mult = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let (g, k) = (i / m, i % m);
                        let (h, l) = (j / m, j % m);
                        if k + l < m {
                            vec![(group.mul(g, h) * m + k + l, 1)]
                        } else {
                            vec![]
                        }
                    })
                    .collect()
            })
            .collect();
        let mut unit = vec![0; d];
        unit[0] = 1;
        Ok(FiniteCommAlgebra { ring, labels, mult, unit, sharp: None })
    }

    /// `(Z/p^N)[A]/(1 + j)` for an element `j` of order 2, with basis one representative of each
    /// coset of `⟨j⟩` (the smaller index) and `g j = -g`.
    pub fn minus_quotient(ring: ZMod, group: &FiniteAbelianGroup, j: usize) -> Result<(Self, AlgebraHom)> {
        if group.element_order(j) != 2 {
            return Err(Error::pre("j must have order 2"));
        }
        let n = group.order();
        let reps: Vec<usize> = (0..n).filter(|&g| g <= group.mul(g, j)).collect();
        let index_of = |g: usize| -> (usize, u64) {
            let gj = group.mul(g, j);
            if g <= gj {
                (reps.binary_search(&g).unwrap(), 1)
            } else {
                (reps.binary_search(&gj).unwrap(), ring.neg(1))
            }
        };
        let d = reps.len();
        let labels = reps.iter().map(|&g| format!("{:?}", group.element(g))).collect();
        let mult = (0..d)
            .map(|a| {
                (0..d)
                    .map(|b| {
                        let (k, c) = index_of(group.mul(reps[a], reps[b]));
                        vec![(k, c)]
                    })
                    .collect()
            })
            .collect();
        let mut unit = vec![0; d];
        unit[index_of(0).0] = 1;
        let sharp = Some(reps.iter().map(|&g| index_of(group.inv(g))).collect());
        let quotient = Arc::new(FiniteCommAlgebra { ring, labels, mult, unit, sharp });
        let source = Arc::new(FiniteCommAlgebra::group_algebra(ring, group));
        let images = (0..n)
            .map(|g| {
                let (k, c) = index_of(g);
                let mut v = vec![0; d];
                v[k] = c;
                v
            })
            .collect();
        let hom = AlgebraHom { source, target: quotient.clone(), images };
        Ok(((*quotient).clone(), hom))
    }

    /// `R[x]/(f)` for a monic `f = x^k + c_{k-1} x^{k-1} + … + c_0` given by `c_0..c_{k-1}`;
    /// basis `b_i x^e` at index `i·k + e`. The involution is dropped.
    pub fn polynomial_extension(base: &FiniteCommAlgebra, lower: &[u64]) -> Result<(Self, AlgebraHom)> {
        let k = lower.len();
        if k == 0 {
            return Err(Error::malformed("extension polynomial must have positive degree"));
        }
        let ring = base.ring;
        let d0 = base.dim();
        let d = d0 * k;
        // x^e for e < 2k-1, reduced, as coefficient vectors in Z/q of length k
        let mut xpow: Vec<Vec<u64>> = Vec::new();
        for e in 0..(2 * k - 1) {
            let v = if e < k {
                (0..k).map(|t| u64::from(t == e)).collect()
            } else {
                let prev: &Vec<u64> = &xpow[e - 1];
                let top = prev[k - 1];
                let mut shifted = vec![0; k];
                shifted[1..k].copy_from_slice(&prev[..k - 1]);
                for t in 0..k {
                    shifted[t] = ring.sub(shifted[t], ring.mul(top, lower[t] % ring.modulus()));
                }
                shifted
            };
            xpow.push(v);
        }
        let labels = (0..d).map(|i| format!("{}·x^{}", base.labels[i / k], i % k)).collect();
        let mult = (0..d)
            .map(|a| {
                (0..d)
                    .map(|b| {
                        let (i, e) = (a / k, a % k);
                        let (j, f) = (b / k, b % k);
                        let mut out = vec![0u64; d];
                        for &(l, c) in &base.mult[i][j] {
                            for (t, &xc) in xpow[e + f].iter().enumerate() {
                                if xc != 0 {
                                    out[l * k + t] = ring.add(out[l * k + t], ring.mul(c, xc));
                                }
                            }
                        }
                        out.into_iter().enumerate().filter(|&(_, c)| c != 0).collect()
                    })
                    .collect()
            })
            .collect();
        let mut unit = vec![0; d];
        for (i, &c) in base.unit.iter().enumerate() {
            unit[i * k] = c;
        }
        let ext = Arc::new(FiniteCommAlgebra { ring, labels, mult, unit, sharp: None });
        let images = (0..d0)
            .map(|i| {
                let mut v = vec![0; d];
                v[i * k] = 1;
                v
            })
            .collect();
        let hom = AlgebraHom { source: Arc::new(base.clone()), target: ext.clone(), images };
        Ok(((*ext).clone(), hom))
    }

    /// Reduction `(Z/p^N)[A] → (Z/p^M)[A]` of any algebra, `M ≤ N`.
    pub fn reduce_precision(&self, precision: u32) -> Result<(Self, AlgebraHom)> {
        if precision > self.ring.precision() {
            return Err(Error::Precision(format!(
                "cannot raise precision from {} to {precision}",
                self.ring.precision()
            )));
        }
        let ring = ZMod::new(self.ring.p(), precision)?;
        let q = ring.modulus();
        let reduce = |v: &[(usize, u64)]| -> Product {
            v.iter().map(|&(k, c)| (k, c % q)).filter(|&(_, c)| c != 0).collect()
        };
        let target = Arc::new(FiniteCommAlgebra {
            ring,
            labels: self.labels.clone(),
            mult: self.mult.iter().map(|row| row.iter().map(|v| reduce(v)).collect()).collect(),
            unit: self.unit.iter().map(|&c| c % q).collect(),
            sharp: self.sharp.as_ref().map(|s| s.iter().map(|&(t, c)| (t, c % q)).collect()),
        });
        let images = (0..self.dim()).map(|i| target.basis(i)).collect();
        let hom = AlgebraHom { source: Arc::new(self.clone()), target: target.clone(), images };
        Ok(((*target).clone(), hom))
    }

    pub fn ring(&self) -> ZMod {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn has_sharp(&self) -> bool {
        self.sharp.is_some()
    }

    /// Number of elements as a power of `p`.
    pub fn log_size(&self) -> u32 {
        self.ring.precision() * self.dim() as u32
    }

    pub fn zero(&self) -> AlgElem {
        vec![0; self.dim()]
    }

    pub fn one(&self) -> AlgElem {
        self.unit.clone()
    }

    pub fn basis(&self, i: usize) -> AlgElem {
        let mut v = self.zero();
        v[i] = 1;
        v
    }

    pub fn scalar(&self, c: i64) -> AlgElem {
        let c = self.ring.reduce(c);
        self.unit.iter().map(|&u| self.ring.mul(u, c)).collect()
    }

    pub fn from_signed(&self, coords: &[i64]) -> Result<AlgElem> {
        if coords.len() != self.dim() {
            return Err(Error::malformed(format!(
                "element has {} coordinates, algebra has dimension {}",
                coords.len(),
                self.dim()
            )));
        }
        Ok(coords.iter().map(|&c| self.ring.reduce(c)).collect())
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> AlgElem {
        a.iter().zip(b).map(|(&x, &y)| self.ring.add(x, y)).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> AlgElem {
        a.iter().zip(b).map(|(&x, &y)| self.ring.sub(x, y)).collect()
    }

    pub fn neg(&self, a: &[u64]) -> AlgElem {
        a.iter().map(|&x| self.ring.neg(x)).collect()
    }

    pub fn scale(&self, a: &[u64], c: u64) -> AlgElem {
        self.ring.scale_row(a, c)
    }

    fn basis_product(&self, i: usize, j: usize) -> AlgElem {
        let mut v = self.zero();
        for &(k, c) in &self.mult[i][j] {
            v[k] = c;
        }
        v
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> AlgElem {
        let ring = self.ring;
        let mut out = self.zero();
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let xy = ring.mul(x, y);
                for &(k, c) in &self.mult[i][j] {
                    out[k] = ring.add(out[k], ring.mul(xy, c));
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &[u64], e: u32) -> AlgElem {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn sharp(&self, a: &[u64]) -> Result<AlgElem> {
        let s = self.sharp.as_ref().ok_or_else(|| Error::pre("algebra carries no involution #"))?;
        let mut out = self.zero();
        for (i, &x) in a.iter().enumerate() {
            if x != 0 {
                let (t, c) = s[i];
                out[t] = self.ring.add(out[t], self.ring.mul(x, c));
            }
        }
        Ok(out)
    }

    /// Matrix of `x ↦ x·a` on coordinates: row `k` is `b_k · a`.
    pub fn mult_matrix(&self, a: &[u64]) -> Vec<Vec<u64>> {
        (0..self.dim()).map(|k| self.mul(&self.basis(k), a)).collect()
    }

    /// Inverse of `a`, when `a` is a unit.
    pub fn inverse(&self, a: &[u64]) -> Option<AlgElem> {
        let m = self.mult_matrix(a);
        let x = self.ring.solve(&m, self.dim(), &self.unit)?;
        Some(x)
    }

    pub fn is_unit(&self, a: &[u64]) -> bool {
        self.inverse(a).is_some()
    }

    /// Associativity and commutativity on all basis triples, the unit law, and (when present)
    /// that `#` is an involutive ring map.
    pub fn check_axioms(&self) -> Result<()> {
        let d = self.dim();
        for i in 0..d {
            if self.mul(&self.unit, &self.basis(i)) != self.basis(i) {
                return Err(Error::malformed(format!("unit law fails on basis element {i}")));
            }
            for j in 0..d {
                let bij = self.basis_product(i, j);
                if bij != self.basis_product(j, i) {
                    return Err(Error::malformed(format!("b_{i} b_{j} != b_{j} b_{i}")));
                }
                for k in 0..d {
                    let left = self.mul(&bij, &self.basis(k));
                    let right = self.mul(&self.basis(i), &self.basis_product(j, k));
                    if left != right {
                        return Err(Error::malformed(format!("associativity fails on ({i},{j},{k})")));
                    }
                }
            }
        }
        if let Some(s) = &self.sharp {
            if s.len() != d || s.iter().any(|&(t, c)| t >= d || !self.ring.is_unit(c)) {
                return Err(Error::malformed("# must send basis elements to unit multiples of basis elements"));
            }
            for i in 0..d {
                let bi = self.basis(i);
                if self.sharp(&self.sharp(&bi)?)? != bi {
                    return Err(Error::malformed("# is not an involution"));
                }
                for j in 0..d {
                    let lhs = self.sharp(&self.basis_product(i, j))?;
                    let rhs = self.mul(&self.sharp(&bi)?, &self.sharp(&self.basis(j))?);
                    if lhs != rhs {
                        return Err(Error::malformed("# is not multiplicative"));
                    }
                }
            }
            if self.sharp(&self.unit)? != self.unit {
                return Err(Error::malformed("# does not fix 1"));
            }
        }
        Ok(())
    }

    /// All elements, in lexicographic coordinate order. Only sensible for tiny algebras.
    pub fn elements(&self) -> impl Iterator<Item = AlgElem> + '_ {
        let q = self.ring.modulus();
        let d = self.dim() as u32;
        (0..q.pow(d)).map(move |mut k| {
            (0..d)
                .map(|_| {
                    let c = k % q;
                    k /= q;
                    c
                })
                .collect()
        })
    }
}

/// A `Z/p^N`-algebra map given by the images of the source basis.
#[derive(Clone, Debug)]
pub struct AlgebraHom {
    source: Arc<FiniteCommAlgebra>,
    target: Arc<FiniteCommAlgebra>,
    images: Vec<AlgElem>,
}

impl AlgebraHom {
    /// Validates the unit and all basis products.
    pub fn new(source: Arc<FiniteCommAlgebra>, target: Arc<FiniteCommAlgebra>, images: Vec<AlgElem>) -> Result<Self> {
        if images.len() != source.dim() || images.iter().any(|v| v.len() != target.dim()) {
            return Err(Error::malformed("homomorphism images have the wrong shape"));
        }
        let (p, q) = (source.ring(), target.ring());
        if p.p() != q.p() || q.precision() > p.precision() {
            return Err(Error::mismatch("coefficient rings are incompatible"));
        }
        let hom = AlgebraHom { source, target, images };
        if hom.apply(&hom.source.one()) != hom.target.one() {
            return Err(Error::pre("map does not preserve 1"));
        }
        let d = hom.source.dim();
        for i in 0..d {
            for j in i..d {
                let lhs = hom.apply(&hom.source.basis_product(i, j));
                let rhs = hom.target.mul(&hom.images[i], &hom.images[j]);
                if lhs != rhs {
                    return Err(Error::pre(format!(
                        "map is not multiplicative on basis pair ({i}, {j})"
                    )));
                }
            }
        }
        Ok(hom)
    }

    pub fn identity(alg: Arc<FiniteCommAlgebra>) -> Self {
        let images = (0..alg.dim()).map(|i| alg.basis(i)).collect();
        AlgebraHom { source: alg.clone(), target: alg, images }
    }

    pub fn source(&self) -> &Arc<FiniteCommAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteCommAlgebra> {
        &self.target
    }

    pub fn images(&self) -> &[AlgElem] {
        &self.images
    }

    pub fn apply(&self, x: &[u64]) -> AlgElem {
        let ring = self.target.ring();
        let mut out = self.target.zero();
        for (i, &c) in x.iter().enumerate() {
            if c % ring.modulus() != 0 {
                ring.add_scaled(&mut out, &self.images[i], c % ring.modulus());
            }
        }
        out
    }

    pub fn compose(&self, after: &AlgebraHom) -> Result<AlgebraHom> {
        if *after.source != *self.target {
            return Err(Error::mismatch("cannot compose: target and source differ"));
        }
        let images = self.images.iter().map(|v| after.apply(v)).collect();
        Ok(AlgebraHom { source: self.source.clone(), target: after.target.clone(), images })
    }
}

/// Shared pointer equality with a structural fallback.
pub fn same_algebra(a: &Arc<FiniteCommAlgebra>, b: &Arc<FiniteCommAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: u64, n: u32) -> ZMod {
        ZMod::new(p, n).unwrap()
    }

    #[test]
    fn group_algebra_axioms() {
        for orders in [vec![2], vec![3], vec![2, 2], vec![4]] {
            let g = FiniteAbelianGroup::new(orders).unwrap();
            FiniteCommAlgebra::group_algebra(z(3, 2), &g).check_axioms().unwrap();
        }
    }

    #[test]
    fn truncated_and_extension_axioms() {
        let g = FiniteAbelianGroup::new(vec![2]).unwrap();
        let t = FiniteCommAlgebra::truncated_polynomial(z(3, 2), &g, 3).unwrap();
        t.check_axioms().unwrap();
        let base = FiniteCommAlgebra::group_algebra(z(3, 2), &FiniteAbelianGroup::new(vec![3]).unwrap());
        let (ext, hom) = FiniteCommAlgebra::polynomial_extension(&base, &[1, 1]).unwrap();
        ext.check_axioms().unwrap();
        AlgebraHom::new(hom.source().clone(), hom.target().clone(), hom.images().to_vec()).unwrap();
        // x^2 + x + 1 = 0 in the extension
        let x = ext.basis(1);
        let s = ext.add(&ext.add(&ext.mul(&x, &x), &x), &ext.one());
        assert!(ext.is_zero(&s));
    }

    #[test]
    fn minus_quotient_of_c2() {
        let g = FiniteAbelianGroup::new(vec![2]).unwrap();
        let (q, hom) = FiniteCommAlgebra::minus_quotient(z(3, 2), &g, 1).unwrap();
        assert_eq!(q.dim(), 1);
        q.check_axioms().unwrap();
        AlgebraHom::new(hom.source().clone(), hom.target().clone(), hom.images().to_vec()).unwrap();
        // σ - 1 ↦ -2
        let x = vec![8, 1];
        assert_eq!(hom.apply(&x), vec![7]);
    }

    #[test]
    fn minus_quotient_of_c2_c4() {
        let g = FiniteAbelianGroup::new(vec![2, 4]).unwrap();
        let j = g.index(&[0, 2]);
        let (q, hom) = FiniteCommAlgebra::minus_quotient(z(5, 1), &g, j).unwrap();
        assert_eq!(q.dim(), 4);
        q.check_axioms().unwrap();
        AlgebraHom::new(hom.source().clone(), hom.target().clone(), hom.images().to_vec()).unwrap();
        let one_plus_j = hom.apply(&hom.source().add(&hom.source().one(), &hom.source().basis(j)));
        assert!(q.is_zero(&one_plus_j));
    }

    #[test]
    fn units_and_inverses() {
        let a = FiniteCommAlgebra::group_algebra(z(2, 3), &FiniteAbelianGroup::new(vec![2]).unwrap());
        let x = vec![1, 2];
        let inv = a.inverse(&x).unwrap();
        assert_eq!(a.mul(&x, &inv), a.one());
        assert!(!a.is_unit(&[1, 1]));
    }

    #[test]
    fn rejects_bad_structure() {
        let ring = z(3, 1);
        let dense = vec![vec![vec![1, 0], vec![0, 1]], vec![vec![1, 0], vec![1, 0]]];
        assert!(FiniteCommAlgebra::from_structure(ring, vec!["1".into(), "x".into()], dense, vec![1, 0], None).is_err());
    }

    #[test]
    fn bad_hom_is_detected() {
        let r = Arc::new(FiniteCommAlgebra::group_algebra(z(3, 2), &FiniteAbelianGroup::new(vec![3]).unwrap()));
        let s = Arc::new(FiniteCommAlgebra::scalars(z(3, 2)));
        assert!(AlgebraHom::new(r.clone(), s.clone(), vec![vec![1], vec![1], vec![1]]).is_ok());
        assert!(AlgebraHom::new(r.clone(), s.clone(), vec![vec![1], vec![2], vec![1]]).is_err());
        let spec = r.to_spec();
        assert_eq!(FiniteCommAlgebra::from_spec(&spec).unwrap(), *r);
    }
}
