//! Bounded cochain complexes of presented modules, their cohomology, and the Euler–Fitting
//! invariant `Π Fitt(H^i)^{(-1)^i}` kept as a numerator/denominator pair of ideals.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{same_algebra, AlgElem, AlgebraSpec, FiniteCommAlgebra};
use crate::error::{Error, Result};
use crate::ideal::IdealHandle;
use crate::lemmas::{random_map, random_module};
use crate::module::{FinPresModule, ModuleMap};

/// `C^a → C^{a+1} → … → C^b`, zero outside `[a, b]`.
#[derive(Clone, Debug)]
pub struct BoundedComplex {
    alg: Arc<FiniteCommAlgebra>,
    start: i64,
    modules: Vec<FinPresModule>,
    /// `differentials[k]: C^{start+k} → C^{start+k+1}`.
    differentials: Vec<ModuleMap>,
}

impl BoundedComplex {
    /// Validates algebras, shapes and `d ∘ d = 0`.
    pub fn new(start: i64, modules: Vec<FinPresModule>, differentials: Vec<ModuleMap>) -> Result<Self> {
        let Some(first) = modules.first() else {
            return Err(Error::malformed("a complex needs at least one module"));
        };
        let alg = first.algebra().clone();
        if differentials.len() + 1 != modules.len() {
            return Err(Error::malformed("need one differential between consecutive modules"));
        }
        if modules.iter().any(|m| !same_algebra(m.algebra(), &alg)) {
            return Err(Error::mismatch("modules over different algebras"));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.source.ngens() != modules[k].ngens() || d.target.ngens() != modules[k + 1].ngens() {
                return Err(Error::malformed(format!("differential {k} has the wrong shape")));
            }
        }
        for (k, pair) in differentials.windows(2).enumerate() {
            if !pair[0].compose(&pair[1])?.is_zero() {
                return Err(Error::pre(format!("d∘d ≠ 0 at degree {}", start + k as i64)));
            }
        }
        Ok(BoundedComplex { alg, start, modules, differentials })
    }

    /// `M` placed in degree `k`.
    pub fn concentrated(m: FinPresModule, k: i64) -> Self {
        BoundedComplex { alg: m.algebra().clone(), start: k, modules: vec![m], differentials: vec![] }
    }

    /// `A → B` in degrees `k, k+1`.
    pub fn two_term(d: ModuleMap, k: i64) -> Result<Self> {
        BoundedComplex::new(k, vec![d.source.clone(), d.target.clone()], vec![d])
    }

    pub fn algebra(&self) -> &Arc<FiniteCommAlgebra> {
        &self.alg
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.start + self.modules.len() as i64 - 1
    }

    pub fn modules(&self) -> &[FinPresModule] {
        &self.modules
    }

    pub fn differentials(&self) -> &[ModuleMap] {
        &self.differentials
    }

    /// `C^i`, the zero module outside the range.
    pub fn module(&self, i: i64) -> FinPresModule {
        match self.offset(i) {
            Some(k) => self.modules[k].clone(),
            None => FinPresModule::zero(self.alg.clone()),
        }
    }

    fn offset(&self, i: i64) -> Option<usize> {
        (i >= self.start && i <= self.end()).then(|| (i - self.start) as usize)
    }

    /// `d^i: C^i → C^{i+1}`.
    pub fn differential(&self, i: i64) -> ModuleMap {
        match self.offset(i) {
            Some(k) if k < self.differentials.len() => self.differentials[k].clone(),
            _ => ModuleMap::zero(&self.module(i), &self.module(i + 1)),
        }
    }

    pub fn cohomology(&self, i: i64) -> FinPresModule {
        let cycles = self.differential(i).kernel();
        let boundaries = self.differential(i - 1).ambient_matrix();
        cycles.quotient_by(&boundaries).to_finpres().0
    }

    pub fn is_acyclic(&self) -> bool {
        (self.start..=self.end()).all(|i| self.cohomology(i).is_zero())
    }

    /// `C[n]^i = C^{n+i}` with differential `(-1)^n d^{n+i}`.
    pub fn shift(&self, n: i64) -> BoundedComplex {
        let differentials = self
            .differentials
            .iter()
            .map(|d| if n % 2 == 0 { d.clone() } else { negate(d) })
            .collect();
        BoundedComplex { alg: self.alg.clone(), start: self.start - n, modules: self.modules.clone(), differentials }
    }

    /// `Π_{i even} Fitt(H^i)` over `Π_{i odd} Fitt(H^i)`.
    pub fn euler_fitting(&self) -> Result<EulerFittingInvariant> {
        let mut inv = EulerFittingInvariant::trivial(self.alg.clone());
        for i in self.start..=self.end() {
            let f = self.cohomology(i).fitting_ideal();
            inv = if i.rem_euclid(2) == 0 { inv.times_numerator(&f)? } else { inv.times_denominator(&f)? };
        }
        Ok(inv)
    }

    /// Direct sum, degreewise.
    pub fn direct_sum(&self, other: &BoundedComplex) -> Result<BoundedComplex> {
        let start = self.start.min(other.start);
        let end = self.end().max(other.end());
        let modules = (start..=end).map(|i| self.module(i).direct_sum(&other.module(i))).collect::<Result<Vec<_>>>()?;
        let differentials = (start..end)
            .map(|i| {
                let (d1, d2) = (self.differential(i), other.differential(i));
                assemble(
                    &modules[(i - start) as usize],
                    &modules[(i - start + 1) as usize],
                    &[self.module(i).ngens(), other.module(i).ngens()],
                    &[self.module(i + 1).ngens(), other.module(i + 1).ngens()],
                    &[vec![Some(&d1), None], vec![None, Some(&d2)]],
                )
            })
            .collect::<Result<Vec<_>>>()?;
        BoundedComplex::new(start, modules, differentials)
    }
}

fn negate(d: &ModuleMap) -> ModuleMap {
    let alg = d.source.algebra().clone();
    let mut out = d.clone();
    out.matrix = d.matrix.iter().map(|row| row.iter().map(|x| alg.neg(x)).collect()).collect();
    out
}

/// Block matrix of maps; `blocks[r][c]` goes from the `r`-th summand of the source to the `c`-th
/// summand of the target, `None` meaning zero.
fn assemble(
    source: &FinPresModule,
    target: &FinPresModule,
    row_gens: &[usize],
    col_gens: &[usize],
    blocks: &[Vec<Option<&ModuleMap>>],
) -> Result<ModuleMap> {
    let alg = source.algebra();
    let mut matrix = Vec::new();
    for (r, &nr) in row_gens.iter().enumerate() {
        for i in 0..nr {
            let mut row = Vec::new();
            for (c, &nc) in col_gens.iter().enumerate() {
                match blocks[r][c] {
                    Some(m) => row.extend(m.matrix[i].iter().cloned()),
                    None => row.extend(std::iter::repeat(alg.zero()).take(nc)),
                }
            }
            matrix.push(row);
        }
    }
    ModuleMap::new(source.clone(), target.clone(), matrix)
}

/// A family `f^i: C^i → D^i` commuting with the differentials.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: BoundedComplex,
    target: BoundedComplex,
    start: i64,
    maps: Vec<ModuleMap>,
}

impl ChainMap {
    /// `maps[k]` is the component in degree `start + k`; missing degrees are zero.
    pub fn new(source: BoundedComplex, target: BoundedComplex, start: i64, maps: Vec<ModuleMap>) -> Result<Self> {
        let f = ChainMap { source, target, start, maps };
        let lo = f.source.start.min(f.target.start);
        let hi = f.source.end().max(f.target.end());
        for i in lo..=hi {
            let fi = f.component(i);
            if fi.source.ngens() != f.source.module(i).ngens() || fi.target.ngens() != f.target.module(i).ngens() {
                return Err(Error::malformed(format!("component in degree {i} has the wrong shape")));
            }
        }
        for i in lo..hi {
            let lhs = f.source.differential(i).compose(&f.component(i + 1))?;
            let rhs = f.component(i).compose(&f.target.differential(i))?;
            if !lhs.difference(&rhs).is_zero() {
                return Err(Error::pre(format!("not a chain map: square at degree {i} does not commute")));
            }
        }
        Ok(f)
    }

    pub fn identity(c: &BoundedComplex) -> Self {
        let maps = c.modules.iter().map(ModuleMap::identity).collect();
        ChainMap { source: c.clone(), target: c.clone(), start: c.start, maps }
    }

    pub fn source(&self) -> &BoundedComplex {
        &self.source
    }

    pub fn target(&self) -> &BoundedComplex {
        &self.target
    }

    pub fn component(&self, i: i64) -> ModuleMap {
        let k = i - self.start;
        if k >= 0 && (k as usize) < self.maps.len() {
            self.maps[k as usize].clone()
        } else {
            ModuleMap::zero(&self.source.module(i), &self.target.module(i))
        }
    }

    /// Whether `H^i(f)` is bijective in every degree.
    pub fn is_quasi_isomorphism(&self) -> bool {
        let lo = self.source.start.min(self.target.start);
        let hi = self.source.end().max(self.target.end());
        (lo..=hi).all(|i| self.induced_bijective(i))
    }

    fn induced_bijective(&self, i: i64) -> bool {
        let ring = self.source.alg.ring();
        let f = self.component(i);
        let hc = self.source.differential(i).kernel().quotient_by(&self.source.differential(i - 1).ambient_matrix());
        let hd = self.target.differential(i).kernel().quotient_by(&self.target.differential(i - 1).ambient_matrix());
        let fm = f.ambient_matrix();
        let dc = self.source.module(i).ambient_dim();
        let dd = self.target.module(i).ambient_dim();
        let cycles = hc.sub().rows();
        let images: Vec<Vec<u64>> = cycles.iter().map(|x| ring.vec_mat(x, &fm, dd)).collect();
        // surjective: Z_D ⊆ f(Z_C) + B_D
        let reached = ring.howell(&images, dd).join(hd.quo());
        if !reached.contains_span(hd.sub()) {
            return false;
        }
        // injective: {x ∈ Z_C : f(x) ∈ B_D} ⊆ B_C
        let mut stacked = images.clone();
        stacked.extend(hd.quo().rows().iter().cloned());
        if stacked.is_empty() || dd == 0 {
            return hc.is_zero() || cycles.iter().all(|x| hc.quo().contains(x));
        }
        let kernel = ring.left_kernel(&stacked, dd);
        kernel.rows().iter().all(|y| {
            let mut x = vec![0; dc];
            for (c, z) in y.iter().zip(cycles) {
                ring.add_scaled(&mut x, z, *c);
            }
            hc.quo().contains(&x)
        })
    }

    /// `Cone(f)^i = C^{i+1} ⊕ D^i` with `d(c, e) = (-d c, f c + d e)`.
    pub fn cone(&self) -> Result<BoundedComplex> {
        let (c, d) = (&self.source, &self.target);
        let start = (c.start - 1).min(d.start);
        let end = (c.end() - 1).max(d.end());
        let modules: Vec<FinPresModule> =
            (start..=end).map(|i| c.module(i + 1).direct_sum(&d.module(i))).collect::<Result<_>>()?;
        let differentials = (start..end)
            .map(|i| {
                let minus_dc = negate(&c.differential(i + 1));
                let fi = self.component(i + 1);
                let dd = d.differential(i);
                assemble(
                    &modules[(i - start) as usize],
                    &modules[(i - start + 1) as usize],
                    &[c.module(i + 1).ngens(), d.module(i).ngens()],
                    &[c.module(i + 2).ngens(), d.module(i + 1).ngens()],
                    &[vec![Some(&minus_dc), Some(&fi)], vec![None, Some(&dd)]],
                )
            })
            .collect::<Result<Vec<_>>>()?;
        BoundedComplex::new(start, modules, differentials)
    }
}

/// `0 → C₁ →ι C₂ →π C₃ → 0`, exact in every degree.
#[derive(Clone, Debug)]
pub struct ShortExactSequence {
    pub inclusion: ChainMap,
    pub projection: ChainMap,
}

impl ShortExactSequence {
    pub fn new(inclusion: ChainMap, projection: ChainMap) -> Result<Self> {
        let mid = &inclusion.target;
        for i in mid.start.min(inclusion.source.start)..=mid.end().max(projection.target.end()) {
            let a = inclusion.component(i);
            let b = projection.component(i);
            if !a.is_injective() || !b.is_surjective() || a.image().sub() != b.kernel().sub() {
                return Err(Error::pre(format!("sequence is not exact in degree {i}")));
            }
        }
        Ok(ShortExactSequence { inclusion, projection })
    }

    /// The sequence `0 → D → Cone(f) → C[1] → 0`.
    pub fn of_cone(f: &ChainMap) -> Result<Self> {
        let cone = f.cone()?;
        let (c, d) = (&f.source, &f.target);
        let shifted = c.shift(1);
        let lo = cone.start;
        let inc = (lo..=cone.end())
            .map(|i| {
                let n1 = c.module(i + 1).ngens();
                let nd = d.module(i).ngens();
                let alg = cone.alg.clone();
                let matrix = (0..nd)
                    .map(|r| (0..n1 + nd).map(|k| if k == n1 + r { alg.one() } else { alg.zero() }).collect())
                    .collect();
                ModuleMap::new(d.module(i), cone.module(i), matrix)
            })
            .collect::<Result<Vec<_>>>()?;
        let proj = (lo..=cone.end())
            .map(|i| {
                let n1 = c.module(i + 1).ngens();
                let nd = d.module(i).ngens();
                let alg = cone.alg.clone();
                let matrix = (0..n1 + nd)
                    .map(|r| (0..n1).map(|k| if k == r { alg.one() } else { alg.zero() }).collect())
                    .collect();
                ModuleMap::new(cone.module(i), shifted.module(i), matrix)
            })
            .collect::<Result<Vec<_>>>()?;
        let inclusion = ChainMap::new(d.clone(), cone.clone(), lo, inc)?;
        let projection = ChainMap::new(cone, shifted, lo, proj)?;
        ShortExactSequence::new(inclusion, projection)
    }

    /// `χ(C₂) = χ(C₁)·χ(C₃)`.
    pub fn additivity_holds(&self) -> Result<bool> {
        let outer = self.inclusion.source.euler_fitting()?.product(&self.projection.target.euler_fitting()?)?;
        self.inclusion.target.euler_fitting()?.equivalent(&outer)
    }
}

/// Ideal pair `(N, D)` standing for `N·D^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerFittingInvariant {
    pub numerator: IdealHandle,
    pub denominator: IdealHandle,
}

impl EulerFittingInvariant {
    pub fn trivial(alg: Arc<FiniteCommAlgebra>) -> Self {
        EulerFittingInvariant { numerator: IdealHandle::unit(alg.clone()), denominator: IdealHandle::unit(alg) }
    }

    pub fn times_numerator(&self, i: &IdealHandle) -> Result<Self> {
        Ok(EulerFittingInvariant { numerator: self.numerator.product(i)?, denominator: self.denominator.clone() })
    }

    pub fn times_denominator(&self, i: &IdealHandle) -> Result<Self> {
        Ok(EulerFittingInvariant { numerator: self.numerator.clone(), denominator: self.denominator.product(i)? })
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        Ok(EulerFittingInvariant {
            numerator: self.numerator.product(&other.numerator)?,
            denominator: self.denominator.product(&other.denominator)?,
        })
    }

    pub fn inverse(&self) -> Self {
        EulerFittingInvariant { numerator: self.denominator.clone(), denominator: self.numerator.clone() }
    }

    /// `N₁·D₂ = N₂·D₁`.
    pub fn equivalent(&self, other: &Self) -> Result<bool> {
        self.numerator.product(&other.denominator)?.equals(&other.numerator.product(&self.denominator)?)
    }
}

/// JSON shape of a complex; `modules[k]` and `differentials[k]` start at degree `degrees[0]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub algebra: AlgebraSpec,
    pub degrees: [i64; 2],
    pub modules: Vec<ModuleSpec>,
    pub differentials: Vec<Vec<Vec<Vec<i64>>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub generators: usize,
    pub relations: Vec<Vec<Vec<i64>>>,
}

impl ComplexSpec {
    pub fn build(&self) -> Result<BoundedComplex> {
        let alg = Arc::new(FiniteCommAlgebra::from_spec(&self.algebra)?);
        let [a, b] = self.degrees;
        if b < a || (b - a + 1) as usize != self.modules.len() {
            return Err(Error::malformed("degree range does not match the module list"));
        }
        let elems = |rows: &Vec<Vec<Vec<i64>>>| -> Result<Vec<Vec<AlgElem>>> {
            rows.iter().map(|r| r.iter().map(|x| alg.from_signed(x)).collect()).collect()
        };
        let modules = self
            .modules
            .iter()
            .map(|m| FinPresModule::new(alg.clone(), m.generators, elems(&m.relations)?))
            .collect::<Result<Vec<_>>>()?;
        let differentials = self
            .differentials
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let src = modules.get(k).ok_or_else(|| Error::malformed("too many differentials"))?;
                let tgt = modules.get(k + 1).ok_or_else(|| Error::malformed("too many differentials"))?;
                ModuleMap::new(src.clone(), tgt.clone(), elems(d)?)
            })
            .collect::<Result<Vec<_>>>()?;
        BoundedComplex::new(a, modules, differentials)
    }
}

/// A random complex in degrees `start..start+len` with `d∘d = 0` by construction: each next
/// module is a random quotient of the cokernel of the previous differential, or a random module
/// receiving a random map when the previous map is zero.
pub fn random_complex<R: Rng>(alg: &Arc<FiniteCommAlgebra>, rng: &mut R, start: i64, len: usize) -> BoundedComplex {
    let mut modules = vec![random_module(alg, rng, 2, 2)];
    let mut differentials: Vec<ModuleMap> = Vec::new();
    for _ in 1..len {
        let prev = modules.last().unwrap().clone();
        let next_map = match differentials.last() {
            Some(d) if !d.is_zero() => {
                // prev → coker(d) / extra relations
                let mut rels = d.cokernel().relations().to_vec();
                let extra = random_module(alg, rng, prev.ngens().max(1), 1);
                if extra.ngens() == prev.ngens() {
                    rels.extend(extra.relations().iter().cloned());
                }
                let target = FinPresModule::new(alg.clone(), prev.ngens(), rels).expect("shape");
                let mut id = ModuleMap::identity(&prev);
                id.target = target;
                id
            }
            _ => {
                let target = random_module(alg, rng, 2, 2);
                random_map(&prev, &target, rng)
            }
        };
        modules.push(next_map.target.clone());
        differentials.push(next_map);
    }
    BoundedComplex::new(start, modules, differentials).expect("d∘d = 0 by construction")
}

/// `X →id X` in degrees `k, k+1`.
pub fn acyclic_pair(x: &FinPresModule, k: i64) -> BoundedComplex {
    BoundedComplex::two_term(ModuleMap::identity(x), k).expect("identity is a complex")
}

/// `C → C ⊕ A` for an acyclic `A`, a quasi-isomorphism; `C`-generators come first.
pub fn inclusion_into_sum(c: &BoundedComplex, a: &BoundedComplex) -> Result<ChainMap> {
    let sum = c.direct_sum(a)?;
    let maps = (c.start..=c.end())
        .map(|i| {
            let nc = c.module(i).ngens();
            let total = sum.module(i).ngens();
            let alg = c.alg.clone();
            let matrix = (0..nc)
                .map(|r| (0..total).map(|k| if k == r { alg.one() } else { alg.zero() }).collect())
                .collect();
            ModuleMap::new(c.module(i), sum.module(i), matrix)
        })
        .collect::<Result<Vec<_>>>()?;
    ChainMap::new(c.clone(), sum, c.start, maps)
}

/// `C ⊕ A → C` for an acyclic `A`, a quasi-isomorphism.
pub fn projection_from_sum(c: &BoundedComplex, a: &BoundedComplex) -> Result<ChainMap> {
    let sum = c.direct_sum(a)?;
    let maps = (sum.start..=sum.end())
        .map(|i| {
            let nc = c.module(i).ngens();
            let alg = c.alg.clone();
            let matrix = (0..sum.module(i).ngens())
                .map(|r| (0..nc).map(|k| if k == r { alg.one() } else { alg.zero() }).collect())
                .collect();
            ModuleMap::new(sum.module(i), c.module(i), matrix)
        })
        .collect::<Result<Vec<_>>>()?;
    ChainMap::new(sum.clone(), c.clone(), sum.start, maps)
}

/// A random chain map `C → D` between two random two-term complexes, found by sampling
/// degreewise maps until the square commutes; falls back to the zero map.
pub fn random_chain_map<R: Rng>(c: &BoundedComplex, d: &BoundedComplex, rng: &mut R) -> ChainMap {
    for _ in 0..32 {
        let maps: Vec<ModuleMap> =
            (c.start..=c.end()).map(|i| random_map(&c.module(i), &d.module(i), rng)).collect();
        if let Ok(f) = ChainMap::new(c.clone(), d.clone(), c.start, maps) {
            return f;
        }
    }
    let maps = (c.start..=c.end()).map(|i| ModuleMap::zero(&c.module(i), &d.module(i))).collect();
    ChainMap::new(c.clone(), d.clone(), c.start, maps).expect("zero is a chain map")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteAbelianGroup;
    use crate::zmod::ZMod;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z(p: u64, n: u32) -> Arc<FiniteCommAlgebra> {
        Arc::new(FiniteCommAlgebra::scalars(ZMod::new(p, n).unwrap()))
    }

    fn c2(p: u64, n: u32) -> Arc<FiniteCommAlgebra> {
        let g = FiniteAbelianGroup::new(vec![2]).unwrap();
        Arc::new(FiniteCommAlgebra::group_algebra(ZMod::new(p, n).unwrap(), &g))
    }

    #[test]
    fn cohomology_examples() {
        let r = z(3, 2);
        let free = FinPresModule::free(r.clone(), 1);
        let id = acyclic_pair(&free, 0);
        assert!(id.is_acyclic());

        let m = FinPresModule::cyclic(r.clone(), vec![3]);
        let single = BoundedComplex::concentrated(m.clone(), 4);
        assert_eq!(single.cohomology(4).log_size(), 1);
        assert!(single.cohomology(3).is_zero());

        let times_p = BoundedComplex::two_term(ModuleMap::new(free.clone(), free.clone(), vec![vec![vec![3]]]).unwrap(), 0).unwrap();
        let h0 = times_p.cohomology(0);
        let h1 = times_p.cohomology(1);
        assert_eq!((h0.log_size(), h1.log_size()), (1, 1));
        assert_eq!(h1.fitting_ideal(), IdealHandle::principal(r.clone(), vec![3]));
        assert_eq!(h0.annihilator(), IdealHandle::principal(r.clone(), vec![3]));
    }

    #[test]
    fn euler_fitting_and_shift() {
        let r = c2(3, 2);
        let a = vec![3, 1];
        let m = FinPresModule::cyclic(r.clone(), a.clone());
        let c = BoundedComplex::concentrated(m, 0);
        let inv = c.euler_fitting().unwrap();
        assert_eq!(inv.numerator, IdealHandle::principal(r.clone(), a.clone()));
        assert!(inv.denominator.is_unit_ideal());
        let shifted = c.shift(1);
        assert_eq!(shifted.start(), -1);
        assert!(shifted.euler_fitting().unwrap().equivalent(&inv.inverse()).unwrap());
        assert!(c.shift(1).shift(1).euler_fitting().unwrap().equivalent(&inv).unwrap());
        assert!(c.shift(0).euler_fitting().unwrap().equivalent(&inv).unwrap());
        let acyclic = acyclic_pair(&FinPresModule::free(r.clone(), 2), 3);
        assert!(acyclic.euler_fitting().unwrap().equivalent(&EulerFittingInvariant::trivial(r.clone())).unwrap());
    }

    #[test]
    fn quasi_isomorphism_examples() {
        let r = z(3, 2);
        let free = FinPresModule::free(r.clone(), 1);
        let pair = acyclic_pair(&free, 0);
        assert!(ChainMap::identity(&pair).is_quasi_isomorphism());
        let zero = BoundedComplex::concentrated(FinPresModule::zero(r.clone()), 0);
        let to_zero = ChainMap::new(pair.clone(), zero, 0, vec![]).unwrap();
        assert!(to_zero.is_quasi_isomorphism());

        // (3) ↪ Z/9 in degree 0: H⁰ changes
        let ideal = FinPresModule::cyclic(r.clone(), vec![3]);
        let inc = ModuleMap::new(ideal.clone(), free.clone(), vec![vec![vec![3]]]).unwrap();
        let f = ChainMap::new(BoundedComplex::concentrated(ideal, 0), BoundedComplex::concentrated(free, 0), 0, vec![inc]).unwrap();
        assert!(!f.is_quasi_isomorphism());
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let r = c2(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let c = random_complex(&r, &mut rng, 0, 3);
            let cone = ChainMap::identity(&c).cone().unwrap();
            assert!(cone.is_acyclic());
        }
    }

    #[test]
    fn additivity_on_cone_sequences() {
        let r = c2(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..6 {
            let c = random_complex(&r, &mut rng, 0, 2);
            let d = random_complex(&r, &mut rng, 0, 2);
            let f = random_chain_map(&c, &d, &mut rng);
            let ses = ShortExactSequence::of_cone(&f).unwrap();
            assert!(ses.additivity_holds().unwrap());
        }
    }

    #[test]
    fn adding_acyclic_summands_is_a_quasi_isomorphism() {
        let r = c2(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for k in 0..4 {
            let c = random_complex(&r, &mut rng, 0, 3);
            let a = acyclic_pair(&random_module(&r, &mut rng, 2, 2), k - 1);
            let inc = inclusion_into_sum(&c, &a).unwrap();
            let proj = projection_from_sum(&c, &a).unwrap();
            assert!(inc.is_quasi_isomorphism() && proj.is_quasi_isomorphism());
            let sum = inc.target();
            assert!(sum.euler_fitting().unwrap().equivalent(&c.euler_fitting().unwrap()).unwrap());
        }
    }

    #[test]
    fn additivity_needs_a_chain_product_ring() {
        // F_3 ↪ F_3[C_3]/(γ-1)^2 over (Z/9)[C_3]: the cokernel is F_3 again, but
        // (3, (γ-1)^2) ≠ (3, γ-1)^2
        let g = FiniteAbelianGroup::new(vec![3]).unwrap();
        let r = Arc::new(FiniteCommAlgebra::group_algebra(ZMod::new(3, 2).unwrap(), &g));
        let gm1 = vec![8, 1, 0];
        let trivial = FinPresModule::new(r.clone(), 1, vec![vec![r.scalar(3)], vec![gm1.clone()]]).unwrap();
        let big = FinPresModule::new(r.clone(), 1, vec![vec![r.scalar(3)], vec![r.mul(&gm1, &gm1)]]).unwrap();
        let inc = ModuleMap::new(trivial.clone(), big.clone(), vec![vec![gm1]]).unwrap();
        let f = ChainMap::new(
            BoundedComplex::concentrated(trivial, 0),
            BoundedComplex::concentrated(big, 0),
            0,
            vec![inc],
        )
        .unwrap();
        assert!(!ShortExactSequence::of_cone(&f).unwrap().additivity_holds().unwrap());
    }

    #[test]
    fn rejects_non_complexes() {
        let r = z(3, 2);
        let free = FinPresModule::free(r.clone(), 1);
        let one = ModuleMap::identity(&free);
        assert!(BoundedComplex::new(0, vec![free.clone(), free.clone(), free.clone()], vec![one.clone(), one]).is_err());
    }
}
