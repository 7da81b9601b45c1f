//! Finitely presented modules over a [`FiniteCommAlgebra`] and their concrete `Z/p^N`
//! realisations.
//!
//! A [`FinPresModule`] is the cokernel of its relation matrix: rows are relations
//! `Σ_j ρ_j e_j = 0`. An [`ExplicitModule`] is a subquotient `K/W` of `(Z/p^N)^D` on which each
//! algebra basis element acts by a matrix, rows as vectors (`x ↦ x·A_b`). Every module
//! computation reduces to Howell forms through these realisations.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{same_algebra, AlgElem, AlgebraHom, AlgebraSpec, FiniteCommAlgebra};
use crate::error::{Error, Result};
use crate::ideal::IdealHandle;
use crate::zmod::{HowellForm, ZMod};

type Matrix = Vec<Vec<u64>>;

#[derive(Clone, Debug)]
pub struct FinPresModule {
    alg: Arc<FiniteCommAlgebra>,
    ngens: usize,
    relations: Vec<Vec<AlgElem>>,
}

impl FinPresModule {
    pub fn new(alg: Arc<FiniteCommAlgebra>, ngens: usize, relations: Vec<Vec<AlgElem>>) -> Result<Self> {
        let d = alg.dim();
        if relations.iter().any(|r| r.len() != ngens || r.iter().any(|x| x.len() != d)) {
            return Err(Error::malformed(format!(
                "relations must have {ngens} entries of dimension {d}"
            )));
        }
        let q = alg.ring().modulus();
        let relations = relations
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.into_iter().map(|c| c % q).collect()).collect())
            .collect();
        Ok(FinPresModule { alg, ngens, relations })
    }

    pub fn zero(alg: Arc<FiniteCommAlgebra>) -> Self {
        FinPresModule { alg, ngens: 0, relations: vec![] }
    }

    pub fn free(alg: Arc<FiniteCommAlgebra>, n: usize) -> Self {
        FinPresModule { alg, ngens: n, relations: vec![] }
    }

    /// `R/(a)`.
    pub fn cyclic(alg: Arc<FiniteCommAlgebra>, a: AlgElem) -> Self {
        FinPresModule { alg, ngens: 1, relations: vec![vec![a]] }
    }

    /// Cokernel of the square matrix `h`.
    pub fn square(alg: Arc<FiniteCommAlgebra>, h: Vec<Vec<AlgElem>>) -> Result<Self> {
        let n = h.len();
        FinPresModule::new(alg, n, h)
    }

    pub fn algebra(&self) -> &Arc<FiniteCommAlgebra> {
        &self.alg
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn relations(&self) -> &[Vec<AlgElem>] {
        &self.relations
    }

    pub fn is_square(&self) -> bool {
        self.relations.len() == self.ngens
    }

    /// Dimension of the ambient `(Z/p^N)^{n·d}`; coordinate `i·d + k` is `b_k e_i`.
    pub fn ambient_dim(&self) -> usize {
        self.ngens * self.alg.dim()
    }

    fn flatten(&self, row: &[AlgElem]) -> Vec<u64> {
        row.iter().flatten().copied().collect()
    }

    /// `Z/p^N`-span of the relations inside the ambient module.
    pub fn relation_span(&self) -> HowellForm {
        let d = self.alg.dim();
        let rows: Matrix = self
            .relations
            .iter()
            .flat_map(|rel| {
                (0..d)
                    .map(|k| {
                        let bk = self.alg.basis(k);
                        self.flatten(&rel.iter().map(|x| self.alg.mul(x, &bk)).collect::<Vec<_>>())
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        self.alg.ring().howell(&rows, self.ambient_dim())
    }

    /// `log_p |M|`.
    pub fn log_size(&self) -> u32 {
        self.ambient_dim() as u32 * self.alg.ring().precision() - self.relation_span().log_size()
    }

    pub fn is_zero(&self) -> bool {
        self.log_size() == 0
    }

    pub fn direct_sum(&self, other: &FinPresModule) -> Result<FinPresModule> {
        if !same_algebra(&self.alg, &other.alg) {
            return Err(Error::mismatch("modules over different algebras"));
        }
        let zero = self.alg.zero();
        let n = self.ngens + other.ngens;
        let mut rels = Vec::new();
        for r in &self.relations {
            let mut row = r.clone();
            row.extend(std::iter::repeat(zero.clone()).take(other.ngens));
            rels.push(row);
        }
        for r in &other.relations {
            let mut row = vec![zero.clone(); self.ngens];
            row.extend(r.iter().cloned());
            rels.push(row);
        }
        FinPresModule::new(self.alg.clone(), n, rels)
    }

    /// `S ⊗_R M` along `φ: R → S`.
    pub fn base_change(&self, hom: &AlgebraHom) -> Result<FinPresModule> {
        if !same_algebra(&self.alg, hom.source()) {
            return Err(Error::mismatch("module does not live over the source of the map"));
        }
        let rels = self
            .relations
            .iter()
            .map(|r| r.iter().map(|x| hom.apply(x)).collect())
            .collect();
        FinPresModule::new(hom.target().clone(), self.ngens, rels)
    }

    /// Ideal of all `n×n` minors of the relation matrix.
    pub fn fitting_ideal(&self) -> IdealHandle {
        let alg = self.alg.clone();
        let n = self.ngens;
        if n == 0 {
            return IdealHandle::unit(alg);
        }
        let rels = self.relevant_relations();
        if rels.len() < n {
            return IdealHandle::zero(alg);
        }
        let mut minors = Vec::new();
        let mut current = IdealHandle::zero(alg.clone());
        for subset in Subsets::new(rels.len(), n) {
            let rows: Vec<&Vec<AlgElem>> = subset.iter().map(|&i| &rels[i]).collect();
            let det = determinant(&alg, &rows);
            if !current.contains(&det) {
                minors.push(det);
                current = IdealHandle::new(alg.clone(), minors.clone());
                if current.is_unit_ideal() {
                    break;
                }
            }
        }
        current
    }

    /// A generating set of the relation module chosen greedily from the given relations.
    fn relevant_relations(&self) -> Vec<Vec<AlgElem>> {
        let d = self.alg.dim();
        let ring = self.alg.ring();
        let mut chosen: Vec<Vec<AlgElem>> = Vec::new();
        let mut span = ring.howell(&[], self.ambient_dim());
        for rel in &self.relations {
            let flat = self.flatten(rel);
            if span.contains(&flat) {
                continue;
            }
            let rows: Matrix = (0..d)
                .map(|k| {
                    let bk = self.alg.basis(k);
                    self.flatten(&rel.iter().map(|x| self.alg.mul(x, &bk)).collect::<Vec<_>>())
                })
                .collect();
            span = span.join(&ring.howell(&rows, self.ambient_dim()));
            chosen.push(rel.clone());
        }
        chosen
    }

    /// The module presented by `h^{T,#}` for a square relation matrix `h`.
    pub fn dual_presentation(&self) -> Result<FinPresModule> {
        if !self.is_square() {
            return Err(Error::pre(format!(
                "dual presentation needs a square relation matrix, got {}×{}",
                self.relations.len(),
                self.ngens
            )));
        }
        let n = self.ngens;
        let rels = (0..n)
            .map(|i| (0..n).map(|j| self.alg.sharp(&self.relations[j][i])).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        FinPresModule::new(self.alg.clone(), n, rels)
    }

    /// `p^{N-1}·M = 0`: the module is then the reduction of a `Z_p`-lattice quotient killed by
    /// `p^{N-1}`, so a square presentation lifts to an injective one.
    pub fn exponent_below_precision(&self) -> bool {
        let ring = self.alg.ring();
        let span = self.relation_span();
        let scale = ring.pow_p(ring.precision() - 1);
        (0..self.ambient_dim()).all(|i| {
            let mut v = vec![0; self.ambient_dim()];
            v[i] = scale;
            span.contains(&v)
        })
    }

    /// Square presentation whose cokernel is killed by `p^{N-1}`: the finite-level stand-in for
    /// a quadratic presentation `0 → R^n → R^n → M → 0`.
    pub fn has_quadratic_presentation(&self) -> bool {
        self.is_square() && self.exponent_below_precision()
    }

    pub fn to_explicit(&self) -> ExplicitModule {
        let d = self.alg.dim();
        let dim = self.ambient_dim();
        let ring = self.alg.ring();
        let identity: Matrix = (0..dim).map(|i| (0..dim).map(|j| u64::from(i == j)).collect()).collect();
        let action = (0..d)
            .map(|b| {
                let bb = self.alg.basis(b);
                (0..dim)
                    .map(|idx| {
                        let (i, k) = (idx / d, idx % d);
                        let prod = self.alg.mul(&self.alg.basis(k), &bb);
                        let mut row = vec![0; dim];
                        row[i * d..(i + 1) * d].copy_from_slice(&prod);
                        row
                    })
                    .collect()
            })
            .collect();
        ExplicitModule {
            alg: self.alg.clone(),
            dim,
            sub: ring.howell(&identity, dim),
            quo: self.relation_span(),
            action,
        }
    }

    /// Pontryagin dual `Hom(M, Q_p/Z_p)` with `(b f)(m) = f(b^# m)`.
    pub fn pontryagin_dual(&self) -> Result<ExplicitModule> {
        self.to_explicit().pontryagin_dual()
    }

    pub fn annihilator(&self) -> IdealHandle {
        self.to_explicit().annihilator()
    }

    /// Canonical form of an element `Σ_i x_i e_i` of `M`.
    pub fn normal_form(&self, x: &[AlgElem]) -> Vec<u64> {
        self.relation_span().reduce(&self.flatten(x))
    }
}

/// Subquotient `K/W ⊆ (Z/p^N)^D` with the algebra acting through one matrix per basis element.
#[derive(Clone, Debug)]
pub struct ExplicitModule {
    alg: Arc<FiniteCommAlgebra>,
    dim: usize,
    sub: HowellForm,
    quo: HowellForm,
    action: Vec<Matrix>,
}

impl ExplicitModule {
    /// Validates `W ⊆ K`, stability under the action, and the algebra relations on `K/W`.
    pub fn new(
        alg: Arc<FiniteCommAlgebra>,
        dim: usize,
        sub_rows: &[Vec<u64>],
        quo_rows: &[Vec<u64>],
        action: Vec<Matrix>,
    ) -> Result<Self> {
        let ring = alg.ring();
        if action.len() != alg.dim() || action.iter().any(|a| a.len() != dim || a.iter().any(|r| r.len() != dim)) {
            return Err(Error::malformed(format!("need {} action matrices of size {dim}", alg.dim())));
        }
        let sub = ring.howell(sub_rows, dim);
        let quo = ring.howell(quo_rows, dim);
        let m = ExplicitModule { alg, dim, sub, quo, action };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let ring = self.alg.ring();
        if !self.sub.contains_span(&self.quo) {
            return Err(Error::malformed("W is not contained in K"));
        }
        for (b, a) in self.action.iter().enumerate() {
            for x in self.sub.rows() {
                if !self.sub.contains(&ring.vec_mat(x, a, self.dim)) {
                    return Err(Error::malformed(format!("K is not stable under basis element {b}")));
                }
            }
            for x in self.quo.rows() {
                if !self.quo.contains(&ring.vec_mat(x, a, self.dim)) {
                    return Err(Error::malformed(format!("W is not stable under basis element {b}")));
                }
            }
        }
        let d = self.alg.dim();
        for x in self.sub.rows() {
            if !self.quo.contains(&ring.vec_mat(x, &self.action_of(&self.alg.one()), self.dim).iter().zip(x).map(|(&a, &b)| ring.sub(a, b)).collect::<Vec<_>>()) {
                return Err(Error::malformed("1 does not act as the identity"));
            }
            for i in 0..d {
                let xi = ring.vec_mat(x, &self.action[i], self.dim);
                for j in 0..d {
                    let lhs = ring.vec_mat(&xi, &self.action[j], self.dim);
                    let prod = self.alg.mul(&self.alg.basis(i), &self.alg.basis(j));
                    let rhs = self.act(x, &prod);
                    let diff: Vec<u64> = lhs.iter().zip(&rhs).map(|(&a, &b)| ring.sub(a, b)).collect();
                    if !self.quo.contains(&diff) {
                        return Err(Error::malformed(format!("action is not multiplicative on ({i}, {j})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<FiniteCommAlgebra> {
        &self.alg
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sub(&self) -> &HowellForm {
        &self.sub
    }

    pub fn quo(&self) -> &HowellForm {
        &self.quo
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    pub fn log_size(&self) -> u32 {
        self.sub.log_size() - self.quo.log_size()
    }

    pub fn is_zero(&self) -> bool {
        self.log_size() == 0
    }

    /// Matrix of the algebra element `a`.
    pub fn action_of(&self, a: &[u64]) -> Matrix {
        let ring = self.alg.ring();
        let mut out = vec![vec![0; self.dim]; self.dim];
        for (k, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (row, arow) in out.iter_mut().zip(&self.action[k]) {
                ring.add_scaled(row, arow, c);
            }
        }
        out
    }

    pub fn act(&self, x: &[u64], a: &[u64]) -> Vec<u64> {
        let ring = self.alg.ring();
        let mut out = vec![0; self.dim];
        for (k, &c) in a.iter().enumerate() {
            if c != 0 {
                let y = ring.vec_mat(x, &self.action[k], self.dim);
                ring.add_scaled(&mut out, &y, c);
            }
        }
        out
    }

    /// `Z/p^N`-span of `{x·A_b}` over the algebra basis.
    fn r_span_rows(&self, x: &[u64]) -> Matrix {
        let ring = self.alg.ring();
        self.action.iter().map(|a| ring.vec_mat(x, a, self.dim)).collect()
    }

    /// Presentation over the algebra, together with the chosen generators (vectors in `K`).
    pub fn to_finpres(&self) -> (FinPresModule, Vec<Vec<u64>>) {
        let ring = self.alg.ring();
        let d = self.alg.dim();
        let mut gens: Vec<Vec<u64>> = Vec::new();
        let mut current = self.quo.clone();
        let candidates: Vec<Vec<u64>> = self.sub.rows().to_vec();
        for x in &candidates {
            if current.contains(x) {
                continue;
            }
            current = current.join(&ring.howell(&self.r_span_rows(x), self.dim));
            gens.push(x.clone());
        }
        let n = gens.len();
        // Φ: (Z/q)^{n d} → (Z/q)^D, row (i, k) = gens[i]·A_k; relations = ker(Φ mod W)
        let mut stacked: Matrix = gens.iter().flat_map(|g| self.r_span_rows(g)).collect();
        stacked.extend(self.quo.rows().iter().cloned());
        let kernel = ring.left_kernel(&stacked, self.dim);
        let to_rel = |v: &[u64]| -> Vec<AlgElem> { (0..n).map(|i| v[i * d..(i + 1) * d].to_vec()).collect() };
        let raw: Vec<Vec<AlgElem>> = kernel
            .rows()
            .iter()
            .map(|v| to_rel(&v[..n * d]))
            .filter(|r: &Vec<AlgElem>| r.iter().any(|x| !self.alg.is_zero(x)))
            .collect();
        let module = FinPresModule { alg: self.alg.clone(), ngens: n, relations: raw };
        let relations = module.relevant_relations();
        let module = FinPresModule { relations, ..module };
        prune(module, gens)
    }

    /// `Hom_{Z/p^N}(K/W, Z/p^N)` with `(b f)(x) = f(b^# x)`, realised inside `(Z/p^N)^D`.
    pub fn pontryagin_dual(&self) -> Result<ExplicitModule> {
        if !self.alg.has_sharp() {
            return Err(Error::pre("the Pontryagin dual needs an algebra with #"));
        }
        let (m, _) = self.to_finpres();
        let std = m.to_explicit();
        let ring = self.alg.ring();
        let dim = std.dim;
        // functionals y with W·y^T = 0
        let w = std.quo.rows();
        let wt: Matrix = (0..dim).map(|i| w.iter().map(|r| r[i]).collect()).collect();
        let sub = if w.is_empty() {
            ring.howell(&(0..dim).map(|i| (0..dim).map(|j| u64::from(i == j)).collect()).collect::<Matrix>(), dim)
        } else {
            ring.left_kernel(&wt, w.len())
        };
        let action = (0..self.alg.dim())
            .map(|b| {
                let bs = self.alg.sharp(&self.alg.basis(b))?;
                let a = std.action_of(&bs);
                Ok((0..dim).map(|i| (0..dim).map(|j| a[j][i]).collect()).collect())
            })
            .collect::<Result<Vec<Matrix>>>()?;
        ExplicitModule::new(self.alg.clone(), dim, sub.rows(), &[], action)
    }

    /// `{a ∈ R : a·(K/W) = 0}`.
    pub fn annihilator(&self) -> IdealHandle {
        let ring = self.alg.ring();
        let d = self.alg.dim();
        let ks = self.sub.rows();
        let blocks = ks.len();
        let width = blocks * self.dim;
        let mut rows: Matrix = (0..d)
            .map(|k| ks.iter().flat_map(|x| ring.vec_mat(x, &self.action[k], self.dim)).collect())
            .collect();
        for b in 0..blocks {
            for w in self.quo.rows() {
                let mut row = vec![0; width];
                row[b * self.dim..(b + 1) * self.dim].copy_from_slice(w);
                rows.push(row);
            }
        }
        if width == 0 {
            return IdealHandle::unit(self.alg.clone());
        }
        let kernel = ring.left_kernel(&rows, width);
        let gens = kernel.rows().iter().map(|v| v[..d].to_vec()).filter(|v| v.iter().any(|&c| c != 0)).collect();
        IdealHandle::new(self.alg.clone(), gens)
    }

    /// `K/(W + span(rows))`; the rows must lie in `K`.
    pub fn quotient_by(&self, rows: &[Vec<u64>]) -> ExplicitModule {
        let extra = self.alg.ring().howell(rows, self.dim);
        ExplicitModule { quo: self.quo.join(&extra), ..self.clone() }
    }

    /// Canonical representatives of all elements; only for small modules.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let ring = self.alg.ring();
        let mut seen = std::collections::BTreeSet::new();
        let q = ring.modulus();
        let rows = self.sub.rows();
        let total = q.checked_pow(rows.len() as u32).unwrap_or(u64::MAX);
        assert!(total <= 1 << 22, "module too large to enumerate");
        for mut idx in 0..total {
            let mut v = vec![0; self.dim];
            for r in rows {
                ring.add_scaled(&mut v, r, idx % q);
                idx /= q;
            }
            seen.insert(self.quo.reduce(&v));
        }
        seen.into_iter().collect()
    }
}

/// Removes generators that some relation expresses through the others (unit pivots).
fn prune(mut m: FinPresModule, mut gens: Vec<Vec<u64>>) -> (FinPresModule, Vec<Vec<u64>>) {
    let alg = m.alg.clone();
    loop {
        let mut found = None;
        'search: for (r, rel) in m.relations.iter().enumerate() {
            for (j, x) in rel.iter().enumerate() {
                if let Some(inv) = alg.inverse(x) {
                    found = Some((r, j, inv));
                    break 'search;
                }
            }
        }
        let Some((r, j, inv)) = found else { break };
        let pivot = m.relations.remove(r);
        let normalized: Vec<AlgElem> = pivot.iter().map(|x| alg.mul(x, &inv)).collect();
        for rel in m.relations.iter_mut() {
            let c = rel[j].clone();
            if alg.is_zero(&c) {
                continue;
            }
            for (t, x) in rel.iter_mut().enumerate() {
                *x = alg.sub(x, &alg.mul(&c, &normalized[t]));
            }
        }
        for rel in m.relations.iter_mut() {
            rel.remove(j);
        }
        m.relations.retain(|rel| rel.iter().any(|x| !alg.is_zero(x)));
        m.ngens -= 1;
        gens.remove(j);
    }
    (m, gens)
}

/// Determinant of a square matrix over a commutative algebra, by dynamic programming over the
/// set of used columns.
pub fn determinant(alg: &FiniteCommAlgebra, rows: &[&Vec<AlgElem>]) -> AlgElem {
    let n = rows.len();
    if n == 0 {
        return alg.one();
    }
    let mut dp: Vec<Option<AlgElem>> = vec![None; 1 << n];
    dp[0] = Some(alg.one());
    for mask in 0usize..(1 << n) {
        let Some(acc) = dp[mask].clone() else { continue };
        let r = mask.count_ones() as usize;
        if r == n {
            continue;
        }
        for c in 0..n {
            if mask & (1 << c) != 0 || alg.is_zero(&rows[r][c]) {
                continue;
            }
            let inversions = (mask >> (c + 1)).count_ones();
            let mut term = alg.mul(&acc, &rows[r][c]);
            if inversions % 2 == 1 {
                term = alg.neg(&term);
            }
            let slot = &mut dp[mask | (1 << c)];
            *slot = Some(match slot.take() {
                Some(v) => alg.add(&v, &term),
                None => term,
            });
        }
    }
    dp[(1 << n) - 1].clone().unwrap_or_else(|| alg.zero())
}

/// `k`-subsets of `0..n` in lexicographic order.
struct Subsets {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Subsets {
    fn new(n: usize, k: usize) -> Self {
        Subsets { n, current: if k <= n { Some((0..k).collect()) } else { None } }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for t in i + 1..k {
                    next[t] = next[t - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// Algebra-linear map `e_i ↦ Σ_j f_{ij} e'_j` between presented modules.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: FinPresModule,
    pub target: FinPresModule,
    pub matrix: Vec<Vec<AlgElem>>,
}

impl ModuleMap {
    /// Checks shapes and that relations of the source land in relations of the target.
    pub fn new(source: FinPresModule, target: FinPresModule, matrix: Vec<Vec<AlgElem>>) -> Result<Self> {
        if !same_algebra(&source.alg, &target.alg) {
            return Err(Error::mismatch("modules over different algebras"));
        }
        if matrix.len() != source.ngens || matrix.iter().any(|r| r.len() != target.ngens) {
            return Err(Error::malformed(format!(
                "map matrix must be {}×{}",
                source.ngens, target.ngens
            )));
        }
        let f = ModuleMap { source, target, matrix };
        let w = f.target.relation_span();
        for rel in &f.source.relations {
            let img = f.apply(rel);
            if !w.contains(&f.target.flatten(&img)) {
                return Err(Error::pre("map does not respect the source relations"));
            }
        }
        Ok(f)
    }

    pub fn identity(m: &FinPresModule) -> Self {
        let alg = &m.alg;
        let matrix = (0..m.ngens)
            .map(|i| (0..m.ngens).map(|j| if i == j { alg.one() } else { alg.zero() }).collect())
            .collect();
        ModuleMap { source: m.clone(), target: m.clone(), matrix }
    }

    pub fn zero(source: &FinPresModule, target: &FinPresModule) -> Self {
        let z = source.alg.zero();
        let matrix = vec![vec![z; target.ngens]; source.ngens];
        ModuleMap { source: source.clone(), target: target.clone(), matrix }
    }

    /// Image of `Σ x_i e_i`.
    pub fn apply(&self, x: &[AlgElem]) -> Vec<AlgElem> {
        let alg = &self.source.alg;
        let mut out = vec![alg.zero(); self.target.ngens];
        for (xi, row) in x.iter().zip(&self.matrix) {
            if alg.is_zero(xi) {
                continue;
            }
            for (o, f) in out.iter_mut().zip(row) {
                *o = alg.add(o, &alg.mul(xi, f));
            }
        }
        out
    }

    /// The map on ambient coordinates, `D_source × D_target`.
    pub fn ambient_matrix(&self) -> Matrix {
        let alg = &self.source.alg;
        let d = alg.dim();
        (0..self.source.ambient_dim())
            .map(|idx| {
                let (i, k) = (idx / d, idx % d);
                let mut x = vec![alg.zero(); self.source.ngens];
                x[i] = alg.basis(k);
                self.target.flatten(&self.apply(&x))
            })
            .collect()
    }

    /// Whether every generator maps into the relations of the target.
    pub fn is_zero(&self) -> bool {
        let w = self.target.relation_span();
        self.matrix.iter().all(|row| w.contains(&self.target.flatten(row)))
    }

    /// `self - other`, for maps between the same modules.
    pub fn difference(&self, other: &ModuleMap) -> ModuleMap {
        let alg = &self.source.alg;
        let matrix = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| alg.sub(x, y)).collect())
            .collect();
        ModuleMap { matrix, ..self.clone() }
    }

    pub fn compose(&self, after: &ModuleMap) -> Result<ModuleMap> {
        if self.target.ngens != after.source.ngens {
            return Err(Error::mismatch("cannot compose maps with mismatched modules"));
        }
        let matrix = self.matrix.iter().map(|row| after.apply(row)).collect();
        Ok(ModuleMap { source: self.source.clone(), target: after.target.clone(), matrix })
    }

    /// `{x ∈ source ambient : x·F ∈ W_target}` in Howell form.
    fn preimage_of_relations(&self) -> HowellForm {
        let ring = self.source.alg.ring();
        let f = self.ambient_matrix();
        let dt = self.target.ambient_dim();
        let ds = self.source.ambient_dim();
        let mut stacked = f;
        stacked.extend(self.target.relation_span().rows().iter().cloned());
        let k = ring.left_kernel(&stacked, dt);
        let rows: Matrix = k.rows().iter().map(|v| v[..ds].to_vec()).collect();
        ring.howell(&rows, ds)
    }

    pub fn kernel(&self) -> ExplicitModule {
        let src = self.source.to_explicit();
        let sub = self.preimage_of_relations().join(&src.quo);
        ExplicitModule { sub, ..src }
    }

    pub fn image(&self) -> ExplicitModule {
        let tgt = self.target.to_explicit();
        let ring = self.source.alg.ring();
        let im = ring.howell(&self.ambient_matrix(), tgt.dim);
        ExplicitModule { sub: im.join(&tgt.quo), ..tgt }
    }

    pub fn cokernel(&self) -> FinPresModule {
        let mut rels = self.target.relations.clone();
        rels.extend(self.matrix.iter().cloned());
        FinPresModule { alg: self.target.alg.clone(), ngens: self.target.ngens, relations: rels }
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_zero()
    }

    /// The kernel as a presented module together with its inclusion.
    pub fn kernel_inclusion(&self) -> Result<ModuleMap> {
        let (k, gens) = self.kernel().to_finpres();
        let d = self.source.alg.dim();
        let matrix = gens
            .iter()
            .map(|g| (0..self.source.ngens).map(|i| g[i * d..(i + 1) * d].to_vec()).collect())
            .collect();
        ModuleMap::new(k, self.source.clone(), matrix)
    }

    /// The cokernel with its projection from the target.
    pub fn cokernel_projection(&self) -> ModuleMap {
        let c = self.cokernel();
        let mut id = ModuleMap::identity(&self.target);
        id.target = c;
        id
    }
}

/// JSON shape of a presented module.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FinPresSpec {
    pub algebra: AlgebraSpec,
    pub generators: usize,
    pub relations: Vec<Vec<Vec<i64>>>,
}

impl FinPresSpec {
    pub fn build(&self) -> Result<FinPresModule> {
        let alg = Arc::new(FiniteCommAlgebra::from_spec(&self.algebra)?);
        let rels = self
            .relations
            .iter()
            .map(|r| r.iter().map(|x| alg.from_signed(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        FinPresModule::new(alg, self.generators, rels)
    }
}

/// The `Z/p^N`-ring of a module, for callers that only hold the module.
pub fn base_ring(m: &FinPresModule) -> ZMod {
    m.alg.ring()
}
