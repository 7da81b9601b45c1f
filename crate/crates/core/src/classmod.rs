//! Ingested Galois modules such as class groups, and the two membership checks run against them:
//! annihilation by a Stickelberger element, and membership of `θ^#` in the Fitting ideal of the
//! Pontryagin dual of the minus part.
//!
//! A module is `⊕ Z/o_i` with each listed Galois element acting by an integer matrix on column
//! vectors, `x ↦ A x`. Keys `g0, g1, …` name the elements in `generators` (residues `a`, meaning
//! `σ_a`); without that list they refer to the standard generators of the Galois group.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgElem, FiniteCommAlgebra};
use crate::arith::nt;
use crate::error::{Error, Result};
use crate::field::{CmData, GaloisGroup};
use crate::lvalues::StickelbergerElement;
use crate::module::ExplicitModule;
use crate::zmod::ZMod;

type Matrix = Vec<Vec<u64>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassModuleData {
    pub orders: Vec<u64>,
    pub action: BTreeMap<String, Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<u64>>,
    #[serde(default)]
    pub provenance: String,
}

impl ClassModuleData {
    pub fn trivial() -> Self {
        ClassModuleData { orders: vec![], action: BTreeMap::new(), generators: None, provenance: "trivial module".into() }
    }

    pub fn cardinality(&self) -> u128 {
        self.orders.iter().map(|&o| o as u128).product()
    }
}

/// A validated module: the action of every element of `G`, reduced row by row mod the orders.
#[derive(Clone, Debug)]
pub struct GaloisModule {
    gal: GaloisGroup,
    orders: Vec<u64>,
    matrices: Vec<Matrix>,
}

impl GaloisModule {
    pub fn new(gal: &GaloisGroup, data: &ClassModuleData) -> Result<Self> {
        let d = data.orders.len();
        if data.orders.iter().any(|&o| o == 0) {
            return Err(Error::malformed("cyclic orders must be positive"));
        }
        let residues = match &data.generators {
            Some(r) => r.clone(),
            None => gal.generator_residues(),
        };
        let mut given: Vec<(usize, Matrix)> = Vec::new();
        for (key, mat) in &data.action {
            let idx: usize = key
                .strip_prefix('g')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::malformed(format!("action key {key:?} is not of the form g<i>")))?;
            let a = *residues
                .get(idx)
                .ok_or_else(|| Error::malformed(format!("no generator residue for {key}")))?;
            let g = gal.class_of(a as i64).map_err(|_| Error::mismatch(format!("{a} is not a unit mod {}", gal.modulus())))?;
            if mat.len() != d || mat.iter().any(|r| r.len() != d) {
                return Err(Error::malformed(format!("{key} must be a {d}×{d} matrix")));
            }
            let reduced: Matrix = mat
                .iter()
                .zip(&data.orders)
                .map(|(row, &o)| row.iter().map(|&x| x.rem_euclid(o as i64) as u64).collect())
                .collect();
            given.push((g, reduced));
        }
        let orders = data.orders.clone();
        for (_, a) in &given {
            for j in 0..d {
                for i in 0..d {
                    if (a[i][j] as u128 * orders[j] as u128) % orders[i] as u128 != 0 {
                        return Err(Error::malformed(format!("entry ({i}, {j}) does not respect the orders")));
                    }
                }
            }
        }
        let mul = |a: &Matrix, b: &Matrix| -> Matrix {
            (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| {
                            let s: u128 = (0..d).map(|k| a[i][k] as u128 * b[k][j] as u128).sum();
                            (s % orders[i] as u128) as u64
                        })
                        .collect()
                })
                .collect()
        };
        for (x, (_, a)) in given.iter().enumerate() {
            for (_, b) in &given[x + 1..] {
                if mul(a, b) != mul(b, a) {
                    return Err(Error::malformed("action matrices do not commute"));
                }
            }
        }
        let identity: Matrix = (0..d).map(|i| (0..d).map(|j| u64::from(i == j) % orders[i]).collect()).collect();
        let n = gal.order();
        let group = gal.group();
        let mut matrices: Vec<Option<Matrix>> = vec![None; n];
        matrices[group.identity()] = Some(identity);
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(g) = queue.pop_front() {
            let ag = matrices[g].clone().expect("visited");
            for (s, a) in &given {
                let h = group.mul(g, *s);
                let ah = mul(a, &ag);
                match &matrices[h] {
                    Some(existing) if *existing != ah => {
                        return Err(Error::malformed(format!(
                            "the matrices violate a relation of G at σ_{}",
                            gal.representative(h)
                        )))
                    }
                    Some(_) => {}
                    None => {
                        matrices[h] = Some(ah);
                        queue.push_back(h);
                    }
                }
            }
        }
        if d > 0 && matrices.iter().any(Option::is_none) {
            return Err(Error::malformed("the listed elements do not generate G"));
        }
        let matrices = matrices.into_iter().map(|m| m.unwrap_or_default()).collect();
        Ok(GaloisModule { gal: gal.clone(), orders, matrices })
    }

    pub fn galois_group(&self) -> &GaloisGroup {
        &self.gal
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.iter().all(|&o| o == 1)
    }

    /// The matrix of `σ_g`, rows reduced mod the orders.
    pub fn matrix(&self, g: usize) -> &Matrix {
        &self.matrices[g]
    }

    /// All elements as coordinate vectors; only for small modules.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for &o in &self.orders {
            out = out
                .into_iter()
                .flat_map(|x: Vec<u64>| {
                    (0..o).map(move |c| {
                        let mut y = x.clone();
                        y.push(c);
                        y
                    })
                })
                .collect();
        }
        out
    }

    /// `A x` for a matrix with rows reduced mod the orders.
    pub fn apply(&self, a: &[Vec<u64>], x: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(&self.orders)
            .map(|(row, &o)| {
                let s: u128 = row.iter().zip(x).map(|(&c, &v)| c as u128 * v as u128).sum();
                (s % o as u128) as u64
            })
            .collect()
    }

    pub fn negate(&self, x: &[u64]) -> Vec<u64> {
        x.iter().zip(&self.orders).map(|(&v, &o)| (o - v) % o).collect()
    }

    /// Whether the order of `x` is a power of `p`.
    pub fn is_p_power_torsion(&self, x: &[u64], p: u64) -> bool {
        x.iter().zip(&self.orders).all(|(&v, &o)| {
            let mut ord = o / nt::gcd(v, o);
            while ord % p == 0 {
                ord /= p;
            }
            ord == 1
        })
    }

    /// `Σ_g c_g A_g` with rows reduced mod the orders.
    pub fn acting_matrix(&self, theta: &StickelbergerElement) -> Result<Matrix> {
        if !theta.is_integral() {
            return Err(Error::pre("θ must have integral coefficients"));
        }
        if theta.value.len() != self.gal.order() {
            return Err(Error::mismatch("θ and the module live over different groups"));
        }
        let d = self.orders.len();
        let mut out = vec![vec![0u64; d]; d];
        for (i, row) in out.iter_mut().enumerate() {
            let o = self.orders[i];
            for (g, c) in theta.value.iter().enumerate() {
                let c = c.residue_mod(o)?;
                if c == 0 {
                    continue;
                }
                for (j, x) in row.iter_mut().enumerate() {
                    *x = (*x + nt::mul_mod(c, self.matrices[g][i][j], o)) % o;
                }
            }
        }
        Ok(out)
    }

    /// `M ⊗ Z/p^N` as a module over `(Z/p^N)[G]`, in row convention.
    pub fn p_part(&self, alg: &Arc<FiniteCommAlgebra>) -> Result<ExplicitModule> {
        let ring = alg.ring();
        let (p, q) = (ring.p(), ring.modulus());
        let keep: Vec<usize> = (0..self.orders.len()).filter(|&i| self.orders[i] % p == 0).collect();
        let dim = keep.len();
        let quo: Matrix = keep
            .iter()
            .enumerate()
            .map(|(k, &i)| {
                let a = nt::valuation(self.orders[i], p);
                let mut row = vec![0; dim];
                row[k] = if a >= ring.precision() { 0 } else { p.pow(a) };
                row
            })
            .collect();
        let sub: Matrix = (0..dim).map(|i| (0..dim).map(|j| u64::from(i == j)).collect()).collect();
        let action = self
            .matrices
            .iter()
            .map(|a| keep.iter().map(|&j| keep.iter().map(|&i| a[i][j] % q).collect()).collect())
            .collect();
        ExplicitModule::new(alg.clone(), dim, &sub, &quo, action)
    }

    /// `(v_p(exponent), number of cyclic factors of p-power order)` of the p-part.
    pub fn p_shape(&self, p: u64) -> (u32, usize) {
        let vals: Vec<u32> = self.orders.iter().map(|&o| nt::valuation(o, p)).filter(|&v| v > 0).collect();
        (vals.iter().copied().max().unwrap_or(0), vals.len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnihilationReport {
    pub annihilates: bool,
    /// `Σ_g c_g A_g`, rows mod the orders.
    pub acting_matrix: Vec<Vec<u64>>,
}

pub fn annihilation_check(theta: &StickelbergerElement, data: &ClassModuleData) -> Result<AnnihilationReport> {
    let gal = theta.galois_group()?;
    let m = GaloisModule::new(&gal, data)?;
    let acting_matrix = m.acting_matrix(theta)?;
    let annihilates = acting_matrix.iter().all(|r| r.iter().all(|&x| x == 0));
    Ok(AnnihilationReport { annihilates, acting_matrix })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FittingReport {
    /// `θ^# ∈ Fitt_{Z_p[G]_-}((M_p^-)^∨)`.
    pub member: bool,
    /// Membership after reducing everything mod `p^N`.
    pub member_mod_p_n: bool,
    pub working_precision: u32,
    /// `log_p |(M_p^-)^∨|`.
    pub dual_log_size: u32,
    pub fitting_generators: Vec<AlgElem>,
    /// Image of `θ^#` in the minus quotient, and its canonical residue modulo the Fitting ideal.
    pub theta_sharp: AlgElem,
    pub residual: AlgElem,
}

/// Working precision `N' = max(N, e·k)` for a p-part of exponent `p^e` with `k` cyclic factors.
/// The Fitting ideal contains `Ann^k ∋ p^{e k}`, so membership over `Z/p^{N'}` is exact.
pub fn working_precision(p: u64, precision: u32, e: u32, k: usize) -> Result<u32> {
    let n = precision.max(e * k as u32).max(1);
    ZMod::new(p, n).map(|_| n).map_err(|_| {
        Error::Precision(format!("p^{n} does not fit the machine word; the module is too large"))
    })
}

pub fn fitting_membership_check(
    theta: &StickelbergerElement,
    data: &ClassModuleData,
    p: u64,
    precision: u32,
) -> Result<FittingReport> {
    if p == 2 || !nt::is_prime(p) {
        return Err(Error::pre(format!("p must be an odd prime, got {p}")));
    }
    let gal = theta.galois_group()?;
    let j = match gal.cm_data() {
        CmData::Cm(cm) => cm.j,
        CmData::TotallyReal => return Err(Error::pre("the field is not CM")),
    };
    let m = GaloisModule::new(&gal, data)?;
    let (e, k) = m.p_shape(p);
    let n_work = working_precision(p, precision, e, k)?;
    let ring = ZMod::new(p, n_work)?;
    let group = gal.group();
    let alg = Arc::new(FiniteCommAlgebra::group_algebra(ring, group));
    let (_, hom) = FiniteCommAlgebra::minus_quotient(ring, group, j)?;
    let minus = hom.target().clone();

    let explicit = m.p_part(&alg)?;
    let plus_rows: Matrix = explicit
        .sub()
        .rows()
        .iter()
        .map(|x| {
            let jx = explicit.act(x, &alg.basis(j));
            x.iter().zip(&jx).map(|(&a, &b)| ring.add(a, b)).collect()
        })
        .collect();
    let minus_part = explicit.quotient_by(&plus_rows);
    let (pres, _) = minus_part.to_finpres();
    let over_minus = pres.base_change(&hom)?;
    let dual = over_minus.pontryagin_dual()?;
    let (dual_pres, _) = dual.to_finpres();
    let fitt = dual_pres.fitting_ideal();

    let theta_sharp: AlgElem = hom.apply(&alg.sharp(&theta_residues(theta, ring.modulus())?)?);
    let residual = fitt.residual(&theta_sharp);
    let member = residual.iter().all(|&c| c == 0);
    let pn = ring.pow_p(precision);
    let coarse = fitt.sum(&crate::ideal::IdealHandle::principal(minus.clone(), minus.scale(&minus.one(), pn)))?;
    let member_mod_p_n = coarse.contains(&theta_sharp);
    Ok(FittingReport {
        member,
        member_mod_p_n,
        working_precision: n_work,
        dual_log_size: dual.log_size(),
        fitting_generators: fitt.howell().rows().to_vec(),
        theta_sharp,
        residual,
    })
}

fn theta_residues(theta: &StickelbergerElement, q: u64) -> Result<AlgElem> {
    theta
        .value
        .iter()
        .map(|c| c.residue_mod(q).map_err(|_| Error::pre(format!("θ is not p-integral (coefficient {c})"))))
        .collect()
}
