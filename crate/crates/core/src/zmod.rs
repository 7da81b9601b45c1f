//! Linear algebra over the chain ring `Z/p^N`: Howell normal form, canonical reduction modulo
//! a row span, left kernels and linear solving.
//!
//! Vectors are rows; matrices act on the right (`x ↦ x·A`).

use serde::{Deserialize, Serialize};

use crate::arith::nt;
use crate::error::{Error, Result};

/// The ring `Z/p^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZMod {
    p: u64,
    #[serde(rename = "N")]
    precision: u32,
    #[serde(skip)]
    modulus: u64,
}

impl ZMod {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        if !nt::is_prime(p) {
            return Err(Error::malformed(format!("{p} is not prime")));
        }
        if precision == 0 {
            return Err(Error::malformed("precision must be positive"));
        }
        let modulus = p
            .checked_pow(precision)
            .filter(|&q| q < 1 << 62)
            .ok_or_else(|| Error::Precision(format!("{p}^{precision} does not fit in 62 bits")))?;
        Ok(ZMod { p, precision, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn reduce(&self, a: i64) -> u64 {
        nt::reduce_signed(a, self.modulus)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        nt::mul_mod(a, b, self.modulus)
    }

    pub fn pow_p(&self, k: u32) -> u64 {
        if k >= self.precision {
            0
        } else {
            self.p.pow(k)
        }
    }

    /// `v_p(a)`, with `v_p(0) = N`.
    pub fn valuation(&self, a: u64) -> u32 {
        if a == 0 {
            return self.precision;
        }
        let mut v = 0;
        let mut a = a;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, a: u64) -> bool {
        a % self.p != 0
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        nt::inv_mod(a, self.modulus)
            .ok_or_else(|| Error::NonUnit(format!("{a} is not a unit mod {}", self.modulus)))
    }

    /// `a = p^v · u` with `u` a unit; returns `(v, u)` (`u = 1` for `a = 0`).
    pub fn split(&self, a: u64) -> (u32, u64) {
        if a == 0 {
            return (self.precision, 1);
        }
        let v = self.valuation(a);
        (v, a / self.p.pow(v))
    }

    /// `y` with `p^k · y = a`, assuming `p^k | a`; the choice is the one in `[0, p^{N-k})`.
    pub fn divide_by_p_power(&self, a: u64, k: u32) -> u64 {
        debug_assert!(k == 0 || a % self.p.pow(k) == 0);
        a / self.p.pow(k)
    }

    pub fn add_scaled(&self, target: &mut [u64], row: &[u64], c: u64) {
        if c == 0 {
            return;
        }
        for (t, &r) in target.iter_mut().zip(row) {
            if r != 0 {
                *t = self.add(*t, self.mul(c, r));
            }
        }
    }

    pub fn scale_row(&self, row: &[u64], c: u64) -> Vec<u64> {
        row.iter().map(|&x| self.mul(x, c)).collect()
    }

    /// `x·A` for a row vector `x`.
    pub fn vec_mat(&self, x: &[u64], a: &[Vec<u64>], ncols: usize) -> Vec<u64> {
        let mut out = vec![0; ncols];
        for (xi, row) in x.iter().zip(a) {
            self.add_scaled(&mut out, row, *xi);
        }
        out
    }

    pub fn mat_mul(&self, a: &[Vec<u64>], b: &[Vec<u64>], ncols: usize) -> Vec<Vec<u64>> {
        a.iter().map(|row| self.vec_mat(row, b, ncols)).collect()
    }

    pub fn howell(&self, rows: &[Vec<u64>], ncols: usize) -> HowellForm {
        HowellForm::new(*self, rows, ncols)
    }

    /// Generators of `{x : x·A = 0}` for an `m × ncols` matrix `A`, in Howell form.
    pub fn left_kernel(&self, a: &[Vec<u64>], ncols: usize) -> HowellForm {
        let m = a.len();
        let aug: Vec<Vec<u64>> = a
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..m).map(|j| u64::from(i == j)));
                r
            })
            .collect();
        let h = self.howell(&aug, ncols + m);
        let kernel: Vec<Vec<u64>> = h
            .rows()
            .iter()
            .filter(|r| r[..ncols].iter().all(|&x| x == 0))
            .map(|r| r[ncols..].to_vec())
            .collect();
        self.howell(&kernel, m)
    }

    /// Some `x` with `x·B = v`, or `None` when `v` is outside the row span of `B`.
    pub fn solve(&self, b: &[Vec<u64>], ncols: usize, v: &[u64]) -> Option<Vec<u64>> {
        let m = b.len();
        let aug: Vec<Vec<u64>> = b
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..m).map(|j| u64::from(i == j)));
                r
            })
            .collect();
        let h = self.howell(&aug, ncols + m);
        let mut target = v.to_vec();
        target.extend(std::iter::repeat(0).take(m));
        let residual = h.reduce_prefix(&target, ncols);
        if residual[..ncols].iter().any(|&x| x != 0) {
            return None;
        }
        Some(residual[ncols..].iter().map(|&x| self.neg(x)).collect())
    }
}

/// Howell normal form of a row span in `(Z/p^N)^ncols`.
///
/// Pivots are `p^v` with entries above each pivot reduced into `[0, p^v)`; the span is
/// saturated, so a span vector whose first `j` entries vanish is a combination of the rows with
/// pivot column `≥ j`. Two matrices span the same module iff their Howell forms are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HowellForm {
    ring: ZMod,
    ncols: usize,
    rows: Vec<Vec<u64>>,
    /// `(column, valuation)` of each row's pivot.
    pivots: Vec<(usize, u32)>,
}

impl HowellForm {
    fn new(ring: ZMod, input: &[Vec<u64>], ncols: usize) -> Self {
        let mut work: Vec<Vec<u64>> = input
            .iter()
            .map(|r| {
                debug_assert_eq!(r.len(), ncols);
                r.iter().map(|&x| x % ring.modulus).collect()
            })
            .filter(|r: &Vec<u64>| r.iter().any(|&x| x != 0))
            .collect();
        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut pivots = Vec::new();
        for col in 0..ncols {
            let best = work
                .iter()
                .enumerate()
                .filter(|(_, r)| r[col] != 0)
                .min_by_key(|(_, r)| ring.valuation(r[col]))
                .map(|(i, _)| i);
            let Some(i) = best else { continue };
            let mut pivot_row = work.swap_remove(i);
            let (v, u) = ring.split(pivot_row[col]);
            let u_inv = ring.inv(u).expect("unit part");
            pivot_row = ring.scale_row(&pivot_row, u_inv);
            let pv = ring.p.pow(v);
            for r in work.iter_mut() {
                if r[col] != 0 {
                    let c = ring.divide_by_p_power(r[col], v);
                    ring.add_scaled(r, &pivot_row, ring.neg(c));
                }
            }
            if v > 0 {
                let sat = ring.scale_row(&pivot_row, ring.p.pow(ring.precision - v));
                if sat.iter().any(|&x| x != 0) {
                    work.push(sat);
                }
            }
            work.retain(|r| r.iter().any(|&x| x != 0));
            debug_assert_eq!(pivot_row[col], pv);
            rows.push(pivot_row);
            pivots.push((col, v));
        }
        debug_assert!(work.is_empty());
        // reduce entries above each pivot
        for k in 0..rows.len() {
            let (col, v) = pivots[k];
            let pv = ring.p.pow(v);
            let (above, rest) = rows.split_at_mut(k);
            let pivot_row = &rest[0];
            for r in above.iter_mut() {
                let q = r[col] / pv;
                if q != 0 {
                    ring.add_scaled(r, pivot_row, ring.neg(q));
                }
            }
        }
        HowellForm { ring, ncols, rows, pivots }
    }

    pub fn ring(&self) -> ZMod {
        self.ring
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[(usize, u32)] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// `log_p` of the number of elements in the span.
    pub fn log_size(&self) -> u32 {
        self.pivots.iter().map(|&(_, v)| self.ring.precision - v).sum()
    }

    /// Canonical representative of `v` modulo the span.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        self.reduce_prefix(v, self.ncols)
    }

    /// Reduction that only clears pivot columns `< limit`.
    fn reduce_prefix(&self, v: &[u64], limit: usize) -> Vec<u64> {
        let ring = self.ring;
        let mut out: Vec<u64> = v.iter().map(|&x| x % ring.modulus).collect();
        for (row, &(col, val)) in self.rows.iter().zip(&self.pivots) {
            if col >= limit {
                break;
            }
            let q = out[col] / ring.p.pow(val);
            if q != 0 {
                ring.add_scaled(&mut out, row, ring.neg(q));
            }
        }
        out
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_span(&self, other: &HowellForm) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// Howell form of the sum of two spans.
    pub fn join(&self, other: &HowellForm) -> HowellForm {
        let rows: Vec<Vec<u64>> = self.rows.iter().chain(&other.rows).cloned().collect();
        HowellForm::new(self.ring, &rows, self.ncols)
    }
}
