//! Finite abelian groups in invariant-factor form, and the integer Smith normal form used to
//! put quotients of `Z^k` into that form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `Z/d_1 × … × Z/d_k` with `d_1 | d_2 | … | d_k` and every `d_i > 1`.
///
/// Elements are exponent vectors; they are indexed `0..order()` in lexicographic order of the
/// exponent vector (first coordinate most significant), so index 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    orders: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.iter().any(|&d| d < 2) {
            return Err(Error::malformed(format!("invariant factors must exceed 1: {orders:?}")));
        }
        if orders.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::malformed(format!("invariant factors must divide successively: {orders:?}")));
        }
        Ok(FiniteAbelianGroup { orders })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { orders: vec![] }
    }

    /// Invariant-factor form of an arbitrary product of cyclic groups.
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let k = orders.len();
        let mut rel = vec![vec![0i128; k]; k];
        for (i, &d) in orders.iter().enumerate() {
            rel[i][i] = d as i128;
        }
        let snf = smith_normal_form(&rel, k);
        FiniteAbelianGroup { orders: snf.invariant_factors().into_iter().filter(|&d| d > 1).collect() }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> usize {
        self.orders.iter().product::<u64>() as usize
    }

    pub fn exponent(&self) -> u64 {
        self.orders.last().copied().unwrap_or(1)
    }

    pub fn element(&self, mut idx: usize) -> Vec<u64> {
        let mut v = vec![0; self.orders.len()];
        for (i, &d) in self.orders.iter().enumerate().rev() {
            v[i] = (idx as u64) % d;
            idx /= d as usize;
        }
        v
    }

    pub fn index(&self, exps: &[u64]) -> usize {
        debug_assert_eq!(exps.len(), self.orders.len());
        exps.iter()
            .zip(&self.orders)
            .fold(0usize, |acc, (&e, &d)| acc * d as usize + (e % d) as usize)
    }

    /// Index of the element with the given signed exponents.
    pub fn index_signed(&self, exps: &[i64]) -> usize {
        let v: Vec<u64> = exps
            .iter()
            .zip(&self.orders)
            .map(|(&e, &d)| e.rem_euclid(d as i64) as u64)
            .collect();
        self.index(&v)
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn generator(&self, i: usize) -> usize {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        self.index(&v)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let mut acc = 0usize;
        let (mut a, mut b) = (a, b);
        let mut place = 1usize;
        for &d in self.orders.iter().rev() {
            let d = d as usize;
            let digit = (a % d + b % d) % d;
            acc += digit * place;
            place *= d;
            a /= d;
            b /= d;
        }
        acc
    }

    pub fn inv(&self, a: usize) -> usize {
        let mut acc = 0usize;
        let mut a = a;
        let mut place = 1usize;
        for &d in self.orders.iter().rev() {
            let d = d as usize;
            let digit = (d - a % d) % d;
            acc += digit * place;
            place *= d;
            a /= d;
        }
        acc
    }

    pub fn pow(&self, a: usize, e: i64) -> usize {
        let v: Vec<i64> = self.element(a).into_iter().map(|x| x as i64 * e).collect();
        self.index_signed(&v)
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let v = self.element(a);
        v.iter()
            .zip(&self.orders)
            .map(|(&e, &d)| d / crate::arith::nt::gcd(e, d))
            .fold(1, crate::arith::nt::lcm)
    }
}

/// Smith normal form `U A V = D` of an integer matrix, with the column transform `V` recorded.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: Vec<i128>,
    /// `ncols × ncols` unimodular matrix.
    pub col_transform: Vec<Vec<i128>>,
}

impl SmithForm {
    /// Invariant factors `|D_ii|` padded with zeros up to the number of columns.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let n = self.col_transform.len();
        (0..n)
            .map(|i| self.diagonal.get(i).map(|d| d.unsigned_abs() as u64).unwrap_or(0))
            .collect()
    }
}

/// Smith normal form of an integer matrix with `ncols` columns (rows may be empty).
pub fn smith_normal_form(a: &[Vec<i128>], ncols: usize) -> SmithForm {
    let mut m: Vec<Vec<i128>> = a.to_vec();
    let rows = m.len();
    let mut v: Vec<Vec<i128>> = (0..ncols)
        .map(|i| (0..ncols).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut t = 0;
    while t < rows.min(ncols) {
        // pivot: smallest nonzero absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..ncols {
                if m[i][j] != 0 && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        swap_cols(&mut m, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                let q = m[i][t].div_euclid(m[t][t]);
                if q != 0 {
                    for j in t..ncols {
                        m[i][j] -= q * m[t][j];
                    }
                }
                if m[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..ncols {
                let q = m[t][j].div_euclid(m[t][t]);
                if q != 0 {
                    for row in m.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    for row in v.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
                if m[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // divisibility condition on the remaining block
                let mut fix = None;
                'outer: for i in t + 1..rows {
                    for j in t + 1..ncols {
                        if m[i][j] % m[t][t] != 0 {
                            fix = Some(i);
                            break 'outer;
                        }
                    }
                }
                match fix {
                    Some(i) => {
                        for j in t..ncols {
                            m[t][j] += m[i][j];
                        }
                        continue;
                    }
                    None => break,
                }
            }
            // move the smallest entry of row/column t onto the diagonal
            let mut best = (t, t);
            for i in t..rows {
                if m[i][t] != 0 && m[i][t].abs() < m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..ncols {
                if m[t][j] != 0 && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                m.swap(t, best.0);
            }
            if best.1 != t {
                swap_cols(&mut m, t, best.1);
                swap_cols(&mut v, t, best.1);
            }
        }
        if m[t][t] < 0 {
            for j in t..ncols {
                m[t][j] = -m[t][j];
            }
        }
        t += 1;
    }
    let diagonal = (0..rows.min(ncols)).map(|i| m[i][i]).collect();
    SmithForm { diagonal, col_transform: v }
}

fn swap_cols(m: &mut [Vec<i128>], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}
