use serde::{Deserialize, Serialize};

use super::nt;
use super::Rational;

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in nt::divisors(n) {
        if d == n {
            continue;
        }
        num = exact_div_monic(&num, &cyclotomic_polynomial(d));
    }
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    let mut q = vec![0i64; nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd];
        q[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

/// Element of `Q(ζ_n)` in the power basis `1, ζ, …, ζ^{φ(n)-1}`.
///
/// The representation is canonical: coefficients are always reduced modulo `Φ_n`, so
/// structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclotomicInt {
    order: u64,
    coefficients: Vec<Rational>,
}

impl CyclotomicInt {
    pub fn zero(order: u64) -> Self {
        let phi = nt::euler_phi(order) as usize;
        CyclotomicInt { order, coefficients: vec![Rational::zero(); phi] }
    }

    pub fn from_rational(order: u64, r: Rational) -> Self {
        let mut z = Self::zero(order);
        z.coefficients[0] = r;
        z
    }

    /// `ζ_n^k`.
    pub fn root_power(order: u64, k: i64) -> Self {
        let mut sums = vec![Rational::zero(); order as usize];
        sums[nt::reduce_signed(k, order) as usize] = Rational::one();
        Self::from_power_sums(order, sums)
    }

    /// Builds `Σ_k sums[k]·ζ^k` from an unreduced vector indexed by exponents mod `order`.
    pub fn from_power_sums(order: u64, sums: Vec<Rational>) -> Self {
        assert_eq!(sums.len(), order as usize);
        Self::reduce(order, sums)
    }

    /// Reduce an arbitrary-length polynomial in `ζ` modulo `Φ_n`.
    pub fn from_poly(order: u64, poly: Vec<Rational>) -> Self {
        let mut folded = vec![Rational::zero(); order as usize];
        for (k, c) in poly.into_iter().enumerate() {
            let idx = k % order as usize;
            folded[idx] = &folded[idx] + &c;
        }
        Self::reduce(order, folded)
    }

    fn reduce(order: u64, mut poly: Vec<Rational>) -> Self {
        let phi_poly = cyclotomic_polynomial(order);
        let deg = phi_poly.len() - 1;
        while poly.len() > deg {
            let top = poly.pop().expect("non-empty");
            if top.is_zero() {
                continue;
            }
            let shift = poly.len() - deg;
            for (j, &c) in phi_poly.iter().enumerate().take(deg) {
                if c != 0 {
                    poly[shift + j] = &poly[shift + j] - &(&top * &Rational::from(c));
                }
            }
        }
        poly.resize(deg, Rational::zero());
        CyclotomicInt { order, coefficients: poly }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Rational::is_zero)
    }

    /// The value as a rational, when it lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coefficients.iter().skip(1).all(Rational::is_zero) {
            Some(self.coefficients[0].clone())
        } else {
            None
        }
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.order, other.order, "mixing cyclotomic fields of different order");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let coefficients = self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a + b)
            .collect();
        CyclotomicInt { order: self.order, coefficients }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CyclotomicInt {
            order: self.order,
            coefficients: self.coefficients.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CyclotomicInt {
            order: self.order,
            coefficients: self.coefficients.iter().map(|a| a * r).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let n = self.coefficients.len();
        let mut prod = vec![Rational::zero(); (2 * n).saturating_sub(1).max(1)];
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] = &prod[i + j] + &(a * b);
                }
            }
        }
        Self::from_poly(self.order, prod)
    }

    /// Multiplication by `ζ^k`, done on the unreduced power-sum representation.
    pub fn mul_root_power(&self, k: i64) -> Self {
        let n = self.order as usize;
        let shift = nt::reduce_signed(k, self.order) as usize;
        let mut sums = vec![Rational::zero(); n];
        for (i, c) in self.coefficients.iter().enumerate() {
            sums[(i + shift) % n] = c.clone();
        }
        Self::reduce(self.order, sums)
    }

    /// Image under `ζ ↦ ζ^{-1}` (complex conjugation).
    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        let mut sums = vec![Rational::zero(); n];
        for (i, c) in self.coefficients.iter().enumerate() {
            sums[(n - i) % n] = c.clone();
        }
        Self::reduce(self.order, sums)
    }
}

impl std::fmt::Debug for CyclotomicInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                _ => format!("({c})z^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0 [Q(z_{})]", self.order)
        } else {
            write!(f, "{} [Q(z_{})]", terms.join(" + "), self.order)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn roots_of_unity_relations() {
        for n in 1..=24u64 {
            let z = CyclotomicInt::root_power(n, 1);
            let mut acc = CyclotomicInt::from_rational(n, Rational::one());
            for _ in 0..n {
                acc = acc.mul(&z);
            }
            assert_eq!(acc.as_rational(), Some(Rational::one()), "ζ_{n}^{n} = 1");
            // Σ_k ζ^k = 0 for n > 1
            let mut s = CyclotomicInt::zero(n);
            for k in 0..n as i64 {
                s = s.add(&CyclotomicInt::root_power(n, k));
            }
            assert_eq!(s.is_zero(), n > 1);
        }
    }

    #[test]
    fn conj_and_shift() {
        let z = CyclotomicInt::root_power(5, 2);
        assert_eq!(z.conj(), CyclotomicInt::root_power(5, 3));
        assert_eq!(z.mul_root_power(4), CyclotomicInt::root_power(5, 1));
        assert_eq!(z.mul(&z.conj()).as_rational(), Some(Rational::one()));
    }
}
