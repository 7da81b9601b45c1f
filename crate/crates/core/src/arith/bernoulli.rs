use num_bigint::BigInt;

use super::nt::binomial;
use super::Rational;
use crate::error::{Error, Result};

/// Polynomial with rational coefficients, lowest degree first.
pub type Poly = Vec<Rational>;

/// Bernoulli numbers `B_0..=B_k` with the convention `B_1 = -1/2`, from
/// `Σ_{j=0}^{m} C(m+1, j) B_j = 0` for `m ≥ 1`.
pub fn bernoulli_numbers(k: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(k + 1);
    b.push(Rational::one());
    for m in 1..=k {
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc = acc + Rational::from_int(binomial(m as u64 + 1, j as u64)) * bj.clone();
        }
        b.push(-acc / Rational::from(m as i64 + 1));
    }
    b
}

/// `B_k(x) = Σ_j C(k, j) B_j x^{k-j}`.
pub fn bernoulli_polynomial(k: usize) -> Poly {
    let b = bernoulli_numbers(k);
    let mut poly = vec![Rational::zero(); k + 1];
    for (j, bj) in b.iter().enumerate() {
        poly[k - j] = Rational::from_int(binomial(k as u64, j as u64)) * bj.clone();
    }
    poly
}

pub fn eval_poly(poly: &[Rational], x: &Rational) -> Rational {
    poly.iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x.clone() + c.clone())
}

/// `ζ(r, a/f) = -B_{1-r}(a/f) / (1-r)` for `r ≤ 0`.
pub fn hurwitz_zeta_nonpos(r: i64, a: u64, f: u64) -> Result<Rational> {
    if r > 0 {
        return Err(Error::pre(format!("hurwitz_zeta_nonpos needs r <= 0, got {r}")));
    }
    if f == 0 || a == 0 || a > f {
        return Err(Error::pre(format!("need 1 <= a <= f, got a={a}, f={f}")));
    }
    let k = (1 - r) as usize;
    let x = Rational::new(BigInt::from(a), BigInt::from(f));
    Ok(-eval_poly(&bernoulli_polynomial(k), &x) / Rational::from(k as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    /// Independent route: B_k(x) = ((k+1) x^k - Σ_{j<k} C(k+1, j) B_j(x)) / (k+1).
    fn recurrence_oracle(k: usize) -> Vec<Poly> {
        let mut polys: Vec<Poly> = vec![vec![Rational::one()]];
        for m in 1..=k {
            let mut p = vec![Rational::zero(); m + 1];
            p[m] = Rational::from(m as i64 + 1);
            for (j, pj) in polys.iter().enumerate() {
                let c = Rational::from_int(binomial(m as u64 + 1, j as u64));
                for (i, coef) in pj.iter().enumerate() {
                    p[i] = &p[i] - &(&c * coef);
                }
            }
            let inv = Rational::from(m as i64 + 1).recip();
            polys.push(p.into_iter().map(|c| c * inv.clone()).collect());
        }
        polys
    }

    #[test]
    fn small_polynomials() {
        assert_eq!(bernoulli_polynomial(0), vec![Rational::one()]);
        assert_eq!(bernoulli_polynomial(1), vec![q(-1, 2), q(1, 1)]);
        assert_eq!(bernoulli_polynomial(2), vec![q(1, 6), q(-1, 1), q(1, 1)]);
    }

    #[test]
    fn matches_recurrence_oracle() {
        let oracle = recurrence_oracle(30);
        for (k, expected) in oracle.iter().enumerate() {
            assert_eq!(&bernoulli_polynomial(k), expected, "B_{k}");
        }
    }

    #[test]
    fn telescoping_identity() {
        for k in 1..=20usize {
            let b = bernoulli_polynomial(k);
            for x in [q(0, 1), q(1, 3), q(-5, 7), q(11, 2)] {
                let lhs = eval_poly(&b, &(x.clone() + Rational::one())) - eval_poly(&b, &x);
                let rhs = Rational::from(k as i64) * x.pow(k as i32 - 1);
                assert_eq!(lhs, rhs, "k={k}, x={x}");
            }
        }
    }

    #[test]
    fn multiplication_theorem() {
        // Σ_{a=1}^{f} B_k(a/f) = f^{1-k} B_k(1)
        for k in 0..=10usize {
            let b = bernoulli_polynomial(k);
            let b_at_one = eval_poly(&b, &Rational::one());
            for f in 1..=12i64 {
                let lhs = (1..=f).fold(Rational::zero(), |acc, a| acc + eval_poly(&b, &q(a, f)));
                let rhs = Rational::from(f).pow(1 - k as i32) * b_at_one.clone();
                assert_eq!(lhs, rhs, "k={k}, f={f}");
            }
        }
    }

    #[test]
    fn hurwitz_examples() {
        assert_eq!(hurwitz_zeta_nonpos(0, 1, 3).unwrap(), q(1, 6));
        assert_eq!(hurwitz_zeta_nonpos(0, 2, 3).unwrap(), q(-1, 6));
        assert_eq!(hurwitz_zeta_nonpos(-1, 1, 3).unwrap(), q(1, 36));
        assert!(hurwitz_zeta_nonpos(1, 1, 3).is_err());
        assert!(hurwitz_zeta_nonpos(0, 4, 3).is_err());
    }
}
