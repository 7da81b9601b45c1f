use serde::{Deserialize, Serialize};

use super::nt;
use crate::error::{Error, Result};

/// Element of `Z/p^N`, the capped-precision model of `Z_p`.
///
/// Binary operations on values of different precision truncate to the smaller one.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PadicInt {
    p: u64,
    #[serde(rename = "N")]
    precision: u32,
    residue: u64,
}

impl PadicInt {
    pub fn new(p: u64, precision: u32, residue: u64) -> Result<Self> {
        if p < 2 || !nt::is_prime(p) {
            return Err(Error::pre(format!("{p} is not a prime")));
        }
        if precision == 0 {
            return Err(Error::pre("precision must be positive"));
        }
        let m = checked_modulus(p, precision)?;
        Ok(PadicInt { p, precision, residue: residue % m })
    }

    /// Caller guarantees `p` prime and `p^N` representable.
    pub fn from_int(n: i64, p: u64, precision: u32) -> Self {
        let m = p.pow(precision);
        PadicInt { p, precision, residue: nt::reduce_signed(n, m) }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.precision)
    }

    pub fn is_unit(&self) -> bool {
        self.residue % self.p != 0
    }

    /// `v_p` of the residue, `N` for zero.
    pub fn valuation(&self) -> u32 {
        if self.residue == 0 {
            self.precision
        } else {
            nt::valuation(self.residue, self.p)
        }
    }

    pub fn truncate(&self, precision: u32) -> Self {
        let precision = precision.min(self.precision);
        PadicInt { p: self.p, precision, residue: self.residue % self.p.pow(precision) }
    }

    fn common(&self, other: &Self) -> (u32, u64) {
        assert_eq!(self.p, other.p, "mixing residues for different primes");
        let n = self.precision.min(other.precision);
        (n, self.p.pow(n))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (n, m) = self.common(other);
        PadicInt { p: self.p, precision: n, residue: ((self.residue % m) + (other.residue % m)) % m }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (n, m) = self.common(other);
        PadicInt { p: self.p, precision: n, residue: ((self.residue % m) + m - (other.residue % m)) % m }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (n, m) = self.common(other);
        PadicInt { p: self.p, precision: n, residue: nt::mul_mod(self.residue, other.residue, m) }
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus();
        PadicInt { p: self.p, precision: self.precision, residue: (m - self.residue) % m }
    }

    /// `self^e` for signed `e`; negative exponents require a unit.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { padic_unit_inverse(self)? } else { *self };
        Ok(PadicInt {
            p: self.p,
            precision: self.precision,
            residue: nt::pow_mod(base.residue, e.unsigned_abs(), self.modulus()),
        })
    }
}

impl std::fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} mod {}^{}", self.residue, self.p, self.precision)
    }
}

pub(crate) fn checked_modulus(p: u64, precision: u32) -> Result<u64> {
    let m = p
        .checked_pow(precision)
        .filter(|m| *m < (1u64 << 62))
        .ok_or_else(|| Error::Precision(format!("{p}^{precision} does not fit a machine word")))?;
    Ok(m)
}

/// Inverse of a unit of `Z/p^N`.
pub fn padic_unit_inverse(x: &PadicInt) -> Result<PadicInt> {
    if !x.is_unit() {
        return Err(Error::NonUnit(format!("{x:?} is not a unit")));
    }
    let inv = nt::inv_mod(x.residue, x.modulus()).expect("unit has an inverse");
    Ok(PadicInt { residue: inv, ..*x })
}

/// Teichmüller representative `ω(a)` modulo `p^N`: the `(p-1)`-st root of unity that is
/// congruent to `a` modulo `p`.
pub fn teichmuller(a: i64, p: u64, precision: u32) -> Result<PadicInt> {
    if p == 2 || !nt::is_prime(p) {
        return Err(Error::pre(format!("teichmuller needs an odd prime, got {p}")));
    }
    if a.rem_euclid(p as i64) == 0 {
        return Err(Error::pre(format!("{p} divides {a}")));
    }
    let m = checked_modulus(p, precision)?;
    let mut x = nt::reduce_signed(a, m);
    // x -> x^p contracts the one-unit part; N-1 steps reach the fixed point mod p^N.
    for _ in 1..precision {
        x = nt::pow_mod(x, p, m);
    }
    Ok(PadicInt { p, precision, residue: x })
}
