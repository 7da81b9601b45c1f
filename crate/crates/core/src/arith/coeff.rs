use std::fmt::Debug;

use super::{CyclotomicInt, PadicInt, Rational};

/// Coefficient domain of a group ring.
///
/// Some domains carry context (the precision of a `Z/p^N` residue, the order of a cyclotomic
/// field), so constants are produced from an existing value of the same domain.
pub trait Coeff: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_int_like(&self, n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Coeff for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn from_int_like(&self, n: i64) -> Self {
        Rational::from(n)
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Coeff for PadicInt {
    fn zero_like(&self) -> Self {
        PadicInt::from_int(0, self.p(), self.precision())
    }
    fn one_like(&self) -> Self {
        PadicInt::from_int(1, self.p(), self.precision())
    }
    fn from_int_like(&self, n: i64) -> Self {
        PadicInt::from_int(n, self.p(), self.precision())
    }
    fn is_zero(&self) -> bool {
        self.residue() == 0
    }
    fn add(&self, other: &Self) -> Self {
        PadicInt::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        PadicInt::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        PadicInt::mul(self, other)
    }
    fn neg(&self) -> Self {
        PadicInt::neg(self)
    }
}

impl Coeff for CyclotomicInt {
    fn zero_like(&self) -> Self {
        CyclotomicInt::zero(self.order())
    }
    fn one_like(&self) -> Self {
        CyclotomicInt::from_rational(self.order(), Rational::one())
    }
    fn from_int_like(&self, n: i64) -> Self {
        CyclotomicInt::from_rational(self.order(), Rational::from(n))
    }
    fn is_zero(&self) -> bool {
        CyclotomicInt::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        CyclotomicInt::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        CyclotomicInt::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        CyclotomicInt::mul(self, other)
    }
    fn neg(&self) -> Self {
        CyclotomicInt::neg(self)
    }
}
