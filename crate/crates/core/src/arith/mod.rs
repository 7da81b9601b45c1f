//! Exact arithmetic: rationals, cyclotomic numbers, `Z/p^N` residues and Bernoulli machinery.

mod bernoulli;
mod coeff;
mod cyclotomic;
pub mod nt;
mod padic;
mod rational;

pub use bernoulli::{bernoulli_numbers, bernoulli_polynomial, eval_poly, hurwitz_zeta_nonpos, Poly};
pub use coeff::Coeff;
pub use cyclotomic::{cyclotomic_polynomial, CyclotomicInt};
pub use padic::{padic_unit_inverse, teichmuller, PadicInt};
pub use rational::Rational;
