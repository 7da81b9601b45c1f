//! Exact computational algebra for equivariant Stickelberger elements.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: rationals, cyclotomic numbers, `Z/p^N` residues, Bernoulli polynomials.
//! * [`group`], [`field`], [`character`]: abelian fields over `Q` given by a modulus and a
//!   fixing subgroup, their Galois groups, CM data and character tables.
//! * [`group_ring`], [`lvalues`], [`classmod`]: group-ring elements, partial zeta values,
//!   Stickelberger elements and their annihilation / Fitting checks on class-module data.
//! * [`iwasawa`]: truncated Iwasawa algebras along the cyclotomic tower, twists and towers of
//!   Stickelberger elements.
//! * [`zmod`], [`algebra`], [`ideal`], [`module`]: Howell forms over `Z/p^N`, finite commutative
//!   algebras, ideals and finitely presented modules with Fitting ideals and duals.
//! * [`complex`]: bounded complexes, cohomology and the Euler–Fitting invariant.
//! * [`cert`], [`selftest`]: JSON certificates and the seeded verification campaigns.

pub mod algebra;
pub mod arith;
pub mod cert;
pub mod character;
pub mod classmod;
pub mod complex;
pub mod error;
pub mod field;
pub mod group;
pub mod group_ring;
pub mod ideal;
pub mod iwasawa;
pub mod lemmas;
pub mod lvalues;
pub mod module;
pub mod selftest;
pub mod zmod;

pub use error::{Error, Result};
