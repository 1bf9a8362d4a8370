//! Exact arithmetic: rationals, dense polynomials over an arbitrary coefficient
//! ring, bivariate polynomials over ℚ, finite fields and cubic number fields.

pub mod bipoly;
pub mod fp;
pub mod fq;
pub mod linalg;
pub mod numfield;
pub mod parse;
pub mod poly;
pub mod rational;

pub use bipoly::BiPoly;
pub use fp::Fp;
pub use fq::{FiniteField, Fq};
pub use numfield::{nf_is_isomorphic, CubicField, NumberFieldElement};
pub use poly::UniPoly;
pub use rational::{cubic_rational_roots, is_rational_square, rat, Rational};

use std::fmt::Debug;

/// A commutative ring whose elements carry enough context to build the
/// constants of their own ring.
pub trait Ring: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn from_int_like(&self, n: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn pow_u(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            base = base.times(&base);
            e >>= 1;
        }
        acc
    }
}

pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;

    fn divide(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.times(&i))
    }
}
