//! Exact rational arithmetic, multivariate polynomials and dense linear
//! algebra over the rationals.

mod matrix;
mod monomial;
mod poly;

pub use matrix::{LinearSolution, RationalMatrix, Rref};
pub use monomial::{monomials_of_weighted_degree, Monomial};
pub use poly::{Polynomial, WeightedDegree};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Arbitrary-precision rational; always stored reduced with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"3"`, `"-7/2"` and similar.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}
