//! Exact rational arithmetic: scalars, sparse Laurent polynomials, and
//! dense linear algebra over Q.
//!
//! Everything downstream (cohomology, Poisson matrices, reports) is built on
//! these three types. No floating point is used anywhere; all verification
//! reduces to exact zero/nonzero tests on `Rat` values.

mod bipoly;
mod laurent;
mod matrix;

pub use bipoly::BiPoly;
pub(crate) use bipoly::{bipoly_adjugate, bipoly_det};
pub use laurent::{poly_divmod, poly_gcd, LaurentPoly};
pub use matrix::{kernel_basis, quotient_basis, solve, solve_many, RatMatrix};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational scalar.
///
/// `num_rational::BigRational` keeps the canonical form we need: reduced
/// fraction, positive denominator.
pub type Rat = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `n/d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parse a rational from its decimal-string form, e.g. `"-7/3"` or `"2"`.
pub fn parse_rat(s: &str) -> Result<Rat, crate::Error> {
    s.trim()
        .parse::<Rat>()
        .map_err(|e| crate::Error::Parse(format!("bad rational {s:?}: {e}")))
}

/// Format a rational as `"p/q"` (or `"p"` when the denominator is one).
pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

/// Absolute value, used by max-magnitude reports.
pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}

/// Zero test, for callers that do not pull in the numeric traits.
pub fn rat_is_zero(r: &Rat) -> bool {
    r.is_zero()
}

pub(crate) fn is_zero(r: &Rat) -> bool {
    r.is_zero()
}

pub(crate) fn one() -> Rat {
    Rat::one()
}

pub(crate) fn zero() -> Rat {
    Rat::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_roundtrip() {
        for s in ["3/2", "-7/3", "0", "2", "-11"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
    }

    #[test]
    fn rational_is_reduced() {
        let r = ratio(6, -4);
        assert_eq!(format_rat(&r), "-3/2");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_rat("1.5").is_err());
        assert!(parse_rat("x").is_err());
    }
}
