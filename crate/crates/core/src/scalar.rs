//! Scalar abstraction shared by the exact and floating-point code paths.
//!
//! Polytope geometry, Lagrangian sections, gradient fields and basis-function
//! moduli are all rational functions of the moment coordinates, so they are
//! written once against [`Scalar`] and instantiated with [`Rational`] for
//! certification or with `f64`/`f32` for sampling and plotting. Anything that
//! needs `exp`/`log` (affine charts, flows) additionally asks for [`Real`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, Num, Signed, ToPrimitive};

/// Arbitrary-precision rational number used for all exact computations.
pub type Rational = BigRational;

pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + ToPrimitive + Send + Sync + 'static
{
    /// True for types whose arithmetic is exact.
    const EXACT: bool;

    /// Slack used when classifying a point against a line: zero for exact types.
    fn tolerance() -> Self;

    fn int(n: i64) -> Self;

    fn ratio(num: i64, den: i64) -> Self;

    /// Nearest value to an exact rational.
    fn from_rational(r: &Rational) -> Self;

    /// Nearest `f64`; NaN when the value is not representable.
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `self^exp` for a nonnegative integer exponent.
    fn powu(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }

    /// `self^exp` for a signed integer exponent; `None` on `0^negative`.
    fn powi_checked(&self, exp: i64) -> Option<Self> {
        if exp >= 0 {
            Some(self.powu(exp as u32))
        } else if self.is_zero() {
            None
        } else {
            Some(Self::one() / self.powu(exp.unsigned_abs() as u32))
        }
    }

    fn near_zero(&self) -> bool {
        self.abs() <= Self::tolerance()
    }
}

/// Floating-point scalars: everything in [`Scalar`] plus transcendental functions.
pub trait Real: Scalar + Float {
    fn lit(v: f64) -> Self;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn tolerance() -> Self {
        1e-9
    }

    fn int(n: i64) -> Self {
        n as f64
    }

    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn lit(v: f64) -> Self {
        v
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn tolerance() -> Self {
        1e-5
    }

    fn int(n: i64) -> Self {
        n as f32
    }

    fn ratio(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }

    fn from_rational(r: &Rational) -> Self {
        r.to_f32().unwrap_or(f32::NAN)
    }
}

impl Real for f32 {
    fn lit(v: f64) -> Self {
        v as f32
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn tolerance() -> Self {
        Rational::from_integer(BigInt::from(0))
    }

    fn int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

/// Shorthand for an exact rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::ratio(num, den)
}

/// Exact rational value of a finite `f64`.
pub fn exact_from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the `p/q` (or `p`) form produced by [`format_rational`].
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_round_trip() {
        for (n, d) in [(0, 1), (5, 3), (-7, 2), (12, 4)] {
            let r = rat(n, d);
            assert_eq!(parse_rational(&format_rational(&r)), Some(r));
        }
        assert_eq!(format_rational(&rat(6, 3)), "2");
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn signed_powers() {
        assert_eq!(rat(2, 3).powi_checked(-2), Some(rat(9, 4)));
        assert_eq!(Rational::int(0).powi_checked(-1), None);
        assert_eq!(Rational::int(0).powi_checked(0), Some(Rational::int(1)));
        assert_eq!(2.0f64.powi_checked(3), Some(8.0));
    }

    #[test]
    fn exactness_flags() {
        const { assert!(<Rational as Scalar>::EXACT) };
        const { assert!(!<f64 as Scalar>::EXACT) };
        assert!(Rational::tolerance() == Rational::int(0));
        assert_eq!(exact_from_f64(0.5), Some(rat(1, 2)));
    }
}
