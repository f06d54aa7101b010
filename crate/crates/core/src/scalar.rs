//! Exact rational scalars.
//!
//! Every quantity in the crate is a [`Scalar`], an arbitrary-precision
//! rational kept in canonical form (`gcd(|p|, q) = 1`, `q > 0`) by
//! `num-rational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(v))
}

/// `num / den`, reduced. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `<int>` or `<int>/<int>`.
pub fn parse_scalar(token: &str) -> Option<Scalar> {
    let (num, den) = match token.split_once('/') {
        Some((n, d)) => (n, d),
        None => (token, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Renders `p` for integers and `p/q` otherwise.
pub fn format_scalar(v: &Scalar) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn format_list(vs: &[Scalar]) -> String {
    vs.iter().map(format_scalar).collect::<Vec<_>>().join(" ")
}

/// Returns the value as `i64` if it is an integer that fits.
pub fn to_integer(v: &Scalar) -> Option<i64> {
    if !v.is_integer() {
        return None;
    }
    i64::try_from(v.numer().clone()).ok()
}

pub(crate) fn is_zero_or_one(v: &Scalar) -> bool {
    v.is_zero() || v.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_scalar("7/3"), Some(ratio(7, 3)));
        assert_eq!(parse_scalar("-4/6"), Some(ratio(-2, 3)));
        assert_eq!(parse_scalar("12"), Some(int(12)));
        assert_eq!(parse_scalar("1/0"), None);
        assert_eq!(parse_scalar("x"), None);
        assert_eq!(parse_scalar("1/2/3"), None);
        assert_eq!(format_scalar(&ratio(14, 6)), "7/3");
        assert_eq!(format_scalar(&ratio(6, 3)), "2");
        assert_eq!(format_scalar(&ratio(1, -2)), "-1/2");
    }

    #[test]
    fn canonical_form() {
        let v = parse_scalar("10/-4").unwrap();
        assert_eq!(v.numer(), &BigInt::from(-5));
        assert_eq!(v.denom(), &BigInt::from(2));
    }
}
