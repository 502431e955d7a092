//! Exact ordered-field scalars.
//!
//! Everything in this crate is written against [`Scalar`], which is satisfied
//! by the `num-rational` types (`BigRational`, `Rational64`, ...). Floating
//! point types are deliberately excluded: they are neither `Ord` nor `Hash`,
//! and the geometric equalities checked here are exact.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// An exact, totally ordered field element.
pub trait Scalar:
    Clone + Debug + Display + Ord + Hash + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// `num / den`. Panics if `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Parses `"p/q"` or `"p"`.
    fn parse_exact(s: &str) -> Option<Self>;

    /// Nearest `f64`, for display only.
    fn to_f64_lossy(&self) -> f64;

    fn from_int(v: i64) -> Self {
        Self::from_ratio(v, 1)
    }
}

impl<T> Scalar for T
where
    T: Clone
        + Debug
        + Display
        + Ord
        + Hash
        + Num
        + Signed
        + FromPrimitive
        + ToPrimitive
        + FromStr
        + Send
        + Sync
        + 'static,
{
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let n = T::from_i64(num).expect("numerator representable");
        let d = T::from_i64(den).expect("denominator representable");
        n / d
    }

    fn parse_exact(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Renders `v` with `digits` significant digits in positional notation
/// (scientific only for very large or very small magnitudes).
pub fn decimal_string<S: Scalar>(v: &S, digits: usize) -> String {
    let x = v.to_f64_lossy();
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-6..15).contains(&exp) {
        return format!("{:.*e}", digits.saturating_sub(1), x);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;
    use num_rational::Rational64;

    #[test]
    fn parses_both_forms() {
        assert_eq!(Rat::parse_exact("3/6"), Some(Rat::from_ratio(1, 2)));
        assert_eq!(Rat::parse_exact("-7"), Some(Rat::from_int(-7)));
        assert_eq!(Rational64::parse_exact("x"), None);
    }

    #[test]
    fn display_omits_unit_denominator() {
        assert_eq!(Rat::from_ratio(4, 2).to_string(), "2");
        assert_eq!(Rat::from_ratio(-2, 6).to_string(), "-1/3");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&Rat::from_ratio(2, 3), 12), "0.666666666667");
        assert_eq!(decimal_string(&Rat::from_int(5), 12), "5");
        assert_eq!(decimal_string(&Rat::from_ratio(1, 256), 12), "0.00390625");
    }
}
