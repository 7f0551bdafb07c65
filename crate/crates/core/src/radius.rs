//! Elements of the value group `p^Q`, plus zero.
//!
//! A [`Radius`] is stored by its valuation `q`, so the real number it stands
//! for is `p^{-q}`. Norms of p-adic numbers, disk radii and every constant of
//! an expansion certificate live here. Nothing is ever rounded: products add
//! valuations and `k`-th roots divide them by `k` in exact rational arithmetic.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Rational exponent type used for value-group arithmetic.
pub type Exponent = Ratio<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Radius {
    Zero,
    /// `p^{-q}` for the stored `q`.
    Power(Exponent),
}

impl Radius {
    pub const ONE: Radius = Radius::Power(Ratio::new_raw(0, 1));

    pub fn from_valuation(q: Exponent) -> Self {
        Radius::Power(q)
    }

    /// The radius `p^{e}`.
    pub fn from_log(e: Exponent) -> Self {
        Radius::Power(-e)
    }

    pub fn from_int_log(e: i64) -> Self {
        Radius::Power(Ratio::from_integer(-e))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Radius::Zero)
    }

    /// `q` with `self = p^{-q}`; `None` for zero.
    pub fn valuation(&self) -> Option<Exponent> {
        match self {
            Radius::Zero => None,
            Radius::Power(q) => Some(*q),
        }
    }

    /// `e` with `self = p^{e}`; `None` for zero.
    pub fn log(&self) -> Option<Exponent> {
        self.valuation().map(|q| -q)
    }

    pub fn pow(&self, k: i64) -> Radius {
        match self {
            Radius::Zero if k > 0 => Radius::Zero,
            Radius::Zero if k == 0 => Radius::ONE,
            Radius::Zero => panic!("negative power of the zero radius"),
            Radius::Power(q) => Radius::Power(*q * k),
        }
    }

    /// Exact `k`-th root.
    pub fn root(&self, k: u32) -> Radius {
        assert!(k > 0, "zeroth root");
        match self {
            Radius::Zero => Radius::Zero,
            Radius::Power(q) => Radius::Power(*q / i64::from(k)),
        }
    }

    /// `self / other`; errors when dividing by zero.
    pub fn checked_div(&self, other: &Radius) -> Result<Radius, Error> {
        match (self, other) {
            (_, Radius::Zero) => Err(Error::DivisionByZero),
            (Radius::Zero, _) => Ok(Radius::Zero),
            (Radius::Power(a), Radius::Power(b)) => Ok(Radius::Power(*a - *b)),
        }
    }

    /// Smallest integer `e` with `p^{-e} <= self`, i.e. the valuation of the
    /// largest Q_p-disk radius not exceeding this one.
    pub fn qp_valuation_ceil(&self) -> Option<i64> {
        self.valuation().map(|q| q.ceil().to_integer())
    }
}

impl Ord for Radius {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Radius::Zero, Radius::Zero) => Ordering::Equal,
            (Radius::Zero, _) => Ordering::Less,
            (_, Radius::Zero) => Ordering::Greater,
            // larger valuation means smaller radius
            (Radius::Power(a), Radius::Power(b)) => b.cmp(a),
        }
    }
}

impl PartialOrd for Radius {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Mul for Radius {
    type Output = Radius;
    // exponents add
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Radius) -> Radius {
        match (self, rhs) {
            (Radius::Zero, _) | (_, Radius::Zero) => Radius::Zero,
            (Radius::Power(a), Radius::Power(b)) => Radius::Power(a + b),
        }
    }
}

impl std::ops::Div for Radius {
    type Output = Radius;
    fn div(self, rhs: Radius) -> Radius {
        self.checked_div(&rhs).expect("division by the zero radius")
    }
}

fn fmt_exponent(e: &Exponent) -> String {
    if e.is_integer() {
        e.to_integer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

impl fmt::Display for Radius {
    /// Renders as `p^e` (the value `p^e`), or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.log() {
            None => write!(f, "0"),
            Some(e) => write!(f, "p^{}", fmt_exponent(&e)),
        }
    }
}

pub(crate) fn parse_exponent(s: &str) -> Result<Exponent, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational exponent `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: i64 = num.parse().map_err(|_| bad())?;
    let den: i64 = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Ratio::new(num, den))
}

impl FromStr for Radius {
    type Err = Error;

    /// Accepts `0`, `p^e` and `p^(e)` with a rational `e`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        if t == "0" {
            return Ok(Radius::Zero);
        }
        let body = t
            .strip_prefix("p^")
            .ok_or_else(|| Error::Parse(format!("radius `{t}` is not of the form p^q")))?;
        let body = body.trim_start_matches('(').trim_end_matches(')');
        Ok(Radius::from_log(parse_exponent(body)?))
    }
}

impl Serialize for Radius {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Radius {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Smallest integer `n >= 0` with `start / base^n < bound`, where `base > 1`.
///
/// Works purely on exponents; used to pick shadowing depths.
pub fn steps_below(start: Radius, base: Radius, bound: Radius) -> Option<u64> {
    if start < bound {
        return Some(0);
    }
    let (s, b, t) = (start.valuation()?, base.valuation()?, bound.valuation()?);
    if !b.is_negative() {
        return None;
    }
    // need s - n*b > t  <=>  n > (t - s) / (-b)
    let ratio = (t - s) / (-b);
    let n = ratio.floor().to_integer() + 1;
    let n = n.max(0);
    Some(n as u64)
}

/// p-adic valuation of a nonzero machine integer.
pub fn valuation_of_int(n: i64, p: u64) -> u32 {
    assert!(n != 0);
    let mut n = n.unsigned_abs();
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Radius {
        Radius::from_log(Ratio::new(n, d))
    }

    #[test]
    fn ordering_follows_the_value() {
        assert!(Radius::Zero < r(-100, 1));
        assert!(r(-1, 1) < Radius::ONE);
        assert!(r(1, 3) < r(1, 2));
        assert_eq!(r(2, 4), r(1, 2));
    }

    #[test]
    fn products_and_roots_are_exact() {
        let nine = r(2, 1);
        assert_eq!(nine.root(2), r(1, 1));
        assert_eq!(nine.root(3).pow(3), nine);
        assert_eq!(nine * r(-1, 3), r(5, 3));
        assert_eq!(nine * Radius::Zero, Radius::Zero);
        assert!(nine.checked_div(&Radius::Zero).is_err());
    }

    #[test]
    fn text_round_trip() {
        for s in ["p^2", "p^-1/3", "p^0", "0"] {
            let parsed: Radius = s.parse().unwrap();
            assert_eq!(parsed.to_string(), s);
        }
        assert_eq!("p^(-2)".parse::<Radius>().unwrap(), r(-2, 1));
        assert!("3^2".parse::<Radius>().is_err());
    }

    #[test]
    fn depth_selection() {
        // mu = 1, lambda = p, target p^-10: need p^-n < p^-10, n = 11
        assert_eq!(steps_below(Radius::ONE, r(1, 1), r(-10, 1)), Some(11));
        assert_eq!(steps_below(r(-20, 1), r(1, 1), r(-10, 1)), Some(0));
        assert_eq!(steps_below(r(-1, 2), r(3, 2), r(-10, 1)), Some(7));
    }
}
