//! Elements of Q_p at capped relative precision.
//!
//! A nonzero [`PadicNumber`] is `p^v * U` with `p ∤ U` and `0 <= U < p^N`,
//! known modulo `p^{v+N}`. Cancellation in sums lowers the relative precision;
//! when every known digit cancels the result is an explicit "zero to absolute
//! precision `a`" value (written `O(p^a)`), never a silent exact zero.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::radius::Radius;

/// Default number of known base-p digits.
pub const DEFAULT_PRECISION: u32 = 64;
/// Extra digits used when parsing polynomial coefficients.
pub const GUARD_DIGITS: u32 = 16;

/// A validated prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 != 2
    }

    pub(crate) fn big(self) -> BigUint {
        BigUint::from(self.0)
    }

    pub(crate) fn power(self, n: u32) -> BigUint {
        self.big().pow(n)
    }

    /// v_p of a nonzero machine integer.
    pub fn valuation_of(self, n: i64) -> u32 {
        crate::radius::valuation_of_int(n, self.0)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Zero,
    /// Zero modulo `p^abs_precision`; the true value is unknown beyond that.
    Vanishing {
        abs_precision: i64,
    },
    Unit {
        valuation: i64,
        unit: BigUint,
        precision: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicNumber {
    prime: Prime,
    repr: Repr,
}

/// Strip the p-part of an integer.
fn split_p(mut n: BigUint, p: &BigUint) -> (u64, BigUint) {
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return (v, n);
        }
        n = q;
        v += 1;
    }
}

fn mod_inverse(a: &BigUint, m: &BigUint) -> BigUint {
    let a = BigInt::from_biguint(Sign::Plus, a.clone());
    let m = BigInt::from_biguint(Sign::Plus, m.clone());
    let eg = a.extended_gcd(&m);
    debug_assert!(eg.gcd.is_one());
    eg.x.mod_floor(&m).to_biguint().expect("nonnegative")
}

impl PadicNumber {
    /// Builds `p^valuation * value` known modulo `p^abs_precision`.
    fn normalize(prime: Prime, valuation: i64, value: BigUint, abs_precision: i64) -> Self {
        if abs_precision <= valuation {
            return PadicNumber {
                prime,
                repr: Repr::Vanishing { abs_precision },
            };
        }
        let p = prime.big();
        let span = (abs_precision - valuation) as u32;
        let value = value % p.pow(span);
        if value.is_zero() {
            return PadicNumber {
                prime,
                repr: Repr::Vanishing { abs_precision },
            };
        }
        let (t, unit) = split_p(value, &p);
        let valuation = valuation + t as i64;
        PadicNumber {
            prime,
            repr: Repr::Unit {
                valuation,
                unit,
                precision: (abs_precision - valuation) as u32,
            },
        }
    }

    pub fn zero(prime: Prime) -> Self {
        PadicNumber {
            prime,
            repr: Repr::Zero,
        }
    }

    /// The value `O(p^a)`: zero to absolute precision `a`.
    pub fn vanishing(prime: Prime, abs_precision: i64) -> Self {
        PadicNumber {
            prime,
            repr: Repr::Vanishing { abs_precision },
        }
    }

    pub fn one(prime: Prime, precision: u32) -> Self {
        Self::from_i64(1, prime, precision)
    }

    pub fn from_bigint(n: &BigInt, prime: Prime, precision: u32) -> Self {
        assert!(precision > 0, "relative precision must be positive");
        if n.is_zero() {
            return Self::zero(prime);
        }
        let p = prime.big();
        let (v, u) = split_p(n.magnitude().clone(), &p);
        let v = v as i64;
        let modulus = p.pow(precision);
        let mut u = u % &modulus;
        if n.is_negative() {
            u = &modulus - u;
        }
        PadicNumber {
            prime,
            repr: Repr::Unit {
                valuation: v,
                unit: u,
                precision,
            },
        }
    }

    pub fn from_i64(n: i64, prime: Prime, precision: u32) -> Self {
        Self::from_bigint(&BigInt::from(n), prime, precision)
    }

    /// `num / den` with `precision` correct unit digits.
    pub fn from_fraction(num: &BigInt, den: &BigInt, prime: Prime, precision: u32) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let n = Self::from_bigint(num, prime, precision);
        let d = Self::from_bigint(den, prime, precision);
        n.checked_div(&d)
    }

    pub fn from_rational(r: &BigRational, prime: Prime, precision: u32) -> Self {
        Self::from_fraction(r.numer(), r.denom(), prime, precision).expect("nonzero denominator")
    }

    /// Checked constructor from machine integers; validates the prime.
    pub fn parse_rational(
        numerator: i64,
        denominator: i64,
        p: u64,
        precision: u32,
    ) -> Result<Self> {
        let prime = Prime::new(p)?;
        if precision == 0 {
            return Err(Error::InvalidArgument("precision must be positive".into()));
        }
        Self::from_fraction(
            &BigInt::from(numerator),
            &BigInt::from(denominator),
            prime,
            precision,
        )
    }

    /// Little-endian base-p digits `d0 d1 ...` scaled by `p^valuation`.
    ///
    /// Every supplied digit counts as known, so the absolute precision is
    /// `valuation + digits.len()`.
    pub fn from_digits(digits: &[u64], valuation: i64, prime: Prime) -> Result<Self> {
        let p = prime.get();
        if let Some(d) = digits.iter().find(|&&d| d >= p) {
            return Err(Error::Parse(format!("digit {d} is not below p = {p}")));
        }
        let mut value = BigUint::zero();
        for &d in digits.iter().rev() {
            value = value * p + d;
        }
        Ok(Self::normalize(
            prime,
            valuation,
            value,
            valuation + digits.len() as i64,
        ))
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    /// True for the exact zero and for `O(p^a)` values.
    pub fn is_zero_at_precision(&self) -> bool {
        !matches!(self.repr, Repr::Unit { .. })
    }

    /// `None` unless the value is known to be nonzero.
    pub fn valuation(&self) -> Option<i64> {
        match self.repr {
            Repr::Unit { valuation, .. } => Some(valuation),
            _ => None,
        }
    }

    pub fn unit(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Unit { unit, .. } => Some(unit),
            _ => None,
        }
    }

    /// Number of known unit digits (0 for zero values).
    pub fn relative_precision(&self) -> u32 {
        match self.repr {
            Repr::Unit { precision, .. } => precision,
            _ => 0,
        }
    }

    /// `v + N`; `None` for the exact zero.
    pub fn absolute_precision(&self) -> Option<i64> {
        match self.repr {
            Repr::Zero => None,
            Repr::Vanishing { abs_precision } => Some(abs_precision),
            Repr::Unit {
                valuation,
                precision,
                ..
            } => Some(valuation + precision as i64),
        }
    }

    fn abs_precision_or_max(&self) -> i64 {
        self.absolute_precision().unwrap_or(i64::MAX)
    }

    /// The p-adic norm. Errors for `O(p^a)` values, whose norm is unknown.
    pub fn norm(&self) -> Result<Radius> {
        match self.repr {
            Repr::Zero => Ok(Radius::Zero),
            Repr::Vanishing { abs_precision } => Err(Error::PrecisionExhausted(format!(
                "norm of a value known only as O(p^{abs_precision})"
            ))),
            Repr::Unit { valuation, .. } => Ok(Radius::from_int_log(-valuation)),
        }
    }

    /// Exact norm, or the certified upper bound `p^{-a}` for `O(p^a)`.
    pub fn norm_bound(&self) -> Radius {
        match self.repr {
            Repr::Zero => Radius::Zero,
            Repr::Vanishing { abs_precision } => Radius::from_int_log(-abs_precision),
            Repr::Unit { valuation, .. } => Radius::from_int_log(-valuation),
        }
    }

    /// Decides `|self| <= r`, erroring when unknown digits matter.
    pub fn norm_at_most(&self, r: Radius) -> Result<bool> {
        match self.repr {
            Repr::Unit { .. } | Repr::Zero => Ok(self.norm_bound() <= r),
            Repr::Vanishing { abs_precision } => {
                if self.norm_bound() <= r {
                    Ok(true)
                } else {
                    Err(Error::Undecidable(format!(
                        "is |O(p^{abs_precision})| <= {r}?"
                    )))
                }
            }
        }
    }

    /// `max(|self|, 1)`, needed by the chordal metric.
    fn norm_or_one(&self) -> Result<Radius> {
        let bound = self.norm_bound();
        if bound <= Radius::ONE {
            return Ok(Radius::ONE);
        }
        self.norm()
    }

    /// Residue class modulo p; `Ok(None)` when the value is not in Z_p.
    pub fn residue(&self) -> Result<Option<u64>> {
        match &self.repr {
            Repr::Zero => Ok(Some(0)),
            Repr::Vanishing { abs_precision } if *abs_precision >= 1 => Ok(Some(0)),
            Repr::Vanishing { abs_precision } => Err(Error::Undecidable(format!(
                "residue of O(p^{abs_precision})"
            ))),
            Repr::Unit {
                valuation, unit, ..
            } => Ok(match valuation.cmp(&0) {
                Ordering::Less => None,
                Ordering::Greater => Some(0),
                Ordering::Equal => Some((unit % self.prime.get()).to_u64().expect("small")),
            }),
        }
    }

    /// Little-endian digits of the unit part.
    pub fn digits(&self) -> Vec<u64> {
        match &self.repr {
            Repr::Unit {
                unit, precision, ..
            } => {
                let p = self.prime.big();
                let mut u = unit.clone();
                (0..*precision)
                    .map(|_| {
                        let (q, r) = u.div_rem(&p);
                        u = q;
                        r.to_u64().expect("digit")
                    })
                    .collect()
            }
            _ => Vec::new(),
        }
    }

    /// Drops known digits so that at most `precision` remain.
    pub fn with_relative_precision(&self, precision: u32) -> Self {
        match &self.repr {
            Repr::Unit {
                valuation,
                unit,
                precision: n,
            } if precision < *n => Self::normalize(
                self.prime,
                *valuation,
                unit.clone(),
                valuation + precision as i64,
            ),
            _ => self.clone(),
        }
    }

    /// Forgets every digit at or beyond `p^abs_precision`.
    pub fn with_absolute_precision(&self, abs_precision: i64) -> Self {
        match &self.repr {
            Repr::Zero => Self::vanishing(self.prime, abs_precision),
            Repr::Vanishing { abs_precision: a } => {
                Self::vanishing(self.prime, (*a).min(abs_precision))
            }
            Repr::Unit {
                valuation,
                unit,
                precision,
            } => {
                let abs = abs_precision.min(valuation + *precision as i64);
                Self::normalize(self.prime, *valuation, unit.clone(), abs)
            }
        }
    }

    /// Agreement at the combined known precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.sub(other).is_zero_at_precision()
    }

    fn check_prime(&self, other: &Self) {
        assert_eq!(
            self.prime, other.prime,
            "arithmetic between different primes"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_prime(other);
        match (&self.repr, &other.repr) {
            (Repr::Zero, _) => return other.clone(),
            (_, Repr::Zero) => return self.clone(),
            _ => {}
        }
        let abs = self
            .abs_precision_or_max()
            .min(other.abs_precision_or_max());
        let parts: Vec<(i64, &BigUint)> = [&self.repr, &other.repr]
            .into_iter()
            .filter_map(|r| match r {
                Repr::Unit {
                    valuation, unit, ..
                } => Some((*valuation, unit)),
                _ => None,
            })
            .collect();
        let Some(vmin) = parts.iter().map(|(v, _)| *v).min() else {
            return Self::vanishing(self.prime, abs);
        };
        if abs <= vmin {
            return Self::vanishing(self.prime, abs);
        }
        let p = self.prime.big();
        let value = parts.iter().fold(BigUint::zero(), |acc, (v, u)| {
            acc + *u * p.pow((v - vmin) as u32)
        });
        Self::normalize(self.prime, vmin, value, abs)
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Unit {
                valuation,
                unit,
                precision,
            } => PadicNumber {
                prime: self.prime,
                repr: Repr::Unit {
                    valuation: *valuation,
                    unit: self.prime.power(*precision) - unit,
                    precision: *precision,
                },
            },
            _ => self.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_prime(other);
        let prime = self.prime;
        match (&self.repr, &other.repr) {
            (Repr::Zero, _) | (_, Repr::Zero) => Self::zero(prime),
            (Repr::Vanishing { abs_precision: a }, Repr::Vanishing { abs_precision: b }) => {
                Self::vanishing(prime, a + b)
            }
            (Repr::Vanishing { abs_precision: a }, Repr::Unit { valuation, .. })
            | (Repr::Unit { valuation, .. }, Repr::Vanishing { abs_precision: a }) => {
                Self::vanishing(prime, a + valuation)
            }
            (
                Repr::Unit {
                    valuation: v1,
                    unit: u1,
                    precision: n1,
                },
                Repr::Unit {
                    valuation: v2,
                    unit: u2,
                    precision: n2,
                },
            ) => {
                let n = *n1.min(n2);
                PadicNumber {
                    prime,
                    repr: Repr::Unit {
                        valuation: v1 + v2,
                        unit: (u1 * u2) % prime.power(n),
                        precision: n,
                    },
                }
            }
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        match &self.repr {
            Repr::Unit {
                valuation,
                unit,
                precision,
            } => Ok(PadicNumber {
                prime: self.prime,
                repr: Repr::Unit {
                    valuation: -valuation,
                    unit: mod_inverse(unit, &self.prime.power(*precision)),
                    precision: *precision,
                },
            }),
            _ => Err(Error::DivisionByZero),
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_prime(other);
        let inv = other.inverse()?;
        Ok(self.mul(&inv))
    }

    pub fn mul_int(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero(self.prime);
        }
        let n = self.relative_precision().max(1);
        self.mul(&Self::from_i64(k, self.prime, n))
    }

    pub fn pow(&self, k: u32) -> Self {
        if k == 0 {
            return Self::one(self.prime, self.relative_precision().max(DEFAULT_PRECISION));
        }
        match &self.repr {
            Repr::Zero => self.clone(),
            Repr::Vanishing { abs_precision } if *abs_precision >= 0 => {
                Self::vanishing(self.prime, abs_precision * i64::from(k))
            }
            Repr::Vanishing { .. } => {
                let mut acc = self.clone();
                for _ in 1..k {
                    acc = acc.mul(self);
                }
                acc
            }
            Repr::Unit {
                valuation,
                unit,
                precision,
            } => PadicNumber {
                prime: self.prime,
                repr: Repr::Unit {
                    valuation: valuation * i64::from(k),
                    unit: unit.modpow(&BigUint::from(k), &self.prime.power(*precision)),
                    precision: *precision,
                },
            },
        }
    }

    /// Square root in Q_p, for odd p.
    ///
    /// The returned root is the one whose unit residue lies in
    /// `1..=(p-1)/2`.
    pub fn sqrt(&self) -> Result<Self> {
        let p = self.prime.get();
        if p == 2 {
            return Err(Error::UnsupportedPrime {
                p,
                operation: "sqrt",
            });
        }
        let (valuation, unit, precision) = match &self.repr {
            Repr::Zero => return Ok(self.clone()),
            Repr::Vanishing { abs_precision } => {
                return Err(Error::PrecisionExhausted(format!(
                    "square root of O(p^{abs_precision})"
                )))
            }
            Repr::Unit {
                valuation,
                unit,
                precision,
            } => (*valuation, unit, *precision),
        };
        if valuation % 2 != 0 {
            return Err(Error::NoSquareRoot("odd valuation"));
        }
        let a = (unit % p).to_u64().expect("residue");
        let r0 = sqrt_mod_prime(a, p).ok_or(Error::NoSquareRoot("unit is a non-residue mod p"))?;
        let r0 = r0.min(p - r0);

        // Newton: y <- y - (y^2 - u) / (2y), doubling correct digits each step
        let modulus = self.prime.power(precision);
        let mut y = BigUint::from(r0);
        let mut known = 1u32;
        while known < precision {
            known = (2 * known).min(precision);
            let m = self.prime.power(known);
            let u = unit % &m;
            let y2 = (&y * &y) % &m;
            let diff = (&y2 + &m - &u) % &m;
            let inv = mod_inverse(&((&y * 2u32) % &m), &m);
            y = (&y + &m - (diff * inv) % &m) % &m;
        }
        Ok(PadicNumber {
            prime: self.prime,
            repr: Repr::Unit {
                valuation: valuation / 2,
                unit: y % modulus,
                precision,
            },
        })
    }
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let m128 = m as u128;
    let mut base = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    acc as u64
}

/// Tonelli-Shanks; `None` for non-residues. Zero is not handled.
fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 || pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mulm(t2, t2);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulm(b, b);
        t = mulm(t, c);
        r = mulm(r, b);
    }
    Some(r)
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl std::ops::$trait<&PadicNumber> for &PadicNumber {
            type Output = PadicNumber;
            fn $method(self, rhs: &PadicNumber) -> PadicNumber {
                PadicNumber::$inner(self, rhs)
            }
        }
        impl std::ops::$trait for PadicNumber {
            type Output = PadicNumber;
            fn $method(self, rhs: PadicNumber) -> PadicNumber {
                PadicNumber::$inner(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, sub);
forward_binop!(Mul, mul, mul);

impl std::ops::Neg for PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        PadicNumber::neg(&self)
    }
}

impl std::ops::Neg for &PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        PadicNumber::neg(self)
    }
}

impl fmt::Display for PadicNumber {
    /// `0`, `O(p^a)`, or the digit string `d0.d1.d2...*p^v`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero => write!(f, "0"),
            Repr::Vanishing { abs_precision } => write!(f, "O(p^{abs_precision})"),
            Repr::Unit { valuation, .. } => {
                let digits: Vec<String> = self.digits().iter().map(u64::to_string).collect();
                write!(f, "{}*p^{}", digits.join("."), valuation)
            }
        }
    }
}

impl Serialize for PadicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PadicNumber", 4)?;
        st.serialize_field("value", &self.to_string())?;
        st.serialize_field("valuation", &self.valuation())?;
        st.serialize_field("relative_precision", &self.relative_precision())?;
        // null marks the exact zero
        st.serialize_field("absolute_precision", &self.absolute_precision())?;
        st.end()
    }
}

/// A point of the projective line over Q_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProjectivePoint {
    Finite(PadicNumber),
    Infinity,
}

/// The chordal metric on the projective line.
///
/// Errors only when a required norm depends on digits beyond the known
/// precision.
pub fn chordal_distance(x: &ProjectivePoint, y: &ProjectivePoint) -> Result<Radius> {
    use ProjectivePoint::*;
    match (x, y) {
        (Infinity, Infinity) => Ok(Radius::Zero),
        (Finite(z), Infinity) | (Infinity, Finite(z)) => {
            Ok(Radius::ONE.checked_div(&z.norm_or_one()?)?)
        }
        (Finite(z), Finite(w)) => {
            if z.prime() != w.prime() {
                return Err(Error::PrimeMismatch(z.prime().get(), w.prime().get()));
            }
            let diff = z.sub(w);
            let num = if diff.is_exact_zero() {
                Radius::Zero
            } else {
                diff.norm()?
            };
            num.checked_div(&(z.norm_or_one()? * w.norm_or_one()?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64, p: u64) -> PadicNumber {
        PadicNumber::parse_rational(n, d, p, DEFAULT_PRECISION).unwrap()
    }

    fn prime(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn parse_examples() {
        let z = q(0, 1, 3);
        assert!(z.is_exact_zero());
        assert_eq!(z.norm().unwrap(), Radius::Zero);

        let x = q(-7, 36, 3);
        assert_eq!(x.valuation(), Some(-2));
        assert_eq!(x.norm().unwrap(), Radius::from_int_log(2));

        let y = q(25, 1, 5);
        assert_eq!(y.valuation(), Some(2));
        assert_eq!(y.norm().unwrap(), Radius::from_int_log(-2));

        assert_eq!(q(1, 6, 3).norm().unwrap(), Radius::from_int_log(1));
        assert!(matches!(
            PadicNumber::parse_rational(1, 2, 9, 10),
            Err(Error::NotPrime(9))
        ));
        assert!(matches!(
            PadicNumber::parse_rational(1, 0, 3, 10),
            Err(Error::ZeroDenominator)
        ));
    }

    #[test]
    fn arithmetic_examples() {
        let s = q(5, 1, 5) + q(20, 1, 5);
        assert!(s.agrees_with(&q(25, 1, 5)));
        assert_eq!(s.norm().unwrap(), Radius::from_int_log(-2));
        // strict drop from the common input norm 1/5
        assert!(s.norm().unwrap() < q(5, 1, 5).norm().unwrap());

        let x = q(-7, 36, 3);
        assert_eq!(x.add(&PadicNumber::zero(prime(3))), x);

        for p in [2, 3, 5, 7] {
            assert_eq!(
                q(p as i64, 1, p).mul(&q(p as i64, 1, p)).valuation(),
                Some(2)
            );
        }
    }

    #[test]
    fn cancellation_lowers_precision() {
        let a = q(1, 1, 3);
        let b = q(1 + 81, 1, 3);
        let d = b.sub(&a);
        assert_eq!(d.valuation(), Some(4));
        assert_eq!(d.absolute_precision(), Some(64));
        assert_eq!(d.relative_precision(), 60);

        let zero = a.sub(&a);
        assert!(zero.is_zero_at_precision());
        assert!(!zero.is_exact_zero());
        assert!(matches!(zero.norm(), Err(Error::PrecisionExhausted(_))));
        assert!(zero.checked_div(&a).unwrap().is_zero_at_precision());
        assert!(matches!(a.checked_div(&zero), Err(Error::DivisionByZero)));
    }

    #[test]
    fn division_round_trips() {
        let x = q(-7, 36, 3);
        let y = q(5, 12, 3);
        let back = x.checked_div(&y).unwrap().mul(&y);
        assert!(back.agrees_with(&x));
        assert!(q(2, 3, 3).checked_div(&q(0, 1, 3)).is_err());
    }

    #[test]
    fn sqrt_examples() {
        let seven = q(7, 1, 3);
        let r = seven.sqrt().unwrap();
        assert_eq!(r.residue().unwrap(), Some(1));
        assert!(r.mul(&r).agrees_with(&seven));
        assert_eq!(r.relative_precision(), DEFAULT_PRECISION);

        assert_eq!(
            q(2, 1, 3).sqrt(),
            Err(Error::NoSquareRoot("unit is a non-residue mod p"))
        );
        assert_eq!(q(3, 1, 3).sqrt(), Err(Error::NoSquareRoot("odd valuation")));

        let three = q(9, 1, 3).sqrt().unwrap();
        assert!(three.agrees_with(&q(3, 1, 3)));

        assert!(matches!(
            q(1, 1, 2).sqrt(),
            Err(Error::UnsupportedPrime { p: 2, .. })
        ));
    }

    #[test]
    fn sqrt_uses_lower_residue() {
        // p = 13 is 1 mod 4 and exercises Tonelli-Shanks
        for p in [5u64, 7, 11, 13, 17] {
            for a in 1..p as i64 {
                let x = q(a + p as i64 * 4, 1, p);
                if let Ok(r) = x.sqrt() {
                    let res = r.residue().unwrap().unwrap();
                    assert!(res >= 1 && res <= (p - 1) / 2);
                    assert!(r.mul(&r).agrees_with(&x));
                }
            }
        }
    }

    #[test]
    fn digits_literal() {
        let p = prime(3);
        let x = PadicNumber::from_digits(&[1, 2, 0], -1, p).unwrap();
        // (1 + 2*3) / 3 = 7/3 known mod p^2
        assert_eq!(x.valuation(), Some(-1));
        assert_eq!(x.absolute_precision(), Some(2));
        assert!(x.agrees_with(&q(7, 3, 3)));
        assert_eq!(x.to_string(), "1.2.0*p^-1");

        let y = PadicNumber::from_digits(&[0, 0, 1], 0, p).unwrap();
        assert_eq!(y.valuation(), Some(2));
        assert!(PadicNumber::from_digits(&[3], 0, p).is_err());
    }

    #[test]
    fn chordal_examples() {
        use ProjectivePoint::*;
        assert_eq!(
            chordal_distance(&Infinity, &Infinity).unwrap(),
            Radius::Zero
        );
        let zero = Finite(q(0, 1, 5));
        assert_eq!(chordal_distance(&zero, &Infinity).unwrap(), Radius::ONE);
        for p in [3u64, 5, 7] {
            let a = Finite(q(p as i64, 1, p));
            let b = Finite(q((p * p) as i64, 1, p));
            assert_eq!(chordal_distance(&a, &b).unwrap(), Radius::from_int_log(-1));
        }
        let big = Finite(q(1, 9, 3));
        assert_eq!(
            chordal_distance(&big, &Infinity).unwrap(),
            Radius::from_int_log(-2)
        );
    }
}
