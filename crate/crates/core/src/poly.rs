//! Dense univariate polynomials, generic over the coefficient [`Scalar`].

use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::padic::{PadicNumber, Prime};
use crate::scalar::Scalar;

/// `coeffs[k]` is the coefficient of `z^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Polynomial<S> {
    /// Trailing exact zeros are trimmed; at least one coefficient is kept.
    pub fn new(mut coeffs: Vec<S>) -> Self {
        assert!(!coeffs.is_empty(), "a polynomial needs a coefficient");
        while coeffs.len() > 1 && coeffs.last().is_some_and(S::is_exact_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[S] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.coeffs[0].zero_like())
    }

    pub fn leading(&self) -> &S {
        self.coeffs.last().expect("nonempty")
    }

    /// Horner evaluation.
    pub fn evaluate(&self, z: &S) -> S {
        let mut acc = self.leading().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc * z.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Polynomial::new(vec![self.coeffs[0].zero_like()]);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.int_like(k as i64) * c.clone())
            .collect();
        Polynomial::new(coeffs)
    }

    /// Coefficients of `g` with `g(t) = f(z0 + t)`.
    ///
    /// Coefficient `k` is `f^{(k)}(z0) / k!`, obtained by repeated synthetic
    /// division by `z - z0`; no factorial is ever divided out.
    pub fn taylor_shift(&self, z0: &S) -> Self {
        let mut b = self.coeffs.clone();
        let d = self.degree();
        for i in 0..d {
            for j in (i..d).rev() {
                b[j] = b[j].clone() + z0.clone() * b[j + 1].clone();
            }
        }
        Polynomial::new(b)
    }

    /// `f(z) + eps * z^i`.
    pub fn perturb(&self, i: usize, eps: &S) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() <= i {
            coeffs.resize(i + 1, self.coeffs[0].zero_like());
        }
        coeffs[i] = coeffs[i].clone() + eps.clone();
        Polynomial::new(coeffs)
    }

    pub fn add_constant(&self, c: &S) -> Self {
        self.perturb(0, c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    /// `f(z) - z`, whose roots are the fixed points of `f`.
    pub fn fixed_point_polynomial(&self) -> Self {
        let one = self.coeffs[0].one_like();
        self.perturb(1, &(-one))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }
}

impl Polynomial<PadicNumber> {
    /// Checked constructor: one shared prime and a leading coefficient that
    /// is nonzero at its known precision.
    pub fn from_padic(coeffs: Vec<PadicNumber>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty coefficient list".into()))?;
        let p = first.prime();
        if let Some(c) = coeffs.iter().find(|c| c.prime() != p) {
            return Err(Error::PrimeMismatch(p.get(), c.prime().get()));
        }
        let poly = Polynomial::new(coeffs);
        if poly.degree() > 0 && poly.leading().is_zero_at_precision() {
            return Err(Error::PrecisionExhausted(
                "leading coefficient is zero at its known precision".into(),
            ));
        }
        Ok(poly)
    }

    /// Rational coefficients parsed at `precision` plus guard digits.
    pub fn from_rationals(coeffs: &[BigRational], prime: Prime, precision: u32) -> Self {
        let n = precision + crate::padic::GUARD_DIGITS;
        Polynomial::new(
            coeffs
                .iter()
                .map(|c| PadicNumber::from_rational(c, prime, n))
                .collect(),
        )
    }

    pub fn prime(&self) -> Prime {
        self.coeffs[0].prime()
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_exact_zero() && self.coeffs.len() > 1 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*z")?,
                _ => write!(f, "({c})*z^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::DEFAULT_PRECISION;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn rpoly(c: &[(i64, i64)]) -> Polynomial<BigRational> {
        Polynomial::new(c.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn evaluate_examples() {
        let c = rat(-7, 36);
        let f = Polynomial::new(vec![c.clone(), rat(0, 1), rat(1, 1)]);
        assert_eq!(f.evaluate(&rat(0, 1)), c);

        let p = Prime::new(3).unwrap();
        // F(z) = z(z - 1)/p fixes 1 + p
        let big_f = Polynomial::from_rationals(&[rat(0, 1), rat(-1, 3), rat(1, 3)], p, 40);
        let four = PadicNumber::from_i64(4, p, 40);
        assert!(big_f.evaluate(&four).agrees_with(&four));
    }

    #[test]
    fn taylor_shift_examples() {
        let sq = rpoly(&[(0, 1), (0, 1), (1, 1)]);
        assert_eq!(
            sq.taylor_shift(&rat(1, 1)),
            rpoly(&[(1, 1), (2, 1), (1, 1)])
        );
        let f = rpoly(&[(3, 2), (-1, 5), (7, 1), (1, 3)]);
        assert_eq!(f.taylor_shift(&rat(0, 1)), f);
        let z0 = rat(-2, 7);
        let g = f.taylor_shift(&z0);
        for t in [rat(0, 1), rat(1, 1), rat(5, 3), rat(-9, 4)] {
            assert_eq!(g.evaluate(&t), f.evaluate(&(z0.clone() + t.clone())));
        }
        assert_eq!(g.taylor_shift(&(-z0)), f);
    }

    #[test]
    fn derivative_and_perturb() {
        let f = rpoly(&[(5, 1), (0, 1), (1, 1)]);
        assert_eq!(f.derivative(), rpoly(&[(0, 1), (2, 1)]));
        assert_eq!(f.perturb(1, &rat(0, 1)), f);
        assert_eq!(f.perturb(0, &rat(1, 2)), rpoly(&[(11, 2), (0, 1), (1, 1)]));
        assert_eq!(f.perturb(4, &rat(3, 1)).degree(), 4);
        assert_eq!(rpoly(&[(4, 1)]).derivative(), rpoly(&[(0, 1)]));
    }

    #[test]
    fn padic_constructor_checks() {
        let p3 = Prime::new(3).unwrap();
        let p5 = Prime::new(5).unwrap();
        let mixed = vec![
            PadicNumber::from_i64(1, p3, DEFAULT_PRECISION),
            PadicNumber::from_i64(1, p5, DEFAULT_PRECISION),
        ];
        assert!(matches!(
            Polynomial::from_padic(mixed),
            Err(Error::PrimeMismatch(3, 5))
        ));
        let one = PadicNumber::from_i64(1, p3, 10);
        let vanishing_lead = vec![one.clone(), one.sub(&one)];
        assert!(Polynomial::from_padic(vanishing_lead).is_err());
    }
}
