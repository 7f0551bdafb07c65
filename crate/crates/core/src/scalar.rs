//! Coefficient types polynomials can be generic over.
//!
//! `num_traits::Zero`/`One` need a context-free zero, which a p-adic number
//! does not have (it carries its prime). [`Scalar`] asks for zero and one
//! "like" an existing value instead, and is implemented for [`PadicNumber`]
//! and for exact rationals.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::padic::PadicNumber;

pub trait Scalar:
    Clone + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    /// The integer `k` in the same ring as `self`.
    fn int_like(&self, k: i64) -> Self;
    /// Exact zero (not merely zero to known precision).
    fn is_exact_zero(&self) -> bool;
}

impl Scalar for PadicNumber {
    fn zero_like(&self) -> Self {
        PadicNumber::zero(self.prime())
    }

    fn one_like(&self) -> Self {
        self.int_like(1)
    }

    fn int_like(&self, k: i64) -> Self {
        if k == 0 {
            return self.zero_like();
        }
        let n = self
            .relative_precision()
            .max(crate::padic::DEFAULT_PRECISION);
        PadicNumber::from_i64(k, self.prime(), n)
    }

    fn is_exact_zero(&self) -> bool {
        PadicNumber::is_exact_zero(self)
    }
}

impl Scalar for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }

    fn one_like(&self) -> Self {
        BigRational::one()
    }

    fn int_like(&self, k: i64) -> Self {
        BigRational::from_integer(BigInt::from(k))
    }

    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
}
