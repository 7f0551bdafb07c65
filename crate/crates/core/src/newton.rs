//! Counting zeros in a closed disk from coefficient norms.
//!
//! After recentering `f(z0 + t) = sum c_k t^k`, the number of zeros of `f` in
//! `D(z0, r)` (over C_p, with multiplicity) is the largest index attaining
//! `max_k |c_k| r^k`.

use serde::Serialize;

use crate::disk::Disk;
use crate::error::{Error, Result};
use crate::padic::PadicNumber;
use crate::poly::Polynomial;
use crate::radius::Radius;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonTerm {
    pub index: usize,
    /// `|c_k| r^k`, or its upper bound when `exact` is false.
    pub value: Radius,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonProfile {
    pub terms: Vec<NewtonTerm>,
    pub max: Radius,
    /// Zeros in the closed disk.
    pub count: usize,
    /// Zeros in the open disk of the same radius.
    pub open_count: usize,
}

/// Newton data of `sum c_k t^k` on `|t| <= r`, coefficients already centred.
pub fn profile_of_coefficients(coeffs: &[PadicNumber], r: Radius) -> Result<NewtonProfile> {
    if r.is_zero() {
        return Err(Error::InvalidArgument(
            "disk radius must be positive".into(),
        ));
    }
    let terms: Vec<NewtonTerm> = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| NewtonTerm {
            index: k,
            value: c.norm_bound() * r.pow(k as i64),
            exact: !c.is_zero_at_precision() || c.is_exact_zero(),
        })
        .collect();
    let max = terms
        .iter()
        .filter(|t| t.exact)
        .map(|t| t.value)
        .max()
        .unwrap_or(Radius::Zero);
    if max.is_zero() {
        return Err(if terms.iter().all(|t| t.exact) {
            Error::InvalidArgument("the zero polynomial has no root count".into())
        } else {
            Error::Undecidable("every coefficient vanishes at its known precision".into())
        });
    }
    let attaining = || terms.iter().filter(|t| t.exact && t.value == max);
    let count = attaining().map(|t| t.index).max().expect("max is attained");
    let open_count = attaining().map(|t| t.index).min().expect("max is attained");
    for t in terms.iter().filter(|t| !t.exact) {
        let unsafe_high = t.index > count && t.value >= max;
        let unsafe_low = t.index < open_count && t.value >= max;
        let unsafe_mid = t.value > max;
        if unsafe_high || unsafe_low || unsafe_mid {
            return Err(Error::Undecidable(format!(
                "|c_{}| r^{} <= {} against max {}; more precision needed",
                t.index, t.index, t.value, max
            )));
        }
    }
    Ok(NewtonProfile {
        terms,
        max,
        count,
        open_count,
    })
}

pub fn newton_profile(f: &Polynomial<PadicNumber>, disk: &Disk) -> Result<NewtonProfile> {
    if f.prime() != disk.prime() {
        return Err(Error::PrimeMismatch(f.prime().get(), disk.prime().get()));
    }
    let g = f.taylor_shift(disk.center());
    profile_of_coefficients(g.coefficients(), disk.radius())
}

/// Number of zeros of `f` in the closed disk, with multiplicity.
pub fn newton_root_count(f: &Polynomial<PadicNumber>, disk: &Disk) -> Result<usize> {
    Ok(newton_profile(f, disk)?.count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Prime;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn poly(p: u64, c: &[(i64, i64)]) -> Polynomial<PadicNumber> {
        let r: Vec<BigRational> = c
            .iter()
            .map(|&(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
            .collect();
        Polynomial::from_rationals(&r, Prime::new(p).unwrap(), 40)
    }

    fn disk(p: u64, n: i64, d: i64, log_r: i64) -> Disk {
        Disk::new(
            PadicNumber::parse_rational(n, d, p, 40).unwrap(),
            Radius::from_int_log(log_r),
        )
    }

    #[test]
    fn z_has_one_root_in_unit_disk() {
        assert_eq!(
            newton_root_count(&poly(5, &[(0, 1), (1, 1)]), &disk(5, 0, 1, 0)).unwrap(),
            1
        );
    }

    #[test]
    fn fixed_point_polynomial_on_its_sphere() {
        // z^2 - z + c with c = -7/36, |c| = 9
        let f = poly(3, &[(-7, 36), (-1, 1), (1, 1)]);
        let prof = newton_profile(&f, &disk(3, 0, 1, 1)).unwrap();
        assert_eq!(prof.count, 2);
        assert_eq!(prof.open_count, 0);
        assert_eq!(prof.terms[0].value, prof.terms[2].value);
        // z^4 - z + c at p = 3 with |c| = 3^4
        let f4 = poly(3, &[(1, 81), (-1, 1), (0, 1), (0, 1), (1, 1)]);
        assert_eq!(newton_root_count(&f4, &disk(3, 0, 1, 1)).unwrap(), 4);
    }

    #[test]
    fn branch_polynomial_counts() {
        // z^2 - z - p w with |w| <= 1
        for w in [0, 1, 2, 7] {
            let f = poly(3, &[(-3 * w, 1), (-1, 1), (1, 1)]);
            assert_eq!(newton_root_count(&f, &disk(3, 0, 1, 0)).unwrap(), 2);
            assert_eq!(newton_root_count(&f, &disk(3, 0, 1, -1)).unwrap(), 1);
            assert_eq!(newton_root_count(&f, &disk(3, 1, 1, -1)).unwrap(), 1);
            assert_eq!(newton_root_count(&f, &disk(3, 2, 1, -1)).unwrap(), 0);
        }
    }

    #[test]
    fn rational_radius_and_double_roots() {
        // (z - 3)^2 = z^2 - 6z + 9 around 0
        let f = poly(3, &[(9, 1), (-6, 1), (1, 1)]);
        let half = Disk::new(
            PadicNumber::zero(Prime::new(3).unwrap()),
            Radius::from_valuation(num_rational::Ratio::new(3, 2)),
        );
        assert_eq!(newton_root_count(&f, &half).unwrap(), 0);
        assert_eq!(newton_root_count(&f, &disk(3, 0, 1, -1)).unwrap(), 2);
        // z^2 - 3 has both roots on |z| = 3^{-1/2}
        let g = poly(3, &[(-3, 1), (0, 1), (1, 1)]);
        let prof = newton_profile(&g, &half).unwrap();
        assert_eq!(prof.count, 0);
        let on = Disk::new(
            PadicNumber::zero(Prime::new(3).unwrap()),
            Radius::from_valuation(num_rational::Ratio::new(1, 2)),
        );
        let prof = newton_profile(&g, &on).unwrap();
        assert_eq!((prof.open_count, prof.count), (0, 2));
    }

    #[test]
    fn unknown_digits_are_reported() {
        let p = Prime::new(3).unwrap();
        let f = Polynomial::new(vec![
            PadicNumber::vanishing(p, 2),
            PadicNumber::from_i64(1, p, 10),
        ]);
        let d = Disk::new(PadicNumber::zero(p), Radius::from_int_log(-2));
        assert!(matches!(
            newton_root_count(&f, &d),
            Err(Error::Undecidable(_))
        ));
        let d = Disk::new(PadicNumber::zero(p), Radius::from_int_log(-1));
        assert_eq!(newton_root_count(&f, &d).unwrap(), 1);
    }
}
