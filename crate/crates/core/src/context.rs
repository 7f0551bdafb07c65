//! Expansion certificates: `|f'| >= lambda > 1` on `B`, `f^{-1}(B) ⊆ B`, the
//! preimage decomposition of small disks, and the perturbation thresholds.

use serde::Serialize;

use crate::disk::{Disk, DiskRelation, Region};
use crate::error::{Error, Result};
use crate::newton::{newton_root_count, profile_of_coefficients};
use crate::padic::{PadicNumber, Prime};
use crate::poly::Polynomial;
use crate::radius::{Exponent, Radius};
use crate::roots::all_rational_roots;

/// `min_{2 <= l <= d} |l|^{1/(l-1)} * delta`.
pub fn mu_constant(d: usize, delta: Radius, p: Prime) -> Radius {
    assert!(d >= 2, "mu is defined for degree at least 2");
    let q = (2..=d as i64)
        .map(|l| Exponent::new(i64::from(p.valuation_of(l)), l - 1))
        .max()
        .expect("d >= 2");
    delta * Radius::from_valuation(q)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreimageDisk {
    pub center: PadicNumber,
    pub radius: Radius,
    pub derivative_norm: Radius,
    /// Member disk of the region holding the center, if any.
    pub member: Option<usize>,
}

impl PreimageDisk {
    pub fn disk(&self) -> Disk {
        Disk::new(self.center.clone(), self.radius)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InvarianceEvidence {
    /// The `d` preimage disks of a member disk, each inside a member.
    Preimages {
        target: Disk,
        preimages: Vec<PreimageDisk>,
    },
    /// Zeros of `f - w` in each member disk, constant over the target.
    Counts { target: Disk, counts: Vec<usize> },
    /// Newton polygon of `f - w` at the sphere radius, for every `|w| = r`:
    /// indices 0 and `d` tie at the maximum.
    Sphere {
        radius: Radius,
        constant_term: Radius,
        leading_term: Radius,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub map: String,
    pub region: Region,
    pub lambda: Radius,
    pub delta: Radius,
    pub mu: Radius,
    pub big_m: Radius,
    /// `|f'|` on each member disk, or on the sphere.
    pub derivative_norms: Vec<Radius>,
    pub invariance: Vec<InvarianceEvidence>,
}

/// The data `(B, lambda, delta, mu, M)` of a certified expanding map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionContext {
    map: Polynomial<PadicNumber>,
    region: Region,
    lambda: Radius,
    delta: Radius,
    mu: Radius,
    big_m: Radius,
    certificate: Certificate,
}

impl ExpansionContext {
    /// Certifies `map` on `region` with the region's own `delta`.
    pub fn certify(map: &Polynomial<PadicNumber>, region: &Region) -> Result<Self> {
        Self::certify_with_delta(map, region, region.inner_radius())
    }

    pub fn certify_with_delta(
        map: &Polynomial<PadicNumber>,
        region: &Region,
        delta: Radius,
    ) -> Result<Self> {
        let d = map.degree();
        if d < 2 {
            return Err(Error::InvalidArgument(format!(
                "map must have degree at least 2, got {d}"
            )));
        }
        check_region_prime(map, region)?;
        if delta.is_zero() || delta > region.inner_radius() {
            return Err(Error::InvalidArgument(format!(
                "delta = {delta} must lie in (0, {}]",
                region.inner_radius()
            )));
        }
        let derivative_norms = expansion_norms(map, region)?;
        let lambda = *derivative_norms.iter().min().expect("nonempty region");
        if lambda <= Radius::ONE {
            return Err(Error::violation("lambda > 1", lambda, Radius::ONE));
        }
        let mu = mu_constant(d, delta, map.prime());
        let invariance = backward_invariance(map, region, mu)?;
        let big_m = region.bound();
        let certificate = Certificate {
            map: map.to_string(),
            region: region.clone(),
            lambda,
            delta,
            mu,
            big_m,
            derivative_norms,
            invariance,
        };
        Ok(ExpansionContext {
            map: map.clone(),
            region: region.clone(),
            lambda,
            delta,
            mu,
            big_m,
            certificate,
        })
    }

    pub fn map(&self) -> &Polynomial<PadicNumber> {
        &self.map
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn lambda(&self) -> Radius {
        self.lambda
    }

    pub fn delta(&self) -> Radius {
        self.delta
    }

    pub fn mu(&self) -> Radius {
        self.mu
    }

    pub fn big_m(&self) -> Radius {
        self.big_m
    }

    pub fn degree(&self) -> usize {
        self.map.degree()
    }

    pub fn prime(&self) -> Prime {
        self.map.prime()
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    /// `min(lambda / M^{i-1}, mu / M^i)`.
    pub fn tau(&self, i: usize) -> Radius {
        let i = i as i64;
        let eta1 = self.lambda * self.big_m.pow(1 - i);
        let eta2 = self.mu * self.big_m.pow(-i);
        eta1.min(eta2)
    }

    /// `min_k tau(k)` over `0..=d`.
    pub fn tau_min(&self) -> Radius {
        (0..=self.degree())
            .map(|i| self.tau(i))
            .min()
            .expect("d >= 2")
    }

    /// The `d` disks making up `f^{-1}(target)`.
    pub fn preimage_disks(&self, target: &Disk) -> Result<Vec<PreimageDisk>> {
        preimage_disks(&self.map, &self.region, self.mu, target)
    }

    /// Checks that `g` has `|g'| >= lambda` on `B` and `g^{-1}(B) ⊆ B`.
    pub fn verify_s_membership(&self, g: &Polynomial<PadicNumber>) -> Result<Certificate> {
        if g.degree() != self.degree() {
            return Err(Error::DegreeMismatch(self.degree(), g.degree()));
        }
        if g.prime() != self.prime() {
            return Err(Error::PrimeMismatch(self.prime().get(), g.prime().get()));
        }
        let wrap = |e: Error| {
            if e.is_mathematical() {
                Error::NotInS(Box::new(e))
            } else {
                e
            }
        };
        let norms = expansion_norms(g, &self.region).map_err(wrap)?;
        let low = *norms.iter().min().expect("nonempty region");
        if low < self.lambda {
            return Err(wrap(Error::violation(
                "|g'| >= lambda on B",
                low,
                self.lambda,
            )));
        }
        let invariance = backward_invariance(g, &self.region, self.mu).map_err(wrap)?;
        Ok(Certificate {
            map: g.to_string(),
            region: self.region.clone(),
            lambda: self.lambda,
            delta: self.delta,
            mu: self.mu,
            big_m: self.big_m,
            derivative_norms: norms,
            invariance,
        })
    }

    /// `|l| * |f^{(l)}(z0) / l!| * delta^{l-1} < |f'(z0)|` for `2 <= l <= d`.
    pub fn check_dominance(&self, z0: &PadicNumber) -> Result<()> {
        dominance(&self.map, z0, self.delta, |l| {
            Radius::from_int_log(-i64::from(self.prime().valuation_of(l as i64)))
        })
    }
}

fn check_region_prime(map: &Polynomial<PadicNumber>, region: &Region) -> Result<()> {
    if let Region::UnionOfDisks { disks } = region {
        if let Some(d) = disks.iter().find(|d| d.prime() != map.prime()) {
            return Err(Error::PrimeMismatch(map.prime().get(), d.prime().get()));
        }
    }
    Ok(())
}

/// `|f'|` on each member of the region, which must be constant there.
pub fn expansion_norms(map: &Polynomial<PadicNumber>, region: &Region) -> Result<Vec<Radius>> {
    let df = map.derivative();
    match region {
        Region::UnionOfDisks { disks } => disks
            .iter()
            .map(|d| {
                let zeros = newton_root_count(&df, d)?;
                if zeros > 0 {
                    return Err(Error::CriticalPoint {
                        center: d.center().to_string(),
                        zeros,
                    });
                }
                df.evaluate(d.center()).norm()
            })
            .collect(),
        Region::Sphere { radius } => {
            let prof = profile_of_coefficients(df.coefficients(), *radius)?;
            if prof.count != prof.open_count {
                return Err(Error::CriticalPoint {
                    center: format!("sphere {radius}"),
                    zeros: prof.count - prof.open_count,
                });
            }
            Ok(vec![prof.max])
        }
    }
}

/// `lambda = min |f'|` over the region; fails unless `lambda > 1`.
pub fn certify_expansion(map: &Polynomial<PadicNumber>, region: &Region) -> Result<Radius> {
    let lambda = *expansion_norms(map, region)?
        .iter()
        .min()
        .expect("nonempty region");
    if lambda <= Radius::ONE {
        return Err(Error::violation("lambda > 1", lambda, Radius::ONE));
    }
    Ok(lambda)
}

/// Decides `map^{-1}(region) ⊆ region` exactly over C_p.
pub fn backward_invariance(
    map: &Polynomial<PadicNumber>,
    region: &Region,
    mu: Radius,
) -> Result<Vec<InvarianceEvidence>> {
    match region {
        Region::UnionOfDisks { disks } => disks
            .iter()
            .map(|target| member_invariance(map, region, disks, target, mu))
            .collect(),
        Region::Sphere { radius } => sphere_invariance(map, *radius).map(|e| vec![e]),
    }
}

fn member_invariance(
    map: &Polynomial<PadicNumber>,
    region: &Region,
    disks: &[Disk],
    target: &Disk,
    mu: Radius,
) -> Result<InvarianceEvidence> {
    let d = map.degree();
    let s = target.radius();
    let w0 = target.center();
    // Zeros of f - w in member j number L_j when |f(a_j) - w| <= m_j and
    // 0 otherwise; the total must be d for every w in the target.
    let mut counts = Vec::with_capacity(disks.len());
    let mut total = 0;
    let mut uniform = true;
    for member in disks {
        let shifted = map.taylor_shift(member.center());
        let r = member.radius();
        let mut m = Radius::Zero;
        let mut big_l = 0;
        for k in 1..=d {
            let term = shifted.coeff(k).norm_bound() * r.pow(k as i64);
            if term >= m {
                m = term;
                big_l = k;
            }
        }
        let offset = shifted.coeff(0).sub(w0);
        let count = if !offset.norm_at_most(s)? {
            if offset.norm_at_most(m)? {
                big_l
            } else {
                0
            }
        } else if m >= s {
            big_l
        } else {
            uniform = false;
            big_l
        };
        counts.push(count);
        total += count;
    }
    if uniform && total == d {
        if s <= mu {
            if let Ok(preimages) = preimage_disks(map, region, mu, target) {
                return Ok(InvarianceEvidence::Preimages {
                    target: target.clone(),
                    preimages,
                });
            }
        }
        return Ok(InvarianceEvidence::Counts {
            target: target.clone(),
            counts,
        });
    }
    // Not invariant. Name an escaping preimage disk when one is Q_p-rational.
    if s <= mu {
        if let Ok(pre) = preimage_disks_unchecked(map, mu, target) {
            if let Some(esc) = pre.iter().find(|pd| {
                !disks
                    .iter()
                    .any(|m| pd.disk().is_within(m).unwrap_or(false))
            }) {
                return Err(Error::EscapingPreimage {
                    center: esc.center.to_string(),
                    radius: esc.radius,
                });
            }
        }
    }
    Err(Error::PreimagesOutside {
        target: target.to_string(),
        inside: total.min(d),
        degree: d,
    })
}

fn sphere_invariance(map: &Polynomial<PadicNumber>, radius: Radius) -> Result<InvarianceEvidence> {
    let d = map.degree();
    let c0 = map.coeff(0);
    if c0.norm_bound() == radius && !c0.is_zero_at_precision() {
        // w = f(0) lies on the sphere and 0 does not
        return Err(Error::EscapingPreimage {
            center: PadicNumber::zero(map.prime()).to_string(),
            radius: Radius::Zero,
        });
    }
    let c0_norm = if c0.is_zero_at_precision() {
        if c0.norm_bound() >= radius {
            return Err(Error::Undecidable(format!(
                "|f(0)| against the sphere radius {radius}"
            )));
        }
        Radius::Zero
    } else {
        c0.norm()?
    };
    let t0 = c0_norm.max(radius);
    let terms: Vec<Radius> = (0..=d)
        .map(|k| {
            if k == 0 {
                t0
            } else {
                map.coeff(k).norm_bound() * radius.pow(k as i64)
            }
        })
        .collect();
    let max = *terms.iter().max().expect("d >= 1");
    let td = terms[d];
    if t0 == max && td == max {
        return Ok(InvarianceEvidence::Sphere {
            radius,
            constant_term: t0,
            leading_term: td,
        });
    }
    let hi = (0..=d).rev().find(|&k| terms[k] == max).expect("attained");
    let lo = (0..=d).find(|&k| terms[k] == max).expect("attained");
    Err(Error::PreimagesOutside {
        target: format!("|w| = {radius}"),
        inside: hi - lo,
        degree: d,
    })
}

/// The decomposition `f^{-1}(D(w, r)) = ⊔ D(z_k, r / |f'(z_k)|)`.
///
/// Requires `w` in the region and `r <= mu`; every returned disk is checked
/// to map bijectively onto the target.
pub fn preimage_disks(
    map: &Polynomial<PadicNumber>,
    region: &Region,
    mu: Radius,
    target: &Disk,
) -> Result<Vec<PreimageDisk>> {
    if !region.contains(target.center())? {
        return Err(Error::NotInRegion);
    }
    let mut out = preimage_disks_unchecked(map, mu, target)?;
    for pd in &mut out {
        pd.member = region.member_index(&pd.center)?;
    }
    Ok(out)
}

fn preimage_disks_unchecked(
    map: &Polynomial<PadicNumber>,
    mu: Radius,
    target: &Disk,
) -> Result<Vec<PreimageDisk>> {
    let r = target.radius();
    if r.is_zero() {
        return Err(Error::InvalidArgument(
            "target radius must be positive".into(),
        ));
    }
    if r > mu {
        return Err(Error::violation("r <= mu", r, mu));
    }
    let d = map.degree();
    let shifted = map.add_constant(&target.center().neg());
    let roots = all_rational_roots(&shifted)?;
    if roots.len() != d {
        return Err(Error::RootCount {
            expected: d,
            found: roots.len(),
        });
    }
    let df = map.derivative();
    let mut out: Vec<PreimageDisk> = Vec::with_capacity(d);
    for z in roots {
        let dn = df.evaluate(&z).norm()?;
        let radius = r.checked_div(&dn)?;
        if radius >= r {
            return Err(Error::violation("R_k < r", radius, r));
        }
        // f is a bijection of D(z, R) onto D(w, r)
        dominance(map, &z, radius, |_| Radius::ONE)?;
        out.push(PreimageDisk {
            center: z,
            radius,
            derivative_norm: dn,
            member: None,
        });
    }
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            if out[i].disk().relation(&out[j].disk())? != DiskRelation::Disjoint {
                return Err(Error::InvalidArgument(format!(
                    "preimage disks around {} and {} overlap",
                    out[i].center, out[j].center
                )));
            }
        }
    }
    Ok(out)
}

/// `weight(l) * |f^{(l)}(z0)/l!| * radius^{l-1} < |f'(z0)|` for `2 <= l <= d`.
fn dominance(
    map: &Polynomial<PadicNumber>,
    z0: &PadicNumber,
    radius: Radius,
    weight: impl Fn(usize) -> Radius,
) -> Result<()> {
    let shifted = map.taylor_shift(z0);
    let b1 = shifted.coeff(1).norm()?;
    for l in 2..=map.degree() {
        let lhs = weight(l) * shifted.coeff(l).norm_bound() * radius.pow(l as i64 - 1);
        if lhs >= b1 {
            return Err(Error::violation(
                format!("dominance at l = {l} around {z0}"),
                lhs,
                b1,
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::DEFAULT_PRECISION;
    use num_bigint::BigInt;
    use num_rational::{BigRational, Ratio};

    fn poly(p: u64, c: &[(i64, i64)]) -> Polynomial<PadicNumber> {
        let r: Vec<BigRational> = c
            .iter()
            .map(|&(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
            .collect();
        Polynomial::from_rationals(&r, Prime::new(p).unwrap(), DEFAULT_PRECISION)
    }

    fn num(p: u64, n: i64, d: i64) -> PadicNumber {
        PadicNumber::parse_rational(n, d, p, DEFAULT_PRECISION).unwrap()
    }

    fn big_f() -> Polynomial<PadicNumber> {
        poly(3, &[(0, 1), (-1, 3), (1, 3)])
    }

    fn branch_region() -> Region {
        let r = Radius::from_int_log(-1);
        Region::union_of_disks(vec![Disk::new(num(3, 0, 1), r), Disk::new(num(3, 1, 1), r)])
            .unwrap()
    }

    #[test]
    fn mu_examples() {
        let delta = Radius::from_int_log(-1);
        let p3 = Prime::new(3).unwrap();
        let p2 = Prime::new(2).unwrap();
        assert_eq!(mu_constant(2, delta, p3), delta);
        assert_eq!(mu_constant(2, delta, p2), delta * Radius::from_int_log(-1));
        assert_eq!(mu_constant(4, delta, p2), delta * Radius::from_int_log(-1));
        // l = 3 at p = 3 gives |3|^{1/2}
        assert_eq!(
            mu_constant(4, Radius::ONE, p3),
            Radius::from_valuation(Ratio::new(1, 2))
        );
    }

    #[test]
    fn branch_map_certificate() {
        let ctx = ExpansionContext::certify(&big_f(), &branch_region()).unwrap();
        assert_eq!(ctx.lambda(), Radius::from_int_log(1));
        assert_eq!(ctx.delta(), Radius::from_int_log(-1));
        assert_eq!(ctx.mu(), Radius::from_int_log(-1));
        assert_eq!(ctx.big_m(), Radius::ONE);
        for ev in &ctx.certificate().invariance {
            let InvarianceEvidence::Preimages { preimages, .. } = ev else {
                panic!("expected preimage evidence");
            };
            assert_eq!(preimages.len(), 2);
            for pd in preimages {
                assert_eq!(pd.radius, Radius::from_int_log(-2));
                assert!(pd.member.is_some());
            }
        }
    }

    #[test]
    fn branch_map_preimages_of_zero_disk() {
        let ctx = ExpansionContext::certify(&big_f(), &branch_region()).unwrap();
        let target = Disk::new(num(3, 0, 1), Radius::from_int_log(-1));
        let pre = ctx.preimage_disks(&target).unwrap();
        assert_eq!(pre.len(), 2);
        assert!(pre
            .iter()
            .any(|d| d.center.is_exact_zero() || d.center.agrees_with(&num(3, 0, 1))));
        assert!(pre.iter().any(|d| d.center.agrees_with(&num(3, 1, 1))));
        let big = Disk::new(num(3, 0, 1), Radius::ONE);
        assert!(matches!(
            ctx.preimage_disks(&big),
            Err(Error::Violation { .. })
        ));
        let outside = Disk::new(num(3, 2, 1), Radius::from_int_log(-1));
        assert!(matches!(
            ctx.preimage_disks(&outside),
            Err(Error::NotInRegion)
        ));
    }

    #[test]
    fn single_disk_is_not_invariant() {
        let b = Region::union_of_disks(vec![Disk::new(num(3, 0, 1), Radius::from_int_log(-1))])
            .unwrap();
        let err = ExpansionContext::certify(&big_f(), &b).unwrap_err();
        let Error::EscapingPreimage { center, radius } = err else {
            panic!("unexpected {err:?}");
        };
        assert!(center.starts_with("1"));
        assert_eq!(radius, Radius::from_int_log(-2));
    }

    #[test]
    fn quadratic_sphere_certificate() {
        let f = poly(3, &[(-7, 36), (0, 1), (1, 1)]);
        let b = Region::sphere(Radius::from_int_log(1)).unwrap();
        let ctx = ExpansionContext::certify(&f, &b).unwrap();
        assert_eq!(ctx.lambda(), Radius::from_int_log(1));
        assert_eq!(ctx.big_m(), Radius::from_int_log(1));
        assert_eq!(ctx.delta(), Radius::ONE);
        assert_eq!(ctx.mu(), Radius::ONE);
        assert_eq!(ctx.tau(0), Radius::ONE);
        assert_eq!(ctx.tau(2), Radius::from_int_log(-2));
    }

    #[test]
    fn squaring_is_not_expanding() {
        let f = poly(5, &[(0, 1), (0, 1), (1, 1)]);
        let b = Region::union_of_disks(vec![Disk::new(num(5, 1, 1), Radius::from_int_log(-1))])
            .unwrap();
        assert!(matches!(
            certify_expansion(&f, &b),
            Err(Error::Violation { .. })
        ));
    }

    #[test]
    fn critical_point_in_disk() {
        let f = big_f();
        let b = Region::union_of_disks(vec![Disk::new(num(3, 0, 1), Radius::ONE)]).unwrap();
        assert!(matches!(
            certify_expansion(&f, &b),
            Err(Error::CriticalPoint { zeros: 1, .. })
        ));
    }
}
