//! The conjugacy `h` between a certified expanding map `f` and a nearby `g`,
//! evaluated pointwise by backward shadowing along the forward `f`-orbit.

use serde::Serialize;

use crate::context::{Certificate, ExpansionContext};
use crate::disk::{Disk, Region};
use crate::error::{Error, Result};
use crate::padic::{PadicNumber, Prime};
use crate::poly::Polynomial;
use crate::radius::{steps_below, Radius};
use crate::roots::{isolate_roots, unique_root_in_disk, DEFAULT_SPLIT_DEPTH};

/// A certified pair `(f, g)` with `g` in the expanding class of `f` and
/// `sup_B |g - f| <= mu`.
#[derive(Clone, Debug)]
pub struct ConjugacyProblem {
    ctx: ExpansionContext,
    g: Polynomial<PadicNumber>,
    drift: Radius,
    g_certificate: Certificate,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShadowingTrace {
    pub point: PadicNumber,
    pub depth: usize,
    pub forward_orbit: Vec<PadicNumber>,
    /// `h_k(z)` for `k = 0..=depth`.
    pub backward_values: Vec<PadicNumber>,
    /// `|h_{k+1}(z) - h_k(z)|` (upper bounds where digits ran out).
    pub corrections: Vec<Radius>,
    /// `mu / lambda^{k+1}`, the bound each correction must meet.
    pub correction_bounds: Vec<Radius>,
    pub certified_error: Radius,
    pub value: PadicNumber,
}

fn coefficient_gap(a: &PadicNumber, b: &PadicNumber) -> Radius {
    if a == b {
        Radius::Zero
    } else {
        a.sub(b).norm_bound()
    }
}

impl ConjugacyProblem {
    /// Coefficientwise check `max_k |a_k - b_k| < min_k tau(k)`, then
    /// membership of `g` in the expanding class.
    pub fn neighborhood_check(ctx: &ExpansionContext, g: &Polynomial<PadicNumber>) -> Result<Self> {
        check_shape(ctx, g)?;
        let tau = ctx.tau_min();
        let f = ctx.map();
        for k in 0..=ctx.degree() {
            let diff = coefficient_gap(&f.coeff(k), &g.coeff(k));
            if diff >= tau {
                return Err(Error::CoefficientBound {
                    index: k,
                    diff,
                    tau,
                });
            }
        }
        let problem = Self::build(ctx, g)?;
        debug_assert!(problem.drift <= ctx.mu());
        Ok(problem)
    }

    /// Accepts any `g` in the expanding class with certified drift
    /// `sup_B |g - f| <= mu`, bounded by `max_k |a_k - b_k| M^k`.
    pub fn from_drift(ctx: &ExpansionContext, g: &Polynomial<PadicNumber>) -> Result<Self> {
        check_shape(ctx, g)?;
        Self::build(ctx, g)
    }

    fn build(ctx: &ExpansionContext, g: &Polynomial<PadicNumber>) -> Result<Self> {
        let drift = drift_bound(ctx, g);
        if drift > ctx.mu() {
            return Err(Error::violation("sup_B |g - f| <= mu", drift, ctx.mu()));
        }
        let g_certificate = ctx.verify_s_membership(g)?;
        Ok(ConjugacyProblem {
            ctx: ctx.clone(),
            g: g.clone(),
            drift,
            g_certificate,
        })
    }

    pub fn f(&self) -> &Polynomial<PadicNumber> {
        self.ctx.map()
    }

    pub fn g(&self) -> &Polynomial<PadicNumber> {
        &self.g
    }

    pub fn ctx(&self) -> &ExpansionContext {
        &self.ctx
    }

    pub fn drift(&self) -> Radius {
        self.drift
    }

    pub fn lambda(&self) -> Radius {
        self.ctx.lambda()
    }

    pub fn g_certificate(&self) -> &Certificate {
        &self.g_certificate
    }

    /// Smallest `n` with `mu / lambda^n < target`.
    pub fn depth_for(&self, target: Radius) -> Result<usize> {
        if target.is_zero() {
            return Err(Error::InvalidArgument("target must be positive".into()));
        }
        let n = steps_below(self.ctx.mu(), self.ctx.lambda(), target)
            .expect("lambda > 1 and positive radii");
        Ok(n as usize)
    }

    /// The same construction with `f` and `g` exchanged.
    pub fn reversed(&self) -> Result<Self> {
        let ctx =
            ExpansionContext::certify_with_delta(&self.g, self.ctx.region(), self.ctx.delta())?;
        Self::from_drift(&ctx, self.ctx.map())
    }

    /// `h(z)` within `target`.
    pub fn conjugate_point(&self, z: &PadicNumber, target: Radius) -> Result<PadicNumber> {
        Ok(self.trace(z, target)?.value)
    }

    pub fn trace(&self, z: &PadicNumber, target: Radius) -> Result<ShadowingTrace> {
        let n = self.depth_for(target)?;
        self.trace_at_depth(z, n)
    }

    /// Shadowing with an explicit depth `n`; the certified error is
    /// `mu / lambda^{n+1}`.
    pub fn trace_at_depth(&self, z: &PadicNumber, n: usize) -> Result<ShadowingTrace> {
        let f = self.ctx.map();
        let region = self.ctx.region();
        let mu = self.ctx.mu();
        let lambda = self.ctx.lambda();

        let mut orbit = Vec::with_capacity(n + 1);
        let mut x = z.clone();
        for step in 0..=n {
            if !region.contains(&x)? {
                return Err(Error::OrbitEscaped { step });
            }
            orbit.push(x.clone());
            if step < n {
                x = f.evaluate(&x);
            }
        }

        // search radius around each orbit point for the g-preimage
        let dg = self.g.derivative();
        let search: Vec<Radius> = orbit
            .iter()
            .map(|x| mu.checked_div(&dg.evaluate(x).norm()?))
            .collect::<Result<_>>()?;

        // row[j] holds h_k(z_j); after k rounds the row has n + 1 - k entries
        let mut row = orbit.clone();
        let mut backward = vec![orbit[0].clone()];
        for _ in 0..n {
            let next: Vec<PadicNumber> = (0..row.len() - 1)
                .map(|j| self.pull_back(&row[j + 1], &orbit[j], search[j]))
                .collect::<Result<_>>()?;
            backward.push(next[0].clone());
            row = next;
        }

        let mut corrections = Vec::with_capacity(n);
        let mut bounds = Vec::with_capacity(n);
        for k in 0..n {
            let gap = coefficient_gap(&backward[k + 1], &backward[k]);
            let bound = mu * lambda.pow(-(k as i64) - 1);
            if gap > bound {
                return Err(Error::violation(
                    format!("|h_{} - h_{}| <= mu / lambda^{}", k + 1, k, k + 1),
                    gap,
                    bound,
                ));
            }
            corrections.push(gap);
            bounds.push(bound);
        }

        let certified_error = mu * lambda.pow(-(n as i64) - 1);
        let abs = certified_error
            .qp_valuation_ceil()
            .expect("positive error bound");
        let value = backward[n].with_absolute_precision(abs);
        Ok(ShadowingTrace {
            point: z.clone(),
            depth: n,
            forward_orbit: orbit,
            backward_values: backward,
            corrections,
            correction_bounds: bounds,
            certified_error,
            value,
        })
    }

    /// The zero of `g - w` in `D(center, radius)`.
    fn pull_back(
        &self,
        w: &PadicNumber,
        center: &PadicNumber,
        radius: Radius,
    ) -> Result<PadicNumber> {
        let h = self.g.add_constant(&w.neg());
        unique_root_in_disk(&h, &Disk::new(center.clone(), radius))
    }

    /// Largest `|g'|` over the region.
    fn g_expansion_max(&self) -> Radius {
        *self
            .g_certificate
            .derivative_norms
            .iter()
            .max()
            .expect("nonempty region")
    }

    /// Upper bound on `|g(h(z)) - h(f(z))|`, each side computed finely enough
    /// that the true residual is below `target`.
    pub fn semiconjugacy_residual(&self, z: &PadicNumber, target: Radius) -> Result<Radius> {
        let fine = target.checked_div(&self.g_expansion_max())?;
        let hz = self.conjugate_point(z, fine)?;
        let hfz = self.conjugate_point(&self.ctx.map().evaluate(z), target)?;
        Ok(self.g.evaluate(&hz).sub(&hfz).norm_bound())
    }

    pub fn verify_semiconjugacy(&self, z: &PadicNumber, target: Radius) -> Result<bool> {
        Ok(self.semiconjugacy_residual(z, target)? <= target)
    }

    /// `h(P)` for a fixed point `P` of `f`, with the bound on `|g(h(P)) - h(P)|`.
    pub fn transport_fixed_point(
        &self,
        fixed: &PadicNumber,
        target: Radius,
    ) -> Result<(PadicNumber, Radius)> {
        let fine = target.checked_div(&self.g_expansion_max())?;
        let h = self.conjugate_point(fixed, fine)?;
        let residual = self.g.evaluate(&h).sub(&h).norm_bound();
        Ok((h, residual))
    }
}

fn check_shape(ctx: &ExpansionContext, g: &Polynomial<PadicNumber>) -> Result<()> {
    if g.degree() != ctx.degree() {
        return Err(Error::DegreeMismatch(ctx.degree(), g.degree()));
    }
    if g.prime() != ctx.prime() {
        return Err(Error::PrimeMismatch(ctx.prime().get(), g.prime().get()));
    }
    Ok(())
}

/// `max_k |a_k - b_k| M^k`, which bounds `|g - f|` on `D(0, M)`.
pub fn drift_bound(ctx: &ExpansionContext, g: &Polynomial<PadicNumber>) -> Radius {
    let f = ctx.map();
    (0..=ctx.degree().max(g.degree()))
        .map(|k| coefficient_gap(&f.coeff(k), &g.coeff(k)) * ctx.big_m().pow(k as i64))
        .max()
        .unwrap_or(Radius::Zero)
}

/// Disks of radius in `|Q_p^×|` covering the Q_p-points of the region.
fn rational_cover(region: &Region, prime: Prime) -> Vec<Disk> {
    match region {
        Region::UnionOfDisks { disks } => disks.clone(),
        Region::Sphere { radius } => {
            let q = radius.valuation().expect("positive radius");
            if !q.is_integer() {
                return Vec::new();
            }
            // |z| = p^{-v}: z = p^v (j + p t) with j a nonzero residue
            let v = q.to_integer();
            let n = crate::padic::DEFAULT_PRECISION;
            let pv = if v >= 0 {
                PadicNumber::from_i64(prime.get() as i64, prime, n).pow(v as u32)
            } else {
                PadicNumber::from_i64(prime.get() as i64, prime, n)
                    .pow((-v) as u32)
                    .inverse()
                    .expect("nonzero")
            };
            (1..prime.get())
                .map(|j| Disk::new(pv.mul_int(j as i64), Radius::from_int_log(-(v + 1))))
                .collect()
        }
    }
}

/// The Q_p-rational fixed points of `map` lying in the region.
pub fn fixed_points_in_region(
    map: &Polynomial<PadicNumber>,
    region: &Region,
) -> Result<Vec<PadicNumber>> {
    let h = map.fixed_point_polynomial();
    let mut out = Vec::new();
    for disk in rational_cover(region, map.prime()) {
        let iso = isolate_roots(&h, &disk, DEFAULT_SPLIT_DEPTH)?;
        out.extend(iso.roots);
    }
    Ok(out)
}

/// A fixed point in the region with `|map'| > 1`.
pub fn find_repelling_fixed_point(
    map: &Polynomial<PadicNumber>,
    region: &Region,
) -> Result<PadicNumber> {
    let points = fixed_points_in_region(map, region)?;
    let df = map.derivative();
    let mut weakest = None;
    for z in points {
        let n = df.evaluate(&z).norm_bound();
        if n > Radius::ONE {
            return Ok(z);
        }
        weakest.get_or_insert(n);
    }
    match weakest {
        Some(derivative_norm) => Err(Error::NotRepelling { derivative_norm }),
        None => Err(Error::NoRationalFixedPoint),
    }
}

/// `z^d + c`.
pub fn unicritical(d: usize, c: &PadicNumber) -> Polynomial<PadicNumber> {
    let n =
        c.relative_precision().max(crate::padic::DEFAULT_PRECISION) + crate::padic::GUARD_DIGITS;
    let p = c.prime();
    let mut coeffs = vec![PadicNumber::zero(p); d + 1];
    coeffs[0] = c.clone();
    coeffs[d] = PadicNumber::one(p, n);
    Polynomial::new(coeffs)
}

/// Pointwise conjugacy between `z^d + c` and `z^d + c'` on the sphere
/// `|z| = |c|^{1/d}`.
#[derive(Clone, Debug)]
pub struct UnicriticalConjugacy {
    pub degree: usize,
    pub sphere_radius: Radius,
    pub problem: ConjugacyProblem,
}

impl UnicriticalConjugacy {
    pub fn new(d: usize, c: &PadicNumber, c2: &PadicNumber) -> Result<Self> {
        let p = c.prime();
        if c2.prime() != p {
            return Err(Error::PrimeMismatch(p.get(), c2.prime().get()));
        }
        if d < 2 {
            return Err(Error::InvalidArgument(format!(
                "degree must be at least 2, got {d}"
            )));
        }
        if (d as u64).is_multiple_of(p.get()) {
            return Err(Error::PrimeDividesDegree { p: p.get(), d });
        }
        for x in [c, c2] {
            let norm = x.norm_bound();
            if norm <= Radius::ONE {
                return Err(Error::NoEscape { norm });
            }
        }
        let rho = c.norm()?.root(d as u32);
        let eps = c2.sub(c);
        let gap = coefficient_gap(c2, c);
        if gap > rho {
            return Err(Error::violation("|c - c'| <= |c|^{1/d}", gap, rho));
        }
        if gap == rho && !eps.is_zero_at_precision() {
            return Err(Error::violation(
                "|c - c'| < |c|^{1/d} (equality is left undecided)",
                gap,
                rho,
            ));
        }
        let f = unicritical(d, c);
        let g = unicritical(d, c2);
        let ctx = ExpansionContext::certify(&f, &Region::sphere(rho)?)?;
        let problem = ConjugacyProblem::from_drift(&ctx, &g)?;
        Ok(UnicriticalConjugacy {
            degree: d,
            sphere_radius: rho,
            problem,
        })
    }

    pub fn evaluate(&self, z: &PadicNumber, target: Radius) -> Result<PadicNumber> {
        self.problem.conjugate_point(z, target)
    }

    pub fn trace(&self, z: &PadicNumber, target: Radius) -> Result<ShadowingTrace> {
        self.problem.trace(z, target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::DEFAULT_PRECISION;

    fn num(p: u64, n: i64, d: i64) -> PadicNumber {
        PadicNumber::parse_rational(n, d, p, DEFAULT_PRECISION).unwrap()
    }

    fn f_gamma_ctx() -> ExpansionContext {
        let f = unicritical(2, &num(3, -7, 36));
        ExpansionContext::certify(&f, &Region::sphere(Radius::from_int_log(1)).unwrap()).unwrap()
    }

    #[test]
    fn identity_problem() {
        let ctx = f_gamma_ctx();
        let pr = ConjugacyProblem::neighborhood_check(&ctx, ctx.map()).unwrap();
        assert_eq!(pr.drift(), Radius::Zero);
        let z = find_repelling_fixed_point(ctx.map(), ctx.region()).unwrap();
        let h = pr.conjugate_point(&z, Radius::from_int_log(-10)).unwrap();
        assert!(h.agrees_with(&z));
    }

    #[test]
    fn strict_threshold_rejects_unit_shift() {
        let ctx = f_gamma_ctx();
        let g = unicritical(2, &num(3, -7 + 36, 36));
        assert!(matches!(
            ConjugacyProblem::neighborhood_check(&ctx, &g),
            Err(Error::CoefficientBound { index: 0, .. })
        ));
        let g3 = unicritical(2, &num(3, -7 + 3 * 36, 36));
        // |3| = 1/3 still exceeds tau(2) = 1/9
        assert!(ConjugacyProblem::neighborhood_check(&ctx, &g3).is_err());
        let g27 = unicritical(2, &num(3, -7 + 27 * 36, 36));
        assert!(ConjugacyProblem::neighborhood_check(&ctx, &g27).is_ok());
        assert!(ConjugacyProblem::from_drift(&ctx, &g).is_ok());
        assert!(ConjugacyProblem::from_drift(&ctx, &g3).is_ok());
    }

    #[test]
    fn degree_mismatch() {
        let ctx = f_gamma_ctx();
        let g = unicritical(3, &num(3, -7, 36));
        assert!(matches!(
            ConjugacyProblem::from_drift(&ctx, &g),
            Err(Error::DegreeMismatch(2, 3))
        ));
    }

    #[test]
    fn fixed_point_moves_to_fixed_point() {
        let ctx = f_gamma_ctx();
        let g = unicritical(2, &num(3, -7 + 36, 36));
        let pr = ConjugacyProblem::from_drift(&ctx, &g).unwrap();
        let z = find_repelling_fixed_point(ctx.map(), ctx.region()).unwrap();
        let target = Radius::from_int_log(-10);
        let (h, residual) = pr.transport_fixed_point(&z, target).unwrap();
        assert!(residual <= target);
        assert!(h.sub(&z).norm_bound() <= ctx.mu().checked_div(&ctx.lambda()).unwrap());
        let tr = pr.trace(&z, target).unwrap();
        for (c, b) in tr.corrections.iter().zip(&tr.correction_bounds) {
            assert!(c <= b);
        }
    }

    #[test]
    fn branch_map_fixed_points() {
        let p = Prime::new(3).unwrap();
        let f = Polynomial::new(vec![PadicNumber::zero(p), num(3, -1, 3), num(3, 1, 3)]);
        let r = Radius::from_int_log(-1);
        let b =
            Region::union_of_disks(vec![Disk::new(num(3, 0, 1), r), Disk::new(num(3, 1, 1), r)])
                .unwrap();
        let fixed = fixed_points_in_region(&f, &b).unwrap();
        assert_eq!(fixed.len(), 2);
        assert!(fixed[0].is_zero_at_precision());
        assert!(fixed[1].agrees_with(&num(3, 4, 1)));
        let z = find_repelling_fixed_point(&f, &b).unwrap();
        assert_eq!(
            f.derivative().evaluate(&z).norm().unwrap(),
            Radius::from_int_log(1)
        );
    }

    #[test]
    fn squaring_fixed_point_is_not_repelling() {
        let p = Prime::new(5).unwrap();
        let f = Polynomial::new(vec![
            PadicNumber::zero(p),
            PadicNumber::zero(p),
            num(5, 1, 1),
        ]);
        let s = Region::sphere(Radius::ONE).unwrap();
        assert!(matches!(
            find_repelling_fixed_point(&f, &s),
            Err(Error::NotRepelling { .. })
        ));
    }

    #[test]
    fn unicritical_preconditions() {
        let c = num(3, -7, 36);
        let ev = UnicriticalConjugacy::new(2, &c, &c.add(&num(3, 3, 1))).unwrap();
        assert_eq!(ev.sphere_radius, Radius::from_int_log(1));
        assert_eq!(ev.problem.lambda(), Radius::from_int_log(1));
        // |1/3| = 3 = |c|^{1/2} is the boundary case
        assert!(matches!(
            UnicriticalConjugacy::new(2, &c, &c.add(&num(3, 1, 3))),
            Err(Error::Violation { .. })
        ));
        let c2 = num(2, 1, 4);
        assert!(matches!(
            UnicriticalConjugacy::new(2, &c2, &c2),
            Err(Error::PrimeDividesDegree { p: 2, d: 2 })
        ));
        assert!(matches!(
            UnicriticalConjugacy::new(2, &num(3, 1, 1), &num(3, 1, 1)),
            Err(Error::NoEscape { .. })
        ));
        let same = UnicriticalConjugacy::new(2, &c, &c).unwrap();
        let z = find_repelling_fixed_point(same.problem.f(), same.problem.ctx().region()).unwrap();
        assert!(same
            .evaluate(&z, Radius::from_int_log(-5))
            .unwrap()
            .agrees_with(&z));
    }
}
