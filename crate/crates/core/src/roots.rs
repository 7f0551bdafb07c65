//! Extracting Q_p-rational roots: Newton lifting inside a disk holding a
//! single zero, and recursive residue-disk splitting to isolate several.

use crate::disk::Disk;
use crate::error::{Error, Result};
use crate::newton::newton_root_count;
use crate::padic::PadicNumber;
use crate::poly::Polynomial;
use crate::radius::Radius;

const MAX_NEWTON_STEPS: usize = 400;
/// Splitting levels below the starting disk before a cluster is reported.
pub const DEFAULT_SPLIT_DEPTH: u32 = 48;

/// The unique zero of `f` in `disk`, by Newton iteration from the center.
///
/// The result carries only digits certified by `|z - root| = |f(z)| / |f'(z)|`,
/// which holds exactly on a disk with a single simple zero.
pub fn unique_root_in_disk(f: &Polynomial<PadicNumber>, disk: &Disk) -> Result<PadicNumber> {
    let found = newton_root_count(f, disk)?;
    if found != 1 {
        return Err(Error::RootCount { expected: 1, found });
    }
    let df = f.derivative();
    let mut z = disk.center().clone();
    for _ in 0..MAX_NEWTON_STEPS {
        let fz = f.evaluate(&z);
        if fz.is_zero_at_precision() {
            return finish(z, &fz, &df);
        }
        let dz = df.evaluate(&z);
        let step = fz.checked_div(&dz).map_err(|_| {
            Error::PrecisionExhausted("derivative vanishes at known precision".into())
        })?;
        let next = z.sub(&step);
        if !disk.contains(&next)? {
            return Err(Error::RootOutsideQp(format!(
                "Newton iteration left {disk}"
            )));
        }
        if next.agrees_with(&z) && next.absolute_precision() == z.absolute_precision() {
            return finish(next, &f.evaluate(&z), &df);
        }
        z = next;
    }
    let fz = f.evaluate(&z);
    finish(z, &fz, &df)
}

fn finish(z: PadicNumber, fz: &PadicNumber, df: &Polynomial<PadicNumber>) -> Result<PadicNumber> {
    if fz.is_exact_zero() {
        return Ok(z);
    }
    let dz = df.evaluate(&z);
    let v_dz = dz
        .valuation()
        .ok_or_else(|| Error::PrecisionExhausted("derivative vanishes at root".into()))?;
    let v_fz = match fz.valuation() {
        Some(v) => v,
        None => fz.absolute_precision().expect("not exact zero"),
    };
    Ok(z.with_absolute_precision(v_fz - v_dz))
}

/// `R` with every root of `f` in `D(0, R)`, from the Fujiwara-type bound
/// `max_k (|c_k| / |c_d|)^{1/(d-k)}`.
pub fn root_bound(f: &Polynomial<PadicNumber>) -> Result<Radius> {
    let d = f.degree();
    let lead = f.leading().norm()?;
    let mut bound = Radius::Zero;
    for k in 0..d {
        let ratio = f.coeff(k).norm_bound().checked_div(&lead)?;
        bound = bound.max(ratio.root((d - k) as u32));
    }
    Ok(bound)
}

#[derive(Clone, Debug, Default)]
pub struct RootIsolation {
    /// Q_p-rational simple roots found, in residue order.
    pub roots: Vec<PadicNumber>,
    /// Zeros (with multiplicity) that are provably not in Q_p.
    pub non_rational: usize,
    /// Disks still holding several zeros at the depth limit.
    pub clusters: Vec<(Disk, usize)>,
}

impl RootIsolation {
    pub fn is_complete(&self) -> bool {
        self.non_rational == 0 && self.clusters.is_empty()
    }
}

/// Isolates the zeros of `f` in `disk` down to residue disks of depth
/// `max_depth`.
pub fn isolate_roots(
    f: &Polynomial<PadicNumber>,
    disk: &Disk,
    max_depth: u32,
) -> Result<RootIsolation> {
    let mut out = RootIsolation::default();
    let total = newton_root_count(f, disk)?;
    let Some(e) = disk.radius().qp_valuation_ceil() else {
        return Err(Error::InvalidArgument(
            "disk radius must be positive".into(),
        ));
    };
    let rational = Disk::new(disk.center().clone(), Radius::from_int_log(-e));
    let n = newton_root_count(f, &rational)?;
    out.non_rational += total - n;
    split(f, rational, e, n, max_depth, &mut out)?;
    Ok(out)
}

fn split(
    f: &Polynomial<PadicNumber>,
    disk: Disk,
    e: i64,
    n: usize,
    depth_left: u32,
    out: &mut RootIsolation,
) -> Result<()> {
    match n {
        0 => return Ok(()),
        1 => {
            out.roots.push(unique_root_in_disk(f, &disk)?);
            return Ok(());
        }
        _ if depth_left == 0 => {
            out.clusters.push((disk, n));
            return Ok(());
        }
        _ => {}
    }
    let p = disk.prime();
    let step = power_of_p(p, e, disk.center());
    let child_radius = Radius::from_int_log(-(e + 1));
    let mut children = Vec::new();
    let mut found = 0;
    for j in 0..p.get() {
        let c = disk.center().add(&step.mul_int(j as i64));
        let child = Disk::new(c, child_radius);
        let m = newton_root_count(f, &child)?;
        found += m;
        if m > 0 {
            children.push((child, m));
        }
    }
    out.non_rational += n - found;
    for (child, m) in children {
        split(f, child, e + 1, m, depth_left - 1, out)?;
    }
    Ok(())
}

/// `p^e` exactly, at a precision matching `like`.
fn power_of_p(p: crate::padic::Prime, e: i64, like: &PadicNumber) -> PadicNumber {
    let n = like
        .relative_precision()
        .max(crate::padic::DEFAULT_PRECISION);
    let one = PadicNumber::one(p, n);
    let unit = PadicNumber::from_i64(p.get() as i64, p, n);
    if e >= 0 {
        one.mul(&unit.pow(e as u32))
    } else {
        unit.pow((-e) as u32).inverse().expect("p is nonzero")
    }
}

/// Disk around 0 holding every Q_p-rational root of `f`.
pub fn root_disk(f: &Polynomial<PadicNumber>) -> Result<Disk> {
    let r = root_bound(f)?;
    let r = if r.is_zero() { Radius::ONE } else { r };
    Ok(Disk::new(PadicNumber::zero(f.prime()), r))
}

/// All zeros of `f` in Q_p, or a typed failure when some zero is not
/// Q_p-rational or could not be separated.
pub fn all_rational_roots(f: &Polynomial<PadicNumber>) -> Result<Vec<PadicNumber>> {
    let iso = isolate_roots(f, &root_disk(f)?, DEFAULT_SPLIT_DEPTH)?;
    if iso.non_rational > 0 {
        return Err(Error::RootOutsideQp(format!(
            "{} of {} zeros of {} are not in Q_p",
            iso.non_rational,
            f.degree(),
            f
        )));
    }
    if let Some((d, n)) = iso.clusters.first() {
        return Err(Error::PrecisionExhausted(format!(
            "{n} zeros not separated inside {d}"
        )));
    }
    Ok(iso.roots)
}
