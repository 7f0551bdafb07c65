//! Closed disks and the two region shapes used as expanding sets.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{PadicNumber, Prime};
use crate::radius::Radius;

/// The closed disk `{ z : |z - center| <= radius }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Disk {
    center: PadicNumber,
    radius: Radius,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiskRelation {
    Disjoint,
    Equal,
    /// The first disk strictly contains the second.
    Contains,
    /// The first disk lies strictly inside the second.
    ContainedIn,
}

impl Disk {
    pub fn new(center: PadicNumber, radius: Radius) -> Self {
        Disk { center, radius }
    }

    pub fn center(&self) -> &PadicNumber {
        &self.center
    }

    pub fn radius(&self) -> Radius {
        self.radius
    }

    pub fn prime(&self) -> Prime {
        self.center.prime()
    }

    /// Exact membership; undecidable only when the difference is zero to a
    /// precision coarser than the radius.
    pub fn contains(&self, z: &PadicNumber) -> Result<bool> {
        z.sub(&self.center).norm_at_most(self.radius)
    }

    /// Two disks either nest or are disjoint.
    pub fn relation(&self, other: &Disk) -> Result<DiskRelation> {
        let big = self.radius.max(other.radius);
        if !self.center.sub(&other.center).norm_at_most(big)? {
            return Ok(DiskRelation::Disjoint);
        }
        Ok(match self.radius.cmp(&other.radius) {
            std::cmp::Ordering::Equal => DiskRelation::Equal,
            std::cmp::Ordering::Greater => DiskRelation::Contains,
            std::cmp::Ordering::Less => DiskRelation::ContainedIn,
        })
    }

    pub fn is_within(&self, other: &Disk) -> Result<bool> {
        Ok(matches!(
            self.relation(other)?,
            DiskRelation::Equal | DiskRelation::ContainedIn
        ))
    }

    /// Largest `|z|` over the disk.
    pub fn max_norm(&self) -> Radius {
        self.center.norm_bound().max(self.radius)
    }
}

impl std::fmt::Display for Disk {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "D({}, {})", self.center, self.radius)
    }
}

/// The set `B` of an expansion certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Region {
    /// Pairwise disjoint closed disks sharing one radius.
    UnionOfDisks { disks: Vec<Disk> },
    /// `{ z : |z| = radius }`.
    Sphere { radius: Radius },
}

impl Region {
    /// Validates equal radii and drops duplicate disks. Equal-radius disks
    /// that meet coincide, so the result is pairwise disjoint.
    pub fn union_of_disks(disks: Vec<Disk>) -> Result<Self> {
        let first = disks
            .first()
            .ok_or_else(|| Error::InvalidArgument("a region needs at least one disk".into()))?;
        let r = first.radius();
        if r.is_zero() {
            return Err(Error::InvalidArgument(
                "disk radius must be positive".into(),
            ));
        }
        let p = first.prime();
        let mut kept: Vec<Disk> = Vec::with_capacity(disks.len());
        for d in disks {
            if d.radius() != r {
                return Err(Error::InvalidArgument(format!(
                    "disks of a region must share one radius ({} vs {})",
                    r,
                    d.radius()
                )));
            }
            if d.prime() != p {
                return Err(Error::PrimeMismatch(p.get(), d.prime().get()));
            }
            let mut duplicate = false;
            for k in &kept {
                if k.relation(&d)? != DiskRelation::Disjoint {
                    duplicate = true;
                    break;
                }
            }
            if !duplicate {
                kept.push(d);
            }
        }
        Ok(Region::UnionOfDisks { disks: kept })
    }

    pub fn sphere(radius: Radius) -> Result<Self> {
        if radius.is_zero() {
            return Err(Error::InvalidArgument(
                "sphere radius must be positive".into(),
            ));
        }
        Ok(Region::Sphere { radius })
    }

    pub fn contains(&self, z: &PadicNumber) -> Result<bool> {
        match self {
            Region::UnionOfDisks { disks } => {
                for d in disks {
                    if d.contains(z)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Region::Sphere { radius } => {
                if z.is_exact_zero() {
                    return Ok(false);
                }
                if z.is_zero_at_precision() {
                    // |z| <= bound < radius settles it; otherwise unknown
                    return if z.norm_bound() < *radius {
                        Ok(false)
                    } else {
                        Err(Error::Undecidable("sphere membership of O(p^a)".into()))
                    };
                }
                Ok(z.norm()? == *radius)
            }
        }
    }

    /// Index of the member disk containing `z`.
    pub fn member_index(&self, z: &PadicNumber) -> Result<Option<usize>> {
        match self {
            Region::UnionOfDisks { disks } => {
                for (i, d) in disks.iter().enumerate() {
                    if d.contains(z)? {
                        return Ok(Some(i));
                    }
                }
                Ok(None)
            }
            Region::Sphere { .. } => Ok(self.contains(z)?.then_some(0)),
        }
    }

    /// Smallest `M >= 1` with the region inside `D(0, M)`.
    pub fn bound(&self) -> Radius {
        let m = match self {
            Region::UnionOfDisks { disks } => disks
                .iter()
                .map(Disk::max_norm)
                .max()
                .unwrap_or(Radius::ONE),
            Region::Sphere { radius } => *radius,
        };
        m.max(Radius::ONE)
    }

    /// A `delta <= 1` in the value group of Q_p with `D(z, delta)` inside
    /// the region for every `z` in it.
    pub fn inner_radius(&self) -> Radius {
        match self {
            Region::UnionOfDisks { disks } => disks[0].radius().min(Radius::ONE),
            Region::Sphere { radius } => {
                // need delta < radius; smallest integer valuation above it
                let q = radius.valuation().expect("positive radius");
                let e = (q.floor().to_integer() + 1).max(0);
                Radius::from_int_log(-e)
            }
        }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Region::UnionOfDisks { disks } => {
                let parts: Vec<String> = disks
                    .iter()
                    .map(|d| format!("({}, {})", d.center(), d.radius()))
                    .collect();
                write!(f, "disks: [{}]", parts.join(", "))
            }
            Region::Sphere { radius } => write!(f, "sphere: {radius}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::DEFAULT_PRECISION;

    fn num(n: i64, d: i64) -> PadicNumber {
        PadicNumber::parse_rational(n, d, 3, DEFAULT_PRECISION).unwrap()
    }

    #[test]
    fn membership_is_exact() {
        let d = Disk::new(num(1, 1), Radius::from_int_log(-1));
        assert!(d.contains(&num(4, 1)).unwrap());
        assert!(d.contains(&num(1, 1)).unwrap());
        assert!(!d.contains(&num(2, 1)).unwrap());
        assert!(!d.contains(&num(1, 3)).unwrap());
    }

    #[test]
    fn disks_nest_or_are_disjoint() {
        let big = Disk::new(num(0, 1), Radius::ONE);
        let small = Disk::new(num(3, 1), Radius::from_int_log(-1));
        let other = Disk::new(num(1, 1), Radius::from_int_log(-1));
        assert_eq!(big.relation(&small).unwrap(), DiskRelation::Contains);
        assert_eq!(small.relation(&big).unwrap(), DiskRelation::ContainedIn);
        assert_eq!(small.relation(&other).unwrap(), DiskRelation::Disjoint);
        assert_eq!(
            small
                .relation(&Disk::new(num(0, 1), Radius::from_int_log(-1)))
                .unwrap(),
            DiskRelation::Equal
        );
    }

    #[test]
    fn region_bounds() {
        let third = Radius::from_int_log(-1);
        let b = Region::union_of_disks(vec![
            Disk::new(num(0, 1), third),
            Disk::new(num(1, 1), third),
            Disk::new(num(3, 1), third),
        ])
        .unwrap();
        let Region::UnionOfDisks { disks } = &b else {
            unreachable!()
        };
        assert_eq!(disks.len(), 2);
        assert_eq!(b.bound(), Radius::ONE);
        assert_eq!(b.inner_radius(), third);

        let s = Region::sphere(Radius::from_int_log(1)).unwrap();
        assert!(s.contains(&num(-7, 6)).unwrap());
        assert!(!s.contains(&num(1, 9)).unwrap());
        assert!(!s.contains(&num(0, 1)).unwrap());
        assert_eq!(s.bound(), Radius::from_int_log(1));
        assert_eq!(s.inner_radius(), Radius::ONE);
        assert_eq!(
            Region::sphere(Radius::from_int_log(-2))
                .unwrap()
                .inner_radius(),
            Radius::from_int_log(-3)
        );

        let mixed = Region::union_of_disks(vec![
            Disk::new(num(0, 1), third),
            Disk::new(num(1, 1), Radius::ONE),
        ]);
        assert!(mixed.is_err());
    }
}
