//! Exact p-adic arithmetic dynamics.
//!
//! Values live in Q_p at capped relative precision ([`PadicNumber`]), norms
//! and radii in the value group `p^Q` ([`Radius`]). On top of that sit
//! Newton-polygon root counting, preimage decomposition of disks, expansion
//! certificates, the backward-shadowing conjugacy between nearby expanding
//! maps, and the itinerary coding of `z(z-1)/p`.
//!
//! ```
//! use padyn::{PadicNumber, Radius};
//!
//! let c = PadicNumber::parse_rational(-7, 36, 3, 64).unwrap();
//! assert_eq!(c.norm().unwrap(), Radius::from_int_log(2));
//! ```

pub mod conjugacy;
pub mod context;
pub mod disk;
pub mod error;
pub mod newton;
pub mod padic;
pub mod poly;
pub mod radius;
pub mod roots;
pub mod scalar;
pub mod symbolic;
pub mod text;

pub use conjugacy::{
    find_repelling_fixed_point, fixed_points_in_region, ConjugacyProblem, ShadowingTrace,
    UnicriticalConjugacy,
};
pub use context::{mu_constant, Certificate, ExpansionContext, PreimageDisk};
pub use disk::{Disk, DiskRelation, Region};
pub use error::{Error, Result};
pub use newton::{newton_profile, newton_root_count, NewtonProfile};
pub use padic::{chordal_distance, PadicNumber, Prime, ProjectivePoint, DEFAULT_PRECISION};
pub use poly::Polynomial;
pub use radius::{Exponent, Radius};
pub use roots::{isolate_roots, root_bound, unique_root_in_disk, RootIsolation};
pub use scalar::Scalar;
pub use symbolic::ItineraryWord;

/// Polynomials over Q_p, the type every dynamical operation works with.
pub type PadicPolynomial = Polynomial<PadicNumber>;
/// Polynomials with exact rational coefficients, used as oracles.
pub type RationalPolynomial = Polynomial<num_rational::BigRational>;
