//! Numerical toolkit for orientation-preserving diffeomorphisms of the
//! projective line.
//!
//! Starting from a diffeomorphism given by a Fourier lift or a Mobius matrix,
//! the crate constructs the whole chain of associated objects and checks the
//! identities tying them together:
//!
//! * the Schwarzian derivative in the angular parameter and its zero set
//!   (the projective points of the diffeomorphism),
//! * the Hill / Sturm-Liouville potential `k = S/2 + 1`, monodromy and
//!   disconjugacy certification, and the strengthened comparison count for
//!   pairs of potentials,
//! * the centrally symmetric star-shaped plane curve solving
//!   `gamma'' = -k gamma`,
//! * the Legendrian lift in R^4 / RP^3, its flattening determinant and the
//!   non-Legendrian twisted counterexample,
//! * the characteristic curve on the unit sphere, its inflections, meridian
//!   transversality and area bisection.
//!
//! Everything is generic over the floating-point type through [`Scalar`];
//! concrete `f64` aliases are exported at the crate root.

pub mod central_curve;
pub mod diffeo;
pub mod error;
pub mod legendrian;
pub mod roots;
pub mod scalar;
pub mod schwarzian;
pub mod spectral;
pub mod sphere;
pub mod sturm;

pub use error::{Error, Result, Side};
pub use scalar::Scalar;
pub use spectral::SampledPeriodic;

pub use central_curve::PlaneCurve;
pub use diffeo::{DiffeoSpec, SampledLift};
pub use legendrian::LegendrianCurve;
pub use roots::{ZeroKind, ZeroSet};
pub use sphere::SphereCurve;
pub use sturm::{Monodromy, SLProblem, SLSolution};

/// `f64` instantiations of the core types.
pub type SampledPeriodic64 = SampledPeriodic<f64>;
pub type DiffeoSpec64 = DiffeoSpec<f64>;
pub type SampledLift64 = SampledLift<f64>;
pub type ZeroSet64 = ZeroSet<f64>;
pub type PlaneCurve64 = PlaneCurve<f64>;
pub type SLProblem64 = SLProblem<f64>;
pub type Monodromy64 = Monodromy<f64>;
pub type LegendrianCurve64 = LegendrianCurve<f64>;
pub type SphereCurve64 = SphereCurve<f64>;
