//! Crate-wide error type. Variants carry `f64` diagnostics regardless of the
//! working scalar so the type stays non-generic.

use thiserror::Error;

/// Identifies one of the two problems/projections in a paired operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::First => write!(f, "first"),
            Side::Second => write!(f, "second"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size must be a power of two and at least {min}, got {got}")]
    InvalidGrid { got: usize, min: usize },

    #[error("sampled function is identically zero below tolerance {tol}")]
    AllZero { tol: f64 },

    #[error(
        "input dips to {min} below the negativity floor {floor}; expected a nonnegative function"
    )]
    NegativeInput { min: f64, floor: f64 },

    #[error("lift derivative reaches {min_fdot}; not an orientation-preserving diffeomorphism")]
    NotADiffeo { min_fdot: f64 },

    #[error("matrix is singular (|det| = {det})")]
    Singular { det: f64 },

    #[error("spectral tail above harmonic {cutoff} has magnitude {tail} (scale {scale}); grid too coarse")]
    UnderResolved {
        cutoff: usize,
        tail: f64,
        scale: f64,
    },

    #[error("degenerate cross-ratio configuration")]
    Degenerate,

    #[error("function is identically zero within tolerance {tol}; every point qualifies")]
    IdenticallyZero { tol: f64 },

    #[error("curve bracket [gamma, gamma-dot] deviates from 1 by {residual}")]
    NotUnimodular { residual: f64 },

    #[error("curve is not centrally symmetric: sup |C(a + pi) + C(a)| = {residual}")]
    NotCentrallySymmetric { residual: f64 },

    #[error("monodromy failed to converge: successive step halvings still differ by {last_diff}")]
    NoConvergence { last_diff: f64 },

    #[error("{side} Sturm-Liouville problem is not disconjugate")]
    NotDisconjugate { side: Side },

    #[error("potentials coincide (sup difference {sup} below threshold)")]
    DegenerateEqual { sup: f64 },

    #[error("Legendrian residual {residual} exceeds tolerance {tol}")]
    LegendrianViolation { residual: f64, tol: f64 },

    #[error("first projection deviates from the unit circle by {deviation}")]
    WrongFirstProjection { deviation: f64 },

    #[error("flattening determinant reaches {min} on a Legendrian curve")]
    NegativeDeterminant { min: f64 },

    #[error("epsilon {epsilon} too large: a projection loses star-shapedness")]
    EpsilonTooLarge { epsilon: f64 },

    #[error("{side} projection is not star-shaped (min polar-angle rate {margin})")]
    NotStarShaped { side: Side, margin: f64 },

    #[error("curve passes through the origin of R^4")]
    OriginHit,

    #[error("sphere curve is not immersed (min speed {min_speed})")]
    NotImmersed { min_speed: f64 },

    #[error("sphere curve self-intersects (segments {i} and {j} at distance {distance})")]
    SelfIntersecting { i: usize, j: usize, distance: f64 },

    #[error("curve approaches a pole (max |z| component {max_z})")]
    PoleHit { max_z: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
