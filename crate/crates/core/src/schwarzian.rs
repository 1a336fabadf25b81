//! The Schwarzian derivative in the angular parameter, the associated Hill
//! potential, the cross-ratio probe of the defining expansion, and the
//! infinitesimal operator `a''' + 4 a'`.
//!
//! In the angular parameter the Schwarzian of a lift `f` is
//!
//! ```text
//! S(f) = fddd/fd - (3/2) (fdd/fd)^2 + 2 (fd^2 - 1)
//! ```
//!
//! which vanishes identically exactly when `f` comes from a Mobius matrix.
//! Zeros of `S(f)` are the projective points of the diffeomorphism. The
//! affine-chart formula `f'''/f' - (3/2)(f''/f')^2` is deliberately not a
//! public operation: the chart `x = tan a` is singular at `a = pi/2`, and
//! everything here works in the angular parameter.

use crate::diffeo::{DiffeoSpec, SampledLift};
use crate::error::{Error, Result};
use crate::roots::{self, ZeroSet};
use crate::scalar::Scalar;
use crate::spectral::SampledPeriodic;

/// Pointwise evaluation of the angular Schwarzian on the lift grid.
pub fn schwarzian_angular<T: Scalar>(lift: &SampledLift<T>) -> SampledPeriodic<T> {
    let n = lift.n();
    let three_half = T::of(1.5);
    let two = T::of(2.0);
    let values = (0..n)
        .map(|j| {
            let fd = lift.fdot()[j];
            let fdd = lift.fddot()[j];
            let fddd = lift.fdddot()[j];
            let ratio = fdd / fd;
            fddd / fd - three_half * ratio * ratio + two * (fd * fd - T::one())
        })
        .collect();
    SampledPeriodic::pi_periodic(values)
}

/// Hill potential associated to a Schwarzian: `k = S/2 + 1`.
pub fn potential_from_schwarzian<T: Scalar>(s: &SampledPeriodic<T>) -> SampledPeriodic<T> {
    s.map(|v| v * T::of(0.5) + T::one())
}

/// Scale threshold below which `S` counts as identically zero: the sup of the
/// angular formula has magnitude of order `1 + sup fdot^2`.
pub fn default_projective_tol<T: Scalar>(lift: &SampledLift<T>) -> T {
    let sup_fdot = lift.fdot().iter().fold(T::zero(), |m, &v| m.max(v.abs()));
    T::of(1e-8) * (T::one() + sup_fdot * sup_fdot)
}

/// Cross-ratio `(a - c)(b - d) / ((b - c)(a - d))` of four reals.
pub fn cross_ratio<T: Scalar>(a: T, b: T, c: T, d: T) -> Result<T> {
    let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
    let floor = T::of(1e-14) * scale;
    if (b - c).abs() <= floor || (a - d).abs() <= floor {
        return Err(Error::Degenerate);
    }
    Ok((a - c) * (b - d) / ((b - c) * (a - d)))
}

/// Cross-ratio of four lines through the origin given by their angles:
/// `sin(a - c) sin(b - d) / (sin(b - c) sin(a - d))`.
///
/// Agrees with [`cross_ratio`] applied to `tan` of the angles wherever the
/// chart is defined, but has no singularity at `pi/2` and is invariant under
/// shifting any single angle by `pi`.
pub fn line_cross_ratio<T: Scalar>(a: T, b: T, c: T, d: T) -> Result<T> {
    let bc = (b - c).sin();
    let ad = (a - d).sin();
    if bc.abs() <= T::of(1e-14) || ad.abs() <= T::of(1e-14) {
        return Err(Error::Degenerate);
    }
    Ok((a - c).sin() * (b - d).sin() / (bc * ad))
}

/// Finite-epsilon cross-ratio probe of the Schwarzian expansion: the
/// difference between the line cross-ratio of the four image points
/// `f(a), f(a+e), f(a+2e), f(a+3e)` and that of the base points, divided by
/// `e^2`. Converges to a universal multiple of `S(f)(a)` as `e -> 0`.
///
/// Both cross-ratios are assembled from pairwise angle increments rather
/// than pointwise angle values; the increments are exact to relative
/// rounding, so dividing by `e^2` does not amplify evaluation noise.
pub fn schwarzian_crossratio_probe<T: Scalar>(
    spec: &DiffeoSpec<T>,
    alpha: T,
    epsilon: T,
) -> Result<T> {
    assert!(
        epsilon > T::zero() && epsilon < T::of(0.1),
        "probe epsilon must lie in (0, 0.1)"
    );
    let t = |i: f64| alpha + T::of(i) * epsilon;
    let cr_of = |d02: T, d13: T, d12: T, d03: T| -> Result<T> {
        let s12 = d12.sin();
        let s03 = d03.sin();
        if s12.abs() <= T::of(1e-14) || s03.abs() <= T::of(1e-14) {
            return Err(Error::Degenerate);
        }
        Ok(d02.sin() * d13.sin() / (s12 * s03))
    };

    let inc = |i: f64, j: f64| spec.image_angle_increment(t(i), t(j));
    let cr_img = cr_of(inc(0.0, 2.0), inc(1.0, 3.0), inc(1.0, 2.0), inc(0.0, 3.0))?;
    // the base ratio uses the floating-point differences of the constructed
    // points themselves, so a projective map cancels them bit for bit
    let d = |i: f64, j: f64| t(j) - t(i);
    let cr_base = cr_of(d(0.0, 2.0), d(1.0, 3.0), d(1.0, 2.0), d(0.0, 3.0))?;
    Ok((cr_img - cr_base) / (epsilon * epsilon))
}

/// Richardson extrapolation of the probe over the ladder `e, e/2, e/4`,
/// eliminating the first- and second-order error terms.
pub fn probe_richardson<T: Scalar>(spec: &DiffeoSpec<T>, alpha: T, epsilon: T) -> Result<T> {
    let two = T::of(2.0);
    let p0 = schwarzian_crossratio_probe(spec, alpha, epsilon)?;
    let p1 = schwarzian_crossratio_probe(spec, alpha, epsilon / two)?;
    let p2 = schwarzian_crossratio_probe(spec, alpha, epsilon / (two * two))?;
    let r1a = two * p1 - p0;
    let r1b = two * p2 - p1;
    Ok((T::of(4.0) * r1b - r1a) / T::of(3.0))
}

/// Magnitudes of the constant and first-harmonic content of a pi-periodic
/// function (the components `1`, `sin 2a`, `cos 2a` of its expansion).
#[derive(Debug, Clone, Copy)]
pub struct HarmonicReport<T> {
    pub harmonic0: T,
    pub harmonic1: T,
}

/// The infinitesimal projective operator `a''' + 4 a'`, computed spectrally,
/// together with the magnitudes of the harmonics it must annihilate.
pub fn infinitesimal_operator<T: Scalar>(
    a: &SampledPeriodic<T>,
) -> (SampledPeriodic<T>, HarmonicReport<T>) {
    let out = a
        .derivative(3)
        .zip_with(&a.derivative(1), |d3, d1| d3 + T::of(4.0) * d1);
    let report = HarmonicReport {
        harmonic0: out.harmonic_magnitude(0),
        harmonic1: out.harmonic_magnitude(1),
    };
    (out, report)
}

/// Projective points of a diffeomorphism: the zero set of its Schwarzian.
///
/// Fails with `IdenticallyZero` when `sup |S| < tol`, which means the input
/// is projective and every point qualifies.
pub fn projective_points<T: Scalar>(s: &SampledPeriodic<T>, tol: T) -> Result<ZeroSet<T>> {
    if s.sup_norm() < tol {
        return Err(Error::IdenticallyZero {
            tol: tol.to_f64_lossy(),
        });
    }
    roots::mixed_zero_set(s, T::of(roots::DEFAULT_ZERO_TOL))
}
