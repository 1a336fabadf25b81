//! The centrally symmetric plane curve attached to a diffeomorphism: the
//! image of the unit circle under the homogeneous area-preserving lift,
//! `gamma(a) = fdot^{-1/2}(a) (cos f(a), sin f(a))`.
//!
//! The curve satisfies `[gamma, gamma'] = 1` (oriented area bracket), is
//! star-shaped, antisymmetric under `a -> a + pi`, bounds area pi, and obeys
//! the Hill equation `gamma'' = -k gamma` with `k = [gamma', gamma'']`. It
//! lives on the doubled grid `[0, 2 pi)` so that antiperiodicity is
//! representable; the potential folds back to the pi grid.

use crate::diffeo::SampledLift;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::{fold_half_period, SampledPeriodic};

/// Construction-time ceiling on `sup |[gamma, gamma'] - 1|`.
const UNIMODULAR_TOL: f64 = 1e-8;

/// Ceiling used when extracting the potential from an arbitrary curve.
const POTENTIAL_WRONSKIAN_TOL: f64 = 1e-6;

/// A closed plane curve on the doubled grid `alpha_j = j pi / n`,
/// `j = 0..2n`, with spectral derivatives to second order.
#[derive(Debug, Clone)]
pub struct PlaneCurve<T: Scalar> {
    n: usize,
    x: SampledPeriodic<T>,
    y: SampledPeriodic<T>,
    dx: Vec<T>,
    dy: Vec<T>,
    ddx: Vec<T>,
    ddy: Vec<T>,
}

impl<T: Scalar> PlaneCurve<T> {
    /// Wrap raw coordinate samples over `[0, 2 pi)` (length `2n`), checking
    /// central symmetry and unimodularity.
    pub fn from_coords(x: Vec<T>, y: Vec<T>) -> Result<Self> {
        assert_eq!(x.len(), y.len());
        let two_n = x.len();
        let n = two_n / 2;

        let scale = x
            .iter()
            .zip(&y)
            .fold(T::zero(), |m, (&a, &b)| m.max(a.hypot(b)));
        for j in 0..n {
            let ax = (x[j] + x[j + n]).abs();
            let ay = (y[j] + y[j + n]).abs();
            if ax.max(ay) > T::of(1e-10) * scale {
                return Err(Error::NotCentrallySymmetric {
                    residual: ax.max(ay).to_f64_lossy(),
                });
            }
        }

        let xs = SampledPeriodic::two_pi_periodic(x);
        let ys = SampledPeriodic::two_pi_periodic(y);
        let dx = xs.derivative(1);
        let dy = ys.derivative(1);
        let ddx = xs.derivative(2);
        let ddy = ys.derivative(2);

        let curve = Self {
            n,
            x: xs,
            y: ys,
            dx: dx.values().to_vec(),
            dy: dy.values().to_vec(),
            ddx: ddx.values().to_vec(),
            ddy: ddy.values().to_vec(),
        };
        let wr = curve.wronskian_residual();
        if wr > T::of(UNIMODULAR_TOL) {
            return Err(Error::NotUnimodular {
                residual: wr.to_f64_lossy(),
            });
        }
        Ok(curve)
    }

    /// Size of the underlying half-period grid.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> &[T] {
        self.x.values()
    }

    pub fn y(&self) -> &[T] {
        self.y.values()
    }

    pub fn alpha(&self, j: usize) -> T {
        self.x.grid_point(j)
    }

    /// Oriented-area bracket `[gamma, gamma']` at node `j`.
    pub fn bracket_position_velocity(&self, j: usize) -> T {
        self.x.values()[j] * self.dy[j] - self.y.values()[j] * self.dx[j]
    }

    /// `sup |[gamma, gamma'] - 1|` over the grid.
    pub fn wronskian_residual(&self) -> T {
        (0..2 * self.n).fold(T::zero(), |m, j| {
            m.max((self.bracket_position_velocity(j) - T::one()).abs())
        })
    }

    /// Enclosed oriented area by the line integral `(1/2) (x dy - y dx)`.
    pub fn area(&self) -> T {
        let h = self.x.grid_step();
        let sum: T = (0..2 * self.n)
            .map(|j| self.bracket_position_velocity(j))
            .sum();
        sum * h * T::of(0.5)
    }

    /// Minimum polar-angle rate `[gamma, gamma'] / |gamma|^2`; positive iff
    /// the curve is star-shaped about the origin.
    pub fn star_shape_margin(&self) -> T {
        (0..2 * self.n).fold(T::infinity(), |m, j| {
            let r2 =
                self.x.values()[j] * self.x.values()[j] + self.y.values()[j] * self.y.values()[j];
            m.min(self.bracket_position_velocity(j) / r2)
        })
    }
}

/// Build the central curve of a diffeomorphism from its sampled lift.
pub fn curve_from_diffeo<T: Scalar>(lift: &SampledLift<T>) -> Result<PlaneCurve<T>> {
    let n = lift.n();
    let mut x = Vec::with_capacity(2 * n);
    let mut y = Vec::with_capacity(2 * n);
    for j in 0..2 * n {
        let r = lift.deriv_ext(1, j).sqrt().recip();
        let (s, c) = lift.f_ext(j).sin_cos();
        x.push(r * c);
        y.push(r * s);
    }
    PlaneCurve::from_coords(x, y)
}

/// Residuals reported alongside the extracted potential.
#[derive(Debug, Clone, Copy)]
pub struct CurveResiduals<T> {
    /// `sup |gamma'' + k gamma|` over the doubled grid.
    pub hill_residual: T,
    /// `sup |[gamma, gamma'] - 1|`.
    pub wronskian_residual: T,
}

/// Recover the Hill potential `k = [gamma', gamma'']` of a unimodular curve
/// and fold it back to the pi grid.
///
/// The bracket form is used instead of the componentwise quotient
/// `-gamma_i'' / gamma_i`, which is singular wherever a coordinate vanishes.
pub fn potential_from_curve<T: Scalar>(
    curve: &PlaneCurve<T>,
) -> Result<(SampledPeriodic<T>, CurveResiduals<T>)> {
    let wr = curve.wronskian_residual();
    if wr > T::of(POTENTIAL_WRONSKIAN_TOL) {
        return Err(Error::NotUnimodular {
            residual: wr.to_f64_lossy(),
        });
    }

    let two_n = 2 * curve.n;
    let k_doubled: Vec<T> = (0..two_n)
        .map(|j| curve.dx[j] * curve.ddy[j] - curve.dy[j] * curve.ddx[j])
        .collect();

    let mut hill = T::zero();
    for (j, &kv) in k_doubled.iter().enumerate() {
        let rx = curve.ddx[j] + kv * curve.x.values()[j];
        let ry = curve.ddy[j] + kv * curve.y.values()[j];
        hill = hill.max(rx.abs().max(ry.abs()));
    }

    let k = SampledPeriodic::pi_periodic(fold_half_period(&k_doubled));
    Ok((
        k,
        CurveResiduals {
            hill_residual: hill,
            wronskian_residual: wr,
        },
    ))
}
