//! The Legendrian curve in R^4 attached to a diffeomorphism (the lift of the
//! projectivized graph of the homogeneous symplectomorphism), its flattening
//! determinant, and the twisted non-Legendrian counterexample.
//!
//! The ambient symplectic form is the difference of the factor forms,
//! `omega = omega_1 - omega_2` on `R^2 x R^2`:
//!
//! ```text
//! omega((x1,y1,x2,y2), (x1',y1',x2',y2')) = (x1 y1' - y1 x1') - (x2 y2' - y2 x2')
//! ```
//!
//! All computation happens on the R^4 lift over the doubled grid `[0, 2 pi)`;
//! the projectivization is never materialized.

use crate::diffeo::{lift_from_samples, SampledLift};
use crate::error::{Error, Result, Side};
use crate::roots::{self, ZeroSet};
use crate::scalar::Scalar;
use crate::spectral::{fold_half_period, SampledPeriodic};

/// Frozen normalization between the plain 4x4 determinant of
/// `(C, C', C'', C''')` and `omega(C', C'')^2`: for Legendrian curves
/// `det4 = omega(C', C'')^2`, i.e. `det4 + NU * omega^2 = 0`.
///
/// Measured once on the `a + e sin 2a` perturbation family; the wedge-square
/// pairing fixes this factor only up to the volume normalization, and every
/// zero-set statement is invariant under positive scaling.
pub const OMEGA_WEDGE_NU: f64 = -1.0;

/// Star-shapedness margin demanded of both plane projections.
const STAR_MARGIN: f64 = 1e-6;

/// Relative ceiling on `sup |omega(C, C')|` for curves flagged Legendrian.
const LEGENDRIAN_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
struct Component<T> {
    v: Vec<T>,
    d1: Vec<T>,
    d2: Vec<T>,
    d3: Vec<T>,
}

impl<T: Scalar> Component<T> {
    fn build(values: Vec<T>) -> Self {
        let s = SampledPeriodic::two_pi_periodic(values);
        let d1 = s.derivative(1).values().to_vec();
        let d2 = s.derivative(2).values().to_vec();
        let d3 = s.derivative(3).values().to_vec();
        Self {
            v: s.values().to_vec(),
            d1,
            d2,
            d3,
        }
    }

    fn order(&self, order: u32) -> &[T] {
        match order {
            0 => &self.v,
            1 => &self.d1,
            2 => &self.d2,
            _ => &self.d3,
        }
    }
}

/// A closed curve in R^4 over `alpha_j = j pi / n`, `j = 0..2n`, with
/// spectral derivatives to order three and the Legendrian flag.
#[derive(Debug, Clone)]
pub struct LegendrianCurve<T: Scalar> {
    n: usize,
    coords: [Component<T>; 4],
    legendrian: bool,
}

impl<T: Scalar> LegendrianCurve<T> {
    /// Wrap four coordinate sample arrays over `[0, 2 pi)`, differentiating
    /// spectrally. Checks central symmetry and star-shapedness of both plane
    /// projections; when `legendrian` is set, also enforces
    /// `omega(C, C') = 0` numerically.
    pub fn from_components(values: [Vec<T>; 4], legendrian: bool) -> Result<Self> {
        let [v1, v2, v3, v4] = values;
        Self::assemble(
            [
                Component::build(v1),
                Component::build(v2),
                Component::build(v3),
                Component::build(v4),
            ],
            legendrian,
        )
    }

    fn assemble(coords: [Component<T>; 4], legendrian: bool) -> Result<Self> {
        let two_n = coords[0].v.len();
        assert!(coords.iter().all(|c| c.v.len() == two_n));
        let n = two_n / 2;

        let scale = coords
            .iter()
            .flat_map(|c| c.v.iter())
            .fold(T::zero(), |m, &x| m.max(x.abs()));
        for coord in &coords {
            for j in 0..n {
                let r = (coord.v[j] + coord.v[j + n]).abs();
                if r > T::of(1e-10) * scale {
                    return Err(Error::NotCentrallySymmetric {
                        residual: r.to_f64_lossy(),
                    });
                }
            }
        }

        let curve = Self {
            n,
            coords,
            legendrian,
        };

        for (side, (ix, iy)) in [(Side::First, (0, 1)), (Side::Second, (2, 3))] {
            let margin = curve.projection_star_margin(ix, iy);
            if margin < T::of(STAR_MARGIN) {
                return Err(Error::NotStarShaped {
                    side,
                    margin: margin.to_f64_lossy(),
                });
            }
        }

        if legendrian {
            let residual = curve.legendrian_residual();
            let tol = T::of(LEGENDRIAN_TOL) * curve.residual_scale();
            if residual > tol {
                return Err(Error::LegendrianViolation {
                    residual: residual.to_f64_lossy(),
                    tol: tol.to_f64_lossy(),
                });
            }
        }
        Ok(curve)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn legendrian(&self) -> bool {
        self.legendrian
    }

    pub fn alpha(&self, j: usize) -> T {
        T::PI() * T::of(j as f64) / T::of(self.n as f64)
    }

    /// Coordinate samples (`idx` in `0..4`) of the given derivative order.
    pub fn coord(&self, idx: usize, order: u32) -> &[T] {
        self.coords[idx].order(order)
    }

    /// `omega(C^(i), C^(j))` pointwise, for derivative orders `i`, `j`.
    pub fn omega(&self, oi: u32, oj: u32) -> Vec<T> {
        let (a1, a2, a3, a4) = (
            self.coords[0].order(oi),
            self.coords[1].order(oi),
            self.coords[2].order(oi),
            self.coords[3].order(oi),
        );
        let (b1, b2, b3, b4) = (
            self.coords[0].order(oj),
            self.coords[1].order(oj),
            self.coords[2].order(oj),
            self.coords[3].order(oj),
        );
        (0..2 * self.n)
            .map(|j| (a1[j] * b2[j] - a2[j] * b1[j]) - (a3[j] * b4[j] - a4[j] * b3[j]))
            .collect()
    }

    /// `sup |omega(C, C')|` over the grid.
    pub fn legendrian_residual(&self) -> T {
        self.omega(0, 1)
            .iter()
            .fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Natural scale for the Legendrian residual: `sup |C| * sup |C'|`.
    pub fn residual_scale(&self) -> T {
        let sup = |order: u32| -> T {
            (0..2 * self.n).fold(T::zero(), |m, j| {
                let r = (0..4).map(|i| {
                    let c = self.coords[i].order(order)[j];
                    c * c
                });
                m.max(r.fold(T::zero(), |a, b| a + b).sqrt())
            })
        };
        sup(0) * sup(1)
    }

    fn projection_star_margin(&self, ix: usize, iy: usize) -> T {
        let x = &self.coords[ix];
        let y = &self.coords[iy];
        (0..2 * self.n).fold(T::infinity(), |m, j| {
            let r2 = x.v[j] * x.v[j] + y.v[j] * y.v[j];
            m.min((x.v[j] * y.d1[j] - y.v[j] * x.d1[j]) / r2)
        })
    }

    /// Wronskian `c3 c4' - c4 c3'` of the second projection, pointwise.
    pub fn second_projection_wronskian(&self) -> Vec<T> {
        let x = &self.coords[2];
        let y = &self.coords[3];
        (0..2 * self.n)
            .map(|j| x.v[j] * y.d1[j] - y.v[j] * x.d1[j])
            .collect()
    }

    /// Deviation of the first projection from the unit circle `(cos, sin)`.
    pub fn first_projection_deviation(&self) -> T {
        (0..2 * self.n).fold(T::zero(), |m, j| {
            let (s, c) = self.alpha(j).sin_cos();
            let dx = self.coords[0].v[j] - c;
            let dy = self.coords[1].v[j] - s;
            m.max(dx.hypot(dy))
        })
    }
}

/// Lift of the projectivized graph: `(cos a, sin a, fdot^{-1/2} cos f,
/// fdot^{-1/2} sin f)` over the doubled grid.
///
/// The coordinate jets come from the chain rule on the lift derivatives
/// rather than spectral differentiation: the flattening determinant compares
/// third derivatives at its near-zero points, where the `n^3` noise
/// amplification of a transform-side derivative would dominate.
pub fn legendrian_from_diffeo<T: Scalar>(lift: &SampledLift<T>) -> Result<LegendrianCurve<T>> {
    let n = lift.n();
    let two_n = 2 * n;
    let empty = || Component {
        v: Vec::with_capacity(two_n),
        d1: Vec::with_capacity(two_n),
        d2: Vec::with_capacity(two_n),
        d3: Vec::with_capacity(two_n),
    };
    let mut comps = [empty(), empty(), empty(), empty()];

    let half = T::of(0.5);
    let three = T::of(3.0);
    for j in 0..two_n {
        let alpha = T::PI() * T::of(j as f64) / T::of(n as f64);
        let (s0, c0) = alpha.sin_cos();
        comps[0].v.push(c0);
        comps[0].d1.push(-s0);
        comps[0].d2.push(-c0);
        comps[0].d3.push(s0);
        comps[1].v.push(s0);
        comps[1].d1.push(c0);
        comps[1].d2.push(-s0);
        comps[1].d3.push(-c0);

        let f1 = lift.deriv_ext(1, j);
        let f2 = lift.deriv_ext(2, j);
        let f3 = lift.deriv_ext(3, j);
        let f4 = lift.deriv_ext(4, j);
        let (sf, cf) = lift.f_ext(j).sin_cos();

        // jets of r = fdot^{-1/2} and of cos f, sin f
        let r = f1.sqrt().recip();
        let rm3 = r * r * r;
        let rm5 = rm3 * r * r;
        let rm7 = rm5 * r * r;
        let r1 = -half * rm3 * f2;
        let r2 = T::of(0.75) * rm5 * f2 * f2 - half * rm3 * f3;
        let r3 =
            -T::of(15.0 / 8.0) * rm7 * f2 * f2 * f2 + T::of(2.25) * rm5 * f2 * f3 - half * rm3 * f4;

        let u = cf;
        let u1 = -f1 * sf;
        let u2 = -f2 * sf - f1 * f1 * cf;
        let u3 = -f3 * sf - three * f1 * f2 * cf + f1 * f1 * f1 * sf;
        let v = sf;
        let v1 = f1 * cf;
        let v2 = f2 * cf - f1 * f1 * sf;
        let v3 = f3 * cf - three * f1 * f2 * sf - f1 * f1 * f1 * cf;

        comps[2].v.push(r * u);
        comps[2].d1.push(r1 * u + r * u1);
        comps[2].d2.push(r2 * u + T::of(2.0) * r1 * u1 + r * u2);
        comps[2]
            .d3
            .push(r3 * u + three * r2 * u1 + three * r1 * u2 + r * u3);
        comps[3].v.push(r * v);
        comps[3].d1.push(r1 * v + r * v1);
        comps[3].d2.push(r2 * v + T::of(2.0) * r1 * v1 + r * v2);
        comps[3]
            .d3
            .push(r3 * v + three * r2 * v1 + three * r1 * v2 + r * v3);
    }
    LegendrianCurve::assemble(comps, true)
}

/// The twisted counterexample: first projection the unit circle, second
/// projection `(cos a + e cos 3a, sin a + e sin 3a)`. Both projections stay
/// star-shaped for `e <= 0.1`; the curve is not Legendrian for `e > 0`.
pub fn twisted_example_curve<T: Scalar>(epsilon: T, n: usize) -> Result<LegendrianCurve<T>> {
    if epsilon < T::zero() || epsilon > T::of(0.1) {
        return Err(Error::EpsilonTooLarge {
            epsilon: epsilon.to_f64_lossy(),
        });
    }
    let mut c = [
        Vec::with_capacity(2 * n),
        Vec::with_capacity(2 * n),
        Vec::with_capacity(2 * n),
        Vec::with_capacity(2 * n),
    ];
    for j in 0..2 * n {
        let alpha = T::PI() * T::of(j as f64) / T::of(n as f64);
        let (s1, c1) = alpha.sin_cos();
        let (s3, c3) = (T::of(3.0) * alpha).sin_cos();
        c[0].push(c1);
        c[1].push(s1);
        c[2].push(c1 + epsilon * c3);
        c[3].push(s1 + epsilon * s3);
    }
    LegendrianCurve::from_components(c, false).map_err(|e| match e {
        Error::NotStarShaped { .. } => Error::EpsilonTooLarge {
            epsilon: epsilon.to_f64_lossy(),
        },
        other => other,
    })
}

/// Flattening data of a curve: the displayed 2x2 determinant, the plain 4x4
/// determinant, and the residual of the Legendrian flattening identity.
#[derive(Debug, Clone)]
pub struct FlatteningData<T: Scalar> {
    /// `det [[phi1 + phi1'', phi2 + phi2''], [phi1' + phi1''', phi2' + phi2''']]`
    /// with `(phi1, phi2)` the second projection, folded to the pi grid.
    pub det2: SampledPeriodic<T>,
    /// `det (C, C', C'', C''')`, folded to the pi grid.
    pub det4: SampledPeriodic<T>,
    /// `sup |det4 + NU * omega(C', C'')^2|` over the doubled grid; small only
    /// for genuinely Legendrian curves.
    pub identity_residual: T,
}

/// Evaluate both flattening determinants and the identity residual.
///
/// The 2x2 form requires the first projection to be the unit circle
/// parametrized by the angle itself.
pub fn flattening_determinant<T: Scalar>(curve: &LegendrianCurve<T>) -> Result<FlatteningData<T>> {
    let dev = curve.first_projection_deviation();
    if dev > T::of(1e-10) {
        return Err(Error::WrongFirstProjection {
            deviation: dev.to_f64_lossy(),
        });
    }

    let two_n = 2 * curve.n();
    let mut det4 = Vec::with_capacity(two_n);
    for j in 0..two_n {
        let col = |order: u32| -> [T; 4] {
            [
                curve.coord(0, order)[j],
                curve.coord(1, order)[j],
                curve.coord(2, order)[j],
                curve.coord(3, order)[j],
            ]
        };
        det4.push(det4x4([col(0), col(1), col(2), col(3)]));
    }

    let phi1 = &curve.coords[2];
    let phi2 = &curve.coords[3];
    let det2: Vec<T> = (0..two_n)
        .map(|j| {
            let a = phi1.v[j] + phi1.d2[j];
            let b = phi2.v[j] + phi2.d2[j];
            let c = phi1.d1[j] + phi1.d3[j];
            let d = phi2.d1[j] + phi2.d3[j];
            a * d - b * c
        })
        .collect();

    let omega12 = curve.omega(1, 2);
    let nu = T::of(OMEGA_WEDGE_NU);
    let identity_residual = det4
        .iter()
        .zip(&omega12)
        .fold(T::zero(), |m, (&d, &w)| m.max((d + nu * w * w).abs()));

    Ok(FlatteningData {
        det2: SampledPeriodic::pi_periodic(fold_half_period(&det2)),
        det4: SampledPeriodic::pi_periodic(fold_half_period(&det4)),
        identity_residual,
    })
}

/// Tangential zero set of the flattening determinant.
///
/// `det2` is a positive multiple of `(k - 1)^2` for Legendrian curves, so its
/// zeros never change sign; `NegativeDeterminant` flags a violation of that
/// and `IdenticallyZero` the projective case where every point flattens.
pub fn flattening_points<T: Scalar>(det2: &SampledPeriodic<T>, tol: T) -> Result<ZeroSet<T>> {
    let min = det2.values().iter().fold(T::infinity(), |m, &v| m.min(v));
    if min < -tol {
        return Err(Error::NegativeDeterminant {
            min: min.to_f64_lossy(),
        });
    }
    let sup = det2.sup_norm();
    if sup <= tol {
        return Err(Error::IdenticallyZero {
            tol: tol.to_f64_lossy(),
        });
    }
    roots::detect_tangential_zeros(det2, T::of(1e-8) * sup, roots::default_tangential_width())
}

/// Recover the diffeomorphism lift from a curve whose projections are both
/// star-shaped: the polar angle of the second projection as a function of
/// the polar angle of the first.
pub fn curve_to_diffeo<T: Scalar>(curve: &LegendrianCurve<T>) -> Result<SampledLift<T>> {
    for (side, (ix, iy)) in [(Side::First, (0, 1)), (Side::Second, (2, 3))] {
        let margin = curve.projection_star_margin(ix, iy);
        if margin < T::of(STAR_MARGIN) {
            return Err(Error::NotStarShaped {
                side,
                margin: margin.to_f64_lossy(),
            });
        }
    }
    let dev = curve.first_projection_deviation();
    if dev > T::of(1e-10) {
        return Err(Error::WrongFirstProjection {
            deviation: dev.to_f64_lossy(),
        });
    }

    let n = curve.n();
    let pi = T::PI();
    // unwrap the polar angle of (c3, c4) along the grid
    let mut f = Vec::with_capacity(n);
    let mut prev = T::zero();
    for j in 0..n {
        let theta = curve.coords[3].v[j].atan2(curve.coords[2].v[j]);
        let value = if j == 0 {
            let mut t = theta % pi;
            if t < T::zero() {
                t += pi;
            }
            t
        } else {
            let two_pi = T::of(2.0) * pi;
            let mut d = (theta - prev) % two_pi;
            if d > pi {
                d -= two_pi;
            }
            if d < -pi {
                d += two_pi;
            }
            prev + d
        };
        f.push(value);
        prev = value;
    }
    lift_from_samples(f)
}

fn det3x3<T: Scalar>(m: [[T; 3]; 3]) -> T {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Determinant of a 4x4 matrix given by its columns, expanded along the
/// first column.
fn det4x4<T: Scalar>(cols: [[T; 4]; 4]) -> T {
    let minor = |skip_row: usize| -> [[T; 3]; 3] {
        let mut out = [[T::zero(); 3]; 3];
        for (ci, col) in cols.iter().enumerate().skip(1) {
            let mut ri = 0;
            for (r, &v) in col.iter().enumerate() {
                if r != skip_row {
                    out[ri][ci - 1] = v;
                    ri += 1;
                }
            }
        }
        out
    };
    let mut det = T::zero();
    let mut sign = T::one();
    for (r, &lead) in cols[0].iter().enumerate() {
        det += sign * lead * det3x3(minor(r));
        sign = -sign;
    }
    det
}
