//! The characteristic curve on the unit sphere: the image of the Legendrian
//! curve under the fibration whose fibers are the characteristic lines of
//! the contact structure.
//!
//! With `z1 = c1 + i c2` and `z2 = c3 + i c4` the projection is
//!
//! ```text
//! r = (2 Re(z1 z2), 2 Im(z1 z2), |z1|^2 - |z2|^2) / (|z1|^2 + |z2|^2)
//! ```
//!
//! constant along the characteristic flow `(e^{i t} z1, e^{-i t} z2)` of the
//! difference form, sending the two distinguished planes to the poles
//! `(0, 0, +-1)` and the identity curve to the equator. Inflections of the
//! image (zeros of `det(r, r', r'')`) sit over the projective points, the
//! curve is transverse to meridians, winds once in longitude and bisects the
//! sphere's area.

use crate::error::{Error, Result};
use crate::legendrian::LegendrianCurve;
use crate::scalar::Scalar;
use crate::spectral::{fold_half_period, SampledPeriodic};

/// Pointwise unit-norm requirement on stored samples.
const UNIT_NORM_TOL: f64 = 1e-12;

/// Closure requirement over the half period before folding.
const CLOSURE_TOL: f64 = 1e-10;

/// Pairwise segment cutoff for the embeddedness scan.
const EMBED_CUTOFF: f64 = 1e-7;

/// A closed curve of unit vectors over `alpha_j = j pi / n`, `j = 0..n`
/// (the characteristic curve closes over period pi), with spectral
/// derivatives to second order per component.
#[derive(Debug, Clone)]
pub struct SphereCurve<T: Scalar> {
    comps: [SampledPeriodic<T>; 3],
    d1: [Vec<T>; 3],
    d2: [Vec<T>; 3],
}

impl<T: Scalar> SphereCurve<T> {
    /// Wrap unit-vector samples over `[0, pi)`.
    pub fn from_samples(rx: Vec<T>, ry: Vec<T>, rz: Vec<T>) -> Result<Self> {
        let n = rx.len();
        assert!(ry.len() == n && rz.len() == n);
        for j in 0..n {
            let norm = (rx[j] * rx[j] + ry[j] * ry[j] + rz[j] * rz[j]).sqrt();
            if (norm - T::one()).abs() > T::of(UNIT_NORM_TOL) {
                return Err(Error::OriginHit);
            }
        }
        let comps = [
            SampledPeriodic::pi_periodic(rx),
            SampledPeriodic::pi_periodic(ry),
            SampledPeriodic::pi_periodic(rz),
        ];
        let d1 = [
            comps[0].derivative(1).values().to_vec(),
            comps[1].derivative(1).values().to_vec(),
            comps[2].derivative(1).values().to_vec(),
        ];
        let d2 = [
            comps[0].derivative(2).values().to_vec(),
            comps[1].derivative(2).values().to_vec(),
            comps[2].derivative(2).values().to_vec(),
        ];
        Ok(Self { comps, d1, d2 })
    }

    pub fn n(&self) -> usize {
        self.comps[0].n()
    }

    pub fn alpha(&self, j: usize) -> T {
        self.comps[0].grid_point(j)
    }

    pub fn point(&self, j: usize) -> [T; 3] {
        [
            self.comps[0].values()[j],
            self.comps[1].values()[j],
            self.comps[2].values()[j],
        ]
    }

    pub fn velocity(&self, j: usize) -> [T; 3] {
        [self.d1[0][j], self.d1[1][j], self.d1[2][j]]
    }

    pub fn acceleration(&self, j: usize) -> [T; 3] {
        [self.d2[0][j], self.d2[1][j], self.d2[2][j]]
    }

    pub fn x(&self) -> &[T] {
        self.comps[0].values()
    }

    pub fn y(&self) -> &[T] {
        self.comps[1].values()
    }

    pub fn z(&self) -> &[T] {
        self.comps[2].values()
    }

    pub fn max_abs_z(&self) -> T {
        self.comps[2].sup_norm()
    }
}

/// Project a single R^4 point along the characteristic fibration.
pub fn hopf_point<T: Scalar>(c1: T, c2: T, c3: T, c4: T) -> Result<[T; 3]> {
    let n1 = c1 * c1 + c2 * c2;
    let n2 = c3 * c3 + c4 * c4;
    let denom = n1 + n2;
    if denom < T::of(1e-12) {
        return Err(Error::OriginHit);
    }
    // z1 z2 = (c1 c3 - c2 c4) + i (c1 c4 + c2 c3)
    let re = c1 * c3 - c2 * c4;
    let im = c1 * c4 + c2 * c3;
    let two = T::of(2.0);
    Ok([two * re / denom, two * im / denom, (n1 - n2) / denom])
}

/// Internal refinement of the projection grid: the quotient map spreads
/// spectral content well beyond that of the curve coordinates, and the
/// geodesic-curvature quadrature needs the image resolved.
const PROJECTION_OVERSAMPLE: usize = 4;

/// Characteristic projection of a Legendrian curve. The image closes over
/// period pi; the samples are checked for closure and folded. The curve
/// coordinates are spectrally oversampled before projecting.
pub fn characteristic_projection<T: Scalar>(curve: &LegendrianCurve<T>) -> Result<SphereCurve<T>> {
    assert!(
        curve.legendrian(),
        "projection is defined for Legendrian curves"
    );
    let fine_n = 2 * curve.n() * PROJECTION_OVERSAMPLE;
    let coords: Vec<SampledPeriodic<T>> = (0..4)
        .map(|i| SampledPeriodic::two_pi_periodic(curve.coord(i, 0).to_vec()).upsample_to(fine_n))
        .collect();

    let mut raw = [
        Vec::with_capacity(fine_n),
        Vec::with_capacity(fine_n),
        Vec::with_capacity(fine_n),
    ];
    for j in 0..fine_n {
        let p = hopf_point(
            coords[0].values()[j],
            coords[1].values()[j],
            coords[2].values()[j],
            coords[3].values()[j],
        )?;
        raw[0].push(p[0]);
        raw[1].push(p[1]);
        raw[2].push(p[2]);
    }

    let half = fine_n / 2;
    for comp in &raw {
        for j in 0..half {
            if (comp[j + half] - comp[j]).abs() > T::of(CLOSURE_TOL) {
                return Err(Error::NotCentrallySymmetric {
                    residual: (comp[j + half] - comp[j]).abs().to_f64_lossy(),
                });
            }
        }
    }

    let [x, y, z] = raw;
    SphereCurve::from_samples(
        fold_half_period(&x),
        fold_half_period(&y),
        fold_half_period(&z),
    )
}

fn det3<T: Scalar>(a: [T; 3], b: [T; 3], c: [T; 3]) -> T {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

fn norm3<T: Scalar>(v: [T; 3]) -> T {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Numerator of the geodesic curvature: `det(r, r', r'')`. Its zeros are the
/// spherical inflections (second-order contact with a great circle); no
/// division by the speed keeps the samples spectrally smooth.
pub fn inflection_numerator<T: Scalar>(r: &SphereCurve<T>) -> Result<SampledPeriodic<T>> {
    let n = r.n();
    let min_speed = (0..n).fold(T::infinity(), |m, j| m.min(norm3(r.velocity(j))));
    if min_speed < T::of(1e-8) {
        return Err(Error::NotImmersed {
            min_speed: min_speed.to_f64_lossy(),
        });
    }
    let values = (0..n)
        .map(|j| det3(r.point(j), r.velocity(j), r.acceleration(j)))
        .collect();
    Ok(SampledPeriodic::pi_periodic(values))
}

/// Spherical area enclosed on the north side, by the geodesic-curvature line
/// integral `2 pi - closed integral of det(r, r', r'') / |r'|^2`, reduced
/// into `(0, 4 pi)`.
///
/// Runs the all-pairs segment proximity scan first and fails with
/// `SelfIntersecting` if two non-adjacent segments come closer than the
/// cutoff.
pub fn enclosed_area<T: Scalar>(r: &SphereCurve<T>) -> Result<T> {
    embedding_scan(r)?;
    let n = r.n();
    let h = T::PI() / T::of(n as f64);
    let mut total = T::zero();
    for j in 0..n {
        let v = r.velocity(j);
        let speed2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        total += det3(r.point(j), v, r.acceleration(j)) / speed2;
    }
    let two_pi = T::of(2.0) * T::PI();
    let four_pi = T::of(4.0) * T::PI();
    let mut area = two_pi - total * h;
    while area <= T::zero() {
        area += four_pi;
    }
    while area >= four_pi {
        area -= four_pi;
    }
    Ok(area)
}

/// Transversality to meridians and the longitude winding number.
#[derive(Debug, Clone, Copy)]
pub struct MeridianReport<T> {
    /// `min |azimuthal component of r'| / |r'|`; positive iff the curve is
    /// transverse to every meridian.
    pub margin: T,
    /// Signed number of longitude turns over one period.
    pub winding: i64,
}

/// Check transversality to all meridians (great circles through the poles)
/// and count the longitude winding.
pub fn meridian_margin<T: Scalar>(r: &SphereCurve<T>) -> Result<MeridianReport<T>> {
    let max_z = r.max_abs_z();
    if max_z > T::one() - T::of(1e-9) {
        return Err(Error::PoleHit {
            max_z: max_z.to_f64_lossy(),
        });
    }
    let n = r.n();
    let mut margin = T::infinity();
    let mut winding = T::zero();
    let mut prev_psi = T::zero();
    for j in 0..=n {
        let idx = j % n;
        let p = r.point(idx);
        let v = r.velocity(idx);
        let rho = (p[0] * p[0] + p[1] * p[1]).sqrt();
        let azimuthal = (p[0] * v[1] - p[1] * v[0]) / rho;
        margin = margin.min(azimuthal.abs() / norm3(v));

        let psi = p[1].atan2(p[0]);
        if j > 0 {
            let two_pi = T::of(2.0) * T::PI();
            let mut d = (psi - prev_psi) % two_pi;
            if d > T::PI() {
                d -= two_pi;
            }
            if d < -T::PI() {
                d += two_pi;
            }
            winding += d;
        }
        prev_psi = psi;
    }
    let turns = (winding / (T::of(2.0) * T::PI())).round().to_f64_lossy() as i64;
    Ok(MeridianReport {
        margin,
        winding: turns,
    })
}

/// All-pairs proximity scan over non-adjacent polyline segments. The scan
/// decimates to at most 1024 nodes, where the quadratic cost stays cheap.
fn embedding_scan<T: Scalar>(r: &SphereCurve<T>) -> Result<()> {
    let stride = r.n().div_ceil(1024);
    let n = r.n() / stride;
    let node = |i: usize| r.point((i % n) * stride);
    let cutoff = T::of(EMBED_CUTOFF);
    for i in 0..n {
        let a0 = node(i);
        let a1 = node(i + 1);
        for j in i + 2..n {
            // segments sharing a node are adjacent, including across the seam
            if i == 0 && j == n - 1 {
                continue;
            }
            let d = segment_distance(a0, a1, node(j), node(j + 1));
            if d < cutoff {
                return Err(Error::SelfIntersecting {
                    i: i * stride,
                    j: j * stride,
                    distance: d.to_f64_lossy(),
                });
            }
        }
    }
    Ok(())
}

/// Euclidean distance between two segments in R^3 (clamped closest points).
fn segment_distance<T: Scalar>(p0: [T; 3], p1: [T; 3], q0: [T; 3], q1: [T; 3]) -> T {
    let sub = |a: [T; 3], b: [T; 3]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    let dot = |a: [T; 3], b: [T; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];

    let d1 = sub(p1, p0);
    let d2 = sub(q1, q0);
    let r = sub(p0, q0);
    let a = dot(d1, d1);
    let e = dot(d2, d2);
    let f = dot(d2, r);
    let c = dot(d1, r);
    let b = dot(d1, d2);
    let denom = a * e - b * b;

    let clamp = |v: T| v.max(T::zero()).min(T::one());
    let mut s = if denom.abs() > T::of(1e-30) {
        clamp((b * f - c * e) / denom)
    } else {
        T::zero()
    };
    let mut t = if e > T::of(1e-30) {
        (b * s + f) / e
    } else {
        T::zero()
    };
    if t < T::zero() {
        t = T::zero();
        s = clamp(-c / a);
    } else if t > T::one() {
        t = T::one();
        s = clamp((b - c) / a);
    }

    let cp = [p0[0] + d1[0] * s, p0[1] + d1[1] * s, p0[2] + d1[2] * s];
    let cq = [q0[0] + d2[0] * t, q0[1] + d2[1] * t, q0[2] + d2[2] * t];
    norm3(sub(cp, cq))
}
