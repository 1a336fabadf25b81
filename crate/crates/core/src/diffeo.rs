//! Orientation-preserving diffeomorphisms of the projective line, represented
//! by lifts `f: R -> R` with `f(a + pi) = f(a) + pi`.
//!
//! Two descriptions are supported: a Fourier lift `f(a) = a + p(a)` with
//! pi-periodic `p`, and a Mobius matrix acting on the affine chart
//! `x = tan a` by `x -> (a x + b) / (c x + d)`. Sampling produces the lift
//! and its derivatives on a uniform grid; Fourier lifts are differentiated
//! spectrally, Mobius lifts in closed form (their derivative is
//! `det / (u^2 + v^2)` with `u = a sin + b cos`, `v = c sin + d cos`, so
//! every order is available pointwise without resolution loss).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::SampledPeriodic;

/// Minimum admissible value of the lift derivative.
pub const ORIENTATION_MARGIN: f64 = 1e-6;

/// Grid used to certify `f' > 0` at validation time.
const VALIDATION_GRID: usize = 4096;

/// Relative ceiling for spectral content above harmonic `n/4`.
const RESOLUTION_TOL: f64 = 1e-10;

/// One term `a sin(2 k alpha) + b cos(2 k alpha)` of a periodic part.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Harmonic<T> {
    pub k: u32,
    pub a: T,
    pub b: T,
}

/// Validated description of a diffeomorphism of `RP^1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum DiffeoSpec<T> {
    Fourier { harmonics: Vec<Harmonic<T>> },
    Mobius { matrix: [[T; 2]; 2] },
}

impl<T: Scalar> DiffeoSpec<T> {
    /// Identity diffeomorphism.
    pub fn identity() -> Self {
        DiffeoSpec::Fourier {
            harmonics: Vec::new(),
        }
    }

    /// Validate and wrap a Fourier lift `f(a) = a + sum a_k sin 2ka + b_k cos 2ka`.
    pub fn fourier(harmonics: Vec<Harmonic<T>>) -> Result<Self> {
        let spec = DiffeoSpec::Fourier { harmonics };
        spec.validate()?;
        Ok(spec)
    }

    /// Validate and wrap a Mobius matrix with positive determinant.
    pub fn mobius(matrix: [[T; 2]; 2]) -> Result<Self> {
        let spec = DiffeoSpec::Mobius { matrix };
        spec.validate()?;
        Ok(spec)
    }

    /// Re-check the invariants (used after deserialization).
    pub fn validate(&self) -> Result<()> {
        match self {
            DiffeoSpec::Fourier { harmonics } => {
                let mut min_fdot = T::infinity();
                let h = T::PI() / T::of(VALIDATION_GRID as f64);
                for j in 0..VALIDATION_GRID {
                    let alpha = h * T::of(j as f64);
                    let fdot = T::one() + fourier_part(harmonics, alpha, 1);
                    min_fdot = min_fdot.min(fdot);
                }
                if min_fdot <= T::of(ORIENTATION_MARGIN) {
                    return Err(Error::NotADiffeo {
                        min_fdot: min_fdot.to_f64_lossy(),
                    });
                }
                Ok(())
            }
            DiffeoSpec::Mobius { matrix } => {
                let det = mobius_det(matrix);
                if det.abs() < T::of(1e-12) {
                    return Err(Error::Singular {
                        det: det.to_f64_lossy(),
                    });
                }
                if det <= T::zero() {
                    return Err(Error::NotADiffeo {
                        min_fdot: det.to_f64_lossy(),
                    });
                }
                Ok(())
            }
        }
    }

    /// Image angle `f(alpha) mod pi`, mapped into `[0, pi)`.
    ///
    /// Pointwise and branch-free; enough for projective quantities such as
    /// cross-ratios of lines, which only see angles modulo pi.
    pub fn eval_angle(&self, alpha: T) -> T {
        let f = match self {
            DiffeoSpec::Fourier { harmonics } => alpha + fourier_part(harmonics, alpha, 0),
            DiffeoSpec::Mobius { matrix } => {
                let (s, c) = alpha.sin_cos();
                let u = matrix[0][0] * s + matrix[0][1] * c;
                let v = matrix[1][0] * s + matrix[1][1] * c;
                u.atan2(v)
            }
        };
        let pi = T::PI();
        let mut r = f % pi;
        if r < T::zero() {
            r += pi;
        }
        r
    }

    /// Increment `f(b) - f(a)` of the lift, evaluated to *relative* accuracy
    /// for nearby points.
    ///
    /// Pointwise evaluation of `f` carries absolute rounding of order machine
    /// epsilon, which swamps an O(epsilon) increment; expanding the increment
    /// itself (difference identities for the Fourier part, the exact relation
    /// `cross(w(a), w(b)) = det sin(b - a)` for the Mobius part) keeps the
    /// relative error at machine level. Requires `|b - a| fdot < pi`.
    pub fn image_angle_increment(&self, a: T, b: T) -> T {
        match self {
            DiffeoSpec::Fourier { harmonics } => {
                let s = b - a;
                let mut acc = s;
                for h in harmonics {
                    let k = T::of(h.k as f64);
                    let mid = k * (a + b);
                    let (sm, cm) = mid.sin_cos();
                    // sin 2kb - sin 2ka = 2 cos k(a+b) sin k(b-a), and
                    // cos 2kb - cos 2ka = -2 sin k(a+b) sin k(b-a)
                    acc += T::of(2.0) * (k * s).sin() * (h.a * cm - h.b * sm);
                }
                acc
            }
            DiffeoSpec::Mobius { matrix } => {
                let det = mobius_det(matrix);
                let (ma, mb, mc, md) = (matrix[0][0], matrix[0][1], matrix[1][0], matrix[1][1]);
                let w = |x: T| -> (T, T) {
                    let (s, c) = x.sin_cos();
                    (ma * s + mb * c, mc * s + md * c)
                };
                let (ua, va) = w(a);
                let (ub, vb) = w(b);
                let dot = va * vb + ua * ub;
                let cross = det * (b - a).sin();
                cross.atan2(dot)
            }
        }
    }

    /// Sample the lift and its derivatives on a grid of size `n` (power of
    /// two, at least 64) over `[0, pi)`.
    pub fn sample_with_derivatives(&self, n: usize) -> Result<SampledLift<T>> {
        if !n.is_power_of_two() || n < 64 {
            return Err(Error::InvalidGrid { got: n, min: 64 });
        }
        match self {
            DiffeoSpec::Fourier { harmonics } => sample_fourier(harmonics, n),
            DiffeoSpec::Mobius { matrix } => sample_mobius(matrix, n),
        }
    }
}

fn mobius_det<T: Scalar>(m: &[[T; 2]; 2]) -> T {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Periodic part of a Fourier lift, or its derivative of the given order.
fn fourier_part<T: Scalar>(harmonics: &[Harmonic<T>], alpha: T, order: u32) -> T {
    let mut acc = T::zero();
    for h in harmonics {
        let w = T::of(2.0 * h.k as f64);
        let (s, c) = (w * alpha).sin_cos();
        // d/da rotates (sin, cos) -> w (cos, -sin)
        let factor = w.powi(order as i32);
        let (sb, cb) = match order % 4 {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        };
        acc += factor * (h.a * sb + h.b * cb);
    }
    acc
}

/// Lift samples over `alpha_j = j pi / n` with derivatives to order four
/// (the fourth feeds the closed-form jet of curves built on `fdot^{-1/2}`).
#[derive(Debug, Clone)]
pub struct SampledLift<T: Scalar> {
    n: usize,
    f: Vec<T>,
    fdot: Vec<T>,
    fddot: Vec<T>,
    fdddot: Vec<T>,
    fddddot: Vec<T>,
}

impl<T: Scalar> SampledLift<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self, j: usize) -> T {
        T::PI() * T::of(j as f64) / T::of(self.n as f64)
    }

    pub fn f(&self) -> &[T] {
        &self.f
    }

    pub fn fdot(&self) -> &[T] {
        &self.fdot
    }

    pub fn fddot(&self) -> &[T] {
        &self.fddot
    }

    pub fn fdddot(&self) -> &[T] {
        &self.fdddot
    }

    pub fn min_fdot(&self) -> T {
        self.fdot.iter().fold(T::infinity(), |m, &v| m.min(v))
    }

    /// Lift value on the doubled grid `[0, 2 pi)`: `f(a + pi) = f(a) + pi`
    /// holds exactly by construction.
    pub fn f_ext(&self, j: usize) -> T {
        if j < self.n {
            self.f[j]
        } else {
            self.f[j - self.n] + T::PI()
        }
    }

    pub fn fddddot(&self) -> &[T] {
        &self.fddddot
    }

    /// Derivative values on the doubled grid (pi-periodic).
    pub fn deriv_ext(&self, order: u32, j: usize) -> T {
        let arr = match order {
            1 => &self.fdot,
            2 => &self.fddot,
            3 => &self.fdddot,
            4 => &self.fddddot,
            _ => panic!("derivative order out of range"),
        };
        arr[j % self.n]
    }
}

fn sample_fourier<T: Scalar>(harmonics: &[Harmonic<T>], n: usize) -> Result<SampledLift<T>> {
    let p = SampledPeriodic::from_fn(n, T::PI(), |a| fourier_part(harmonics, a, 0));
    lift_from_periodic_part(p)
}

/// Build a lift from raw samples of `f` over `[0, pi)` (power of two, at
/// least 64 nodes) by spectral differentiation of its periodic part.
pub fn lift_from_samples<T: Scalar>(f: Vec<T>) -> Result<SampledLift<T>> {
    let n = f.len();
    if !n.is_power_of_two() || n < 64 {
        return Err(Error::InvalidGrid { got: n, min: 64 });
    }
    let h = T::PI() / T::of(n as f64);
    let p_values: Vec<T> = f
        .iter()
        .enumerate()
        .map(|(j, &v)| v - h * T::of(j as f64))
        .collect();
    lift_from_periodic_part(SampledPeriodic::pi_periodic(p_values))
}

fn lift_from_periodic_part<T: Scalar>(p: SampledPeriodic<T>) -> Result<SampledLift<T>> {
    let n = p.n();
    // the lift itself has scale O(pi), so the tail is measured against at
    // least unity; a numerically-zero periodic part is always resolved
    let scale = p.sup_norm().max(T::one());
    let tail = p.spectral_tail_max(n / 4);
    if tail > T::of(RESOLUTION_TOL) * scale {
        return Err(Error::UnderResolved {
            cutoff: n / 4,
            tail: tail.to_f64_lossy(),
            scale: scale.to_f64_lossy(),
        });
    }

    let p1 = p.derivative(1);
    let p2 = p.derivative(2);
    let p3 = p.derivative(3);
    let p4 = p.derivative(4);

    let f: Vec<T> = (0..n)
        .map(|j| T::PI() * T::of(j as f64) / T::of(n as f64) + p.values()[j])
        .collect();
    let fdot: Vec<T> = p1.values().iter().map(|&v| T::one() + v).collect();

    let lift = SampledLift {
        n,
        f,
        fdot,
        fddot: p2.values().to_vec(),
        fdddot: p3.values().to_vec(),
        fddddot: p4.values().to_vec(),
    };
    if lift.min_fdot() <= T::zero() {
        return Err(Error::NotADiffeo {
            min_fdot: lift.min_fdot().to_f64_lossy(),
        });
    }
    Ok(lift)
}

fn sample_mobius<T: Scalar>(matrix: &[[T; 2]; 2], n: usize) -> Result<SampledLift<T>> {
    let det = mobius_det(matrix);
    if det <= T::zero() {
        return Err(Error::NotADiffeo {
            min_fdot: det.to_f64_lossy(),
        });
    }
    let pi = T::PI();
    let h = pi / T::of(n as f64);
    let (a, b, c, d) = (matrix[0][0], matrix[0][1], matrix[1][0], matrix[1][1]);

    let p_mod = |alpha: T| -> T {
        let (s, co) = alpha.sin_cos();
        let u = a * s + b * co;
        let v = c * s + d * co;
        let mut p = (u.atan2(v) - alpha) % pi;
        if p < T::zero() {
            p += pi;
        }
        p
    };

    let mut fdot = Vec::with_capacity(n);
    let mut fddot = Vec::with_capacity(n);
    let mut fdddot = Vec::with_capacity(n);
    let mut fddddot = Vec::with_capacity(n);
    let mut p_raw = Vec::with_capacity(n);

    for j in 0..n {
        let alpha = h * T::of(j as f64);
        let (s, co) = alpha.sin_cos();
        let u = a * s + b * co;
        let v = c * s + d * co;
        let udot = a * co - b * s;
        let vdot = c * co - d * s;
        let q = u * u + v * v;
        let qdot = T::of(2.0) * (u * udot + v * vdot);
        let qddot = T::of(2.0) * (udot * udot + vdot * vdot) - T::of(2.0) * q;
        // q is a pure second-harmonic function, so q''' = -4 q'
        let qdddot = T::of(-4.0) * qdot;
        let two = T::of(2.0);
        let six = T::of(6.0);

        fdot.push(det / q);
        fddot.push(-det * qdot / (q * q));
        fdddot.push(-det * (qddot * q - two * qdot * qdot) / (q * q * q));
        fddddot.push(
            -det * (qdddot * q * q - six * qddot * qdot * q + six * qdot * qdot * qdot)
                / (q * q * q * q),
        );

        p_raw.push(p_mod(alpha));
    }

    // The periodic part p = f - alpha of a Mobius lift has range width < pi,
    // so its values reduced mod pi leave a gap on the circle. Anchoring a
    // length-pi branch window in the middle of the largest gap recovers the
    // continuous representative without sequential unwrapping. The gap is
    // located on a fixed dense scan so coarse sampling grids cannot miss it.
    let scan = 1024;
    let mut sorted: Vec<T> = (0..scan)
        .map(|j| p_mod(pi * T::of(j as f64) / T::of(scan as f64)))
        .collect();
    sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut gap_start = sorted[scan - 1];
    let mut max_gap = sorted[0] + pi - sorted[scan - 1];
    for w in sorted.windows(2) {
        if w[1] - w[0] > max_gap {
            max_gap = w[1] - w[0];
            gap_start = w[0];
        }
    }
    let window_start = gap_start + max_gap * T::of(0.5);

    let p0 = branch_value(p_raw[0], window_start, pi);
    let norm = (p0 / pi).floor() * pi; // puts f(0) in [0, pi)
    let f: Vec<T> = p_raw
        .iter()
        .enumerate()
        .map(|(j, &p)| h * T::of(j as f64) + branch_value(p, window_start, pi) - norm)
        .collect();

    Ok(SampledLift {
        n,
        f,
        fdot,
        fddot,
        fdddot,
        fddddot,
    })
}

/// Representative of `p` (mod pi) inside the window `[start, start + pi)`.
fn branch_value<T: Scalar>(p: T, window_start: T, pi: T) -> T {
    let mut pw = (p - window_start) % pi;
    if pw < T::zero() {
        pw += pi;
    }
    pw + window_start
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn single(k: u32, a: f64, b: f64) -> Vec<Harmonic<f64>> {
        vec![Harmonic { k, a, b }]
    }

    #[test]
    fn moderate_fourier_spec_is_accepted() {
        // f' = 1 + 0.2 cos 2a stays in [0.8, 1.2]
        assert!(DiffeoSpec::fourier(single(1, 0.1, 0.0)).is_ok());
    }

    #[test]
    fn steep_fourier_spec_is_rejected() {
        // f' = 1 + 1.2 cos 2a changes sign
        let err = DiffeoSpec::fourier(single(1, 0.6, 0.0)).unwrap_err();
        assert!(matches!(err, Error::NotADiffeo { .. }));
    }

    #[test]
    fn empty_harmonics_give_identity() {
        let spec = DiffeoSpec::<f64>::fourier(Vec::new()).unwrap();
        let lift = spec.sample_with_derivatives(256).unwrap();
        for j in 0..256 {
            assert!((lift.f()[j] - lift.alpha(j)).abs() < 1e-14);
            assert!((lift.fdot()[j] - 1.0).abs() < 1e-13);
            assert!(lift.fddot()[j].abs() < 1e-12);
            assert!(lift.fdddot()[j].abs() < 1e-11);
        }
    }

    #[test]
    fn identity_matrix_gives_identity_lift() {
        let spec = DiffeoSpec::mobius([[1.0f64, 0.0], [0.0, 1.0]]).unwrap();
        let lift = spec.sample_with_derivatives(256).unwrap();
        for j in 0..256 {
            assert!((lift.f()[j] - lift.alpha(j)).abs() < 1e-13);
            assert!((lift.fdot()[j] - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn rotation_matrix_shifts_the_angle() {
        // plane rotation by t acts on slopes by (cos t, sin t; -sin t, cos t)
        let t = 0.7f64;
        let spec = DiffeoSpec::mobius([[t.cos(), t.sin()], [-t.sin(), t.cos()]]).unwrap();
        let lift = spec.sample_with_derivatives(256).unwrap();
        for j in 0..256 {
            assert!((lift.f()[j] - (lift.alpha(j) + t)).abs() < 1e-12);
        }
        // the transposed matrix rotates the other way (mod the branch choice)
        let spec = DiffeoSpec::mobius([[t.cos(), -t.sin()], [t.sin(), t.cos()]]).unwrap();
        let lift = spec.sample_with_derivatives(256).unwrap();
        for j in 0..256 {
            assert!((lift.f()[j] - (lift.alpha(j) - t + PI)).abs() < 1e-12);
        }
    }

    #[test]
    fn scaling_matrix_matches_arctan_oracle() {
        let spec = DiffeoSpec::mobius([[2.0, 0.0], [0.0, 1.0]]).unwrap();
        let lift = spec.sample_with_derivatives(512).unwrap();
        // f(pi/4) = arctan(2 tan(pi/4)) = arctan 2
        let j = 128;
        assert!((lift.alpha(j) - PI / 4.0).abs() < 1e-15);
        assert!((lift.f()[j] - 1.107_148_717_794_090_4).abs() < 1e-12);
        // f'(0) = 2 in closed form
        assert!((lift.fdot()[0] - 2.0).abs() < 1e-14);
        assert!(lift.f()[0] >= 0.0 && lift.f()[0] < PI);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let err = DiffeoSpec::mobius([[1.0, 2.0], [0.5, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::Singular { .. }));
        let err = DiffeoSpec::mobius([[1.0, 0.0], [0.0, -1.0]]).unwrap_err();
        assert!(matches!(err, Error::NotADiffeo { .. }));
    }

    #[test]
    fn fourier_spectral_derivatives_match_closed_form() {
        let harmonics = vec![
            Harmonic {
                k: 1,
                a: 0.1f64,
                b: 0.02,
            },
            Harmonic {
                k: 3,
                a: -0.03,
                b: 0.05,
            },
        ];
        let spec = DiffeoSpec::fourier(harmonics.clone()).unwrap();
        let lift = spec.sample_with_derivatives(256).unwrap();
        for j in (0..256).step_by(7) {
            let a = lift.alpha(j);
            let want1 = 1.0 + fourier_part(&harmonics, a, 1);
            let want2 = fourier_part(&harmonics, a, 2);
            let want3 = fourier_part(&harmonics, a, 3);
            assert!((lift.fdot()[j] - want1).abs() < 1e-12);
            assert!((lift.fddot()[j] - want2).abs() < 1e-12);
            assert!((lift.fdddot()[j] - want3).abs() < 1e-12);
        }
    }

    #[test]
    fn derivatives_at_zero_for_reference_spec() {
        let spec = DiffeoSpec::fourier(single(1, 0.1, 0.0)).unwrap();
        let lift = spec.sample_with_derivatives(256).unwrap();
        assert!((lift.fdot()[0] - 1.2).abs() < 1e-13);
        assert!(lift.fddot()[0].abs() < 1e-12);
        assert!((lift.fdddot()[0] + 0.8).abs() < 1e-11);
    }

    #[test]
    fn under_resolved_spec_is_reported() {
        // harmonic 40 exceeds the n/4 = 16 cutoff at n = 64
        let spec = DiffeoSpec::Fourier {
            harmonics: single(40, 1e-4, 0.0),
        };
        let err = spec.sample_with_derivatives(64).unwrap_err();
        assert!(matches!(err, Error::UnderResolved { .. }));
    }

    #[test]
    fn grid_must_be_power_of_two_and_large_enough() {
        let spec = DiffeoSpec::<f64>::identity();
        assert!(matches!(
            spec.sample_with_derivatives(100),
            Err(Error::InvalidGrid { .. })
        ));
        assert!(matches!(
            spec.sample_with_derivatives(32),
            Err(Error::InvalidGrid { .. })
        ));
    }

    #[test]
    fn lift_extension_is_exact() {
        let spec = DiffeoSpec::fourier(single(2, 0.05, -0.04)).unwrap();
        let lift = spec.sample_with_derivatives(128).unwrap();
        for j in 0..128 {
            assert_eq!(lift.f_ext(j + 128), lift.f()[j] + PI);
            assert_eq!(lift.deriv_ext(1, j + 128), lift.fdot()[j]);
        }
    }

    #[test]
    fn eval_angle_reduces_mod_pi() {
        let spec = DiffeoSpec::fourier(single(1, 0.1, 0.0)).unwrap();
        let lift = spec.sample_with_derivatives(128).unwrap();
        for j in (0..128).step_by(11) {
            let a = lift.alpha(j);
            let direct = (lift.f()[j]).rem_euclid(PI);
            assert!((spec.eval_angle(a) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = DiffeoSpec::fourier(single(1, 0.1, 0.0)).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("\"type\":\"fourier\""));
        let back: DiffeoSpec<f64> = serde_json::from_str(&json).unwrap();
        back.validate().unwrap();

        let m: DiffeoSpec<f64> =
            serde_json::from_str(r#"{"type":"mobius","matrix":[[2.0,0.0],[0.0,1.0]]}"#).unwrap();
        m.validate().unwrap();
        let lift = m.sample_with_derivatives(64).unwrap();
        assert!((lift.fdot()[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn ill_conditioned_mobius_still_samples_exactly() {
        // singular values ~ (2.83, 0.036): the periodic part is far from
        // band-limited at n = 512, but closed-form sampling does not care
        let spec = DiffeoSpec::mobius([[2.0, 1.9], [1.9, 1.86]]).unwrap();
        let lift = spec.sample_with_derivatives(512).unwrap();
        assert!(lift.min_fdot() > 0.0);
        // finite difference cross-check of fdot at interior nodes
        let h = PI / 512.0;
        for j in (1..511).step_by(37) {
            let fd = (lift.f()[j + 1] - lift.f()[j - 1]) / (2.0 * h);
            assert!(
                (fd - lift.fdot()[j]).abs()
                    < 5e-3 * (1.0 + lift.fdot()[j].abs() * lift.fdot()[j].abs()),
                "j={j}: {fd} vs {}",
                lift.fdot()[j]
            );
        }
    }
}
