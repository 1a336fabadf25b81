//! Uniformly sampled periodic functions with Fourier-side differentiation,
//! interpolation and resampling.
//!
//! A [`SampledPeriodic`] stores n real samples over one period together with
//! the Fourier coefficients `c_m` of the trigonometric interpolant
//! `f(x) = sum_m c_m exp(i w0 m x)`, `w0 = 2 pi / period`. Pi-periodic data
//! on the projective line uses `period = pi`, so harmonic m corresponds to
//! angular frequency `2 m` (the doubled-angle convention); closed plane and
//! space curves use `period = 2 pi`.
//!
//! All grids are powers of two; a hand-rolled radix-2 transform is all that
//! is ever needed.

use num_complex::Complex;

use crate::scalar::{sup_norm, Scalar};

/// In-place radix-2 Cooley-Tukey transform, unscaled in both directions.
///
/// Forward computes `X_k = sum_j x_j exp(-2 pi i j k / n)`; inverse omits the
/// `1/n` factor, callers normalize.
pub fn fft_in_place<T: Scalar>(data: &mut [Complex<T>], inverse: bool) {
    let n = data.len();
    assert!(n.is_power_of_two(), "fft length must be a power of two");
    if n <= 1 {
        return;
    }

    // bit-reversal permutation
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            data.swap(i, j);
        }
    }

    // twiddle table w_j = exp(sign * 2 pi i j / n), evaluated directly so the
    // round-trip error stays at machine level
    let sign = if inverse { T::one() } else { -T::one() };
    let step = sign * T::of(2.0) * T::PI() / T::of(n as f64);
    let table: Vec<Complex<T>> = (0..n / 2)
        .map(|k| {
            let (s, c) = (step * T::of(k as f64)).sin_cos();
            Complex::new(c, s)
        })
        .collect();

    let mut len = 2;
    while len <= n {
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..len / 2 {
                let w = table[k * stride];
                let u = data[start + k];
                let v = data[start + k + len / 2] * w;
                data[start + k] = u + v;
                data[start + k + len / 2] = u - v;
            }
        }
        len <<= 1;
    }
}

fn forward_coeffs<T: Scalar>(values: &[T]) -> Vec<Complex<T>> {
    let n = values.len();
    let mut buf: Vec<Complex<T>> = values.iter().map(|&v| Complex::new(v, T::zero())).collect();
    fft_in_place(&mut buf, false);
    let inv_n = T::one() / T::of(n as f64);
    for c in &mut buf {
        *c = *c * inv_n;
    }
    buf
}

fn inverse_values<T: Scalar>(spectrum: &[Complex<T>]) -> Vec<T> {
    let mut buf = spectrum.to_vec();
    fft_in_place(&mut buf, true);
    buf.into_iter().map(|c| c.re).collect()
}

/// Signed harmonic index of FFT bin `k` on a grid of size `n`.
fn signed_harmonic(k: usize, n: usize) -> i64 {
    if k < n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// A real function sampled on the uniform grid `x_j = j * period / n`,
/// together with the coefficients of its trigonometric interpolant.
#[derive(Debug, Clone)]
pub struct SampledPeriodic<T: Scalar> {
    period: T,
    values: Vec<T>,
    spectrum: Vec<Complex<T>>,
}

impl<T: Scalar> SampledPeriodic<T> {
    /// Wrap samples of a function with the given period.
    pub fn from_values(values: Vec<T>, period: T) -> Self {
        assert!(
            values.len().is_power_of_two() && values.len() >= 2,
            "grid size must be a power of two, got {}",
            values.len()
        );
        let spectrum = forward_coeffs(&values);
        Self {
            period,
            values,
            spectrum,
        }
    }

    /// Samples of a pi-periodic function on `[0, pi)`.
    pub fn pi_periodic(values: Vec<T>) -> Self {
        Self::from_values(values, T::PI())
    }

    /// Samples of a 2 pi-periodic function on `[0, 2 pi)`.
    pub fn two_pi_periodic(values: Vec<T>) -> Self {
        Self::from_values(values, T::of(2.0) * T::PI())
    }

    /// Sample a closure on the uniform grid.
    pub fn from_fn(n: usize, period: T, f: impl Fn(T) -> T) -> Self {
        let h = period / T::of(n as f64);
        Self::from_values((0..n).map(|j| f(h * T::of(j as f64))).collect(), period)
    }

    fn from_spectrum(spectrum: Vec<Complex<T>>, period: T) -> Self {
        let values = inverse_values(&spectrum);
        Self {
            period,
            values,
            spectrum,
        }
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn period(&self) -> T {
        self.period
    }

    /// Fundamental angular frequency `2 pi / period` (2 for pi-periodic data).
    pub fn omega0(&self) -> T {
        T::of(2.0) * T::PI() / self.period
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn spectrum(&self) -> &[Complex<T>] {
        &self.spectrum
    }

    /// Grid node `x_j = j * period / n`.
    pub fn grid_point(&self, j: usize) -> T {
        self.period * T::of(j as f64) / T::of(self.n() as f64)
    }

    /// Grid spacing `period / n`.
    pub fn grid_step(&self) -> T {
        self.period / T::of(self.n() as f64)
    }

    pub fn sup_norm(&self) -> T {
        sup_norm(&self.values)
    }

    /// Mean value over the period (zeroth Fourier coefficient).
    pub fn mean(&self) -> T {
        self.spectrum[0].re
    }

    /// Magnitude of harmonic `m >= 0`: `|c_0|` for m = 0, else `|c_m| + |c_-m|`.
    pub fn harmonic_magnitude(&self, m: usize) -> T {
        let n = self.n();
        if m == 0 {
            self.spectrum[0].norm()
        } else if m < n / 2 {
            self.spectrum[m].norm() + self.spectrum[n - m].norm()
        } else if m == n / 2 {
            self.spectrum[n / 2].norm()
        } else {
            T::zero()
        }
    }

    /// Largest coefficient magnitude strictly above harmonic `cutoff`.
    pub fn spectral_tail_max(&self, cutoff: usize) -> T {
        let n = self.n();
        self.spectrum
            .iter()
            .enumerate()
            .filter(|(k, _)| signed_harmonic(*k, n).unsigned_abs() as usize > cutoff)
            .fold(T::zero(), |m, (_, c)| m.max(c.norm()))
    }

    /// Spectral derivative of the given order. The Nyquist bin is zeroed for
    /// odd orders so the result stays real-symmetric.
    ///
    /// Coefficients at the transform's rounding floor are zeroed first:
    /// the `(w0 m)^order` multiplier amplifies high-harmonic noise by up to
    /// `n^order`, which would otherwise dominate third derivatives.
    pub fn derivative(&self, order: u32) -> Self {
        let n = self.n();
        let w0 = self.omega0();
        let c_max = self.spectrum.iter().fold(T::zero(), |m, c| m.max(c.norm()));
        let noise_floor = T::epsilon() * T::of(16.0) * c_max;
        let spectrum = self
            .spectrum
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                if (k == n / 2 && order % 2 == 1) || c.norm() < noise_floor {
                    return Complex::new(T::zero(), T::zero());
                }
                let m = T::of(signed_harmonic(k, n) as f64);
                let factor = Complex::new(T::zero(), w0 * m).powu(order);
                c * factor
            })
            .collect();
        Self::from_spectrum(spectrum, self.period)
    }

    /// Evaluate the trigonometric interpolant at an arbitrary point.
    pub fn eval(&self, x: T) -> T {
        let n = self.n();
        let w0 = self.omega0();
        let (s, c) = (w0 * x).sin_cos();
        let z = Complex::new(c, s);
        let zc = z.conj();
        let mut acc = self.spectrum[0];
        let mut wp = Complex::new(T::one(), T::zero());
        let mut wm = Complex::new(T::one(), T::zero());
        for m in 1..n / 2 {
            wp = wp * z;
            wm = wm * zc;
            acc = acc + self.spectrum[m] * wp + self.spectrum[n - m] * wm;
        }
        // Nyquist bin extends symmetrically as a pure cosine.
        let ny = self.spectrum[n / 2];
        let nyq_cos = (w0 * T::of((n / 2) as f64) * x).cos();
        (acc + ny * nyq_cos).re
    }

    /// Resample onto a finer power-of-two grid by zero padding the spectrum.
    pub fn upsample_to(&self, new_n: usize) -> Self {
        let n = self.n();
        assert!(new_n.is_power_of_two() && new_n >= n);
        if new_n == n {
            return self.clone();
        }
        let mut spectrum = vec![Complex::new(T::zero(), T::zero()); new_n];
        spectrum[..n / 2].copy_from_slice(&self.spectrum[..n / 2]);
        spectrum[new_n - n / 2 + 1..].copy_from_slice(&self.spectrum[n / 2 + 1..]);
        let half = T::of(0.5);
        spectrum[n / 2] = self.spectrum[n / 2] * half;
        spectrum[new_n - n / 2] = self.spectrum[n / 2] * half;
        Self::from_spectrum(spectrum, self.period)
    }

    /// Samples of `f(x + delta)` on the same grid, via spectral modulation.
    pub fn shift(&self, delta: T) -> Self {
        let n = self.n();
        let w0 = self.omega0();
        let spectrum = self
            .spectrum
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                if k == n / 2 {
                    // symmetric extension: the Nyquist cosine is modulated by a cosine
                    return c * (w0 * T::of((n / 2) as f64) * delta).cos();
                }
                let m = T::of(signed_harmonic(k, n) as f64);
                let (s, co) = (w0 * m * delta).sin_cos();
                c * Complex::new(co, s)
            })
            .collect();
        Self::from_spectrum(spectrum, self.period)
    }

    /// Pointwise map of the sample values (spectrum recomputed).
    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::from_values(self.values.iter().map(|&v| f(v)).collect(), self.period)
    }

    /// Pointwise combination with another function on the same grid.
    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        assert_eq!(self.n(), other.n());
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::from_values(values, self.period)
    }

    /// Residual of the stored spectrum against a fresh transform of the values.
    pub fn round_trip_residual(&self) -> T {
        let recomputed = forward_coeffs(&self.values);
        self.spectrum
            .iter()
            .zip(&recomputed)
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }
}

/// Fold samples of a half-period-periodic function from a `[0, period)` grid
/// of size 2n down to `[0, period/2)` by averaging the two copies.
pub fn fold_half_period<T: Scalar>(values: &[T]) -> Vec<T> {
    let n = values.len() / 2;
    (0..n)
        .map(|j| (values[j] + values[j + n]) * T::of(0.5))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, period: f64) -> Vec<f64> {
        (0..n).map(|j| j as f64 * period / n as f64).collect()
    }

    #[test]
    fn fft_round_trip() {
        let n = 256;
        let values: Vec<f64> = grid(n, std::f64::consts::PI)
            .iter()
            .map(|&a| (2.0 * a).sin() + 0.3 * (8.0 * a).cos() - 1.7)
            .collect();
        let s = SampledPeriodic::pi_periodic(values);
        assert!(s.round_trip_residual() < 1e-14);
    }

    #[test]
    fn derivative_matches_closed_form() {
        let n = 256;
        let s = SampledPeriodic::from_fn(n, std::f64::consts::PI, |a| {
            0.4 * (2.0 * a).sin() - 0.25 * (6.0 * a).cos()
        });
        let d1 = s.derivative(1);
        let d3 = s.derivative(3);
        for j in 0..n {
            let a = s.grid_point(j);
            let want1 = 0.8 * (2.0 * a).cos() + 1.5 * (6.0 * a).sin();
            let want3 = -3.2 * (2.0 * a).cos() - 54.0 * (6.0 * a).sin();
            assert!((d1.values()[j] - want1).abs() < 1e-12);
            assert!((d3.values()[j] - want3).abs() < 1e-10);
        }
    }

    #[test]
    fn eval_interpolates_between_nodes() {
        let s = SampledPeriodic::from_fn(128, std::f64::consts::PI, |a| {
            (2.0 * a).sin() + 0.1 * (4.0 * a).cos()
        });
        for &x in &[0.013f64, 0.47, 1.1, 2.9, 3.13] {
            let want = (2.0 * x).sin() + 0.1 * (4.0 * x).cos();
            assert!((s.eval(x) - want).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn eval_agrees_with_grid_values() {
        let s = SampledPeriodic::from_fn(64, std::f64::consts::PI, |a| (4.0 * a).sin().exp());
        for j in 0..s.n() {
            assert!((s.eval(s.grid_point(j)) - s.values()[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn upsample_preserves_function() {
        let s = SampledPeriodic::from_fn(64, std::f64::consts::PI, |a| {
            (2.0 * a).cos() - 0.2 * (10.0 * a).sin()
        });
        let u = s.upsample_to(256);
        for j in 0..u.n() {
            let a = u.grid_point(j);
            let want = (2.0 * a).cos() - 0.2 * (10.0 * a).sin();
            assert!((u.values()[j] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn shift_matches_direct_sampling() {
        let s = SampledPeriodic::from_fn(128, std::f64::consts::PI, |a| {
            0.7 * (2.0 * a).sin() + (6.0 * a).cos()
        });
        let delta = 0.2345;
        let shifted = s.shift(delta);
        for j in 0..s.n() {
            let a = s.grid_point(j) + delta;
            let want = 0.7 * (2.0 * a).sin() + (6.0 * a).cos();
            assert!((shifted.values()[j] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn two_pi_convention_derivative() {
        let s = SampledPeriodic::from_fn(128, 2.0 * std::f64::consts::PI, |a| a.sin());
        let d = s.derivative(2);
        for j in 0..s.n() {
            assert!((d.values()[j] + s.values()[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn tail_detects_unresolved_content() {
        let s = SampledPeriodic::from_fn(64, std::f64::consts::PI, |a| (30.0 * 2.0 * a).sin());
        assert!(s.spectral_tail_max(16) > 0.4);
        let smooth = SampledPeriodic::from_fn(64, std::f64::consts::PI, |a| (2.0 * a).sin());
        assert!(smooth.spectral_tail_max(16) < 1e-14);
    }

    #[test]
    fn fold_averages_half_copies() {
        let n = 64;
        let doubled: Vec<f64> = grid(2 * n, 2.0 * std::f64::consts::PI)
            .iter()
            .map(|&a| (2.0 * a).cos())
            .collect();
        let folded = fold_half_period(&doubled);
        for (j, v) in folded.iter().enumerate() {
            let a = j as f64 * std::f64::consts::PI / n as f64;
            assert!((v - (2.0 * a).cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn generic_over_f32() {
        let s = SampledPeriodic::<f32>::from_fn(64, std::f32::consts::PI, |a| (2.0 * a).sin());
        let d = s.derivative(1);
        assert!((d.values()[0] - 2.0).abs() < 1e-4);
    }
}
