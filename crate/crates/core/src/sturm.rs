//! Hill / Sturm-Liouville equations `phi'' = -k(a) phi` with pi-periodic
//! potential: monodromy, disconjugacy certification, and the strengthened
//! comparison count for pairs of potentials.
//!
//! Integration is classical fixed-step RK4. The stage points of a fixed-step
//! sweep all land on a twice-refined uniform grid, so the potential is
//! evaluated by spectral resampling once per sweep instead of per step; this
//! keeps the interpolation error at spectral level and the monodromy
//! bit-reproducible. Step halving (Richardson check) certifies convergence.

use crate::error::{Error, Result, Side};
use crate::roots::{self, ZeroSet};
use crate::scalar::Scalar;
use crate::spectral::SampledPeriodic;

/// Convergence requirement on successive step-halved monodromies.
const MONODROMY_TOL: f64 = 1e-9;

/// Maximum number of step halvings before giving up.
const MAX_HALVINGS: usize = 4;

/// `|m + Id|` ceiling for antiperiodicity of the monodromy.
const ANTIPERIODIC_TOL: f64 = 1e-6;

/// Number of equispaced start points for the single-zero sweep.
const SWEEP_POINTS: usize = 32;

/// Refinement level (relative to the potential grid) used when integrating
/// individual solutions.
const SOLUTION_LEVEL: usize = 3;

/// Extra refinement for solutions feeding the orthogonality quadrature,
/// whose 1e-8 relative target is tighter than any zero count.
const QUADRATURE_LEVEL: usize = 4;

/// Coarser level for the zero-count sweep, where only signs matter.
const SWEEP_LEVEL: usize = 2;

/// A Hill problem: pi-periodic potential with trigonometric interpolation
/// off the grid (implicit in the stored spectrum).
#[derive(Debug, Clone)]
pub struct SLProblem<T: Scalar> {
    k: SampledPeriodic<T>,
}

impl<T: Scalar> SLProblem<T> {
    pub fn new(k: SampledPeriodic<T>) -> Self {
        Self { k }
    }

    /// Constant-potential problem on a grid of size `n`.
    pub fn constant(c: T, n: usize) -> Self {
        Self {
            k: SampledPeriodic::from_fn(n, T::PI(), |_| c),
        }
    }

    pub fn potential(&self) -> &SampledPeriodic<T> {
        &self.k
    }

    pub fn n(&self) -> usize {
        self.k.n()
    }
}

/// Linear map propagating `(phi, phi')` across one period `[0, pi]`.
#[derive(Debug, Clone, Copy)]
pub struct Monodromy<T> {
    m: [[T; 2]; 2],
}

impl<T: Scalar> Monodromy<T> {
    pub fn entries(&self) -> &[[T; 2]; 2] {
        &self.m
    }

    pub fn det(&self) -> T {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Largest entry of `m + Id` in absolute value; zero iff the monodromy is
    /// exactly `-Id` (every solution antiperiodic).
    pub fn defect_from_minus_id(&self) -> T {
        let mut d = T::zero();
        for (i, row) in self.m.iter().enumerate() {
            for (j, &entry) in row.iter().enumerate() {
                let id = if i == j { T::one() } else { T::zero() };
                d = d.max((entry + id).abs());
            }
        }
        d
    }

    fn max_abs_diff(&self, other: &Self) -> T {
        let mut d = T::zero();
        for (row, other_row) in self.m.iter().zip(&other.m) {
            for (&a, &b) in row.iter().zip(other_row) {
                d = d.max((a - b).abs());
            }
        }
        d
    }
}

/// One RK4 step of `phi'' = -k phi`; `k0`, `kh`, `k1` are the potential at
/// the step start, midpoint and end.
#[inline]
fn rk4_step<T: Scalar>(phi: T, psi: T, h: T, k0: T, kh: T, k1: T) -> (T, T) {
    let half = T::of(0.5);
    let sixth = T::of(1.0 / 6.0);
    let two = T::of(2.0);

    let d1 = (psi, -k0 * phi);
    let d2 = (psi + half * h * d1.1, -kh * (phi + half * h * d1.0));
    let d3 = (psi + half * h * d2.1, -kh * (phi + half * h * d2.0));
    let d4 = (psi + h * d3.1, -k1 * (phi + h * d3.0));

    (
        phi + h * sixth * (d1.0 + two * d2.0 + two * d3.0 + d4.0),
        psi + h * sixth * (d1.1 + two * d2.1 + two * d3.1 + d4.1),
    )
}

/// Sweep `steps` RK4 steps starting at fine-grid index `0`, where `k_fine`
/// holds the potential at half-step resolution over one period (cyclic).
fn sweep<T: Scalar>(
    k_fine: &[T],
    steps: usize,
    h: T,
    mut state: (T, T),
    mut on_node: impl FnMut(usize, (T, T)),
) -> (T, T) {
    let fine_n = k_fine.len();
    for i in 0..steps {
        on_node(i, state);
        let k0 = k_fine[(2 * i) % fine_n];
        let kh = k_fine[(2 * i + 1) % fine_n];
        let k1 = k_fine[(2 * i + 2) % fine_n];
        state = rk4_step(state.0, state.1, h, k0, kh, k1);
    }
    on_node(steps, state);
    state
}

fn monodromy_at_level<T: Scalar>(p: &SLProblem<T>, level: usize) -> Monodromy<T> {
    let steps = p.n() << level;
    let fine = p.k.upsample_to(2 * steps);
    let h = T::PI() / T::of(steps as f64);
    let e1 = sweep(fine.values(), steps, h, (T::one(), T::zero()), |_, _| {});
    let e2 = sweep(fine.values(), steps, h, (T::zero(), T::one()), |_, _| {});
    Monodromy {
        m: [[e1.0, e2.0], [e1.1, e2.1]],
    }
}

/// Integrate the fundamental solutions across one period with step halving
/// and Richardson extrapolation, until two successive extrapolated
/// monodromies agree to `1e-9`.
pub fn integrate_fundamental<T: Scalar>(p: &SLProblem<T>) -> Result<Monodromy<T>> {
    let sixteen = T::of(16.0);
    let fifteenth = T::of(1.0 / 15.0);
    let extrapolate = |coarse: &Monodromy<T>, fine: &Monodromy<T>| -> Monodromy<T> {
        let mut m = [[T::zero(); 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = (sixteen * fine.m[i][j] - coarse.m[i][j]) * fifteenth;
            }
        }
        Monodromy { m }
    };

    let mut prev = monodromy_at_level(p, 0);
    let mut prev_extrap: Option<Monodromy<T>> = None;
    let mut last_diff = T::infinity();
    for level in 1..=MAX_HALVINGS {
        let cur = monodromy_at_level(p, level);
        let extrap = extrapolate(&prev, &cur);
        if let Some(pe) = &prev_extrap {
            last_diff = extrap.max_abs_diff(pe);
            if last_diff < T::of(MONODROMY_TOL) {
                return Ok(extrap);
            }
        }
        prev_extrap = Some(extrap);
        prev = cur;
    }
    Err(Error::NoConvergence {
        last_diff: last_diff.to_f64_lossy(),
    })
}

/// A solution sampled on `alpha_0 + j pi / n`, `j = 0..2n`, with derivatives
/// to third order (`phi''` from the equation, `phi'''` from its derivative).
#[derive(Debug, Clone)]
pub struct SLSolution<T: Scalar> {
    start: T,
    n: usize,
    phi: Vec<T>,
    dphi: Vec<T>,
    ddphi: Vec<T>,
    dddphi: Vec<T>,
}

impl<T: Scalar> SLSolution<T> {
    pub fn start(&self) -> T {
        self.start
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self, j: usize) -> T {
        self.start + T::PI() * T::of(j as f64) / T::of(self.n as f64)
    }

    pub fn phi(&self) -> &[T] {
        &self.phi
    }

    pub fn dphi(&self) -> &[T] {
        &self.dphi
    }

    pub fn ddphi(&self) -> &[T] {
        &self.ddphi
    }

    pub fn dddphi(&self) -> &[T] {
        &self.dddphi
    }

    /// `sup |phi(a + pi) + phi(a)|` over the first period.
    pub fn antiperiodicity_residual(&self) -> T {
        (0..self.n).fold(T::zero(), |m, j| {
            m.max((self.phi[j + self.n] + self.phi[j]).abs())
        })
    }

    /// Zeros on the half-open interval `[start, start + pi)`: the enforced
    /// zero at the start plus interior sign changes.
    pub fn zeros_on_half_period(&self) -> usize {
        let mut count = 1;
        for j in 1..self.n - 1 {
            let a = self.phi[j];
            let b = self.phi[j + 1];
            if a != T::zero() && b != T::zero() && (a > T::zero()) != (b > T::zero()) {
                count += 1;
            }
        }
        count
    }

    /// Locations of sign changes over the full `[start, start + 2 pi)` range,
    /// linearly interpolated.
    pub fn sign_change_locations(&self) -> Vec<T> {
        let mut zs = Vec::new();
        let h = T::PI() / T::of(self.n as f64);
        for j in 0..2 * self.n - 1 {
            let a = self.phi[j];
            let b = self.phi[j + 1];
            if a == T::zero() {
                zs.push(self.alpha(j));
            } else if b != T::zero() && (a > T::zero()) != (b > T::zero()) {
                zs.push(self.alpha(j) + h * a / (a - b));
            }
        }
        zs
    }
}

/// Integrate the solution with `phi(alpha_0) = 0`, `phi'(alpha_0) = 1` over
/// `[alpha_0, alpha_0 + 2 pi)`.
///
/// The potential is shifted spectrally so the sweep always starts at grid
/// index zero; stage values again come from spectral resampling.
pub fn solution_vanishing_at<T: Scalar>(p: &SLProblem<T>, alpha0: T) -> Result<SLSolution<T>> {
    solution_at_level(p, alpha0, SOLUTION_LEVEL)
}

fn solution_at_level<T: Scalar>(
    p: &SLProblem<T>,
    alpha0: T,
    level: usize,
) -> Result<SLSolution<T>> {
    let n = p.n();
    let k_shift = if alpha0 == T::zero() {
        p.k.clone()
    } else {
        p.k.shift(alpha0)
    };
    let k_dot = k_shift.derivative(1);

    let steps_per_period = n << level;
    let stride = 1 << level;
    let fine = k_shift.upsample_to(2 * steps_per_period);
    let h = T::PI() / T::of(steps_per_period as f64);

    let mut phi = vec![T::zero(); 2 * n];
    let mut dphi = vec![T::zero(); 2 * n];
    sweep(
        fine.values(),
        2 * steps_per_period,
        h,
        (T::zero(), T::one()),
        |i, (f, df)| {
            if i % stride == 0 && i / stride < 2 * n {
                phi[i / stride] = f;
                dphi[i / stride] = df;
            }
        },
    );

    let mut ddphi = Vec::with_capacity(2 * n);
    let mut dddphi = Vec::with_capacity(2 * n);
    for j in 0..2 * n {
        let kv = k_shift.values()[j % n];
        let kd = k_dot.values()[j % n];
        ddphi.push(-kv * phi[j]);
        dddphi.push(-(kd * phi[j] + kv * dphi[j]));
    }

    Ok(SLSolution {
        start: alpha0,
        n,
        phi,
        dphi,
        ddphi,
        dddphi,
    })
}

/// Everything the disconjugacy decision is based on.
#[derive(Debug, Clone)]
pub struct DisconjugacyReport<T: Scalar> {
    pub monodromy: Monodromy<T>,
    /// `|m + Id|` in the max-entry norm.
    pub antiperiodicity_defect: T,
    /// Zero counts of the solutions vanishing at 32 equispaced start points.
    pub zero_counts: Vec<usize>,
    pub disconjugate: bool,
}

/// Decide disconjugacy: monodromy `-Id` within `1e-6` and exactly one zero
/// per half period for the solutions vanishing at 32 equispaced points
/// (the solution space is two-dimensional, so these sweep all solutions up
/// to scale).
pub fn check_disconjugate<T: Scalar>(p: &SLProblem<T>) -> Result<DisconjugacyReport<T>> {
    let monodromy = integrate_fundamental(p)?;
    let defect = monodromy.defect_from_minus_id();

    let mut zero_counts = Vec::with_capacity(SWEEP_POINTS);
    for i in 0..SWEEP_POINTS {
        let alpha0 = T::PI() * T::of(i as f64) / T::of(SWEEP_POINTS as f64);
        let sol = solution_at_level(p, alpha0, SWEEP_LEVEL)?;
        zero_counts.push(sol.zeros_on_half_period());
    }

    let disconjugate = defect <= T::of(ANTIPERIODIC_TOL) && zero_counts.iter().all(|&c| c == 1);
    Ok(DisconjugacyReport {
        monodromy,
        antiperiodicity_defect: defect,
        zero_counts,
        disconjugate,
    })
}

/// Orthogonality integral and the scale of its integrand.
#[derive(Debug, Clone, Copy)]
pub struct OrthogonalityCheck<T> {
    /// `integral over [a0, a0 + pi) of (k1 - k2) phi1 phi2`.
    pub integral: T,
    /// `sup |(k1 - k2) phi1 phi2|`, for relative thresholds.
    pub integrand_scale: T,
}

/// Quadrature of `(k1 - k2) phi1 phi2` over one period, with `phi_i` the
/// solutions vanishing at `alpha0`. The integrand is smooth and pi-periodic,
/// so the uniform-grid rectangle rule is spectrally accurate.
pub fn orthogonality_integral<T: Scalar>(
    p1: &SLProblem<T>,
    p2: &SLProblem<T>,
    alpha0: T,
) -> Result<OrthogonalityCheck<T>> {
    assert_eq!(p1.n(), p2.n(), "potentials must share a grid");
    let n = p1.n();
    let phi1 = solution_at_level(p1, alpha0, QUADRATURE_LEVEL)?;
    let phi2 = solution_at_level(p2, alpha0, QUADRATURE_LEVEL)?;
    let k1 = if alpha0 == T::zero() {
        p1.k.clone()
    } else {
        p1.k.shift(alpha0)
    };
    let k2 = if alpha0 == T::zero() {
        p2.k.clone()
    } else {
        p2.k.shift(alpha0)
    };

    let h = T::PI() / T::of(n as f64);
    let mut sum = T::zero();
    let mut scale = T::zero();
    for j in 0..n {
        let w = (k1.values()[j] - k2.values()[j]) * phi1.phi()[j] * phi2.phi()[j];
        sum += w;
        scale = scale.max(w.abs());
    }
    Ok(OrthogonalityCheck {
        integral: sum * h,
        integrand_scale: scale,
    })
}

/// Result of the strengthened comparison of two disconjugate problems.
#[derive(Debug, Clone)]
pub struct ComparisonOutcome<T: Scalar> {
    /// Zero set of `k1 - k2` on `[0, pi)`.
    pub zeros: ZeroSet<T>,
    pub orthogonality: OrthogonalityCheck<T>,
}

/// Zero count of `k1 - k2` plus the orthogonality identity, after checking
/// disconjugacy of both problems.
pub fn comparison_zero_count<T: Scalar>(
    p1: &SLProblem<T>,
    p2: &SLProblem<T>,
) -> Result<ComparisonOutcome<T>> {
    assert_eq!(p1.n(), p2.n(), "potentials must share a grid");
    let diff = p1.k.zip_with(&p2.k, |a, b| a - b);
    let scale = p1.k.sup_norm().max(p2.k.sup_norm());
    if diff.sup_norm() < T::of(1e-10) * scale {
        return Err(Error::DegenerateEqual {
            sup: diff.sup_norm().to_f64_lossy(),
        });
    }

    if !check_disconjugate(p1)?.disconjugate {
        return Err(Error::NotDisconjugate { side: Side::First });
    }
    if !check_disconjugate(p2)?.disconjugate {
        return Err(Error::NotDisconjugate { side: Side::Second });
    }

    let zeros = roots::mixed_zero_set(&diff, T::of(roots::DEFAULT_ZERO_TOL))?;
    let orthogonality = orthogonality_integral(p1, p2, T::zero())?;
    Ok(ComparisonOutcome {
        zeros,
        orthogonality,
    })
}
