//! Zero detection for sampled pi-periodic functions on the circle `[0, pi)`.
//!
//! Transversal (sign-changing) zeros are bracketed on a refined grid and
//! polished by bisection on the trigonometric interpolant; tangential zeros
//! (touch points of nonnegative functions, e.g. squared determinants) are
//! found as interpolated local minima falling below a scale floor. Counting
//! is circular: clusters tighter than the merge radius collapse to a single
//! zero, including across the `0 / pi` seam.

use crate::error::{Error, Result};
use crate::scalar::{min_value, Scalar};
use crate::spectral::SampledPeriodic;

/// Default cluster radius (radians) below which zeros count as one point.
pub const DEFAULT_MERGE_RADIUS: f64 = 1e-4;

/// Default bisection width for transversal refinement (radians).
pub const DEFAULT_ZERO_TOL: f64 = 1e-10;

/// Minimum scan resolution for sign changes and minima.
const MIN_SCAN_GRID: usize = 4096;

/// Default isolation window for tangential-minimum detection.
pub fn default_tangential_width<T: Scalar>() -> T {
    T::PI() / T::of(64.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroKind {
    /// The function changes sign through the zero.
    Transversal,
    /// The function touches zero without changing sign.
    Tangential,
}

#[derive(Debug, Clone, Copy)]
pub struct Zero<T> {
    pub location: T,
    pub kind: ZeroKind,
}

/// Distinct zeros on the circle `[0, pi)`, canonically merged.
#[derive(Debug, Clone)]
pub struct ZeroSet<T: Scalar> {
    zeros: Vec<Zero<T>>,
    merge_radius: T,
}

impl<T: Scalar> ZeroSet<T> {
    /// Build a zero set, normalizing locations into `[0, pi)` and merging
    /// circular clusters tighter than `merge_radius`.
    pub fn new(raw: Vec<Zero<T>>, merge_radius: T) -> Self {
        let pi = T::PI();
        let mut zeros: Vec<Zero<T>> = raw
            .into_iter()
            .map(|z| Zero {
                location: wrap_to_period(z.location, pi),
                kind: z.kind,
            })
            .collect();
        zeros.sort_by(|a, b| a.location.partial_cmp(&b.location).unwrap());
        let zeros = merge_circular(zeros, merge_radius, pi);
        Self {
            zeros,
            merge_radius,
        }
    }

    pub fn empty(merge_radius: T) -> Self {
        Self {
            zeros: Vec::new(),
            merge_radius,
        }
    }

    pub fn zeros(&self) -> &[Zero<T>] {
        &self.zeros
    }

    pub fn locations(&self) -> impl Iterator<Item = T> + '_ {
        self.zeros.iter().map(|z| z.location)
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn merge_radius(&self) -> T {
        self.merge_radius
    }

    /// Circular distance on `[0, pi)` from `x` to the nearest zero.
    pub fn distance_to_nearest(&self, x: T) -> T {
        let pi = T::PI();
        let x = wrap_to_period(x, pi);
        self.zeros
            .iter()
            .map(|z| circular_distance(x, z.location, pi))
            .fold(T::infinity(), T::min)
    }
}

/// Number of distinct zeros after circular merging.
///
/// The set is merged at construction, so this is its length; it exists as the
/// named counting operation used by every "at least four" check.
pub fn count_distinct_circular<T: Scalar>(zs: &ZeroSet<T>) -> usize {
    zs.len()
}

fn wrap_to_period<T: Scalar>(x: T, period: T) -> T {
    let mut r = x % period;
    if r < T::zero() {
        r += period;
    }
    if r >= period {
        r -= period;
    }
    r
}

fn circular_distance<T: Scalar>(a: T, b: T, period: T) -> T {
    let d = (a - b).abs();
    d.min(period - d)
}

/// Merge sorted zeros into clusters of circular diameter <= radius per link.
fn merge_circular<T: Scalar>(sorted: Vec<Zero<T>>, radius: T, period: T) -> Vec<Zero<T>> {
    if sorted.len() <= 1 {
        return sorted;
    }
    let n = sorted.len();
    // Start clustering after the largest circular gap so no cluster is split.
    let mut start = 0;
    let mut max_gap = T::neg_infinity();
    for i in 0..n {
        let next = (i + 1) % n;
        let mut gap = sorted[next].location - sorted[i].location;
        if next == 0 {
            gap += period;
        }
        if gap > max_gap {
            max_gap = gap;
            start = next;
        }
    }

    let mut merged = Vec::new();
    let mut cluster: Vec<Zero<T>> = Vec::new();
    let mut prev_loc = T::zero();
    for idx in 0..n {
        let z = sorted[(start + idx) % n];
        // unwrap the walk so cluster members are monotone
        let mut loc = z.location;
        if idx > 0 {
            while loc < prev_loc {
                loc += period;
            }
        }
        if !cluster.is_empty() && loc - prev_loc > radius {
            merged.push(collapse_cluster(&cluster, period));
            cluster.clear();
        }
        cluster.push(Zero {
            location: loc,
            kind: z.kind,
        });
        prev_loc = loc;
    }
    if !cluster.is_empty() {
        merged.push(collapse_cluster(&cluster, period));
    }
    merged.sort_by(|a, b| a.location.partial_cmp(&b.location).unwrap());
    merged
}

fn collapse_cluster<T: Scalar>(cluster: &[Zero<T>], period: T) -> Zero<T> {
    let sum: T = cluster.iter().map(|z| z.location).sum();
    let mean = sum / T::of(cluster.len() as f64);
    let kind = if cluster.iter().any(|z| z.kind == ZeroKind::Transversal) {
        ZeroKind::Transversal
    } else {
        ZeroKind::Tangential
    };
    Zero {
        location: wrap_to_period(mean, period),
        kind,
    }
}

/// Locate every sign change of a sampled pi-periodic function and refine it
/// to a bracket of width at most `tol` by bisection on the trigonometric
/// interpolant.
///
/// The sign scan runs on a spectrally refined copy of the samples so that
/// zero pairs falling between coarse grid nodes are still seen.
pub fn refine_transversal_zeros<T: Scalar>(
    samples: &SampledPeriodic<T>,
    tol: T,
) -> Result<ZeroSet<T>> {
    assert!(tol > T::zero(), "tolerance must be positive");
    let n = samples.n();
    if n < 16 {
        return Err(Error::InvalidGrid { got: n, min: 16 });
    }
    let sup = samples.sup_norm();
    if sup < tol {
        return Err(Error::AllZero {
            tol: tol.to_f64_lossy(),
        });
    }

    let fine = scan_copy(samples);
    let vals = fine.values();
    let nn = fine.n();
    let h = fine.grid_step();

    let mut zeros = Vec::new();
    for j in 0..nn {
        let a = vals[j];
        let b = vals[(j + 1) % nn];
        if a == T::zero() {
            zeros.push(Zero {
                location: fine.grid_point(j),
                kind: ZeroKind::Transversal,
            });
            continue;
        }
        if b == T::zero() {
            continue; // recorded at its own node
        }
        if (a > T::zero()) != (b > T::zero()) {
            let lo = fine.grid_point(j);
            let location = bisect(|x| fine.eval(x), lo, lo + h, a > T::zero(), tol);
            zeros.push(Zero {
                location,
                kind: ZeroKind::Transversal,
            });
        }
    }
    Ok(ZeroSet::new(zeros, T::of(DEFAULT_MERGE_RADIUS)))
}

/// Find tangential zeros of a nonnegative sampled function: interpolated
/// local minima whose refined value drops below `floor`, isolated within a
/// window of angular size `width`.
///
/// Returns `NegativeInput` if the samples dip below `-floor`, which signals a
/// sign-changing function that belongs to [`refine_transversal_zeros`].
pub fn detect_tangential_zeros<T: Scalar>(
    samples: &SampledPeriodic<T>,
    floor: T,
    width: T,
) -> Result<ZeroSet<T>> {
    assert!(floor > T::zero(), "floor must be positive");
    let min = min_value(samples.values());
    if min < -floor {
        return Err(Error::NegativeInput {
            min: min.to_f64_lossy(),
            floor: floor.to_f64_lossy(),
        });
    }

    let fine = scan_copy(samples);
    let vals = fine.values();
    let nn = fine.n();
    let h = fine.grid_step();
    let w_cells = ((width / h).ceil().to_f64_lossy() as usize).max(1);
    let sup = samples.sup_norm();

    // Grid minima near a touch point sit O(h^2) above zero, far over `floor`;
    // candidates are therefore taken below a loose cap relative to the
    // surrounding scale and only the refined interpolated minimum is held to
    // the floor itself.
    let cap = floor.max(T::of(0.05) * sup);
    let quiet = T::of(0.5) * sup;

    let mut zeros = Vec::new();
    for j in 0..nn {
        let v = vals[j];
        let left = vals[(j + nn - 1) % nn];
        let right = vals[(j + 1) % nn];
        // strict local minimum, ties broken to the right
        if left <= v || right < v || v >= cap {
            continue;
        }
        // the width-neighborhood must stay below the surrounding scale
        let neighborhood_max = (1..=w_cells)
            .flat_map(|d| [vals[(j + nn - d) % nn], vals[(j + d) % nn]])
            .fold(v, T::max);
        if neighborhood_max > quiet {
            continue;
        }
        let x = fine.grid_point(j);
        let (loc, val) = refine_minimum(|t| fine.eval(t), x - h, x + h);
        if val < floor {
            zeros.push(Zero {
                location: loc,
                kind: ZeroKind::Tangential,
            });
        }
    }
    Ok(ZeroSet::new(zeros, T::of(DEFAULT_MERGE_RADIUS)))
}

/// Complete zero set of a sign-changing function: transversal zeros from the
/// sign scan, plus tangential touch points recovered as tangential zeros of
/// the square. Clusters collapse with transversal kind taking precedence, so
/// each sign change is reported once.
pub fn mixed_zero_set<T: Scalar>(samples: &SampledPeriodic<T>, tol: T) -> Result<ZeroSet<T>> {
    let transversal = refine_transversal_zeros(samples, tol)?;
    let squared = samples.map(|v| v * v);
    let floor = T::of(1e-8) * squared.sup_norm();
    let tangential = detect_tangential_zeros(&squared, floor, T::of(DEFAULT_MERGE_RADIUS))?;
    let mut all: Vec<Zero<T>> = transversal.zeros().to_vec();
    all.extend_from_slice(tangential.zeros());
    Ok(ZeroSet::new(all, T::of(DEFAULT_MERGE_RADIUS)))
}

/// Spectrally refined copy used for scanning (at least [`MIN_SCAN_GRID`]).
fn scan_copy<T: Scalar>(samples: &SampledPeriodic<T>) -> SampledPeriodic<T> {
    let target = (4 * samples.n()).max(MIN_SCAN_GRID);
    samples.upsample_to(target.next_power_of_two())
}

/// Bracketing bisection; `lo_positive` records the sign at `lo`.
fn bisect<T: Scalar>(f: impl Fn(T) -> T, mut lo: T, mut hi: T, lo_positive: bool, tol: T) -> T {
    let half = T::of(0.5);
    while hi - lo > tol {
        let mid = (lo + hi) * half;
        let fm = f(mid);
        if fm == T::zero() {
            return mid;
        }
        if (fm > T::zero()) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) * half
}

/// Golden-section minimum refinement on `[lo, hi]`.
fn refine_minimum<T: Scalar>(f: impl Fn(T) -> T, mut lo: T, mut hi: T) -> (T, T) {
    let inv_phi = T::of(0.618_033_988_749_894_9);
    let mut a = hi - (hi - lo) * inv_phi;
    let mut b = lo + (hi - lo) * inv_phi;
    let mut fa = f(a);
    let mut fb = f(b);
    let tol = T::of(1e-12);
    while hi - lo > tol {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - (hi - lo) * inv_phi;
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + (hi - lo) * inv_phi;
            fb = f(b);
        }
    }
    let mid = (lo + hi) * T::of(0.5);
    (mid, f(mid))
}
