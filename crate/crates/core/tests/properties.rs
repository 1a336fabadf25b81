//! Property tests for the zero-detection invariants and the projective
//! identities on randomly drawn inputs.

use proptest::prelude::*;
use std::f64::consts::PI;

use projline::diffeo::{DiffeoSpec, Harmonic};
use projline::roots::{count_distinct_circular, detect_tangential_zeros, refine_transversal_zeros};
use projline::schwarzian::{
    cross_ratio, default_projective_tol, potential_from_schwarzian, projective_points,
    schwarzian_angular,
};
use projline::sturm::{check_disconjugate, SLProblem};
use projline::SampledPeriodic;

/// Coefficients of a small trigonometric polynomial in the pi-periodic basis.
fn trig_coeffs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..4)
}

fn trig_eval(coeffs: &[(f64, f64)], a: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(i, &(ca, cb))| {
            let w = 2.0 * (i + 1) as f64;
            ca * (w * a).sin() + cb * (w * a).cos()
        })
        .sum()
}

/// Harmonics for a diffeomorphism that always passes validation:
/// amplitude 0.15 with geometric decay keeps `1 + p'` positive.
fn diffeo_harmonics() -> impl Strategy<Value = Vec<Harmonic<f64>>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..5).prop_map(|coeffs| {
        coeffs
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| {
                let k = (i + 1) as u32;
                let amp = 0.15 * 0.5f64.powi(i as i32);
                Harmonic {
                    k,
                    a: amp * a,
                    b: amp * b,
                }
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transversal_zero_count_is_even(coeffs in trig_coeffs()) {
        let s = SampledPeriodic::from_fn(256, PI, |a| trig_eval(&coeffs, a));
        prop_assume!(s.sup_norm() > 1e-3);
        let zs = refine_transversal_zeros(&s, 1e-10).unwrap();
        prop_assert_eq!(zs.len() % 2, 0);
    }

    #[test]
    fn squared_function_has_matching_tangential_zeros(coeffs in trig_coeffs()) {
        let g = |a: f64| trig_eval(&coeffs, a);
        let s = SampledPeriodic::from_fn(512, PI, g);
        prop_assume!(s.sup_norm() > 1e-2);

        // the invariant concerns functions with simple zeros only: discard
        // draws where |g| dips low without a sign change nearby (tangential
        // or nearly tangential zeros of g itself)
        let sup = s.sup_norm();
        let fine = 4096;
        let h = PI / fine as f64;
        let dip = |j: usize| {
            let v = g(j as f64 * h).abs();
            v < 1e-2 * sup
                && v <= g(((j + fine - 1) % fine) as f64 * h).abs()
                && v <= g(((j + 1) % fine) as f64 * h).abs()
        };
        for j in 0..fine {
            if dip(j) {
                let sign_change = (0..8).any(|d| {
                    let a = (j as f64 - 4.0 + d as f64) * h;
                    g(a).signum() != g(a + h).signum()
                });
                prop_assume!(sign_change);
            }
        }

        let trans = refine_transversal_zeros(&s, 1e-10).unwrap();
        let sq = SampledPeriodic::from_fn(512, PI, |a| g(a).powi(2));
        let floor = 1e-8 * sq.sup_norm();
        let tang = detect_tangential_zeros(&sq, floor, PI / 64.0).unwrap();
        prop_assert_eq!(trans.len(), tang.len());
        for z in tang.locations() {
            prop_assert!(trans.distance_to_nearest(z) < 1e-4);
        }
    }

    #[test]
    fn zero_locations_stable_under_grid_doubling(coeffs in trig_coeffs()) {
        let g = |a: f64| trig_eval(&coeffs, a);
        let coarse_s = SampledPeriodic::from_fn(256, PI, g);
        prop_assume!(coarse_s.sup_norm() > 1e-2);
        let tol = 1e-10;
        let coarse = refine_transversal_zeros(&coarse_s, tol).unwrap();
        let fine = refine_transversal_zeros(&SampledPeriodic::from_fn(512, PI, g), tol).unwrap();
        prop_assert_eq!(coarse.len(), fine.len());
        for z in coarse.locations() {
            prop_assert!(fine.distance_to_nearest(z) <= 2.0 * tol);
        }
    }

    #[test]
    fn cross_ratio_is_invariant_under_mobius_images(
        (a, b, c, d) in (0.1..2.0f64, -2.0..-0.1f64, 0.1..2.0f64, 0.5..2.0f64)
    ) {
        // x -> (a x + b) / (c x + d) on four base points, det != 0 assumed
        prop_assume!((a * d - b * c).abs() > 0.05);
        let g = |x: f64| (a * x + b) / (c * x + d);
        let base = [0.0, 1.0, 2.0, 3.0];
        for x in base {
            prop_assume!((c * x + d).abs() > 0.05);
        }
        let want = cross_ratio(base[0], base[1], base[2], base[3]).unwrap();
        let got = cross_ratio(g(base[0]), g(base[1]), g(base[2]), g(base[3])).unwrap();
        prop_assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn schwarzian_has_at_least_four_zeros(harmonics in diffeo_harmonics()) {
        let spec = DiffeoSpec::fourier(harmonics).unwrap();
        let lift = spec.sample_with_derivatives(512).unwrap();
        let s = schwarzian_angular(&lift);
        prop_assume!(s.sup_norm() > 1e-6);
        let zs = projective_points(&s, default_projective_tol(&lift)).unwrap();
        prop_assert!(count_distinct_circular(&zs) >= 4, "count {}", zs.len());
    }

    #[test]
    fn diffeo_potentials_are_disconjugate(harmonics in diffeo_harmonics()) {
        let spec = DiffeoSpec::fourier(harmonics).unwrap();
        let lift = spec.sample_with_derivatives(256).unwrap();
        let k = potential_from_schwarzian(&schwarzian_angular(&lift));
        let rep = check_disconjugate(&SLProblem::new(k)).unwrap();
        prop_assert!(rep.disconjugate, "defect {}", rep.antiperiodicity_defect);
    }
}
