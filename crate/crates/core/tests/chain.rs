//! End-to-end consistency of the whole chain built from one diffeomorphism:
//! Schwarzian, potential, central curve, Legendrian lift, characteristic
//! curve, and every identity connecting them.

use std::f64::consts::PI;

use projline::central_curve::{curve_from_diffeo, potential_from_curve};
use projline::diffeo::{DiffeoSpec, Harmonic};
use projline::legendrian::{flattening_determinant, flattening_points, legendrian_from_diffeo};
use projline::roots::{self, count_distinct_circular};
use projline::schwarzian::{
    default_projective_tol, potential_from_schwarzian, probe_richardson, projective_points,
    schwarzian_angular,
};
use projline::sphere::{
    characteristic_projection, enclosed_area, inflection_numerator, meridian_margin,
};
use projline::sturm::{check_disconjugate, comparison_zero_count, SLProblem};
use projline::Error;

fn spec(harmonics: &[(u32, f64, f64)]) -> DiffeoSpec<f64> {
    DiffeoSpec::fourier(
        harmonics
            .iter()
            .map(|&(k, a, b)| Harmonic { k, a, b })
            .collect(),
    )
    .unwrap()
}

#[test]
fn full_chain_for_a_generic_diffeomorphism() {
    let n = 512;
    let spec = spec(&[(1, 0.08, -0.02), (2, 0.03, 0.01), (3, -0.01, 0.015)]);
    let lift = spec.sample_with_derivatives(n).unwrap();

    // Schwarzian and its zero count
    let s = schwarzian_angular(&lift);
    let proj = projective_points(&s, default_projective_tol(&lift)).unwrap();
    assert!(
        count_distinct_circular(&proj) >= 4,
        "projective points: {}",
        proj.len()
    );

    // potential bridge: curve route equals Schwarzian route
    let k = potential_from_schwarzian(&s);
    let curve = curve_from_diffeo(&lift).unwrap();
    let (k_curve, res) = potential_from_curve(&curve).unwrap();
    let mut bridge = 0.0f64;
    for j in 0..n {
        bridge = bridge.max((k_curve.values()[j] - k.values()[j]).abs());
    }
    assert!(bridge <= 1e-6, "bridge residual {bridge}");
    assert!(res.hill_residual <= 1e-5);
    assert!(res.wronskian_residual <= 1e-8);
    assert!((curve.area() - PI).abs() <= 1e-6);
    assert!(curve.star_shape_margin() > 0.0);

    // Hill problem is disconjugate
    let p = SLProblem::new(k.clone());
    let rep = check_disconjugate(&p).unwrap();
    assert!(rep.disconjugate);

    // comparison against the unit potential sees at least four crossings
    let unit = SLProblem::<f64>::constant(1.0, n);
    let cmp = comparison_zero_count(&unit, &p).unwrap();
    assert!(count_distinct_circular(&cmp.zeros) >= 4);
    assert!(cmp.orthogonality.integral.abs() <= 1e-8 * cmp.orthogonality.integrand_scale);

    // Legendrian lift: flattening points sit where k crosses 1
    let legendrian = legendrian_from_diffeo(&lift).unwrap();
    let data = flattening_determinant(&legendrian).unwrap();
    assert!(data.identity_residual <= 1e-6 * data.det4.sup_norm().max(1.0));
    let flats = flattening_points(&data.det2, 1e-12).unwrap();
    assert_eq!(flats.len(), proj.len());
    let cell = PI / n as f64;
    for z in flats.locations() {
        assert!(
            proj.distance_to_nearest(z) <= 2.0 * cell,
            "flattening at {z}"
        );
    }

    // characteristic curve: inflections, area bisection, meridian margin
    let sphere = characteristic_projection(&legendrian).unwrap();
    let num = inflection_numerator(&sphere).unwrap();
    let infl = roots::mixed_zero_set(&num, 1e-10).unwrap();
    assert_eq!(infl.len(), proj.len());
    for z in infl.locations() {
        assert!(
            proj.distance_to_nearest(z) <= 2.0 * cell,
            "inflection at {z}"
        );
    }
    assert!((enclosed_area(&sphere).unwrap() - 2.0 * PI).abs() <= 1e-4);
    let mer = meridian_margin(&sphere).unwrap();
    assert!(mer.margin > 0.0);
    assert_eq!(mer.winding, 1);

    // cross-ratio probe agrees with the angular formula up to one constant
    let mut lambdas = Vec::new();
    for j in (0..n).step_by(64) {
        let sv = s.values()[j];
        if sv.abs() < 0.05 {
            continue;
        }
        lambdas.push(probe_richardson(&spec, s.grid_point(j), 1e-2).unwrap() / sv);
    }
    assert!(lambdas.len() >= 3);
    let mean = lambdas.iter().sum::<f64>() / lambdas.len() as f64;
    for l in &lambdas {
        assert!(
            (l - mean).abs() <= 1e-3 * mean.abs(),
            "lambda {l} vs mean {mean}"
        );
    }
}

#[test]
fn projective_input_short_circuits_the_chain() {
    let spec = DiffeoSpec::mobius([[1.1f64, 0.4], [-0.2, 1.0]]).unwrap();
    let lift = spec.sample_with_derivatives(512).unwrap();

    let s = schwarzian_angular(&lift);
    assert!(s.sup_norm() <= 1e-7);
    assert!(matches!(
        projective_points(&s, default_projective_tol(&lift)),
        Err(Error::IdenticallyZero { .. })
    ));

    // the potential is identically 1 and the flattening determinant vanishes
    let curve = curve_from_diffeo(&lift).unwrap();
    let (k, _) = potential_from_curve(&curve).unwrap();
    for &v in k.values() {
        assert!((v - 1.0).abs() <= 1e-7);
    }
    let legendrian = legendrian_from_diffeo(&lift).unwrap();
    let data = flattening_determinant(&legendrian).unwrap();
    assert!(matches!(
        flattening_points(&data.det2, 1e-8),
        Err(Error::IdenticallyZero { .. })
    ));
}

#[test]
fn comparison_two_generic_diffeo_potentials() {
    let n = 512;
    let lift1 = spec(&[(1, 0.09, 0.0), (2, -0.02, 0.03)])
        .sample_with_derivatives(n)
        .unwrap();
    let lift2 = spec(&[(1, -0.05, 0.06), (3, 0.012, -0.008)])
        .sample_with_derivatives(n)
        .unwrap();
    let p1 = SLProblem::new(potential_from_schwarzian(&schwarzian_angular(&lift1)));
    let p2 = SLProblem::new(potential_from_schwarzian(&schwarzian_angular(&lift2)));
    let out = comparison_zero_count(&p1, &p2).unwrap();
    assert!(
        count_distinct_circular(&out.zeros) >= 4,
        "crossings: {}",
        out.zeros.len()
    );
    assert!(out.orthogonality.integral.abs() <= 1e-8 * out.orthogonality.integrand_scale);
}

#[test]
fn infinitesimal_operator_matches_schwarzian_limit() {
    // S(a + e a(.)) = e (a''' + 4 a') + O(e^2): compare the operator output
    // against a finite-epsilon Schwarzian
    use projline::schwarzian::infinitesimal_operator;
    use projline::SampledPeriodic;

    let n = 256;
    let eps = 1e-6;
    let a = |x: f64| 0.3 * (4.0 * x).cos() - 0.2 * (6.0 * x).sin();
    let spec = spec(&[(2, 0.0, 0.3 * eps), (3, -0.2 * eps, 0.0)]);
    let lift = spec.sample_with_derivatives(n).unwrap();
    let s = schwarzian_angular(&lift);

    let samples = SampledPeriodic::from_fn(n, PI, a);
    let (op, report) = infinitesimal_operator(&samples);
    assert!(report.harmonic0 <= 1e-10 * op.sup_norm());
    assert!(report.harmonic1 <= 1e-10 * op.sup_norm());

    for j in (0..n).step_by(13) {
        let finite = s.values()[j] / eps;
        assert!(
            (finite - op.values()[j]).abs() <= 1e-4 * op.sup_norm().max(1.0),
            "first-order mismatch at node {j}: {finite} vs {}",
            op.values()[j]
        );
    }
}
