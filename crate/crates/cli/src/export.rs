//! Single-case pipelines behind the reporting subcommands: run the chain for
//! one input, write the CSV surface, and return a JSON summary.
//!
//! CSV values use `{}` formatting (shortest round-trip representation, `.`
//! decimal separator, no locale dependence).

use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde_json::{json, Value};

use projline::central_curve::{curve_from_diffeo, potential_from_curve};
use projline::diffeo::DiffeoSpec;
use projline::legendrian::{
    flattening_determinant, flattening_points, legendrian_from_diffeo, twisted_example_curve,
    LegendrianCurve,
};
use projline::roots::count_distinct_circular;
use projline::schwarzian::{
    default_projective_tol, potential_from_schwarzian, projective_points, schwarzian_angular,
};
use projline::sphere::{
    characteristic_projection, enclosed_area, inflection_numerator, meridian_margin,
};
use projline::sturm::{comparison_zero_count, solution_vanishing_at, SLProblem};
use projline::Error as CoreError;

use crate::CliError;

fn write_csv(
    path: Option<&Path>,
    header: &str,
    rows: impl Iterator<Item = Vec<f64>>,
) -> Result<(), CliError> {
    let Some(path) = path else { return Ok(()) };
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{header}")?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()?;
    Ok(())
}

/// `schwarzian`: lift, Schwarzian and potential along the grid.
pub fn run_schwarzian(
    spec: &DiffeoSpec<f64>,
    n: usize,
    out: Option<&Path>,
) -> Result<Value, CliError> {
    let lift = spec.sample_with_derivatives(n)?;
    let s = schwarzian_angular(&lift);
    let k = potential_from_schwarzian(&s);

    write_csv(
        out,
        "alpha,f,fdot,S,k",
        (0..n).map(|j| {
            vec![
                lift.alpha(j),
                lift.f()[j],
                lift.fdot()[j],
                s.values()[j],
                k.values()[j],
            ]
        }),
    )?;

    let summary = match projective_points(&s, default_projective_tol(&lift)) {
        Ok(zs) => json!({
            "projective_points": count_distinct_circular(&zs),
            "locations": zs.locations().collect::<Vec<f64>>(),
            "sup_schwarzian": s.sup_norm(),
            "projective": false,
        }),
        Err(CoreError::IdenticallyZero { .. }) => json!({
            "projective_points": Value::Null,
            "sup_schwarzian": s.sup_norm(),
            "projective": true,
        }),
        Err(e) => return Err(e.into()),
    };
    Ok(summary)
}

/// `curve`: the central plane curve and its potential.
pub fn run_curve(spec: &DiffeoSpec<f64>, n: usize, out: Option<&Path>) -> Result<Value, CliError> {
    let lift = spec.sample_with_derivatives(n)?;
    let curve = curve_from_diffeo(&lift)?;
    let (k, res) = potential_from_curve(&curve)?;

    write_csv(
        out,
        "alpha,gamma_x,gamma_y,k",
        (0..2 * n).map(|j| {
            vec![
                curve.alpha(j),
                curve.x()[j],
                curve.y()[j],
                k.values()[j % n],
            ]
        }),
    )?;

    Ok(json!({
        "area": curve.area(),
        "hill_residual": res.hill_residual,
        "wronskian_residual": res.wronskian_residual,
        "star_shape_margin": curve.star_shape_margin(),
    }))
}

/// `sturm-compare`: two potentials, their difference and base solutions.
pub fn run_sturm_compare(
    spec1: &DiffeoSpec<f64>,
    spec2: &DiffeoSpec<f64>,
    n: usize,
    out: Option<&Path>,
) -> Result<Value, CliError> {
    let k1 = potential_from_schwarzian(&schwarzian_angular(&spec1.sample_with_derivatives(n)?));
    let k2 = potential_from_schwarzian(&schwarzian_angular(&spec2.sample_with_derivatives(n)?));
    let p1 = SLProblem::new(k1.clone());
    let p2 = SLProblem::new(k2.clone());

    let phi1 = solution_vanishing_at(&p1, 0.0)?;
    let phi2 = solution_vanishing_at(&p2, 0.0)?;
    write_csv(
        out,
        "alpha,k1,k2,diff,phi1,phi2",
        (0..n).map(|j| {
            vec![
                k1.grid_point(j),
                k1.values()[j],
                k2.values()[j],
                k1.values()[j] - k2.values()[j],
                phi1.phi()[j],
                phi2.phi()[j],
            ]
        }),
    )?;

    let cmp = comparison_zero_count(&p1, &p2)?;
    Ok(json!({
        "zeros": count_distinct_circular(&cmp.zeros),
        "locations": cmp.zeros.locations().collect::<Vec<f64>>(),
        "orthogonality": cmp.orthogonality.integral,
        "integrand_scale": cmp.orthogonality.integrand_scale,
    }))
}

fn legendrian_csv_and_summary(
    curve: &LegendrianCurve<f64>,
    n: usize,
    out: Option<&Path>,
) -> Result<Value, CliError> {
    let data = flattening_determinant(curve)?;
    let omega01 = curve.omega(0, 1);

    write_csv(
        out,
        "alpha,c1,c2,c3,c4,det2,det4,legendrian_residual",
        (0..2 * n).map(|j| {
            vec![
                curve.alpha(j),
                curve.coord(0, 0)[j],
                curve.coord(1, 0)[j],
                curve.coord(2, 0)[j],
                curve.coord(3, 0)[j],
                data.det2.values()[j % n],
                data.det4.values()[j % n],
                omega01[j].abs(),
            ]
        }),
    )?;

    let det2_mean = data.det2.mean();
    let flattenings = match flattening_points(&data.det2, 1e-12) {
        Ok(zs) => json!(count_distinct_circular(&zs)),
        Err(CoreError::IdenticallyZero { .. }) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    Ok(json!({
        "det2_mean": det2_mean,
        "det2_sup": data.det2.sup_norm(),
        "flattenings": flattenings,
        "identity_residual": data.identity_residual,
        "legendrian_residual": curve.legendrian_residual(),
        "legendrian": curve.legendrian(),
    }))
}

/// `legendrian`: the R^4 lift of a diffeomorphism and its flattening data.
pub fn run_legendrian(
    spec: &DiffeoSpec<f64>,
    n: usize,
    out: Option<&Path>,
) -> Result<Value, CliError> {
    let lift = spec.sample_with_derivatives(n)?;
    let curve = legendrian_from_diffeo(&lift)?;
    legendrian_csv_and_summary(&curve, n, out)
}

/// `counterexample`: the twisted non-Legendrian curve with constant
/// flattening determinant.
pub fn run_counterexample(epsilon: f64, n: usize, out: Option<&Path>) -> Result<Value, CliError> {
    let curve = twisted_example_curve(epsilon, n)?;
    let mut summary = legendrian_csv_and_summary(&curve, n, out)?;
    let flattenings = match summary["flattenings"] {
        Value::Null => 0u64, // identically zero only happens at epsilon = 0
        ref v => v.as_u64().unwrap_or(0),
    };
    summary["flattenings"] = json!(flattenings);
    summary["epsilon"] = json!(epsilon);
    summary["expected_det2"] = json!(192.0 * epsilon * epsilon);
    Ok(summary)
}

/// `sphere`: the characteristic curve, its inflections and area.
pub fn run_sphere(spec: &DiffeoSpec<f64>, n: usize, out: Option<&Path>) -> Result<Value, CliError> {
    let lift = spec.sample_with_derivatives(n)?;
    let curve = legendrian_from_diffeo(&lift)?;
    let sphere = characteristic_projection(&curve)?;
    let num = inflection_numerator(&sphere)?;

    write_csv(
        out,
        "alpha,rx,ry,rz,inflect_numerator",
        (0..n).map(|j| {
            let p = sphere.point(j);
            vec![sphere.alpha(j), p[0], p[1], p[2], num.values()[j]]
        }),
    )?;

    let area = enclosed_area(&sphere)?;
    let mer = meridian_margin(&sphere)?;
    let inflections = if num.sup_norm() < 1e-9 {
        // projective input: the characteristic curve is a great circle
        Value::Null
    } else {
        json!(count_distinct_circular(&projline::roots::mixed_zero_set(
            &num, 1e-10
        )?))
    };
    Ok(json!({
        "area": area,
        "area_defect": (area - 2.0 * PI).abs(),
        "inflections": inflections,
        "winding": mer.winding,
        "meridian_margin": mer.margin,
        "max_abs_z": sphere.max_abs_z(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use projline::diffeo::Harmonic;

    fn reference_spec() -> DiffeoSpec<f64> {
        DiffeoSpec::fourier(vec![Harmonic {
            k: 1,
            a: 0.1,
            b: 0.0,
        }])
        .unwrap()
    }

    #[test]
    fn schwarzian_summary_counts_projective_points() {
        let s = run_schwarzian(&reference_spec(), 256, None).unwrap();
        assert_eq!(s["projective_points"], json!(4));
        assert_eq!(s["projective"], json!(false));
    }

    #[test]
    fn counterexample_summary_matches_paper_constant() {
        let s = run_counterexample(0.01, 256, None).unwrap();
        let det2_mean = s["det2_mean"].as_f64().unwrap();
        assert!((det2_mean - 0.0192).abs() < 1e-10);
        assert_eq!(s["flattenings"], json!(0));
        assert!(s["legendrian_residual"].as_f64().unwrap() > 0.0);
    }

    #[test]
    fn sphere_summary_reports_bisection() {
        let s = run_sphere(&reference_spec(), 256, None).unwrap();
        assert!((s["area"].as_f64().unwrap() - 2.0 * PI).abs() < 1e-4);
        assert_eq!(s["winding"], json!(1));
        assert_eq!(s["inflections"], json!(4));
    }

    #[test]
    fn csv_files_have_the_documented_headers() {
        let dir = std::env::temp_dir().join("projline-export-test");
        std::fs::create_dir_all(&dir).unwrap();
        let spec = reference_spec();

        type Runner = Box<dyn Fn(&Path) -> Result<Value, CliError>>;
        let cases: Vec<(&str, Runner)> = vec![
            (
                "s.csv",
                Box::new(|p: &Path| run_schwarzian(&reference_spec(), 128, Some(p))),
            ),
            (
                "c.csv",
                Box::new(|p: &Path| run_curve(&reference_spec(), 128, Some(p))),
            ),
            (
                "l.csv",
                Box::new(|p: &Path| run_legendrian(&reference_spec(), 128, Some(p))),
            ),
            (
                "x.csv",
                Box::new(|p: &Path| run_counterexample(0.01, 128, Some(p))),
            ),
            (
                "r.csv",
                Box::new(|p: &Path| run_sphere(&reference_spec(), 128, Some(p))),
            ),
        ];
        let headers = [
            "alpha,f,fdot,S,k",
            "alpha,gamma_x,gamma_y,k",
            "alpha,c1,c2,c3,c4,det2,det4,legendrian_residual",
            "alpha,c1,c2,c3,c4,det2,det4,legendrian_residual",
            "alpha,rx,ry,rz,inflect_numerator",
        ];
        for ((name, run), header) in cases.iter().zip(headers) {
            let path = dir.join(name);
            run(&path).unwrap();
            let text = std::fs::read_to_string(&path).unwrap();
            assert!(text.starts_with(header), "{name}: {}", &text[..60]);
            assert!(!text.contains(';'));
        }

        let cmp = run_sturm_compare(
            &DiffeoSpec::identity(),
            &spec,
            128,
            Some(&dir.join("k.csv")),
        )
        .unwrap();
        assert!(cmp["zeros"].as_u64().unwrap() >= 4);
        let text = std::fs::read_to_string(dir.join("k.csv")).unwrap();
        assert!(text.starts_with("alpha,k1,k2,diff,phi1,phi2"));
    }
}
