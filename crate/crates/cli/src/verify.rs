//! Seeded batch verification: every theorem-level statement in the chain is
//! run as a named check over random diffeomorphisms (and random pairs for the
//! potential-comparison count), producing a deterministic report.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use projline::central_curve::{curve_from_diffeo, potential_from_curve};
use projline::diffeo::DiffeoSpec;
use projline::legendrian::{flattening_determinant, flattening_points, legendrian_from_diffeo};
use projline::roots::{self, count_distinct_circular};
use projline::schwarzian::{
    default_projective_tol, infinitesimal_operator, potential_from_schwarzian, projective_points,
    schwarzian_angular,
};
use projline::sphere::{
    characteristic_projection, enclosed_area, inflection_numerator, meridian_margin,
};
use projline::sturm::{
    check_disconjugate, comparison_zero_count, orthogonality_integral, SLProblem,
};

use crate::random::{
    case_rng, random_fourier_spec, random_mobius_spec, random_periodic_function, RandomDiffeoConfig,
};

/// Required distinct-zero count for every four-zero statement.
pub const MIN_ZERO_COUNT: usize = 4;

/// Tolerances of the named checks (shared with the acceptance suite).
pub const MOBIUS_KERNEL_TOL: f64 = 1e-7;
pub const BRIDGE_TOL: f64 = 1e-6;
pub const HILL_TOL: f64 = 1e-5;
pub const IDENTITY_RESIDUAL_REL: f64 = 1e-6;
pub const RATIO_DEVIATION_REL: f64 = 1e-6;
pub const RATIO_CUTOFF: f64 = 1e-6;
pub const ORTHOGONALITY_REL: f64 = 1e-8;
pub const AREA_TOL: f64 = 1e-4;
pub const HARMONIC_REL: f64 = 1e-10;
pub const LOCATION_CELLS: f64 = 2.0;
pub const ORTHOGONALITY_BASE_POINTS: usize = 8;

/// One named check outcome within a case.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub check: &'static str,
    pub passed: bool,
    /// Margin in the check's own units (a count or a residual).
    pub margin: f64,
    pub detail: String,
}

fn pass(check: &'static str, margin: f64) -> CheckOutcome {
    CheckOutcome {
        check,
        passed: true,
        margin,
        detail: String::new(),
    }
}

fn fail(check: &'static str, margin: f64, detail: String) -> CheckOutcome {
    CheckOutcome {
        check,
        passed: false,
        margin,
        detail,
    }
}

/// Whether larger or smaller margins are worse, per check id.
fn margin_kind(check: &str) -> &'static str {
    match check {
        "schwarzian_zero_count"
        | "flattening_count"
        | "pair_comparison_zero_count"
        | "inflection_agreement"
        | "infinitesimal_zero_count" => "min_zero_count",
        _ => "max_residual",
    }
}

fn is_count_check(check: &str) -> bool {
    margin_kind(check) == "min_zero_count"
}

/// Run the full single-diffeomorphism pipeline; errors become failed checks.
pub fn single_case_checks(spec: &DiffeoSpec<f64>, n: usize) -> Vec<CheckOutcome> {
    match single_case_inner(spec, n) {
        Ok(outcomes) => outcomes,
        Err(e) => vec![fail("pipeline", f64::NAN, e.to_string())],
    }
}

fn single_case_inner(
    spec: &DiffeoSpec<f64>,
    n: usize,
) -> Result<Vec<CheckOutcome>, projline::Error> {
    let mut out = Vec::new();
    let cell = PI / n as f64;

    let lift = spec.sample_with_derivatives(n)?;
    let s = schwarzian_angular(&lift);
    let k = potential_from_schwarzian(&s);

    // four distinct projective points
    let proj = projective_points(&s, default_projective_tol(&lift))?;
    let count = count_distinct_circular(&proj);
    out.push(if count >= MIN_ZERO_COUNT {
        pass("schwarzian_zero_count", count as f64)
    } else {
        fail(
            "schwarzian_zero_count",
            count as f64,
            format!("only {count} zeros"),
        )
    });

    // potential bridge between the curve route and the Schwarzian route
    let curve = curve_from_diffeo(&lift)?;
    let (k_curve, res) = potential_from_curve(&curve)?;
    let bridge = k_curve
        .values()
        .iter()
        .zip(k.values())
        .fold(0.0f64, |m, (&a, &b)| m.max((a - b).abs()));
    out.push(if bridge <= BRIDGE_TOL && res.hill_residual <= HILL_TOL {
        pass("potential_bridge", bridge.max(res.hill_residual))
    } else {
        fail(
            "potential_bridge",
            bridge.max(res.hill_residual),
            format!("bridge {bridge}, hill {}", res.hill_residual),
        )
    });

    // disconjugacy of the Hill problem
    let problem = SLProblem::new(k.clone());
    let rep = check_disconjugate(&problem)?;
    out.push(if rep.disconjugate {
        pass("disconjugacy", rep.antiperiodicity_defect)
    } else {
        fail(
            "disconjugacy",
            rep.antiperiodicity_defect,
            format!(
                "defect {}, zero counts {:?}",
                rep.antiperiodicity_defect, rep.zero_counts
            ),
        )
    });

    // Legendrian flattening identity, proportionality and count
    let legendrian = legendrian_from_diffeo(&lift)?;
    let data = flattening_determinant(&legendrian)?;
    let scale = data.det4.sup_norm().max(1.0);
    let rel_identity = data.identity_residual / scale;
    out.push(if rel_identity <= IDENTITY_RESIDUAL_REL {
        pass("flattening_identity", rel_identity)
    } else {
        fail(
            "flattening_identity",
            rel_identity,
            format!("residual {rel_identity}"),
        )
    });

    let mut ratios = Vec::new();
    for j in 0..n {
        let km1 = k.values()[j] - 1.0;
        if km1 * km1 > RATIO_CUTOFF {
            ratios.push(data.det2.values()[j] / (km1 * km1));
        }
    }
    if ratios.len() >= 8 {
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let dev = ratios
            .iter()
            .fold(0.0f64, |m, r| m.max((r - mean).abs() / mean.abs()));
        out.push(if dev <= RATIO_DEVIATION_REL {
            pass("flattening_ratio", dev)
        } else {
            fail("flattening_ratio", dev, format!("relative deviation {dev}"))
        });
    }

    let flats = flattening_points(&data.det2, 1e-12)?;
    let flat_count = count_distinct_circular(&flats);
    let flat_matched = flats
        .locations()
        .all(|z| proj.distance_to_nearest(z) <= LOCATION_CELLS * cell);
    out.push(if flat_count >= MIN_ZERO_COUNT && flat_matched {
        pass("flattening_count", flat_count as f64)
    } else {
        fail(
            "flattening_count",
            flat_count as f64,
            format!("count {flat_count}, matched {flat_matched}"),
        )
    });

    // characteristic curve: inflection agreement, area bisection, meridians
    let sphere = characteristic_projection(&legendrian)?;
    let num = inflection_numerator(&sphere)?;
    let infl = roots::mixed_zero_set(&num, 1e-10)?;
    let infl_count = count_distinct_circular(&infl);
    let infl_matched = infl
        .locations()
        .all(|z| proj.distance_to_nearest(z) <= LOCATION_CELLS * cell);
    out.push(if infl_count == count && infl_matched {
        pass("inflection_agreement", infl_count as f64)
    } else {
        fail(
            "inflection_agreement",
            infl_count as f64,
            format!("inflections {infl_count} vs projective {count}, matched {infl_matched}"),
        )
    });

    let area = enclosed_area(&sphere)?;
    let mer = meridian_margin(&sphere)?;
    let area_defect = (area - 2.0 * PI).abs();
    out.push(
        if area_defect <= AREA_TOL && mer.winding == 1 && mer.margin > 0.0 {
            pass("sphere_area_winding", area_defect)
        } else {
            fail(
                "sphere_area_winding",
                area_defect,
                format!(
                    "area {area}, winding {}, margin {}",
                    mer.winding, mer.margin
                ),
            )
        },
    );

    Ok(out)
}

/// Mobius-kernel check: the Schwarzian of a projective input vanishes.
pub fn mobius_case_check(spec: &DiffeoSpec<f64>, n: usize) -> CheckOutcome {
    match spec.sample_with_derivatives(n) {
        Ok(lift) => {
            let sup = schwarzian_angular(&lift).sup_norm();
            if sup <= MOBIUS_KERNEL_TOL {
                pass("mobius_kernel", sup)
            } else {
                fail("mobius_kernel", sup, format!("sup |S| = {sup}"))
            }
        }
        Err(e) => fail("mobius_kernel", f64::NAN, e.to_string()),
    }
}

/// Infinitesimal-operator check: the output has no constant or first
/// harmonic and keeps at least four zeros.
pub fn infinitesimal_case_check(a: &projline::SampledPeriodic<f64>) -> Vec<CheckOutcome> {
    let (out, report) = infinitesimal_operator(a);
    let scale = out.sup_norm();
    let mut checks = Vec::new();

    let rel = report.harmonic0.max(report.harmonic1) / scale.max(f64::MIN_POSITIVE);
    checks.push(if rel <= HARMONIC_REL {
        pass("infinitesimal_harmonics", rel)
    } else {
        fail(
            "infinitesimal_harmonics",
            rel,
            format!("harmonic content {rel}"),
        )
    });

    if scale > 1e-12 {
        match roots::refine_transversal_zeros(&out, 1e-10) {
            Ok(zs) => {
                let count = count_distinct_circular(&zs);
                checks.push(if count >= MIN_ZERO_COUNT {
                    pass("infinitesimal_zero_count", count as f64)
                } else {
                    fail(
                        "infinitesimal_zero_count",
                        count as f64,
                        format!("only {count}"),
                    )
                });
            }
            Err(e) => checks.push(fail("infinitesimal_zero_count", f64::NAN, e.to_string())),
        }
    }
    checks
}

/// Pair check: four crossings of the potentials and the orthogonality
/// identity at several solution base points.
pub fn pair_case_checks(
    spec1: &DiffeoSpec<f64>,
    spec2: &DiffeoSpec<f64>,
    n: usize,
) -> Vec<CheckOutcome> {
    match pair_case_inner(spec1, spec2, n) {
        Ok(outcomes) => outcomes,
        Err(projline::Error::DegenerateEqual { .. }) => Vec::new(),
        Err(e) => vec![fail("pair_comparison_zero_count", f64::NAN, e.to_string())],
    }
}

fn pair_case_inner(
    spec1: &DiffeoSpec<f64>,
    spec2: &DiffeoSpec<f64>,
    n: usize,
) -> Result<Vec<CheckOutcome>, projline::Error> {
    let mut out = Vec::new();
    let p1 = SLProblem::new(potential_from_schwarzian(&schwarzian_angular(
        &spec1.sample_with_derivatives(n)?,
    )));
    let p2 = SLProblem::new(potential_from_schwarzian(&schwarzian_angular(
        &spec2.sample_with_derivatives(n)?,
    )));

    let cmp = comparison_zero_count(&p1, &p2)?;
    let count = count_distinct_circular(&cmp.zeros);
    out.push(if count >= MIN_ZERO_COUNT {
        pass("pair_comparison_zero_count", count as f64)
    } else {
        fail(
            "pair_comparison_zero_count",
            count as f64,
            format!("only {count} crossings"),
        )
    });

    let mut worst = 0.0f64;
    for i in 0..ORTHOGONALITY_BASE_POINTS {
        let a0 = PI * i as f64 / ORTHOGONALITY_BASE_POINTS as f64;
        let check = orthogonality_integral(&p1, &p2, a0)?;
        worst = worst.max(check.integral.abs() / check.integrand_scale.max(f64::MIN_POSITIVE));
    }
    out.push(if worst <= ORTHOGONALITY_REL {
        pass("pair_orthogonality", worst)
    } else {
        fail(
            "pair_orthogonality",
            worst,
            format!("relative integral {worst}"),
        )
    });
    Ok(out)
}

/// Aggregated result of one named check over the whole batch.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TheoremCheck {
    pub id: String,
    pub cases: usize,
    pub passes: usize,
    pub failures: usize,
    /// Worst margin across cases: a minimum for zero counts, a maximum for
    /// residuals (see `margin_kind`).
    pub worst_margin: f64,
    pub margin_kind: String,
}

/// A replayable failure record.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FailureRecord {
    pub case_index: usize,
    pub case_seed: u64,
    pub check: String,
    pub detail: String,
    /// JSON of the offending input(s), ready to feed back into a subcommand.
    pub spec_json: String,
}

/// Deterministic batch report.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub cases: usize,
    pub pair_cases: usize,
    pub grid: usize,
    pub config: RandomDiffeoConfig,
    pub checks: Vec<TheoremCheck>,
    pub failures: Vec<FailureRecord>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn check(&self, id: &str) -> Option<&TheoremCheck> {
        self.checks.iter().find(|c| c.id == id)
    }
}

struct CaseResult {
    index: usize,
    case_seed: u64,
    spec_json: String,
    outcomes: Vec<CheckOutcome>,
}

/// Run the batch: `cases` single-diffeo cases (each also drawing one Mobius
/// kernel probe and one infinitesimal input) plus `pairs` pair cases.
/// Case results are assembled by index, never by completion order.
pub fn run_verify_batch(
    config: &RandomDiffeoConfig,
    seed: u64,
    cases: usize,
    pairs: usize,
    n: usize,
) -> VerifyReport {
    let single: Vec<CaseResult> = (0..cases)
        .into_par_iter()
        .map(|i| {
            let idx = i as u64;
            let spec = random_fourier_spec(&mut case_rng(seed, idx, 0), config);
            let mobius = random_mobius_spec(&mut case_rng(seed, idx, 1));
            let a = random_periodic_function(&mut case_rng(seed, idx, 2), 6, n);

            let mut outcomes = single_case_checks(&spec, n);
            outcomes.push(mobius_case_check(&mobius, n));
            outcomes.extend(infinitesimal_case_check(&a));
            CaseResult {
                index: i,
                case_seed: seed ^ idx,
                spec_json: serde_json::to_string(&spec).unwrap(),
                outcomes,
            }
        })
        .collect();

    let paired: Vec<CaseResult> = (0..pairs)
        .into_par_iter()
        .map(|i| {
            let idx = i as u64;
            let s1 = random_fourier_spec(&mut case_rng(seed, idx, 3), config);
            let s2 = random_fourier_spec(&mut case_rng(seed, idx, 4), config);
            let outcomes = pair_case_checks(&s1, &s2, n);
            CaseResult {
                index: cases + i,
                case_seed: seed ^ idx,
                spec_json: format!(
                    "[{},{}]",
                    serde_json::to_string(&s1).unwrap(),
                    serde_json::to_string(&s2).unwrap()
                ),
                outcomes,
            }
        })
        .collect();

    let mut order: Vec<String> = Vec::new();
    let mut acc: std::collections::BTreeMap<String, TheoremCheck> = Default::default();
    let mut failures = Vec::new();
    for case in single.iter().chain(paired.iter()) {
        for o in &case.outcomes {
            let entry = acc.entry(o.check.to_string()).or_insert_with(|| {
                order.push(o.check.to_string());
                TheoremCheck {
                    id: o.check.to_string(),
                    cases: 0,
                    passes: 0,
                    failures: 0,
                    worst_margin: if is_count_check(o.check) {
                        f64::INFINITY
                    } else {
                        0.0
                    },
                    margin_kind: margin_kind(o.check).to_string(),
                }
            });
            entry.cases += 1;
            if o.passed {
                entry.passes += 1;
            } else {
                entry.failures += 1;
                failures.push(FailureRecord {
                    case_index: case.index,
                    case_seed: case.case_seed,
                    check: o.check.to_string(),
                    detail: o.detail.clone(),
                    spec_json: case.spec_json.clone(),
                });
            }
            if o.margin.is_nan() {
                continue;
            }
            entry.worst_margin = if is_count_check(o.check) {
                entry.worst_margin.min(o.margin)
            } else {
                entry.worst_margin.max(o.margin)
            };
        }
    }

    let checks = order
        .into_iter()
        .map(|id| acc.remove(&id).unwrap())
        .collect();
    VerifyReport {
        seed,
        cases,
        pair_cases: pairs,
        grid: n,
        config: config.clone(),
        checks,
        failures,
    }
}
