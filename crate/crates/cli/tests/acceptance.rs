//! Acceptance suite. Prints one `[PASS]`/`[FAIL]` line per criterion and
//! exits non-zero if any criterion fails.

use std::f64::consts::FRAC_PI_2;
use std::process::ExitCode;
use std::time::Instant;

use uptilt_cli::format::sig6;
use uptilt_cli::sweep::{run_sweep, AlphaGrid, OutputSet, SweepSpec};
use uptilt_core::analysis::{
    avg_sinr, outage, outage_case12, outage_case12_slope, outage_case34, outage_case34_slope,
    outage_case5, outage_case5_slope,
};
use uptilt_core::geometry::{classify_case, BeamConfig, CaseId, CorridorGeometry};
use uptilt_core::link_budget::{antenna_gain_from_beamwidth, GainModel, RadioConfig};
use uptilt_core::montecarlo::{
    empirical_avg_sinr, empirical_outage, indicator_disagreements, McConfig, McMode,
    DEFAULT_SAMPLES, REFERENCE_SAMPLES,
};
use uptilt_core::optimizer::{optimize_uptilt, Method, OptimizeOptions};

/// `(beta_deg, h2_m)` pairs of the reference scenario.
const CONFIGS: [(f64, f64); 7] = [
    (10.0, 300.0),
    (30.0, 300.0),
    (50.0, 300.0),
    (70.0, 300.0),
    (50.0, 200.0),
    (50.0, 400.0),
    (50.0, 500.0),
];

const D1: f64 = 1000.0;
const H1: f64 = 100.0;

fn geom(h2: f64) -> CorridorGeometry {
    CorridorGeometry::new(D1, H1, h2).unwrap()
}

fn beam(alpha: f64, beta_deg: f64) -> BeamConfig {
    let gain = antenna_gain_from_beamwidth(beta_deg, GainModel::Decibel).unwrap();
    BeamConfig::new(alpha, beta_deg.to_radians(), gain).unwrap()
}

fn beam_deg(alpha_deg: f64, beta_deg: f64) -> BeamConfig {
    beam(alpha_deg.to_radians(), beta_deg)
}

/// Feasible uptilts on a 0.5 degree grid: `0 < alpha < 90 - beta`.
fn feasible_grid(beta_deg: f64) -> Vec<f64> {
    (1..)
        .map(|k| 0.5 * f64::from(k))
        .take_while(|a| a + beta_deg < 90.0)
        .collect()
}

/// Uptilt where the lower-edge crossing over the centre reaches `h`.
fn alpha_at_center_height(h: f64) -> f64 {
    (2.0 * h / D1).atan()
}

struct Outcome {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn outcome(name: &'static str, failures: Vec<String>, summary: String) -> Outcome {
    let pass = failures.is_empty();
    let detail = if pass {
        summary
    } else {
        let shown: Vec<_> = failures.iter().take(8).cloned().collect();
        let more = failures.len().saturating_sub(shown.len());
        let tail = if more > 0 {
            format!("; {more} more")
        } else {
            String::new()
        };
        format!("{summary}; failures: {}{tail}", shown.join("; "))
    };
    Outcome { name, pass, detail }
}

fn outage_vs_monte_carlo() -> Outcome {
    let radio = RadioConfig::default();
    let mut failures = Vec::new();
    let mut points = 0;
    let mut worst = (0.0f64, String::new());
    for (beta, h2) in CONFIGS {
        let g = geom(h2);
        for alpha in feasible_grid(beta) {
            let b = beam_deg(alpha, beta);
            let analytic = outage(&g, &b).probability;
            let mc = McConfig::new(DEFAULT_SAMPLES, points as u64, McMode::Exact).unwrap();
            let est = empirical_outage(&g, &b, &radio, &mc).unwrap();
            let diff = (analytic - est.mean).abs();
            let tol = f64::max(0.005, 3.0 * est.std_error);
            let at = format!("beta {beta} h2 {h2} alpha {alpha}");
            if diff > tol {
                failures.push(format!(
                    "{at}: analytic {analytic:.6} mc {:.6} tol {tol:.4}",
                    est.mean
                ));
            }
            if diff > worst.0 {
                worst = (diff, at);
            }
            points += 1;
        }
    }
    outcome(
        "outage-vs-monte-carlo",
        failures,
        format!(
            "{points} grid points at 1e6 samples, worst |diff| {:.5} at {}",
            worst.0, worst.1
        ),
    )
}

fn branch_continuity() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut worst = 0.0f64;
    let eps = 1e-12;
    for (beta, h2) in CONFIGS {
        let g = geom(h2);
        type Pair = fn(&CorridorGeometry, &BeamConfig) -> uptilt_core::Result<f64>;
        let boundaries: [(f64, &str, Pair, Pair); 2] = [
            (
                alpha_at_center_height(H1),
                "h3=h1",
                outage_case12,
                outage_case34,
            ),
            (
                alpha_at_center_height(h2),
                "h3=h2",
                outage_case34,
                outage_case5,
            ),
        ];
        for (alpha, label, below, above) in boundaries {
            if alpha + beta.to_radians() >= FRAC_PI_2 - eps {
                continue;
            }
            let b = beam(alpha, beta);
            let literal = (below(&g, &b).unwrap() - above(&g, &b).unwrap()).abs();
            let sided = (outage(&g, &beam(alpha * (1.0 - eps), beta)).probability
                - outage(&g, &beam(alpha * (1.0 + eps), beta)).probability)
                .abs();
            for (kind, gap) in [("closed forms", literal), ("one-sided", sided)] {
                worst = worst.max(gap);
                if gap > 1e-9 {
                    failures.push(format!("beta {beta} h2 {h2} {label} {kind}: gap {gap:.3e}"));
                }
            }
            checked += 1;
        }
    }
    // Reference value at the first boundary, beta = 30, h2 = 300.
    let b = beam(alpha_at_center_height(H1), 30.0);
    let v = outage(&geom(300.0), &b).probability;
    if (v - 0.455_151_290_850_742).abs() > 1e-12 {
        failures.push(format!("reference value {v} != 0.455151290850742"));
    }
    outcome(
        "branch-continuity",
        failures,
        format!("{checked} boundaries, largest gap {worst:.2e} (tol 1e-9); value 0.455151 at h3=h1, beta 30"),
    )
}

fn derivative_check() -> Outcome {
    type Pair = fn(&CorridorGeometry, &BeamConfig) -> uptilt_core::Result<f64>;
    let branches: [(&str, Pair, Pair); 3] = [
        ("c12", outage_case12, outage_case12_slope),
        ("c34", outage_case34, outage_case34_slope),
        ("c5", outage_case5, outage_case5_slope),
    ];
    let h = 1e-6;
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let mut points = 0;
    for (beta, h2) in CONFIGS {
        let g = geom(h2);
        let top = FRAC_PI_2 - beta.to_radians();
        let edges = [
            0.0,
            alpha_at_center_height(H1),
            alpha_at_center_height(h2),
            top,
        ];
        for (i, (name, value, slope)) in branches.iter().enumerate() {
            // Keep the stencil inside the branch and away from the singular ends.
            let lo = edges[i].max(0.0) + 1e-4;
            let hi = edges[i + 1].min(top) - 1e-4;
            if hi <= lo {
                continue;
            }
            for k in 0..100 {
                let a = lo + (hi - lo) * f64::from(k) / 99.0;
                let s = slope(&g, &beam(a, beta)).unwrap();
                let fd = (value(&g, &beam(a + h, beta)).unwrap()
                    - value(&g, &beam(a - h, beta)).unwrap())
                    / (2.0 * h);
                let rel = (fd - s).abs() / s.abs();
                worst = worst.max(rel);
                if rel > 1e-6 {
                    failures.push(format!(
                        "{name} beta {beta} h2 {h2} alpha {:.4} deg: slope {s:.9e} fd {fd:.9e} rel {rel:.2e}",
                        a.to_degrees()
                    ));
                }
                points += 1;
            }
        }
    }
    let s = outage(&geom(300.0), &beam_deg(10.0, 30.0)).derivative_wrt_alpha;
    if (s + 0.968_110_650_184_482_5).abs() > 1e-12 {
        failures.push(format!(
            "slope at alpha 10, beta 30 is {s}, expected -0.96811065"
        ));
    }
    outcome(
        "derivative-check",
        failures,
        format!("{points} points, 100 per branch and configuration, worst relative error {worst:.2e} (tol 1e-6)"),
    )
}

fn convexity() -> Outcome {
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    for (beta, h2) in CONFIGS {
        let g = geom(h2);
        let grid = feasible_grid(beta);
        let f: Vec<f64> = grid
            .iter()
            .map(|&a| outage(&g, &beam_deg(a, beta)).probability)
            .collect();
        let mut min = (f64::INFINITY, 0.0);
        let mut negative = 0;
        for i in 1..f.len() - 1 {
            let d2 = f[i - 1] - 2.0 * f[i] + f[i + 1];
            if d2 < min.0 {
                min = (d2, grid[i]);
            }
            if d2 < -1e-9 {
                negative += 1;
            }
        }
        if negative > 0 {
            failures.push(format!(
                "beta {beta} h2 {h2}: {negative}/{} second differences below -1e-9, min {:.2e} at alpha {}",
                f.len() - 2,
                min.0,
                min.1
            ));
        }
        summary.push(format!("{beta}/{h2}: {:.1e}", min.0));
    }
    outcome(
        "convexity",
        failures,
        format!(
            "min second difference per beta/h2 on the 0.5 deg grid: {}",
            summary.join(", ")
        ),
    )
}

fn optimizer_consistency() -> Outcome {
    let mut failures = Vec::new();
    let mut minima = Vec::new();
    for (beta, h2) in CONFIGS {
        let g = geom(h2);
        let template = beam_deg(45.0 - beta / 2.0, beta);
        let run = |method| {
            optimize_uptilt(
                &g,
                &template,
                &OptimizeOptions {
                    method,
                    ..Default::default()
                },
            )
            .unwrap()
        };
        let golden = run(Method::GoldenSection);
        let bisect = run(Method::DerivativeBisection);
        let grid = run(Method::Grid);
        let values = [
            golden.outage_at_star,
            bisect.outage_at_star,
            grid.outage_at_star,
        ];
        let spread = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - values.iter().cloned().fold(f64::INFINITY, f64::min);
        if spread > 1e-6 {
            failures.push(format!(
                "beta {beta} h2 {h2}: methods disagree by {spread:.2e} ({values:?})"
            ));
        }
        minima.push((
            (beta, h2),
            grid.outage_at_star,
            golden.alpha_star.to_degrees(),
        ));
    }
    let min_of = |key: (f64, f64)| minima.iter().find(|m| m.0 == key).unwrap().1;
    if min_of((70.0, 300.0)) >= min_of((30.0, 300.0)) {
        failures.push("min outage at beta 70 is not below beta 30".into());
    }
    if min_of((50.0, 200.0)) >= min_of((50.0, 500.0)) {
        failures.push("min outage at h2 200 is not below h2 500".into());
    }
    let table: Vec<String> = minima
        .iter()
        .map(|((b, h), p, a)| format!("{b}/{h}: {} at {} deg", sig6(*p), sig6(*a)))
        .collect();
    outcome("optimizer-consistency", failures, table.join(", "))
}

fn case5_average_sinr() -> Outcome {
    let radio = RadioConfig::default();
    let g = geom(300.0);
    let mut failures = Vec::new();
    let b = beam_deg(45.0, 10.0);
    let a = avg_sinr(&g, &b, &radio).unwrap();
    let db = 10.0 * a.value.log10();
    if a.case != CaseId::Case5 {
        failures.push(format!("alpha 45 beta 10 is {}", a.case));
    }
    if (a.value - 36_282.816_180_132_68).abs() > 1e-9 * a.value
        || (a.value / 3.63e4 - 1.0).abs() > 0.005
    {
        failures.push(format!("value {} is not 3.63e4", a.value));
    }
    if (db - 45.6).abs() > 0.05 {
        failures.push(format!("{db:.3} dB is not 45.6 dB"));
    }
    let mc = McConfig::new(REFERENCE_SAMPLES, 11, McMode::Exact).unwrap();
    let est = empirical_avg_sinr(&g, &b, &radio, &mc).unwrap();
    if (est.mean - a.value).abs() > 3.0 * est.std_error {
        failures.push(format!(
            "exact MC {} +- {} vs {}",
            est.mean, est.std_error, a.value
        ));
    }
    // Constant across the whole Case 5 range.
    let start = alpha_at_center_height(300.0).to_degrees().ceil();
    let mut spread = 0.0f64;
    let mut alpha = start;
    while alpha + 10.0 < 90.0 {
        let bb = beam_deg(alpha, 10.0);
        assert_eq!(classify_case(&g, &bb), CaseId::Case5);
        let v = avg_sinr(&g, &bb, &radio).unwrap().value;
        spread = spread.max((v / a.value - 1.0).abs());
        alpha += 0.5;
    }
    if spread > 1e-12 {
        failures.push(format!("varies with alpha by {spread:.2e} relative"));
    }
    outcome(
        "case5-average-sinr",
        failures,
        format!(
            "analytic {} ({} dB), exact MC {} +- {} at 1e7, relative spread over alpha {spread:.1e}",
            sig6(a.value),
            sig6(db),
            sig6(est.mean),
            sig6(est.std_error)
        ),
    )
}

fn average_sinr_by_case() -> Outcome {
    let radio = RadioConfig::default();
    let g = geom(300.0);
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    let points = [
        (CaseId::Case1, 5.0, 50.0),
        (CaseId::Case2, 10.0, 50.0),
        (CaseId::Case3, 20.0, 30.0),
        (CaseId::Case4, 20.0, 50.0),
        (CaseId::Case5, 45.0, 10.0),
    ];
    for (i, (case, alpha, beta)) in points.into_iter().enumerate() {
        let b = beam_deg(alpha, beta);
        let a = avg_sinr(&g, &b, &radio).unwrap();
        if a.case != case {
            failures.push(format!(
                "alpha {alpha} beta {beta} is {}, expected {case}",
                a.case
            ));
            continue;
        }
        let seed = 100 + i as u64;
        let approx = McConfig::new(REFERENCE_SAMPLES, seed, McMode::PaperApprox).unwrap();
        let exact = McConfig::new(REFERENCE_SAMPLES, seed, McMode::Exact).unwrap();
        let pa = empirical_avg_sinr(&g, &b, &radio, &approx).unwrap();
        let ex = empirical_avg_sinr(&g, &b, &radio, &exact).unwrap();
        let z = (pa.mean - a.value) / pa.std_error;
        if z.abs() > 3.0 {
            failures.push(format!(
                "{case}: paper-approx MC {} +- {} vs analytic {} (z {z:.2})",
                pa.mean, pa.std_error, a.value
            ));
        }
        let directional = if case == CaseId::Case1 {
            a.value >= ex.mean - 3.0 * ex.std_error
        } else {
            a.value <= ex.mean + 3.0 * ex.std_error
        };
        if !directional {
            failures.push(format!(
                "{case}: analytic {} vs exact MC {} +- {}",
                a.value, ex.mean, ex.std_error
            ));
        }
        summary.push(format!(
            "{case} z {z:+.2} exact {}/{}",
            sig6(ex.mean),
            sig6(a.value)
        ));
    }
    outcome("average-sinr-by-case", failures, summary.join(", "))
}

fn reproducibility() -> Outcome {
    let spec = SweepSpec {
        alpha_grid: AlphaGrid {
            start: 5.0,
            stop: Some(45.0),
            step: 10.0,
        },
        beta_values: vec![10.0, 50.0],
        h2_values: vec![200.0, 300.0],
        mc_samples: 200_000,
        mc_seed: 42,
        mc_mode: McMode::Exact,
        gain_model: GainModel::Decibel,
        outputs: OutputSet::ALL,
    };
    let radio = RadioConfig::default();
    let base = geom(300.0);
    let csv = || {
        let mut buf = Vec::new();
        run_sweep(&spec, &base, &radio, &mut buf).unwrap();
        buf
    };
    let in_pool = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(csv)
    };
    let reference = csv();
    let mut failures = Vec::new();
    if csv() != reference {
        failures.push("second run differs".into());
    }
    for threads in [1, 4] {
        if in_pool(threads) != reference {
            failures.push(format!("{threads}-thread pool differs"));
        }
    }
    let rows = reference.iter().filter(|&&c| c == b'\n').count() - 1;
    outcome(
        "reproducibility",
        failures,
        format!("{rows}-row sweep with Monte Carlo columns, {} bytes, identical across reruns and 1/4-thread pools", reference.len()),
    )
}

fn indicator_agreement() -> Outcome {
    let radio = RadioConfig::default();
    let g = geom(300.0);
    let mut failures = Vec::new();
    let mut checked = 0;
    for beta in [10.0, 50.0, 70.0] {
        for frac in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let alpha = frac * (90.0 - beta);
            let b = beam_deg(alpha, beta);
            let n = indicator_disagreements(&g, &b, &radio, DEFAULT_SAMPLES, checked).unwrap();
            if n != 0 {
                failures.push(format!("beta {beta} alpha {alpha}: {n} disagreements"));
            }
            checked += 1;
        }
    }
    outcome(
        "indicator-agreement",
        failures,
        format!("{checked} beams, 1e6 positions each, exact and beam-membership outage agree everywhere"),
    )
}

fn main() -> ExitCode {
    let criteria: [fn() -> Outcome; 9] = [
        outage_vs_monte_carlo,
        branch_continuity,
        derivative_check,
        convexity,
        optimizer_consistency,
        case5_average_sinr,
        average_sinr_by_case,
        reproducibility,
        indicator_agreement,
    ];
    let mut failed = 0;
    for criterion in criteria {
        let t = Instant::now();
        let o = criterion();
        let mark = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "[{mark}] {} ({:.1} s): {}",
            o.name,
            t.elapsed().as_secs_f64(),
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
