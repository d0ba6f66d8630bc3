//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any fails.

mod common;

use std::process::ExitCode;

use avgdiff::analysis::{l2_error, step_exact_solution, step_initial, total_variation, PhaseSpeedTable};
use avgdiff::{
    amplification_factor, discrete_energy, discrete_variational_derivative, forward_average, forward_diff, run,
    GridFunction, HamiltonianDensity, Operator, PeriodicGrid, SchemeInstance, SchemeKind, SolverConfig,
};
use common::*;
use rand::Rng;

const REPORTED_ERRORS: [(SchemeKind, f64); 3] =
    [(SchemeKind::CentralDiff, 0.1940), (SchemeKind::Spectral, 0.0611), (SchemeKind::AverageDiff, 0.0575)];
const ERROR_TOL: f64 = 0.01;
const EXACT_TRUNCATION: u64 = 100_000;
const ENERGY_DRIFT_TOL: f64 = 1e-9;
const IDENTITY_TOL: f64 = 1e-12;
const ORACLE_TOL: f64 = 1e-10;
const UNIMODULAR_TOL: f64 = 1e-12;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn linear_scheme(kind: SchemeKind, grid: PeriodicGrid, dt: f64) -> SchemeInstance {
    SchemeInstance::new(kind, grid, HamiltonianDensity::linear_klein_gordon(), dt, SolverConfig::default()).unwrap()
}

fn step_run(kind: SchemeKind, steps: usize) -> GridFunction {
    let g = PeriodicGrid::with_points(129).unwrap();
    let s = linear_scheme(kind, g, 0.01);
    run(&s, &step_initial(&g).unwrap(), steps, steps).unwrap().final_state().clone()
}

fn errors_at_fifty() -> Vec<(SchemeKind, f64)> {
    let g = PeriodicGrid::with_points(129).unwrap();
    let exact = step_exact_solution(50.0, &g, EXACT_TRUNCATION).unwrap();
    SchemeKind::ALL.iter().map(|&k| (k, l2_error(&step_run(k, 5000), &exact).unwrap())).collect()
}

fn error_reproduction(errors: &[(SchemeKind, f64)]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for ((kind, got), (_, reported)) in errors.iter().zip(REPORTED_ERRORS) {
        pass &= (got - reported).abs() <= ERROR_TOL;
        parts.push(format!("{kind}={got:.4} (reported {reported})"));
    }
    outcome(pass, parts.join(", "))
}

fn scheme_ordering(errors: &[(SchemeKind, f64)]) -> Outcome {
    let (cd, ps, ad) = (errors[0].1, errors[1].1, errors[2].1);
    outcome(ad < ps && ps < cd, format!("ad={ad:.4} < ps={ps:.4} < cd={cd:.4}"))
}

fn phase_speed_table() -> Vec<(&'static str, Outcome)> {
    let table = PhaseSpeedTable::new(PeriodicGrid::with_points(65).unwrap(), 32).unwrap();
    let mut spectral_exact = true;
    let mut ad_beats_cd = true;
    for r in &table.rows {
        let exact = -1.0 / r.n as f64;
        spectral_exact &= (r.c_ps - exact).abs() <= 4.0 * f64::EPSILON * exact.abs();
        let (ad_err, cd_err) = ((r.c_ad - exact).abs(), (r.c_cd - exact).abs());
        ad_beats_cd &= if r.n >= 2 { ad_err < cd_err } else { ad_err <= cd_err };
    }
    let last = table.rows.last().unwrap();
    let (cd, ad, exact) = (last.c_cd.abs(), last.c_ad.abs(), 1.0 / 32.0);
    vec![
        ("phase speeds K=65: spectral exact", outcome(spectral_exact, "c_ps = -1/n for n = 1..32")),
        (
            "phase speeds K=65: AD error <= CD error",
            outcome(ad_beats_cd, "|c_ad + 1/n| <= |c_cd + 1/n|, strict for n >= 2"),
        ),
        (
            "phase speeds K=65: |c_cd(32)| > |c_ad(32)| > 1/32",
            outcome(cd > ad && ad > exact, format!("|c_cd|={cd:.4}, |c_ad|={ad:.4}, 1/32={exact:.4}")),
        ),
    ]
}

fn energy_conservation() -> Outcome {
    let g = PeriodicGrid::with_points(33).unwrap();
    let densities =
        [HamiltonianDensity::linear_klein_gordon(), HamiltonianDensity::new(vec![0.0, 0.0, 0.5, 0.0, 0.25]).unwrap()];
    let mut worst: f64 = 0.0;
    for seed in 0..5 {
        let mut rng = rng(1000 + seed);
        let u0 = random_zero_mean(g, &mut rng);
        for density in &densities {
            for kind in SchemeKind::ALL {
                let s = SchemeInstance::new(kind, g, density.clone(), 0.01, SolverConfig::default()).unwrap();
                worst = worst.max(run(&s, &u0, 1000, 1000).unwrap().max_relative_drift());
            }
        }
    }
    outcome(worst <= ENERGY_DRIFT_TOL, format!("max relative drift {worst:.2e}"))
}

fn chain_rule() -> Outcome {
    let g = PeriodicGrid::with_points(33).unwrap();
    let mut rng = rng(7);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let density = random_density(&mut rng, 6);
        let a = random_vector(g, &mut rng);
        let b = random_vector(g, &mut rng);
        let dt = 0.01;
        let lhs = (discrete_energy(&a, &density) - discrete_energy(&b, &density)) / dt;
        let rhs = discrete_variational_derivative(&a, &b, &density)
            .unwrap()
            .inner(&a.sub(&b).unwrap().scale(1.0 / dt))
            .unwrap();
        let scale = (discrete_energy(&a, &density).abs() + discrete_energy(&b, &density).abs()) / dt + rhs.abs();
        worst = worst.max((lhs - rhs).abs() / scale);
    }
    outcome(worst <= IDENTITY_TOL, format!("max relative defect {worst:.2e}"))
}

fn skew_and_summation_by_parts() -> Outcome {
    let mut rng = rng(11);
    let mut worst: f64 = 0.0;
    for k in [5, 9, 65] {
        let g = PeriodicGrid::with_points(k).unwrap();
        for _ in 0..100 {
            let u = random_vector(g, &mut rng);
            let v = random_vector(g, &mut rng);
            for op in [Operator::CentralDiff, Operator::Spectral] {
                let (du, dv) = (op.apply(&u), op.apply(&v));
                let (a, b) = (u.inner(&dv).unwrap(), du.inner(&v).unwrap());
                // relative to the size of the summands, not of the (cancelling) sums
                let scale = u.map(f64::abs).inner(&dv.map(f64::abs)).unwrap()
                    + du.map(f64::abs).inner(&v.map(f64::abs)).unwrap();
                worst = worst.max((a + b).abs() / scale);
            }
            let (d, m) = (forward_diff(&u), forward_average(&u));
            let scale = d.map(f64::abs).inner(&m.map(f64::abs)).unwrap();
            worst = worst.max(d.inner(&m).unwrap().abs() / scale);
            // Σ a b = Σ (μ⁺a)(μ⁺b) + Δx²/4 Σ (δ⁺a)(δ⁺b)
            let split = forward_average(&u).inner(&forward_average(&v)).unwrap()
                + g.dx().powi(2) / 4.0 * forward_diff(&u).inner(&forward_diff(&v)).unwrap();
            let direct = u.inner(&v).unwrap();
            worst = worst.max((split - direct).abs() / u.map(f64::abs).inner(&v.map(f64::abs)).unwrap());
            let (al, alp, be, bep): (f64, f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen(), rng.gen());
            let lhs = (alp * bep + al * be) / 2.0;
            let rhs = ((alp + al) / 2.0) * ((bep + be) / 2.0) + 0.25 * (alp - al) * (bep - be);
            worst = worst.max((lhs - rhs).abs() / lhs.abs().max(f64::MIN_POSITIVE));
        }
    }
    outcome(worst <= IDENTITY_TOL, format!("max relative defect {worst:.2e}"))
}

fn brute_force_equivalence() -> Outcome {
    let mut rng = rng(13);
    let mut worst: f64 = 0.0;
    for k in [5, 9, 17] {
        let g = PeriodicGrid::with_points(k).unwrap();
        for op in Operator::ALL {
            let m = dense_operator(op, &g);
            let u = random_vector(g, &mut rng);
            worst = worst.max(max_abs_diff(&(&m * to_vector(&u)), op.apply(&u).values()));
        }
        for kind in SchemeKind::ALL {
            let u = random_zero_mean(g, &mut rng);
            let dense = dense_linear_step(kind, &g, 0.5, 0.01, &u);
            worst = worst.max(max_abs_diff(&dense, linear_scheme(kind, g, 0.01).step(&u).unwrap().values()));
        }
    }
    outcome(worst <= ORACLE_TOL, format!("max deviation {worst:.2e}"))
}

fn oscillation() -> Outcome {
    let tv_cd1 = total_variation(&step_run(SchemeKind::CentralDiff, 100));
    let tv_ad1 = total_variation(&step_run(SchemeKind::AverageDiff, 100));
    let tv_ps50 = total_variation(&step_run(SchemeKind::Spectral, 5000));
    let tv_ad50 = total_variation(&step_run(SchemeKind::AverageDiff, 5000));
    outcome(
        tv_cd1 > tv_ad1 && tv_ps50 > tv_ad50,
        format!("t=1: TV cd={tv_cd1:.3} > ad={tv_ad1:.3}; t=50: TV ps={tv_ps50:.3} > ad={tv_ad50:.3}"),
    )
}

fn unimodularity() -> Outcome {
    let g = PeriodicGrid::with_points(65).unwrap();
    let mut worst: f64 = 0.0;
    for dt in [1e-2, 1e-1] {
        for kind in SchemeKind::ALL {
            let s = linear_scheme(kind, g, dt);
            for j in (-32..=32).filter(|&j| j != 0) {
                worst = worst.max((amplification_factor(&s, j).unwrap().norm() - 1.0).abs());
            }
        }
    }
    outcome(worst <= UNIMODULAR_TOL, format!("max ||g|-1| {worst:.2e}"))
}

fn main() -> ExitCode {
    let errors = errors_at_fifty();
    let mut results = vec![
        ("error reproduction at t=50", error_reproduction(&errors)),
        ("scheme ordering at t=50", scheme_ordering(&errors)),
    ];
    results.extend(phase_speed_table());
    results.extend([
        ("exact energy conservation", energy_conservation()),
        ("discrete chain rule", chain_rule()),
        ("skew-symmetry and summation by parts", skew_and_summation_by_parts()),
        ("brute-force oracle equivalence", brute_force_equivalence()),
        ("oscillation (total variation)", oscillation()),
        ("unimodular amplification", unimodularity()),
    ]);
    let mut failed = 0;
    for (name, r) in &results {
        println!("{} {name}: {}", if r.pass { "PASS" } else { "FAIL" }, r.detail);
        failed += usize::from(!r.pass);
    }
    println!("acceptance: {}/{} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
