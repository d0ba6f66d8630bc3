//! One-shot property suite behind `avgdiff verify`.
//!
//! Properties run on separate threads; verdicts are collected in a fixed
//! order so the report is deterministic for a given seed.

use avgdiff::{
    central_diff, discrete_energy, discrete_variational_derivative, forward_average, forward_diff, run,
    spectral_diff, GridFunction, HamiltonianDensity, Operator, PeriodicGrid, SchemeInstance, SchemeKind,
    SolverConfig,
};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const IDENTITY_TOL: f64 = 1e-12;
const DRIFT_TOL: f64 = 1e-9;
const ORACLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Replace the average-difference right operator by the identity.
    pub corrupt_average_diff: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn random(grid: PeriodicGrid, rng: &mut ChaCha8Rng) -> GridFunction {
    GridFunction::new(grid, (0..grid.points()).map(|_| rng.gen_range(-1.0..1.0)).collect()).expect("length matches")
}

fn random_zero_mean(grid: PeriodicGrid, rng: &mut ChaCha8Rng) -> GridFunction {
    let u = random(grid, rng).without_mean();
    let m = u.max_abs();
    u.scale(1.0 / m)
}

fn abs_inner(a: &GridFunction, b: &GridFunction) -> f64 {
    a.map(f64::abs).inner(&b.map(f64::abs)).expect("same grid")
}

fn verdict(name: &'static str, worst: f64, tol: f64) -> Verdict {
    Verdict { name, pass: worst <= tol, detail: format!("worst {worst:.2e} (tol {tol:.0e})") }
}

fn skew_symmetry(seed: u64) -> Verdict {
    let mut rng = rng(seed, 1);
    let mut worst: f64 = 0.0;
    for k in [5, 9, 65] {
        let g = PeriodicGrid::with_points(k).unwrap();
        for _ in 0..100 {
            let (u, v) = (random(g, &mut rng), random(g, &mut rng));
            for op in [central_diff as fn(&GridFunction) -> GridFunction, spectral_diff] {
                let (du, dv) = (op(&u), op(&v));
                let defect = u.inner(&dv).unwrap() + du.inner(&v).unwrap();
                worst = worst.max(defect.abs() / (abs_inner(&u, &dv) + abs_inner(&du, &v)));
            }
        }
    }
    verdict("skew-symmetry of central and spectral differences", worst, IDENTITY_TOL)
}

fn summation_by_parts(seed: u64) -> Verdict {
    let mut rng = rng(seed, 2);
    let mut worst: f64 = 0.0;
    for k in [5, 9, 65] {
        let g = PeriodicGrid::with_points(k).unwrap();
        for _ in 0..100 {
            let (a, b) = (random(g, &mut rng), random(g, &mut rng));
            let (d, m) = (forward_diff(&a), forward_average(&a));
            worst = worst.max(d.inner(&m).unwrap().abs() / abs_inner(&d, &m));
            let split = forward_average(&a).inner(&forward_average(&b)).unwrap()
                + g.dx().powi(2) / 4.0 * forward_diff(&a).inner(&forward_diff(&b)).unwrap();
            worst = worst.max((split - a.inner(&b).unwrap()).abs() / abs_inner(&a, &b));
            let (x, xp, y, yp): (f64, f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen(), rng.gen());
            let lhs = (xp * yp + x * y) / 2.0;
            let rhs = ((xp + x) / 2.0) * ((yp + y) / 2.0) + 0.25 * (xp - x) * (yp - y);
            worst = worst.max((lhs - rhs).abs() / lhs.abs().max(f64::MIN_POSITIVE));
        }
    }
    verdict("forward difference/average product identities", worst, IDENTITY_TOL)
}

fn random_density(rng: &mut ChaCha8Rng) -> HamiltonianDensity {
    let degree = rng.gen_range(2..=6);
    let mut c: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-1.0..1.0)).collect();
    c[degree] = rng.gen_range(0.1..1.0);
    HamiltonianDensity::new(c).expect("top coefficient nonzero")
}

fn chain_rule(seed: u64) -> Verdict {
    let mut rng = rng(seed, 3);
    let g = PeriodicGrid::with_points(33).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let density = random_density(&mut rng);
        let (a, b) = (random(g, &mut rng), random(g, &mut rng));
        let (ha, hb) = (discrete_energy(&a, &density), discrete_energy(&b, &density));
        let rhs = discrete_variational_derivative(&a, &b, &density).unwrap().inner(&a.sub(&b).unwrap()).unwrap();
        worst = worst.max(((ha - hb) - rhs).abs() / (ha.abs() + hb.abs() + rhs.abs()));
    }
    verdict("discrete chain rule", worst, IDENTITY_TOL)
}

fn energy_drift(seed: u64, corrupt: bool) -> Verdict {
    let mut rng = rng(seed, 4);
    let g = PeriodicGrid::with_points(33).unwrap();
    let densities =
        [HamiltonianDensity::linear_klein_gordon(), HamiltonianDensity::new(vec![0.0, 0.0, 0.5, 0.0, 0.25]).unwrap()];
    let u0 = random_zero_mean(g, &mut rng);
    let mut worst: f64 = 0.0;
    for density in &densities {
        for kind in SchemeKind::ALL {
            let mut s = SchemeInstance::new(kind, g, density.clone(), 0.01, SolverConfig::default()).unwrap();
            if corrupt && kind == SchemeKind::AverageDiff {
                s = s.with_identity_right_operator();
            }
            worst = match run(&s, &u0, 1000, 1000) {
                Ok(t) => worst.max(t.max_relative_drift()),
                Err(_) => f64::INFINITY,
            };
        }
    }
    verdict("energy conservation over 1000 steps", worst, DRIFT_TOL)
}

fn dense(op: Operator, g: &PeriodicGrid) -> DMatrix<f64> {
    let k = g.points();
    // columns are the operator applied to unit vectors
    DMatrix::from_fn(k, k, |i, j| {
        let mut e = vec![0.0; k];
        e[j] = 1.0;
        op.apply(&GridFunction::new(*g, e).unwrap()).values()[i]
    })
}

fn dense_solve(seed: u64, corrupt: bool) -> Verdict {
    let mut rng = rng(seed, 5);
    let mut worst: f64 = 0.0;
    for k in [5, 9, 17, 33] {
        let g = PeriodicGrid::with_points(k).unwrap();
        for kind in SchemeKind::ALL {
            let dt = 0.01;
            let mut s =
                SchemeInstance::new(kind, g, HamiltonianDensity::linear_klein_gordon(), dt, SolverConfig::default())
                    .unwrap();
            if corrupt && kind == SchemeKind::AverageDiff {
                s = s.with_identity_right_operator();
            }
            let u = random_zero_mean(g, &mut rng);
            let d = dense(kind.left_operator(), &g) / dt;
            let r = kind.right_operator().map_or_else(|| DMatrix::identity(k, k), |op| dense(op, &g)) * 0.5;
            let rhs = (&d + &r) * DVector::from_column_slice(u.values());
            let Some(expected) = (&d - &r).lu().solve(&rhs) else {
                worst = f64::INFINITY;
                continue;
            };
            let got = s.step(&u).unwrap();
            let dev = expected.iter().zip(got.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            worst = worst.max(dev);
        }
    }
    verdict("per-mode linear step equals dense solve", worst, ORACLE_TOL)
}

fn residual(seed: u64) -> Verdict {
    let mut rng = rng(seed, 6);
    let g = PeriodicGrid::with_points(33).unwrap();
    let density = HamiltonianDensity::new(vec![0.0, 0.0, 0.5, 0.0, 0.25]).unwrap();
    let cfg = SolverConfig::default();
    let mut worst: f64 = 0.0;
    for kind in SchemeKind::ALL {
        let s = SchemeInstance::new(kind, g, density.clone(), 0.01, cfg).unwrap();
        let u = random_zero_mean(g, &mut rng);
        worst = match s.step(&u) {
            Ok(next) => worst.max(s.residual(&u, &next).unwrap()),
            Err(_) => f64::INFINITY,
        };
    }
    verdict("scheme residual after a step", worst, cfg.fp_tol)
}

pub fn cmd_verify(opts: VerifyOptions) -> Vec<Verdict> {
    let seed = opts.seed;
    let corrupt = opts.corrupt_average_diff;
    let jobs: Vec<Box<dyn Fn() -> Verdict + Send + Sync>> = vec![
        Box::new(move || skew_symmetry(seed)),
        Box::new(move || summation_by_parts(seed)),
        Box::new(move || chain_rule(seed)),
        Box::new(move || energy_drift(seed, corrupt)),
        Box::new(move || dense_solve(seed, corrupt)),
        Box::new(move || residual(seed)),
    ];
    std::thread::scope(|scope| {
        let handles: Vec<_> = jobs.iter().map(|job| scope.spawn(move || job())).collect();
        handles.into_iter().map(|h| h.join().expect("property thread panicked")).collect()
    })
}
