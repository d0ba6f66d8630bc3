//! Brute-force oracles shared by the integration tests. Nothing here goes
//! through the FFT or the stencil code in the library.

#![allow(dead_code)]

use std::f64::consts::TAU;

use avgdiff::{GridFunction, HamiltonianDensity, Operator, PeriodicGrid, SchemeKind};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Explicit K×K matrix of `op`, acting on storage-ordered vectors.
pub fn dense_operator(op: Operator, grid: &PeriodicGrid) -> DMatrix<f64> {
    let k = grid.points();
    let dx = grid.dx();
    let mut m = DMatrix::zeros(k, k);
    for i in 0..k {
        let next = (i + 1) % k;
        let prev = (i + k - 1) % k;
        match op {
            Operator::CentralDiff => {
                m[(i, next)] += 0.5 / dx;
                m[(i, prev)] -= 0.5 / dx;
            }
            Operator::ForwardDiff => {
                m[(i, next)] += 1.0 / dx;
                m[(i, i)] -= 1.0 / dx;
            }
            Operator::ForwardAvg => {
                m[(i, next)] += 0.5;
                m[(i, i)] += 0.5;
            }
            Operator::Spectral => {
                // (1/K) Σ_j i κ_j exp(2πi j (i − l)/K), real part
                let max = grid.max_mode();
                for l in 0..k {
                    let d = i as f64 - l as f64;
                    m[(i, l)] = (-max..=max)
                        .map(|j| -grid.wavenumber(j) * (TAU * j as f64 * d / k as f64).sin())
                        .sum::<f64>()
                        / k as f64;
                }
            }
        }
    }
    m
}

pub fn to_vector(u: &GridFunction) -> DVector<f64> {
    DVector::from_column_slice(u.values())
}

/// One linear step by a dense LU solve of
/// `(D/Δt − c₂ R) u_next = (D/Δt + c₂ R) u`.
pub fn dense_linear_step(kind: SchemeKind, grid: &PeriodicGrid, c2: f64, dt: f64, u: &GridFunction) -> DVector<f64> {
    let d = dense_operator(kind.left_operator(), grid) / dt;
    let r = match kind.right_operator() {
        Some(op) => dense_operator(op, grid),
        None => DMatrix::identity(grid.points(), grid.points()),
    } * c2;
    let lhs = &d - &r;
    let rhs = (&d + &r) * to_vector(u);
    lhs.lu().solve(&rhs).expect("midpoint system is nonsingular for odd K")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector(grid: PeriodicGrid, rng: &mut ChaCha8Rng) -> GridFunction {
    GridFunction::new(grid, (0..grid.points()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

/// Zero-mean random datum scaled to `‖u‖∞ = 1`.
pub fn random_zero_mean(grid: PeriodicGrid, rng: &mut ChaCha8Rng) -> GridFunction {
    let u = random_vector(grid, rng).without_mean();
    let m = u.max_abs();
    u.scale(1.0 / m)
}

/// Random density of degree `2..=max_degree` with a nonzero top coefficient.
pub fn random_density(rng: &mut ChaCha8Rng, max_degree: usize) -> HamiltonianDensity {
    let degree = rng.gen_range(2..=max_degree);
    let mut c: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-1.0..1.0)).collect();
    c[degree] = rng.gen_range(0.1..1.0);
    HamiltonianDensity::new(c).unwrap()
}

pub fn max_abs_diff(a: &DVector<f64>, b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
