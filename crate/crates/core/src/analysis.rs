//! Linear analysis: phase speeds of the semi-discretizations, exact solutions
//! of the linear Klein–Gordon equation `u_tx = u`, and error metrics.
//!
//! A Fourier mode `exp(iκx)` of `u_tx = u` evolves as `exp(−i t/κ)`, so its
//! exact phase speed (the `c` in `exp(i c t) exp(iκx)`) is `−1/κ`. The
//! semi-discretizations replace this by `s_R(n) / (i s_D(n))`.
//!
//! Admissible modes are `1 ≤ |n| ≤ (K − 1)/2`. The printed description of
//! this set in the original derivation reads as its complement; the resolved
//! range is what is used here.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::grid::{GridFunction, PeriodicGrid};
use crate::schemes::SchemeKind;
use crate::{Error, Result};

/// Phase speed `c_n` of the semi-discretization `kind` for mode `n`.
pub fn phase_speed(kind: SchemeKind, mode: i64, grid: &PeriodicGrid) -> Result<f64> {
    if mode == 0 {
        return Err(Error::ModeOutOfRange { mode, max: grid.max_mode() });
    }
    grid.check_mode(mode)?;
    let dx = grid.dx();
    let theta = TAU * mode as f64 / grid.points() as f64;
    Ok(match kind {
        SchemeKind::CentralDiff => -dx / theta.sin(),
        SchemeKind::Spectral => -1.0 / grid.wavenumber(mode),
        SchemeKind::AverageDiff => -dx / (2.0 * (theta / 2.0).tan()),
    })
}

/// Exact phase speed `−1/κ_n` of `u_tx = u`.
pub fn exact_phase_speed(mode: i64, grid: &PeriodicGrid) -> f64 {
    -1.0 / grid.wavenumber(mode)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpeedRow {
    pub n: i64,
    pub c_cd: f64,
    pub c_ps: f64,
    pub c_ad: f64,
    pub c_exact: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpeedTable {
    pub grid: PeriodicGrid,
    pub rows: Vec<PhaseSpeedRow>,
}

impl PhaseSpeedTable {
    /// Rows for `n = 1, …, n_max`.
    pub fn new(grid: PeriodicGrid, n_max: i64) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::ModeOutOfRange { mode: n_max, max: grid.max_mode() });
        }
        grid.check_mode(n_max)?;
        let rows = (1..=n_max)
            .map(|n| {
                Ok(PhaseSpeedRow {
                    n,
                    c_cd: phase_speed(SchemeKind::CentralDiff, n, &grid)?,
                    c_ps: phase_speed(SchemeKind::Spectral, n, &grid)?,
                    c_ad: phase_speed(SchemeKind::AverageDiff, n, &grid)?,
                    c_exact: exact_phase_speed(n, &grid),
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { grid, rows })
    }
}

/// Fourier coefficients `a_n`, `n ≠ 0`, of an initial condition.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FourierData {
    coeffs: BTreeMap<i64, Complex64>,
}

impl FourierData {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets `a_n`. Mode 0 is not representable and is ignored.
    pub fn insert(&mut self, mode: i64, a: Complex64) {
        if mode != 0 {
            self.coeffs.insert(mode, a);
        }
    }

    /// Sets `a_n` and `a_{−n} = conj(a_n)`.
    pub fn insert_real_pair(&mut self, mode: i64, a: Complex64) {
        self.insert(mode, a);
        self.insert(-mode, a.conj());
    }

    pub fn get(&self, mode: i64) -> Complex64 {
        self.coeffs.get(&mode).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&n, &a)| (n, a))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `|a_{−n} − conj(a_n)|`.
    pub fn conjugate_asymmetry(&self) -> f64 {
        self.coeffs.iter().map(|(&n, &a)| (self.get(-n) - a.conj()).norm()).fold(0.0, f64::max)
    }

    /// Analytic coefficients of the ±1 step, `a_n = −2 sin(nπ/2) / (nπ)` for
    /// `1 ≤ |n| ≤ truncation`.
    pub fn step(truncation: u64) -> Self {
        let mut data = Self::new();
        for n in (1..=truncation as i64).step_by(2) {
            data.insert_real_pair(n, Complex64::new(step_cosine_coefficient(n) / 2.0, 0.0));
        }
        data
    }
}

/// `−(4/(nπ)) sin(nπ/2)`, with the sine evaluated exactly from the parity of `n`.
fn step_cosine_coefficient(n: i64) -> f64 {
    let sign = match n.rem_euclid(4) {
        1 => 1.0,
        3 => -1.0,
        _ => return 0.0,
    };
    -4.0 * sign / (n as f64 * PI)
}

/// Samples `Σ a_n exp(−i t/κ_n) exp(iκ_n x)` at the grid points.
pub fn exact_linear_solution(data: &FourierData, t: f64, grid: &PeriodicGrid) -> GridFunction {
    exact_linear_solution_with_rate(data, t, grid, 1.0)
}

/// Same as [`exact_linear_solution`] for `u_tx = λ u`.
pub fn exact_linear_solution_with_rate(data: &FourierData, t: f64, grid: &PeriodicGrid, rate: f64) -> GridFunction {
    GridFunction::from_fn(*grid, |x| {
        data.iter()
            .map(|(n, a)| {
                let kappa = grid.wavenumber(n);
                (a * Complex64::from_polar(1.0, kappa * x - rate * t / kappa)).re
            })
            .sum()
    })
}

/// `a_n = (1/L) ∫_0^L u0(x) exp(−iκ_n x) dx` for `1 ≤ |n| ≤ n_max` by the
/// composite midpoint rule on `points` cells.
pub fn fourier_coefficients(u0: impl Fn(f64) -> f64, period: f64, points: usize, n_max: i64) -> FourierData {
    let h = period / points as f64;
    let samples: Vec<(f64, f64)> = (0..points)
        .map(|i| {
            let x = (i as f64 + 0.5) * h;
            (x, u0(x))
        })
        .collect();
    let mut data = FourierData::new();
    for n in (-n_max..=n_max).filter(|&n| n != 0) {
        let kappa = TAU * n as f64 / period;
        let sum: Complex64 = samples.iter().map(|&(x, v)| Complex64::from_polar(v, -kappa * x)).sum();
        data.insert(n, sum * h / period);
    }
    data
}

/// The ±1 step: `1` on `(π/2, 3π/2)`, `−1` on the rest of `[0, 2π)`.
pub fn step_function(x: f64) -> f64 {
    let x = x.rem_euclid(TAU);
    if x > PI / 2.0 && x < 1.5 * PI {
        1.0
    } else {
        -1.0
    }
}

fn require_two_pi(grid: &PeriodicGrid) -> Result<()> {
    if (grid.period() - TAU).abs() > 4.0 * f64::EPSILON * TAU {
        return Err(Error::InvalidGrid(format!("step data needs L = 2π, got {}", grid.period())));
    }
    Ok(())
}

/// Step initial condition sampled on the grid.
pub fn step_initial(grid: &PeriodicGrid) -> Result<GridFunction> {
    require_two_pi(grid)?;
    Ok(GridFunction::from_fn(*grid, step_function))
}

/// Partial sum `Σ_{n ≤ N, n odd} −(4/(nπ)) sin(nπ/2) cos(n x − t/n)` of the
/// exact solution started from the step.
pub fn step_exact_solution(t: f64, grid: &PeriodicGrid, truncation: u64) -> Result<GridFunction> {
    step_exact_solution_with_rate(t, grid, truncation, 1.0)
}

/// Same as [`step_exact_solution`] for `u_tx = λ u`.
pub fn step_exact_solution_with_rate(t: f64, grid: &PeriodicGrid, truncation: u64, rate: f64) -> Result<GridFunction> {
    require_two_pi(grid)?;
    if truncation == 0 {
        return Err(Error::ModeOutOfRange { mode: 0, max: i64::MAX });
    }
    let k = grid.points() as u64;
    let values = (0..k)
        .map(|i| {
            (1..=truncation)
                .step_by(2)
                .map(|n| {
                    // n x = 2π (n i mod K) / K, reduced exactly in integers
                    let phase = TAU * ((n * i) % k) as f64 / k as f64 - rate * t / n as f64;
                    step_cosine_coefficient(n as i64) * phase.cos()
                })
                .sum()
        })
        .collect();
    GridFunction::new(*grid, values)
}

/// `Σ_k (u_k − v_k)² Δx` (squared norm, no square root).
pub fn l2_error(numerical: &GridFunction, exact: &GridFunction) -> Result<f64> {
    let diff = numerical.sub(exact)?;
    Ok(diff.values().iter().map(|d| d * d).sum::<f64>() * numerical.grid().dx())
}

/// `Σ_k |u_{k+1} − u_k|` over one period.
pub fn total_variation(u: &GridFunction) -> f64 {
    let v = u.values();
    let n = v.len();
    (0..n).map(|i| (v[(i + 1) % n] - v[i]).abs()).sum()
}
