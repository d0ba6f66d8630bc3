//! Fully discrete conservative schemes and their time-stepping driver.
//!
//! All three schemes are the implicit midpoint rule applied to a
//! semi-discretization `D u̇ = R dG`:
//!
//! | kind          | left `D`      | right `R`     |
//! |---------------|---------------|---------------|
//! | `CentralDiff` | `δ⟨1⟩ₓ`       | identity      |
//! | `Spectral`    | `δ_PS`        | identity      |
//! | `AverageDiff` | `δ⁺ₓ`         | `μ⁺ₓ`         |
//!
//! with the discrete variational derivative `dG(u^{m+1}, u^m)` on the right.
//! Both `D` and `R` are circulant, so each sweep of the solver is a diagonal
//! solve per Fourier mode. The quadratic part of `G` is treated implicitly in
//! every sweep and the remaining terms by fixed-point iteration, which makes
//! a single sweep exact for quadratic `G`.
//!
//! Mode 0 is annihilated by every left operator, so the equation degenerates
//! there; [`MeanModePolicy`] decides what the update does with the mean.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::grid::{GridFunction, PeriodicGrid};
use crate::operators::{symbol_unchecked, Operator};
use crate::spectral::Transform;
use crate::variational::{discrete_energy, DiscreteEnergy, HamiltonianDensity};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    CentralDiff,
    Spectral,
    AverageDiff,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 3] = [SchemeKind::CentralDiff, SchemeKind::Spectral, SchemeKind::AverageDiff];

    /// Operator applied to the time difference.
    pub fn left_operator(self) -> Operator {
        match self {
            SchemeKind::CentralDiff => Operator::CentralDiff,
            SchemeKind::Spectral => Operator::Spectral,
            SchemeKind::AverageDiff => Operator::ForwardDiff,
        }
    }

    /// Operator applied to the discrete variational derivative, if any.
    pub fn right_operator(self) -> Option<Operator> {
        match self {
            SchemeKind::AverageDiff => Some(Operator::ForwardAvg),
            _ => None,
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            SchemeKind::CentralDiff => "cd",
            SchemeKind::Spectral => "ps",
            SchemeKind::AverageDiff => "ad",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for SchemeKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "cd" | "central" | "central-diff" => Ok(SchemeKind::CentralDiff),
            "ps" | "spectral" => Ok(SchemeKind::Spectral),
            "ad" | "average" | "average-diff" => Ok(SchemeKind::AverageDiff),
            other => Err(format!("unknown scheme '{other}' (expected cd, ps or ad)")),
        }
    }
}

/// Treatment of the mean (Fourier mode 0) in each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MeanModePolicy {
    /// The updated state has zero mean; all other modes evolve from `u`.
    #[default]
    ProjectZero,
    /// The updated state keeps the mean of `u`.
    Preserve,
    /// Like `Preserve`, but a state whose mean exceeds `fp_tol` is an error.
    Reject,
}

impl FromStr for MeanModePolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "project-zero" | "project" => Ok(MeanModePolicy::ProjectZero),
            "preserve" => Ok(MeanModePolicy::Preserve),
            "reject" => Ok(MeanModePolicy::Reject),
            other => Err(format!("unknown mean-mode policy '{other}' (expected project-zero, preserve or reject)")),
        }
    }
}

impl fmt::Display for MeanModePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeanModePolicy::ProjectZero => "project-zero",
            MeanModePolicy::Preserve => "preserve",
            MeanModePolicy::Reject => "reject",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Max-norm tolerance on the scheme residual.
    pub fp_tol: f64,
    pub fp_max_iter: usize,
    pub mean_mode_policy: MeanModePolicy,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { fp_tol: 1e-13, fp_max_iter: 200, mean_mode_policy: MeanModePolicy::ProjectZero }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.fp_tol.is_finite() && self.fp_tol > 0.0) {
            return Err(Error::InvalidSolver(format!("fp_tol = {} must be positive", self.fp_tol)));
        }
        if self.fp_max_iter == 0 {
            return Err(Error::InvalidSolver("fp_max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// Per-step solver diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepStats {
    pub iterations: usize,
    pub residual: f64,
}

/// A scheme bound to a grid, density, time step and solver settings.
#[derive(Debug, Clone)]
pub struct SchemeInstance {
    kind: SchemeKind,
    grid: PeriodicGrid,
    density: HamiltonianDensity,
    dt: f64,
    solver: SolverConfig,
    transform: Transform,
    // per-mode data in FFT order
    left: Vec<Complex64>,
    right: Vec<Complex64>,
    denom: Vec<Complex64>,
    right_overridden: bool,
}

impl SchemeInstance {
    pub fn new(
        kind: SchemeKind,
        grid: PeriodicGrid,
        density: HamiltonianDensity,
        dt: f64,
        solver: SolverConfig,
    ) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidTimeStep(dt));
        }
        solver.validate()?;
        Ok(Self::build(kind, grid, density, dt, solver, false))
    }

    fn build(
        kind: SchemeKind,
        grid: PeriodicGrid,
        density: HamiltonianDensity,
        dt: f64,
        solver: SolverConfig,
        right_overridden: bool,
    ) -> Self {
        let n = grid.points();
        let modes = (0..n).map(|i| grid.index_mode(i));
        let left: Vec<_> = modes.clone().map(|j| symbol_unchecked(kind.left_operator(), j, &grid)).collect();
        let right: Vec<_> = modes
            .map(|j| match (kind.right_operator(), right_overridden) {
                (Some(op), false) => symbol_unchecked(op, j, &grid),
                _ => Complex64::new(1.0, 0.0),
            })
            .collect();
        let c2 = density.coeff(2);
        let denom = left.iter().zip(&right).map(|(&d, &r)| d / dt - r * c2).collect();
        Self {
            kind,
            grid,
            density,
            dt,
            solver,
            transform: Transform::new(grid),
            left,
            right,
            denom,
            right_overridden,
        }
    }

    /// The same scheme stepping backwards in time (`Δt → −Δt`).
    pub fn reversed(&self) -> Self {
        Self::build(self.kind, self.grid, self.density.clone(), -self.dt, self.solver, self.right_overridden)
    }

    /// Replaces the right operator by the identity. Breaks conservation for
    /// `AverageDiff`; used to check that the verification suite notices.
    #[doc(hidden)]
    pub fn with_identity_right_operator(&self) -> Self {
        Self::build(self.kind, self.grid, self.density.clone(), self.dt, self.solver, true)
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn density(&self) -> &HamiltonianDensity {
        &self.density
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn solver(&self) -> &SolverConfig {
        &self.solver
    }

    /// Symbols `(s_D(j), s_R(j))` of the left and right operators.
    pub fn symbols(&self, mode: i64) -> Result<(Complex64, Complex64)> {
        self.grid.check_mode(mode)?;
        let i = self.grid.mode_index(mode);
        Ok((self.left[i], self.right[i]))
    }

    /// Max-norm of `D(u_next − u)/Δt − R dG(u_next, u)` with mode 0 removed.
    pub fn residual(&self, u: &GridFunction, u_next: &GridFunction) -> Result<f64> {
        u.ensure_same_grid(u_next)?;
        let delta_hat = self.transform.forward_real(u_next.sub(u)?.values());
        let dvd: Vec<f64> =
            u_next.values().iter().zip(u.values()).map(|(&a, &b)| self.density.divided_difference(a, b)).collect();
        Ok(self.residual_from(&delta_hat, &self.transform.forward_real(&dvd)))
    }

    fn residual_from(&self, delta_hat: &[Complex64], dvd_hat: &[Complex64]) -> f64 {
        let mut r: Vec<Complex64> = (0..delta_hat.len())
            .map(|i| self.left[i] * delta_hat[i] / self.dt - self.right[i] * dvd_hat[i])
            .collect();
        r[0] = Complex64::new(0.0, 0.0);
        self.transform.inverse_complex(&r).iter().fold(0.0, |m, z| {
            let v = z.norm();
            if v.is_nan() || m.is_nan() {
                f64::NAN
            } else {
                m.max(v)
            }
        })
    }

    /// Advances `u` by one time step.
    pub fn step(&self, u: &GridFunction) -> Result<GridFunction> {
        self.step_with_stats(u).map(|(next, _)| next)
    }

    pub fn step_with_stats(&self, u: &GridFunction) -> Result<(GridFunction, StepStats)> {
        if *u.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        if self.solver.mean_mode_policy == MeanModePolicy::Reject {
            let mean = u.mean();
            if mean.abs() > self.solver.fp_tol {
                return Err(Error::MeanModeViolation { mean });
            }
        }
        let n = self.grid.points();
        let u_hat = self.transform.forward_real(u.values());
        let mut delta_hat = vec![Complex64::new(0.0, 0.0); n];
        if self.solver.mean_mode_policy == MeanModePolicy::ProjectZero {
            delta_hat[0] = -u_hat[0];
        }
        let c2 = self.density.coeff(2);

        let mut iterations = 0;
        loop {
            let delta = self.transform.inverse_real(&delta_hat);
            let next: Vec<f64> = u.values().iter().zip(&delta).map(|(a, d)| a + d).collect();
            let dvd: Vec<f64> =
                next.iter().zip(u.values()).map(|(&a, &b)| self.density.divided_difference(a, b)).collect();
            let dvd_hat = self.transform.forward_real(&dvd);
            let residual = self.residual_from(&delta_hat, &dvd_hat);
            if residual <= self.solver.fp_tol && next.iter().all(|v| v.is_finite()) {
                let stats = StepStats { iterations, residual };
                return Ok((GridFunction::from_vec_unchecked(self.grid, next), stats));
            }
            if iterations == self.solver.fp_max_iter || !residual.is_finite() {
                return Err(Error::NonConvergence { iterations, residual });
            }
            // D δ/Δt = R (dG_old + c2 (δ − δ_old)): quadratic part implicit
            for i in 1..n {
                delta_hat[i] = self.right[i] * (dvd_hat[i] - c2 * delta_hat[i]) / self.denom[i];
            }
            iterations += 1;
        }
    }
}

pub fn step(scheme: &SchemeInstance, u: &GridFunction) -> Result<GridFunction> {
    scheme.step(u)
}

/// Amplification factor `g_j` of mode `j` for a quadratic density.
///
/// `|g_j| = 1` since `s_R / s_D` is purely imaginary for every scheme.
pub fn amplification_factor(scheme: &SchemeInstance, mode: i64) -> Result<Complex64> {
    let c2 = scheme.density.quadratic_only().ok_or(Error::NonlinearDensity)?;
    if mode == 0 {
        return Err(Error::ModeOutOfRange { mode, max: scheme.grid.max_mode() });
    }
    let (d, r) = scheme.symbols(mode)?;
    let a = d / scheme.dt;
    Ok((a + r * c2) / (a - r * c2))
}

/// States and energies along a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dt: f64,
    /// `(m, u^m)` in increasing `m`.
    pub snapshots: Vec<(usize, GridFunction)>,
    /// `H_d(u^m)` for every `m = 0, …, M`.
    pub energies: Vec<DiscreteEnergy>,
    /// Solver sweeps for steps `1, …, M`.
    pub iterations: Vec<usize>,
}

impl Trajectory {
    pub fn final_state(&self) -> &GridFunction {
        &self.snapshots.last().expect("trajectory always holds the final state").1
    }

    pub fn snapshot(&self, m: usize) -> Option<&GridFunction> {
        self.snapshots.iter().find(|(i, _)| *i == m).map(|(_, u)| u)
    }

    /// `max_m |H_d(u^m) − H_d(u^0)| / |H_d(u^0)|` (absolute when `H_d(u^0) = 0`).
    pub fn max_relative_drift(&self) -> f64 {
        let h0 = self.energies[0].value;
        let scale = if h0 == 0.0 { 1.0 } else { h0.abs() };
        self.energies.iter().map(|e| (e.value - h0).abs() / scale).fold(0.0, f64::max)
    }

    pub fn total_iterations(&self) -> usize {
        self.iterations.iter().sum()
    }
}

/// Runs `steps` steps, keeping every `stride`-th state and the final one.
pub fn run(scheme: &SchemeInstance, u0: &GridFunction, steps: usize, stride: usize) -> Result<Trajectory> {
    let stride = stride.max(1);
    run_recording(scheme, u0, steps, |m| m % stride == 0)
}

/// Runs `steps` steps, keeping `u^m` whenever `keep(m)` and always the final state.
pub fn run_recording(
    scheme: &SchemeInstance,
    u0: &GridFunction,
    steps: usize,
    keep: impl Fn(usize) -> bool,
) -> Result<Trajectory> {
    if steps == 0 {
        return Err(Error::InvalidSolver("a run needs at least one step".into()));
    }
    let mut snapshots = Vec::new();
    let mut energies = Vec::with_capacity(steps + 1);
    let mut iterations = Vec::with_capacity(steps);
    if keep(0) {
        snapshots.push((0, u0.clone()));
    }
    energies.push(DiscreteEnergy { time_index: 0, value: discrete_energy(u0, scheme.density()) });

    let mut u = u0.clone();
    for m in 1..=steps {
        let (next, stats) = scheme
            .step_with_stats(&u)
            .map_err(|e| Error::StepFailed { step: m, source: Box::new(e) })?;
        energies.push(DiscreteEnergy { time_index: m, value: discrete_energy(&next, scheme.density()) });
        iterations.push(stats.iterations);
        if keep(m) || m == steps {
            snapshots.push((m, next.clone()));
        }
        u = next;
    }
    Ok(Trajectory { dt: scheme.dt(), snapshots, energies, iterations })
}
