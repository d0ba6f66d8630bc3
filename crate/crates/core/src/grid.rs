//! Periodic mesh and real grid functions.
//!
//! Grid point `k ∈ {1, …, K}` sits at `x = k Δx`. Values are stored 0-based
//! modulo `K`: storage index `i` holds grid point `k ≡ i (mod K)`, so index 0
//! holds `k = K` (`x = L ≡ 0`) and index `i ≥ 1` holds `k = i`. Every sum over
//! a period is unaffected by this offset.

use crate::{Error, Result};

/// Uniform periodic mesh with `K` points on `[0, L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicGrid {
    points: usize,
    period: f64,
    dx: f64,
}

impl PeriodicGrid {
    /// Grid of `points` nodes over one period of length `period`.
    ///
    /// `points` must be odd and at least 3: with odd `K` there is no Nyquist
    /// mode, the forward average never annihilates a mode, and mode 0 is the
    /// only kernel of every difference operator.
    pub fn new(points: usize, period: f64) -> Result<Self> {
        if points < 3 {
            return Err(Error::InvalidGrid(format!("K = {points} must be at least 3")));
        }
        if points % 2 == 0 {
            return Err(Error::InvalidGrid(format!("K = {points} must be odd")));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidGrid(format!("period {period} must be positive and finite")));
        }
        Ok(Self { points, period, dx: period / points as f64 })
    }

    /// Grid on `[0, 2π)`.
    pub fn with_points(points: usize) -> Result<Self> {
        Self::new(points, std::f64::consts::TAU)
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Largest resolved mode `(K − 1) / 2`.
    pub fn max_mode(&self) -> i64 {
        (self.points as i64 - 1) / 2
    }

    /// Coordinate of storage index `i`.
    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx
    }

    /// Wavenumber `2π j / L` of mode `j`.
    pub fn wavenumber(&self, mode: i64) -> f64 {
        std::f64::consts::TAU * mode as f64 / self.period
    }

    pub(crate) fn check_mode(&self, mode: i64) -> Result<()> {
        let max = self.max_mode();
        if mode.abs() > max {
            return Err(Error::ModeOutOfRange { mode, max });
        }
        Ok(())
    }

    /// Storage index of mode `j` in FFT ordering.
    pub(crate) fn mode_index(&self, mode: i64) -> usize {
        mode.rem_euclid(self.points as i64) as usize
    }

    /// Signed mode number of FFT storage index `i`.
    pub(crate) fn index_mode(&self, i: usize) -> i64 {
        let k = self.points as i64;
        let i = i as i64;
        if i <= self.max_mode() {
            i
        } else {
            i - k
        }
    }
}

/// Real periodic grid vector `u^m = (u_1, …, u_K)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: PeriodicGrid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: PeriodicGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.points() {
            return Err(Error::LengthMismatch { expected: grid.points(), got: values.len() });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: PeriodicGrid) -> Self {
        Self { grid, values: vec![0.0; grid.points()] }
    }

    pub fn constant(grid: PeriodicGrid, c: f64) -> Self {
        Self { grid, values: vec![c; grid.points()] }
    }

    /// Samples `f` at every grid node.
    pub fn from_fn(grid: PeriodicGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.points()).map(|i| f(grid.x(i))).collect();
        Self { grid, values }
    }

    pub(crate) fn from_vec_unchecked(grid: PeriodicGrid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.points());
        Self { grid, values }
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at grid point `k` for any integer `k`, with `u_{k+K} = u_k`.
    pub fn at(&self, k: i64) -> f64 {
        self.values[k.rem_euclid(self.values.len() as i64) as usize]
    }

    /// Values at `(x, u)` pairs for `k = 1, …, K`, with `x_k = kΔx`.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.values.len();
        (1..=n).map(move |k| (k as f64 * self.grid.dx(), self.values[k % n]))
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `Σ_k u_k v_k Δx`.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.ensure_same_grid(other)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum::<f64>() * self.grid.dx())
    }

    /// Entrywise map.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_vec_unchecked(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Entrywise combination of two grid functions on the same grid.
    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.ensure_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self::from_vec_unchecked(self.grid, values))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|v| v * s)
    }

    /// Copy with the mean removed.
    pub fn without_mean(&self) -> Self {
        let m = self.mean();
        self.map(|v| v - m)
    }

    pub fn ensure_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }
}
