//! Unitary discrete Fourier transform and the Fourier-spectral derivative.
//!
//! The transform uses the symmetric normalization
//! `ũ_j = K^{-1/2} Σ_k exp(−2πi j k / K) u_k`, so Parseval holds without
//! scale factors.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::{GridFunction, PeriodicGrid};
use crate::Result;

/// Fourier coefficients of a grid function, modes `−(K−1)/2 ..= (K−1)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVector {
    grid: PeriodicGrid,
    // FFT ordering: index i holds mode i for i <= (K-1)/2, mode i - K otherwise
    coeffs: Vec<Complex64>,
}

impl SpectralVector {
    pub fn zeros(grid: PeriodicGrid) -> Self {
        Self { grid, coeffs: vec![Complex64::new(0.0, 0.0); grid.points()] }
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn get(&self, mode: i64) -> Result<Complex64> {
        self.grid.check_mode(mode)?;
        Ok(self.coeffs[self.grid.mode_index(mode)])
    }

    pub fn set(&mut self, mode: i64, value: Complex64) -> Result<()> {
        self.grid.check_mode(mode)?;
        let i = self.grid.mode_index(mode);
        self.coeffs[i] = value;
        Ok(())
    }

    /// `(j, ũ_j)` pairs in ascending mode order.
    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let max = self.grid.max_mode();
        (-max..=max).map(move |j| (j, self.coeffs[self.grid.mode_index(j)]))
    }

    /// Raw coefficients in FFT storage order.
    pub fn raw(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `Σ |ũ_j|²`
    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Largest `|ũ_{−j} − conj(ũ_j)|` over all modes.
    pub fn conjugate_asymmetry(&self) -> f64 {
        let max = self.grid.max_mode();
        (0..=max)
            .map(|j| (self.coeffs[self.grid.mode_index(-j)] - self.coeffs[self.grid.mode_index(j)].conj()).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn from_raw(grid: PeriodicGrid, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.points());
        Self { grid, coeffs }
    }
}

/// Planned forward/inverse transforms for one grid size.
#[derive(Clone)]
pub(crate) struct Transform {
    grid: PeriodicGrid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl std::fmt::Debug for Transform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Transform").field("points", &self.grid.points()).finish()
    }
}

impl Transform {
    pub(crate) fn new(grid: PeriodicGrid) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.points();
        Self {
            grid,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            scale: 1.0 / (n as f64).sqrt(),
        }
    }

    pub(crate) fn forward_real(&self, values: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        buf.iter_mut().for_each(|c| *c *= self.scale);
        buf
    }

    pub(crate) fn inverse_complex(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let mut buf = coeffs.to_vec();
        self.inverse.process(&mut buf);
        buf.iter_mut().for_each(|c| *c *= self.scale);
        buf
    }

    pub(crate) fn inverse_real(&self, coeffs: &[Complex64]) -> Vec<f64> {
        self.inverse_complex(coeffs).into_iter().map(|c| c.re).collect()
    }

    pub(crate) fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }
}

pub fn dft(u: &GridFunction) -> SpectralVector {
    let t = Transform::new(*u.grid());
    SpectralVector::from_raw(*u.grid(), t.forward_real(u.values()))
}

/// Inverse transform, keeping the real part.
pub fn idft(s: &SpectralVector) -> GridFunction {
    let t = Transform::new(s.grid);
    GridFunction::from_vec_unchecked(s.grid, t.inverse_real(&s.coeffs))
}

/// Inverse transform without discarding the imaginary part.
pub fn idft_complex(s: &SpectralVector) -> Vec<Complex64> {
    Transform::new(s.grid).inverse_complex(&s.coeffs)
}

fn spectral_diff_coeffs(u: &GridFunction, t: &Transform) -> Vec<Complex64> {
    let grid = t.grid();
    let mut c = t.forward_real(u.values());
    for (i, ci) in c.iter_mut().enumerate() {
        *ci *= Complex64::new(0.0, grid.wavenumber(grid.index_mode(i)));
    }
    c
}

/// Fourier-spectral derivative `δ_PS`: scale mode `j` by `i·2πj/L`.
///
/// The even-`K` branch never arises since [`PeriodicGrid`] only admits odd `K`.
pub fn spectral_diff(u: &GridFunction) -> GridFunction {
    let t = Transform::new(*u.grid());
    GridFunction::from_vec_unchecked(*u.grid(), t.inverse_real(&spectral_diff_coeffs(u, &t)))
}

/// [`spectral_diff`] before the real part is taken; the imaginary part is
/// roundoff for real input.
pub fn spectral_diff_complex(u: &GridFunction) -> Vec<Complex64> {
    let t = Transform::new(*u.grid());
    t.inverse_complex(&spectral_diff_coeffs(u, &t))
}
