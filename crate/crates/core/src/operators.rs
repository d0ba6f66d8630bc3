//! Shift-invariant periodic difference and average operators.
//!
//! Every operator here is a circulant matrix, so it acts on the discrete
//! Fourier mode `exp(2πi j k / K)` by multiplication with a scalar symbol.
//! The symbols are exposed through [`operator_symbol`] and drive the per-mode
//! solves in [`crate::schemes`].

use num_complex::Complex64;

use crate::grid::{GridFunction, PeriodicGrid};
use crate::spectral::spectral_diff;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    /// `(u_{k+1} − u_{k−1}) / (2Δx)`
    CentralDiff,
    /// `(u_{k+1} − u_k) / Δx`
    ForwardDiff,
    /// `(u_{k+1} + u_k) / 2`
    ForwardAvg,
    /// Fourier-spectral derivative.
    Spectral,
}

impl Operator {
    pub const ALL: [Operator; 4] =
        [Operator::CentralDiff, Operator::ForwardDiff, Operator::ForwardAvg, Operator::Spectral];

    pub fn apply(self, u: &GridFunction) -> GridFunction {
        match self {
            Operator::CentralDiff => central_diff(u),
            Operator::ForwardDiff => forward_diff(u),
            Operator::ForwardAvg => forward_average(u),
            Operator::Spectral => spectral_diff(u),
        }
    }
}

fn stencil(u: &GridFunction, f: impl Fn(f64, f64, f64) -> f64) -> GridFunction {
    let v = u.values();
    let n = v.len();
    let values = (0..n).map(|i| f(v[(i + n - 1) % n], v[i], v[(i + 1) % n])).collect();
    GridFunction::from_vec_unchecked(*u.grid(), values)
}

/// Central difference `δ⟨1⟩ₓ`.
pub fn central_diff(u: &GridFunction) -> GridFunction {
    let inv = 0.5 / u.grid().dx();
    stencil(u, |prev, _, next| (next - prev) * inv)
}

/// Forward difference `δ⁺ₓ`.
pub fn forward_diff(u: &GridFunction) -> GridFunction {
    let inv = 1.0 / u.grid().dx();
    stencil(u, |_, here, next| (next - here) * inv)
}

/// Forward average `μ⁺ₓ`.
pub fn forward_average(u: &GridFunction) -> GridFunction {
    stencil(u, |_, here, next| 0.5 * (next + here))
}

/// Eigenvalue of `op` on the mode `exp(2πi j k / K)`, `|j| ≤ (K − 1)/2`.
pub fn operator_symbol(op: Operator, mode: i64, grid: &PeriodicGrid) -> Result<Complex64> {
    grid.check_mode(mode)?;
    Ok(symbol_unchecked(op, mode, grid))
}

pub(crate) fn symbol_unchecked(op: Operator, mode: i64, grid: &PeriodicGrid) -> Complex64 {
    let dx = grid.dx();
    let theta = std::f64::consts::TAU * mode as f64 / grid.points() as f64;
    let shift = Complex64::from_polar(1.0, theta);
    match op {
        Operator::CentralDiff => Complex64::new(0.0, theta.sin() / dx),
        Operator::ForwardDiff => (shift - 1.0) / dx,
        Operator::ForwardAvg => (shift + 1.0) * 0.5,
        Operator::Spectral => Complex64::new(0.0, grid.wavenumber(mode)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn grid(k: usize) -> PeriodicGrid {
        PeriodicGrid::with_points(k).unwrap()
    }

    #[test]
    fn constants_are_annihilated_or_kept() {
        let g = grid(9);
        let c = GridFunction::constant(g, 3.5);
        for op in [Operator::CentralDiff, Operator::ForwardDiff, Operator::Spectral] {
            assert!(op.apply(&c).max_abs() < 1e-13, "{op:?}");
        }
        let avg = forward_average(&c);
        assert!(avg.values().iter().all(|&v| v == 3.5));
    }

    #[test]
    fn central_diff_on_sampled_sine() {
        let g = grid(65);
        let dx = g.dx();
        let u = GridFunction::from_fn(g, |x| x.sin());
        let du = central_diff(&u);
        let err = (0..65)
            .map(|i| (du.values()[i] - g.x(i).cos() * dx.sin() / dx).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-13, "{err}");
    }

    #[test]
    fn central_diff_unit_impulse_k5() {
        // impulse at grid index k = 1, stored at i = 1
        let g = grid(5);
        let dx = TAU / 5.0;
        let u = GridFunction::new(g, vec![0.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        let du = central_diff(&u);
        // (δu)_k = (u_{k+1} − u_{k−1}) / 2Δx: nonzero at k = 0 (≡ 5) and k = 2
        let h = 1.0 / (2.0 * dx);
        let expected = [h, 0.0, -h, 0.0, 0.0];
        for (a, b) in du.values().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn forward_diff_of_ramp() {
        let g = grid(7);
        let dx = g.dx();
        // u_k = kΔx for k = 1..K−1 and u_K = u_0 = 0 closes the period with a jump
        let u = GridFunction::from_fn(g, |x| x);
        let du = forward_diff(&u);
        for i in 0..6 {
            assert!((du.values()[i] - 1.0).abs() < 1e-12);
        }
        let wrap = (0.0 - 6.0 * dx) / dx;
        assert!((du.values()[6] - wrap).abs() < 1e-12);
        assert!(du.values().iter().sum::<f64>().abs() < 1e-12);
    }

    #[test]
    fn forward_average_of_cosine() {
        let g = grid(11);
        let dx = g.dx();
        let u = GridFunction::from_fn(g, |x| x.cos());
        let avg = forward_average(&u);
        for i in 0..11 {
            let expected = (g.x(i) + dx / 2.0).cos() * (dx / 2.0).cos();
            assert!((avg.values()[i] - expected).abs() < 1e-14);
        }
        assert!((avg.mean() - u.mean()).abs() < 1e-15);
    }

    #[test]
    fn symbols_at_mode_zero() {
        let g = grid(9);
        for op in [Operator::CentralDiff, Operator::ForwardDiff, Operator::Spectral] {
            assert_eq!(operator_symbol(op, 0, &g).unwrap().norm(), 0.0);
        }
        assert_eq!(operator_symbol(Operator::ForwardAvg, 0, &g).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn central_symbol_formula_k65() {
        let g = grid(65);
        for j in -32..=32 {
            let s = operator_symbol(Operator::CentralDiff, j, &g).unwrap();
            let theta = 2.0 * PI * j as f64 / 65.0;
            let expected = theta.sin() / (2.0 * PI / 65.0);
            assert_eq!(s.re, 0.0);
            assert!((s.im - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn symbol_rejects_unresolved_mode() {
        let g = grid(9);
        assert!(operator_symbol(Operator::Spectral, 5, &g).is_err());
        assert!(operator_symbol(Operator::Spectral, -5, &g).is_err());
    }

    #[test]
    fn symbol_matches_action_on_exponentials() {
        let g = grid(9);
        for op in Operator::ALL {
            for j in -4i64..=4 {
                let theta = TAU * j as f64 / 9.0;
                let re = GridFunction::from_fn(g, |x| (j as f64 * x).cos());
                let im = GridFunction::from_fn(g, |x| (j as f64 * x).sin());
                let (are, aim) = (op.apply(&re), op.apply(&im));
                let s = operator_symbol(op, j, &g).unwrap();
                for i in 0..9 {
                    let e = Complex64::from_polar(1.0, theta * i as f64);
                    let got = Complex64::new(are.values()[i], aim.values()[i]);
                    assert!((got - s * e).norm() < 1e-12, "{op:?} j={j}");
                }
            }
        }
    }
}
