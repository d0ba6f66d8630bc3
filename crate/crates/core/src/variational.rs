//! Polynomial energy densities, the discrete energy `H_d` and the discrete
//! variational derivative.
//!
//! For a pointwise density `G(u) = Σ_p c_p u^p` the discrete variational
//! derivative is the divided difference
//!
//! ```text
//! dG(a, b) = (G(a) − G(b)) / (a − b) = Σ_p c_p (a^{p−1} + a^{p−2} b + … + b^{p−1})
//! ```
//!
//! evaluated term by term, so there is no `0/0` at `a = b` and no
//! cancellation near it. With this choice the discrete chain rule
//! `H_d(a) − H_d(b) = Σ_k dG(a, b)_k (a_k − b_k) Δx` holds identically.
//! Other realizations of the chain rule exist; this is the one used
//! throughout the crate.

use std::fmt;
use std::str::FromStr;

use crate::grid::GridFunction;
use crate::{Error, Result};

/// `G(u) = Σ_p c_p u^p`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianDensity {
    coeffs: Vec<f64>,
}

impl HamiltonianDensity {
    /// Density from coefficients `c_0, …, c_P`. Trailing zeros are dropped.
    pub fn new(mut coeffs: Vec<f64>) -> Result<Self> {
        if let Some(c) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidDensity(format!("coefficient {c} is not finite")));
        }
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.iter().skip(1).all(|&c| c == 0.0) {
            return Err(Error::InvalidDensity("G must depend on u (some c_p != 0 with p >= 1)".into()));
        }
        Ok(Self { coeffs })
    }

    /// `G(u) = u² / 2`, the linear Klein–Gordon density.
    pub fn linear_klein_gordon() -> Self {
        Self { coeffs: vec![0.0, 0.0, 0.5] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, p: usize) -> f64 {
        self.coeffs.get(p).copied().unwrap_or(0.0)
    }

    /// `Some(c_2)` when `G = c_0 + c_2 u²`, i.e. the PDE is `u_tx = 2 c_2 u`.
    pub fn quadratic_only(&self) -> Option<f64> {
        let others_vanish = self.coeffs.iter().enumerate().all(|(p, &c)| p == 0 || p == 2 || c == 0.0);
        (others_vanish && self.coeff(2) != 0.0).then(|| self.coeff(2))
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c)
    }

    /// `G′(u)`
    pub fn derivative(&self, u: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (p, &c)| acc * u + p as f64 * c)
    }

    /// Divided difference `(G(a) − G(b)) / (a − b)`, equal to `G′(a)` at `a = b`.
    pub fn divided_difference(&self, a: f64, b: f64) -> f64 {
        self.divided_difference_from(1, a, b)
    }

    /// Divided difference of the terms with `p ≥ from` only.
    pub(crate) fn divided_difference_from(&self, from: usize, a: f64, b: f64) -> f64 {
        // h_q = a^q + a^{q-1} b + … + b^q, built as h_q = a h_{q-1} + b^q
        let mut h = 0.0;
        let mut b_pow = 1.0;
        let mut sum = 0.0;
        for (p, &c) in self.coeffs.iter().enumerate().skip(1) {
            h = a * h + b_pow;
            b_pow *= b;
            if p >= from {
                sum += c * h;
            }
        }
        sum
    }
}

impl fmt::Display for HamiltonianDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "poly:")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Parses `poly:c0,c1,…,cP`.
impl FromStr for HamiltonianDensity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .strip_prefix("poly:")
            .ok_or_else(|| Error::InvalidDensity(format!("expected 'poly:c0,c1,...', got '{s}'")))?;
        let coeffs = body
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidDensity(format!("bad coefficient '{t}': {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }
}

/// Value of `H_d` at time level `time_index`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteEnergy {
    pub time_index: usize,
    pub value: f64,
}

/// `H_d(u) = Σ_k G(u_k) Δx`.
pub fn discrete_energy(u: &GridFunction, density: &HamiltonianDensity) -> f64 {
    u.values().iter().map(|&v| density.eval(v)).sum::<f64>() * u.grid().dx()
}

/// Entrywise divided difference of `density` between two time levels.
pub fn discrete_variational_derivative(
    u_next: &GridFunction,
    u_prev: &GridFunction,
    density: &HamiltonianDensity,
) -> Result<GridFunction> {
    u_next.zip_with(u_prev, |a, b| density.divided_difference(a, b))
}
