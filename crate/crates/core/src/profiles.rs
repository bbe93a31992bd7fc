//! Barenblatt profiles of `∂_t ρ = ∂_x²(ρ^γ)` and their Gaussian limit.
//!
//! The self-similar solution of mass `λ` started from a Dirac mass at
//! `t = −1` is
//!
//! ```text
//! ρ̄_γ(t, x) = (1+t)^{−1/(γ+1)} 𝓑_γ(x (1+t)^{−1/(γ+1)}),   𝓑_γ(ξ) = [A − Bξ²]₊^{1/(γ−1)}
//! ```
//!
//! with `B = (γ−1)/(2γ(γ+1))` and `A` fixed by the mass. As `γ → 1` the
//! profile tends to `λ e^{−ξ²/4} / (2√π)`.

use std::f64::consts::PI;

use crate::specfun::{ln_wallis, WallisIndex};
use crate::{Error, Result};

/// Below this `γ − 1` the shape is evaluated in log form.
const LOG_PATH_BELOW: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarenblattProfile {
    gamma: f64,
    lambda: f64,
    log_a: f64,
    b: f64,
}

impl BarenblattProfile {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Total mass.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn a(&self) -> f64 {
        self.log_a.exp()
    }

    pub fn log_a(&self) -> f64 {
        self.log_a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Half-width `√(A/B)` of the support of `𝓑_γ`.
    pub fn support_edge(&self) -> f64 {
        (0.5 * (self.log_a - self.b.ln())).exp()
    }

    /// Peak value `A^{1/(γ−1)}`.
    pub fn peak(&self) -> f64 {
        (self.log_a / (self.gamma - 1.0)).exp()
    }

    /// `2 A^{(γ+1)/(2(γ−1))} B^{−1/2} W_{(γ+1)/(γ−1)} − λ`.
    pub fn mass_residual(&self) -> f64 {
        let g = self.gamma;
        let p = WallisIndex::new((g + 1.0) / (g - 1.0)).expect("index is positive for γ > 1");
        let log_mass = 2f64.ln() + self.log_a * (g + 1.0) / (2.0 * (g - 1.0)) - 0.5 * self.b.ln()
            + ln_wallis(p);
        log_mass.exp() - self.lambda
    }
}

/// `A` and `B` for the Barenblatt profile of mass `lambda`.
pub fn barenblatt_coefficients(gamma: f64, lambda: f64) -> Result<BarenblattProfile> {
    if !(gamma > 1.0) || !gamma.is_finite() {
        return Err(Error::domain(
            "barenblatt_coefficients",
            format!("gamma must be > 1, got {gamma}"),
        ));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::domain(
            "barenblatt_coefficients",
            format!("lambda must be positive, got {lambda}"),
        ));
    }
    let b = (gamma - 1.0) / (2.0 * gamma * (gamma + 1.0));
    let p = WallisIndex::new((gamma + 1.0) / (gamma - 1.0))?;
    let log_base = lambda.ln() + 0.5 * b.ln() - 2f64.ln() - ln_wallis(p);
    let log_a = 2.0 * (gamma - 1.0) / (gamma + 1.0) * log_base;
    Ok(BarenblattProfile {
        gamma,
        lambda,
        log_a,
        b,
    })
}

/// `𝓑_γ(ξ) = [A − Bξ²]₊^{1/(γ−1)}`.
pub fn barenblatt_shape(p: &BarenblattProfile, xi: f64) -> f64 {
    let g1 = p.gamma - 1.0;
    // (B/A) ξ²
    let r = (p.b.ln() - p.log_a).exp() * xi * xi;
    if r >= 1.0 {
        return 0.0;
    }
    if g1 < LOG_PATH_BELOW {
        ((p.log_a + (-r).ln_1p()) / g1).exp()
    } else {
        (p.a() - p.b * xi * xi).max(0.0).powf(1.0 / g1)
    }
}

/// Density of the self-similar solution at time `t ≥ 0`.
pub fn barenblatt_density(p: &BarenblattProfile, t: f64, x: f64) -> f64 {
    let s = (1.0 + t).powf(-1.0 / (p.gamma + 1.0));
    s * barenblatt_shape(p, x * s)
}

/// Momentum `ρ̄ ū` of the self-similar solution, `ū = x / ((γ+1)(1+t))`.
pub fn barenblatt_momentum(p: &BarenblattProfile, t: f64, x: f64) -> f64 {
    x * barenblatt_density(p, t, x) / ((p.gamma + 1.0) * (1.0 + t))
}

/// The `γ → 1` limit profile of mass `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianLimitProfile {
    lambda: f64,
}

impl GaussianLimitProfile {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::domain(
                "gaussian_limit",
                format!("lambda must be positive, got {lambda}"),
            ));
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn eval(&self, xi: f64) -> f64 {
        gaussian_limit(self.lambda, xi)
    }
}

/// `λ e^{−ξ²/4} / (2√π)`.
pub fn gaussian_limit(lambda: f64, xi: f64) -> f64 {
    lambda / (2.0 * PI.sqrt()) * (-0.25 * xi * xi).exp()
}

/// Uniform sampling grid for [`limit_gap`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapGrid {
    pub half_width: f64,
    pub points: usize,
}

impl Default for GapGrid {
    fn default() -> Self {
        Self {
            half_width: 8.0,
            points: 20_001,
        }
    }
}

impl GapGrid {
    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.points.max(2);
        let h = 2.0 * self.half_width / (n - 1) as f64;
        (0..n).map(move |i| -self.half_width + h * i as f64)
    }
}

/// `sup_ξ |𝓑_γ(ξ) − λ e^{−ξ²/4}/(2√π)|` over `grid`. The support edge
/// exceeds 8 for γ close to 1, but both profiles are below `1e−7·λ` there.
pub fn limit_gap(gamma: f64, lambda: f64, grid: &GapGrid) -> Result<f64> {
    let p = barenblatt_coefficients(gamma, lambda)?;
    Ok(grid
        .nodes()
        .map(|xi| (barenblatt_shape(&p, xi) - gaussian_limit(lambda, xi)).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_two_coefficients() {
        let p = barenblatt_coefficients(2.0, 1.0).unwrap();
        assert_relative_eq!(p.b(), 1.0 / 12.0, max_relative = 1e-15);
        // A^{3/2} = √(1/12) / (4/3)
        let a = ((1.0f64 / 12.0).sqrt() * 0.75).powf(2.0 / 3.0);
        assert_relative_eq!(p.a(), a, max_relative = 1e-13);
        assert!((p.a() - 0.36053).abs() < 1e-4);
        assert!((p.support_edge() - 2.0800).abs() < 1e-3);
        assert_relative_eq!(barenblatt_shape(&p, 0.0), p.a(), max_relative = 1e-14);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(barenblatt_coefficients(1.0, 1.0).is_err());
        assert!(barenblatt_coefficients(0.5, 1.0).is_err());
        assert!(barenblatt_coefficients(2.0, 0.0).is_err());
        assert!(GaussianLimitProfile::new(-1.0).is_err());
    }

    #[test]
    fn edge_is_zero() {
        for g in [1.0005, 1.01, 1.5, 2.0, 3.0] {
            let p = barenblatt_coefficients(g, 1.0).unwrap();
            assert_eq!(barenblatt_shape(&p, p.support_edge()), 0.0);
            assert_eq!(barenblatt_shape(&p, -1.5 * p.support_edge()), 0.0);
        }
    }

    #[test]
    fn log_path_matches_direct_path() {
        let g = 1.0 + 2e-3;
        let p = barenblatt_coefficients(g, 1.0).unwrap();
        for xi in [0.0, 0.5, 1.0, 3.0] {
            let direct = (p.a() - p.b() * xi * xi).powf(1.0 / (g - 1.0));
            assert_relative_eq!(barenblatt_shape(&p, xi), direct, max_relative = 1e-9);
        }
    }

    #[test]
    fn gaussian_values() {
        assert_relative_eq!(
            gaussian_limit(1.0, 0.0),
            0.282_094_791_773_878,
            max_relative = 1e-14
        );
        assert!((gaussian_limit(1.0, 2.0) - 0.103_777).abs() < 1e-6);
    }

    #[test]
    fn density_at_time_zero_is_shape() {
        let p = barenblatt_coefficients(1.5, 2.0).unwrap();
        for x in [-1.0, 0.0, 0.3, 2.0] {
            assert_eq!(barenblatt_density(&p, 0.0, x), barenblatt_shape(&p, x));
        }
    }

    #[test]
    fn gap_grid_nodes() {
        let grid = GapGrid {
            half_width: 1.0,
            points: 5,
        };
        let nodes: Vec<f64> = grid.nodes().collect();
        assert_eq!(nodes, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }
}
