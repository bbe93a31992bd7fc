//! Exact Gaussian solutions of the damped isothermal Euler system.
//!
//! ```text
//! ρ̄(t, x) = b(t) e^{−α(t)(x − x̄(t))²},   m̄(t, x) = (β(t) x + c(t)) ρ̄(t, x)
//! ```
//!
//! with `α = α₀/τ²`, `β = τ̇/τ`, `b = b₀/τ`, and `τ` solving
//! `τ̈ = 2α₀/τ − τ̇`, `τ(0) = 1`, `τ̇(0) = β₀`. The center moves as
//! `x̄(t) = (∫xρ₀ + (1 − e^{−t}) ∫m₀) / ‖ρ₀‖₁` and `c = c₀ − (1 + β) x̄`.

use std::f64::consts::PI;

use crate::ode::{dopri5, Dopri5Options};
use crate::quadrature::cell_nodes;
use crate::solver::GridField;
use crate::{Error, Mesh, Result};

/// Relative tail level that exact states must resolve at the domain ends.
pub const TAIL_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauConfig {
    pub alpha0: f64,
    pub beta0: f64,
    pub t_end: f64,
    pub tolerance: f64,
}

impl TauConfig {
    pub fn new(alpha0: f64, beta0: f64, t_end: f64, tolerance: f64) -> Result<Self> {
        if !(alpha0 > 0.0) || !alpha0.is_finite() {
            return Err(Error::domain(
                "TauConfig",
                format!("alpha0 must be positive, got {alpha0}"),
            ));
        }
        if !beta0.is_finite() {
            return Err(Error::domain("TauConfig", "beta0 must be finite"));
        }
        if !(t_end > 0.0) || !t_end.is_finite() {
            return Err(Error::domain(
                "TauConfig",
                format!("t_end must be positive, got {t_end}"),
            ));
        }
        if !(tolerance > 0.0) {
            return Err(Error::domain("TauConfig", "tolerance must be positive"));
        }
        Ok(Self {
            alpha0,
            beta0,
            t_end,
            tolerance,
        })
    }
}

/// Accepted integrator steps of the `τ` equation with quintic Hermite
/// dense output for both `τ` and `τ̇`.
#[derive(Debug, Clone, PartialEq)]
pub struct TauTrajectory {
    alpha0: f64,
    beta0: f64,
    t: Vec<f64>,
    tau: Vec<f64>,
    tau_dot: Vec<f64>,
}

/// `(τ, τ̇, τ̈)` at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauState {
    pub tau: f64,
    pub tau_dot: f64,
    pub tau_ddot: f64,
}

fn hermite5(s: f64, h: f64, y0: [f64; 3], y1: [f64; 3]) -> (f64, f64) {
    let s2 = s * s;
    let s3 = s2 * s;
    let s4 = s3 * s;
    let s5 = s4 * s;
    let h0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
    let h1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
    let h2 = 0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5);
    let h3 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
    let h4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
    let h5 = 0.5 * (s3 - 2.0 * s4 + s5);
    let value = h0 * y0[0]
        + h * h1 * y0[1]
        + h * h * h2 * y0[2]
        + h3 * y1[0]
        + h * h4 * y1[1]
        + h * h * h5 * y1[2];
    // d/dt of the interpolant
    let d0 = -30.0 * s2 + 60.0 * s3 - 30.0 * s4;
    let d1 = 1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4;
    let d2 = 0.5 * (2.0 * s - 9.0 * s2 + 12.0 * s3 - 5.0 * s4);
    let d3 = -d0;
    let d4 = -12.0 * s2 + 28.0 * s3 - 15.0 * s4;
    let d5 = 0.5 * (3.0 * s2 - 8.0 * s3 + 5.0 * s4);
    let slope =
        (d0 * y0[0] + d3 * y1[0]) / h + d1 * y0[1] + d4 * y1[1] + h * (d2 * y0[2] + d5 * y1[2]);
    (value, slope)
}

impl TauTrajectory {
    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn beta0(&self) -> f64 {
        self.beta0
    }

    pub fn t_end(&self) -> f64 {
        *self.t.last().expect("trajectory is never empty")
    }

    pub fn times(&self) -> &[f64] {
        &self.t
    }

    pub fn tau_samples(&self) -> &[f64] {
        &self.tau
    }

    pub fn tau_dot_samples(&self) -> &[f64] {
        &self.tau_dot
    }

    /// Polynomial degree of the dense output.
    pub fn interpolation_order(&self) -> usize {
        5
    }

    pub fn min_tau(&self) -> f64 {
        self.tau.iter().copied().fold(f64::INFINITY, f64::min)
    }

    fn accel(&self, tau: f64, tau_dot: f64) -> f64 {
        2.0 * self.alpha0 / tau - tau_dot
    }

    fn jerk(&self, tau: f64, tau_dot: f64) -> f64 {
        -2.0 * self.alpha0 * tau_dot / (tau * tau) - self.accel(tau, tau_dot)
    }

    /// Dense-output state at `t ∈ [0, t_end]`.
    pub fn state(&self, t: f64) -> Result<TauState> {
        let end = self.t_end();
        if !(t >= 0.0 && t <= end) {
            return Err(Error::OutOfRange { t, start: 0.0, end });
        }
        let k = self
            .t
            .partition_point(|&s| s <= t)
            .clamp(1, self.t.len() - 1);
        let (t0, t1) = (self.t[k - 1], self.t[k]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let (a0, v0) = (self.tau[k - 1], self.tau_dot[k - 1]);
        let (a1, v1) = (self.tau[k], self.tau_dot[k]);
        let (acc0, acc1) = (self.accel(a0, v0), self.accel(a1, v1));
        let (tau, _) = hermite5(s, h, [a0, v0, acc0], [a1, v1, acc1]);
        let (tau_dot, tau_ddot) = hermite5(
            s,
            h,
            [v0, acc0, self.jerk(a0, v0)],
            [v1, acc1, self.jerk(a1, v1)],
        );
        Ok(TauState {
            tau,
            tau_dot,
            tau_ddot,
        })
    }

    pub fn tau(&self, t: f64) -> Result<f64> {
        Ok(self.state(t)?.tau)
    }

    pub fn tau_dot(&self, t: f64) -> Result<f64> {
        Ok(self.state(t)?.tau_dot)
    }
}

/// Solves `τ̈ = 2α₀/τ − τ̇`, `τ(0) = 1`, `τ̇(0) = β₀` on `[0, t_end]`.
pub fn integrate_tau(cfg: &TauConfig) -> Result<TauTrajectory> {
    let alpha0 = cfg.alpha0;
    let opts = Dopri5Options::with_tolerance(cfg.tolerance);
    let pts = dopri5(
        |_, y: &[f64; 2]| [y[1], 2.0 * alpha0 / y[0] - y[1]],
        0.0,
        [1.0, cfg.beta0],
        cfg.t_end,
        &opts,
        |_| {},
    )?;
    Ok(TauTrajectory {
        alpha0,
        beta0: cfg.beta0,
        t: pts.iter().map(|p| p.t).collect(),
        tau: pts.iter().map(|p| p.y[0]).collect(),
        tau_dot: pts.iter().map(|p| p.y[1]).collect(),
    })
}

/// Local error target of [`normalization_trajectory`].
pub const NORMALIZATION_TOLERANCE: f64 = 1e-11;

/// The rescaling `τ` (`α₀ = 1`, `β₀ = 0`), for which `Γ = e^{−y²}` is stationary.
pub fn normalization_trajectory(t_end: f64) -> Result<TauTrajectory> {
    integrate_tau(&TauConfig::new(1.0, 0.0, t_end, NORMALIZATION_TOLERANCE)?)
}

/// Initial Gaussian `b₀ e^{−α₀(x − x̄₀)²}` with momentum `(β₀ x + c(0)) ρ₀`,
/// where `c(0) = c₀ − (1 + β₀) x̄₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianInit {
    pub alpha0: f64,
    pub beta0: f64,
    pub b0: f64,
    pub c0: f64,
    pub xbar0: f64,
}

impl Default for GaussianInit {
    fn default() -> Self {
        Self {
            alpha0: 1.0,
            beta0: 0.0,
            b0: 1.0,
            c0: 0.0,
            xbar0: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianParams {
    pub alpha0: f64,
    pub beta0: f64,
    pub b0: f64,
    pub c0: f64,
    pub mass: f64,
    pub first_moment0: f64,
    pub momentum0: f64,
    trajectory: TauTrajectory,
}

/// Parameters of the exact solution at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub t: f64,
    pub tau: f64,
    pub tau_dot: f64,
    pub alpha: f64,
    pub beta: f64,
    pub b: f64,
    pub c: f64,
    pub xbar: f64,
}

impl GaussianState {
    pub fn rho(&self, x: f64) -> f64 {
        let d = x - self.xbar;
        self.b * (-self.alpha * d * d).exp()
    }

    pub fn m(&self, x: f64) -> f64 {
        (self.beta * x + self.c) * self.rho(x)
    }
}

impl GaussianParams {
    /// Integrates `τ` to `t_end` and fills in the conserved quantities.
    pub fn new(init: GaussianInit, t_end: f64, tolerance: f64) -> Result<Self> {
        let cfg = TauConfig::new(init.alpha0, init.beta0, t_end, tolerance)?;
        Self::with_trajectory(init, integrate_tau(&cfg)?)
    }

    pub fn with_trajectory(init: GaussianInit, trajectory: TauTrajectory) -> Result<Self> {
        if !(init.b0 > 0.0) || !init.b0.is_finite() {
            return Err(Error::domain("GaussianParams", "b0 must be positive"));
        }
        if trajectory.alpha0 != init.alpha0 || trajectory.beta0 != init.beta0 {
            return Err(Error::domain(
                "GaussianParams",
                "trajectory was integrated for different (alpha0, beta0)",
            ));
        }
        if !(init.c0.is_finite() && init.xbar0.is_finite()) {
            return Err(Error::domain(
                "GaussianParams",
                "c0 and xbar0 must be finite",
            ));
        }
        let mass = init.b0 * (PI / init.alpha0).sqrt();
        Ok(Self {
            alpha0: init.alpha0,
            beta0: init.beta0,
            b0: init.b0,
            c0: init.c0,
            mass,
            first_moment0: mass * init.xbar0,
            // ∫(β₀x + c(0))ρ₀ = mass (β₀ x̄₀ + c₀ − (1+β₀) x̄₀)
            momentum0: mass * (init.c0 - init.xbar0),
            trajectory,
        })
    }

    pub fn trajectory(&self) -> &TauTrajectory {
        &self.trajectory
    }

    pub fn xbar_at(&self, t: f64) -> f64 {
        (self.first_moment0 - (-t).exp_m1() * self.momentum0) / self.mass
    }

    /// `lim x̄(t) = (∫xρ₀ + ∫m₀) / ‖ρ₀‖₁`.
    pub fn xbar_infinity(&self) -> f64 {
        (self.first_moment0 + self.momentum0) / self.mass
    }
}

/// Closed-form center `x̄(t)`.
pub fn center_xbar(p: &GaussianParams, t: f64) -> f64 {
    p.xbar_at(t)
}

/// `(α, β, b, c, x̄)` together with `τ`, `τ̇` at time `t`.
pub fn params_at(p: &GaussianParams, t: f64) -> Result<GaussianState> {
    let s = p.trajectory.state(t)?;
    let beta = s.tau_dot / s.tau;
    let xbar = p.xbar_at(t);
    Ok(GaussianState {
        t,
        tau: s.tau,
        tau_dot: s.tau_dot,
        alpha: p.alpha0 / (s.tau * s.tau),
        beta,
        b: p.b0 / s.tau,
        c: p.c0 - (1.0 + beta) * xbar,
        xbar,
    })
}

fn check_tails(g: &GaussianState, mesh: &Mesh) -> Result<()> {
    let far = (mesh.x_min - g.xbar).abs().min((mesh.x_max - g.xbar).abs());
    let inside = mesh.x_min < g.xbar && g.xbar < mesh.x_max;
    let tail = if inside {
        (-g.alpha * far * far).exp()
    } else {
        1.0
    };
    if tail > TAIL_THRESHOLD {
        return Err(Error::GridTooSmall {
            tail,
            threshold: TAIL_THRESHOLD,
        });
    }
    Ok(())
}

/// Cell averages of `(ρ̄, m̄)` at time `t`, 4-point Gauss–Legendre per cell.
pub fn exact_state(p: &GaussianParams, t: f64, mesh: &Mesh) -> Result<GridField> {
    let g = params_at(p, t)?;
    check_tails(&g, mesh)?;
    let dx = mesh.dx();
    let mut rho = Vec::with_capacity(mesh.n_cells);
    let mut m = Vec::with_capacity(mesh.n_cells);
    for xc in mesh.centers() {
        let (mut r_avg, mut m_avg) = (0.0, 0.0);
        for (off, w) in cell_nodes(dx) {
            let r = g.rho(xc + off);
            r_avg += w * r;
            m_avg += w * (g.beta * (xc + off) + g.c) * r;
        }
        rho.push(r_avg);
        m.push(m_avg);
    }
    GridField::new(*mesh, rho, m, 1.0, t)
}

/// Point values of `(ρ̄, m̄)` at the cell centers.
pub fn point_state(p: &GaussianParams, t: f64, mesh: &Mesh) -> Result<GridField> {
    let g = params_at(p, t)?;
    check_tails(&g, mesh)?;
    let rho = mesh.centers().map(|x| g.rho(x)).collect();
    let m = mesh.centers().map(|x| g.m(x)).collect();
    GridField::new(*mesh, rho, m, 1.0, t)
}

/// Max-norm PDE residuals of the exact solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnsatzResidual {
    pub res_continuity: f64,
    pub res_momentum: f64,
}

/// Centered-difference residuals of `∂_tρ + ∂_x m` and
/// `∂_t m + ∂_x(m²/ρ) + ∂_x ρ + m` on point samples, over interior cells
/// with `ρ̄ ≥ 1e−10 · peak`.
pub fn ansatz_residual(
    p: &GaussianParams,
    t: f64,
    mesh: &Mesh,
    h_t: f64,
) -> Result<AnsatzResidual> {
    if !(h_t > 0.0 && t - h_t >= 0.0) {
        return Err(Error::domain(
            "ansatz_residual",
            format!("need 0 < h_t <= t, got t = {t}, h_t = {h_t}"),
        ));
    }
    let before = params_at(p, t - h_t)?;
    let now = params_at(p, t)?;
    let after = params_at(p, t + h_t)?;
    let dx = mesh.dx();
    let x = |i: usize| mesh.center(i);
    let peak = now.b;
    let mut res = AnsatzResidual {
        res_continuity: 0.0,
        res_momentum: 0.0,
    };
    for i in 1..mesh.n_cells.saturating_sub(1) {
        let xi = x(i);
        let r = now.rho(xi);
        if r < 1e-10 * peak {
            continue;
        }
        let (xl, xr) = (x(i - 1), x(i + 1));
        let drho_dt = (after.rho(xi) - before.rho(xi)) / (2.0 * h_t);
        let dm_dt = (after.m(xi) - before.m(xi)) / (2.0 * h_t);
        let dm_dx = (now.m(xr) - now.m(xl)) / (2.0 * dx);
        let conv = |y: f64| {
            let m = now.m(y);
            m * m / now.rho(y)
        };
        let dconv_dx = (conv(xr) - conv(xl)) / (2.0 * dx);
        let drho_dx = (now.rho(xr) - now.rho(xl)) / (2.0 * dx);
        res.res_continuity = res.res_continuity.max((drho_dt + dm_dx).abs());
        res.res_momentum = res
            .res_momentum
            .max((dm_dt + dconv_dx + drho_dx + now.m(xi)).abs());
    }
    Ok(res)
}
