//! Finite-volume solver for
//!
//! ```text
//! ∂_t ρ + ∂_x m = 0
//! ∂_t m + ∂_x(m²/ρ + ρ^γ) + m = 0
//! ```
//!
//! Rusanov fluxes, outflow boundaries and Strang splitting with the damping
//! integrated exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::gaussdyn::{exact_state, GaussianParams};
use crate::profiles::{barenblatt_density, barenblatt_momentum, BarenblattProfile};
use crate::quadrature::cell_average;
use crate::{Error, Mesh, Result};

pub const DEFAULT_VACUUM_FLOOR: f64 = 1e-12;

/// Cell averages of `(ρ, m)` at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub mesh: Mesh,
    pub rho: Vec<f64>,
    pub m: Vec<f64>,
    pub gamma: f64,
    pub time: f64,
    pub vacuum_floor: f64,
}

impl GridField {
    pub fn new(mesh: Mesh, rho: Vec<f64>, m: Vec<f64>, gamma: f64, time: f64) -> Result<Self> {
        if rho.len() != mesh.n_cells || m.len() != mesh.n_cells {
            return Err(Error::GridMismatch(format!(
                "expected {} cells, got rho: {}, m: {}",
                mesh.n_cells,
                rho.len(),
                m.len()
            )));
        }
        if !(gamma >= 1.0) || !gamma.is_finite() {
            return Err(Error::domain(
                "GridField",
                format!("gamma must be >= 1, got {gamma}"),
            ));
        }
        if rho.iter().any(|r| !(*r >= 0.0) || !r.is_finite()) || m.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("GridField"));
        }
        Ok(Self {
            mesh,
            rho,
            m,
            gamma,
            time,
            vacuum_floor: DEFAULT_VACUUM_FLOOR,
        })
    }

    /// Cell averages of `f(x) = (ρ, m)` by 4-point Gauss–Legendre.
    pub fn from_fn(
        mesh: Mesh,
        gamma: f64,
        time: f64,
        f: impl Fn(f64) -> (f64, f64),
    ) -> Result<Self> {
        let dx = mesh.dx();
        let rho = mesh
            .centers()
            .map(|x| cell_average(x, dx, |s| f(s).0))
            .collect();
        let m = mesh
            .centers()
            .map(|x| cell_average(x, dx, |s| f(s).1))
            .collect();
        Self::new(mesh, rho, m, gamma, time)
    }

    pub fn with_floor(mut self, floor: f64) -> Self {
        self.vacuum_floor = floor;
        self
    }

    pub fn dx(&self) -> f64 {
        self.mesh.dx()
    }

    pub fn mass(&self) -> f64 {
        self.rho.iter().sum::<f64>() * self.dx()
    }

    pub fn momentum(&self) -> f64 {
        self.m.iter().sum::<f64>() * self.dx()
    }

    /// `Σ x_i ρ_i Δx`.
    pub fn first_moment(&self) -> f64 {
        self.mesh
            .centers()
            .zip(&self.rho)
            .map(|(x, r)| x * r)
            .sum::<f64>()
            * self.dx()
    }

    /// `Σ (m²/(2ρ) + h(ρ)) Δx` over cells above the vacuum floor, with
    /// `h(ρ) = ρ log ρ` for `γ = 1` and `ρ^γ/(γ−1)` otherwise.
    pub fn energy(&self) -> f64 {
        let g = self.gamma;
        self.rho
            .iter()
            .zip(&self.m)
            .filter(|(r, _)| **r > self.vacuum_floor)
            .map(|(&r, &m)| {
                let internal = if g == 1.0 {
                    r * r.ln()
                } else {
                    r.powf(g) / (g - 1.0)
                };
                0.5 * m * m / r + internal
            })
            .sum::<f64>()
            * self.dx()
    }
}

/// `P(ρ) = ρ^γ`.
pub fn pressure(rho: f64, gamma: f64) -> f64 {
    if gamma == 1.0 {
        rho
    } else {
        rho.powf(gamma)
    }
}

/// `c = √(γ ρ^{γ−1})`; identically 1 for the isothermal law.
pub fn sound_speed(rho: f64, gamma: f64) -> f64 {
    if gamma == 1.0 {
        1.0
    } else {
        (gamma * rho.powf(gamma - 1.0)).sqrt()
    }
}

fn max_wave_speed(field: &GridField) -> Result<f64> {
    let mut s_max: f64 = 0.0;
    let mut any = false;
    for (&r, &m) in field.rho.iter().zip(&field.m) {
        if r > field.vacuum_floor {
            any = true;
            s_max = s_max.max((m / r).abs() + sound_speed(r, field.gamma));
        }
    }
    if any {
        Ok(s_max)
    } else {
        Err(Error::AllVacuum)
    }
}

/// `cfl · Δx / max_i(|u_i| + c_i)`, skipping vacuum cells.
pub fn cfl_dt(field: &GridField, cfl: f64) -> Result<f64> {
    Ok(cfl * field.dx() / max_wave_speed(field)?)
}

/// Mass bookkeeping of one step.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepBudget {
    /// Net mass that left through the boundaries.
    pub outflow: f64,
    /// Mass added by raising cells to the vacuum floor.
    pub floor_injection: f64,
}

/// Advances `field` by `dt` and returns the new state.
pub fn step(field: &GridField, dt: f64) -> Result<GridField> {
    let mut next = field.clone();
    step_in_place(&mut next, dt)?;
    Ok(next)
}

fn physical_flux(r: f64, m: f64, gamma: f64, floor: f64) -> (f64, f64, f64) {
    if r <= floor {
        // vacuum: no velocity, pressure only
        return (m, pressure(r, gamma), sound_speed(r, gamma));
    }
    let u = m / r;
    (
        m,
        m * u + pressure(r, gamma),
        u.abs() + sound_speed(r, gamma),
    )
}

/// In-place variant of [`step`] that also reports the mass budget.
pub fn step_in_place(field: &mut GridField, dt: f64) -> Result<StepBudget> {
    let limit = cfl_dt(field, 1.0)?;
    if !(dt > 0.0) || dt > limit * (1.0 + 1e-12) {
        return Err(Error::CflViolation { dt, limit });
    }
    let n = field.mesh.n_cells;
    let dx = field.dx();
    let gamma = field.gamma;
    let floor = field.vacuum_floor;
    let half_damp = (-0.5 * dt).exp();

    field.m.iter_mut().for_each(|m| *m *= half_damp);

    let cell_flux: Vec<(f64, f64, f64)> = field
        .rho
        .iter()
        .zip(&field.m)
        .map(|(&r, &m)| physical_flux(r, m, gamma, floor))
        .collect();
    // interface k sits between cells k-1 and k; ghosts copy the edge cells
    let mut f_rho = vec![0.0; n + 1];
    let mut f_m = vec![0.0; n + 1];
    for k in 0..=n {
        let l = k.saturating_sub(1);
        let r = k.min(n - 1);
        let (fl_r, fl_m, sl) = cell_flux[l];
        let (fr_r, fr_m, sr) = cell_flux[r];
        let a = sl.max(sr);
        f_rho[k] = 0.5 * (fl_r + fr_r) - 0.5 * a * (field.rho[r] - field.rho[l]);
        f_m[k] = 0.5 * (fl_m + fr_m) - 0.5 * a * (field.m[r] - field.m[l]);
    }
    let lam = dt / dx;
    for i in 0..n {
        field.rho[i] -= lam * (f_rho[i + 1] - f_rho[i]);
        field.m[i] -= lam * (f_m[i + 1] - f_m[i]);
    }

    field.m.iter_mut().for_each(|m| *m *= half_damp);

    let mut budget = StepBudget {
        outflow: dt * (f_rho[n] - f_rho[0]),
        floor_injection: 0.0,
    };
    for (r, m) in field.rho.iter_mut().zip(field.m.iter_mut()) {
        if !r.is_finite() || !m.is_finite() {
            return Err(Error::NonFinite("solver::step"));
        }
        if *r < floor {
            budget.floor_injection += (floor - *r) * dx;
            *r = floor;
            *m = 0.0;
        }
    }
    field.time += dt;
    Ok(budget)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    Outflow,
}

#[derive(Debug, Clone)]
pub enum InitialData {
    /// Exact Gaussian solution at `t = 0`.
    Gaussian(GaussianParams),
    /// Self-similar Barenblatt density and momentum at time `t0`.
    Barenblatt { profile: BarenblattProfile, t0: f64 },
    /// Cell values given directly.
    Custom { rho: Vec<f64>, m: Vec<f64> },
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub mesh: Mesh,
    pub gamma: f64,
    pub cfl: f64,
    pub t_end: f64,
    pub snapshot_times: Vec<f64>,
    pub boundary: Boundary,
    pub vacuum_floor: f64,
    pub initial: InitialData,
}

impl SimConfig {
    pub fn new(mesh: Mesh, gamma: f64, t_end: f64, initial: InitialData) -> Self {
        Self {
            mesh,
            gamma,
            cfl: 0.45,
            t_end,
            snapshot_times: vec![t_end],
            boundary: Boundary::Outflow,
            vacuum_floor: DEFAULT_VACUUM_FLOOR,
            initial,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::InvalidValue {
                key: "cfl".into(),
                msg: format!("must lie in (0, 1), got {}", self.cfl),
            });
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(Error::InvalidValue {
                key: "t_end".into(),
                msg: format!("must be finite and >= 0, got {}", self.t_end),
            });
        }
        if !(self.gamma >= 1.0) {
            return Err(Error::InvalidValue {
                key: "gamma".into(),
                msg: format!("must be >= 1, got {}", self.gamma),
            });
        }
        if !(self.vacuum_floor >= 0.0) {
            return Err(Error::InvalidValue {
                key: "vacuum_floor".into(),
                msg: "must be >= 0".into(),
            });
        }
        if self.snapshot_times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidValue {
                key: "snapshot_times".into(),
                msg: "must be sorted".into(),
            });
        }
        if self
            .snapshot_times
            .iter()
            .any(|&s| !(s >= 0.0 && s <= self.t_end))
        {
            return Err(Error::InvalidValue {
                key: "snapshot_times".into(),
                msg: format!("must lie in [0, {}]", self.t_end),
            });
        }
        Ok(())
    }

    /// The state at `t = 0`.
    pub fn initial_field(&self) -> Result<GridField> {
        let field = match &self.initial {
            InitialData::Gaussian(p) => {
                let mut f = exact_state(p, 0.0, &self.mesh)?;
                f.gamma = self.gamma;
                f
            }
            InitialData::Barenblatt { profile, t0 } => {
                GridField::from_fn(self.mesh, self.gamma, 0.0, |x| {
                    (
                        barenblatt_density(profile, *t0, x),
                        barenblatt_momentum(profile, *t0, x),
                    )
                })?
            }
            InitialData::Custom { rho, m } => {
                GridField::new(self.mesh, rho.clone(), m.clone(), self.gamma, 0.0)?
            }
        };
        let mut field = field.with_floor(self.vacuum_floor);
        for (r, m) in field.rho.iter_mut().zip(field.m.iter_mut()) {
            if *r < self.vacuum_floor {
                *r = self.vacuum_floor;
                *m = 0.0;
            }
        }
        Ok(field)
    }
}

/// Snapshots and bookkeeping of a finished run.
#[derive(Debug, Clone)]
pub struct SimRun {
    pub snapshots: Vec<GridField>,
    pub steps: usize,
    pub initial_mass: f64,
    pub outflow: f64,
    pub floor_injection: f64,
}

impl SimRun {
    /// `mass(t) − mass(0) + outflow − floor_injection` for the last snapshot.
    pub fn mass_defect(&self) -> f64 {
        let last = self
            .snapshots
            .last()
            .map_or(self.initial_mass, GridField::mass);
        last - self.initial_mass + self.outflow - self.floor_injection
    }
}

/// Runs `cfg` and returns the requested snapshots.
pub fn simulate(cfg: &SimConfig) -> Result<Vec<GridField>> {
    Ok(simulate_with(cfg, |_, _| {})?.snapshots)
}

/// Runs `cfg`, calling `observer(state, budget)` after every accepted step.
pub fn simulate_with<F>(cfg: &SimConfig, mut observer: F) -> Result<SimRun>
where
    F: FnMut(&GridField, &StepBudget),
{
    cfg.validate()?;
    let mut field = cfg.initial_field()?;
    let mut targets = cfg.snapshot_times.clone();
    if targets.last().map_or(true, |&t| t < cfg.t_end) {
        targets.push(cfg.t_end);
    }
    targets.dedup();

    let mut run = SimRun {
        snapshots: Vec::with_capacity(targets.len()),
        steps: 0,
        initial_mass: field.mass(),
        outflow: 0.0,
        floor_injection: 0.0,
    };
    for &target in &targets {
        while field.time < target {
            let mut dt = cfg.cfl * cfl_dt(&field, 1.0)?;
            let hit = field.time + dt >= target;
            if hit {
                dt = target - field.time;
            }
            let budget = step_in_place(&mut field, dt)?;
            if hit {
                field.time = target;
            }
            run.steps += 1;
            run.outflow += budget.outflow;
            run.floor_injection += budget.floor_injection;
            observer(&field, &budget);
        }
        run.snapshots.push(field.clone());
    }
    Ok(run)
}

/// Symmetric domain half-width for a Gaussian run to `t_end`:
/// `max(12, 8 τ(t_end)/√α0)` plus the largest center offset.
pub fn gaussian_domain(p: &GaussianParams, t_end: f64) -> Result<f64> {
    let tau = p.trajectory().tau(t_end)?;
    let shift = p.xbar_at(0.0).abs().max(p.xbar_infinity().abs());
    Ok(12f64.max(8.0 * tau / p.alpha0.sqrt()) + shift)
}

/// Writes `# t=.. gamma=.. n=..`, a column header and one `x_center,rho,m`
/// row per cell.
pub fn write_snapshot(field: &GridField, path: &Path) -> Result<()> {
    fs::write(path, snapshot_csv(field)).map_err(|e| Error::io(path, e))
}

pub fn snapshot_csv(field: &GridField) -> String {
    let mut s = String::with_capacity(64 * (field.mesh.n_cells + 2));
    let _ = writeln!(
        s,
        "# t={:.16e} gamma={} n={}",
        field.time, field.gamma, field.mesh.n_cells
    );
    s.push_str("x_center,rho,m\n");
    for ((x, r), m) in field.mesh.centers().zip(&field.rho).zip(&field.m) {
        let _ = writeln!(s, "{x:.16e},{r:.16e},{m:.16e}");
    }
    s
}

pub fn read_snapshot(path: &Path) -> Result<GridField> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_snapshot(&text)
}

pub fn parse_snapshot(text: &str) -> Result<GridField> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty snapshot".into(),
    })?;
    let header = header.strip_prefix('#').ok_or(Error::Parse {
        line: 1,
        msg: "expected `# t=<time> gamma=<g> n=<cells>`".into(),
    })?;
    let (mut t, mut gamma, mut n) = (None, None, None);
    for tok in header.split_whitespace() {
        let (k, v) = tok.split_once('=').ok_or(Error::Parse {
            line: 1,
            msg: format!("malformed header token `{tok}`"),
        })?;
        let bad = || Error::Parse {
            line: 1,
            msg: format!("bad value for `{k}`"),
        };
        match k {
            "t" => t = Some(v.parse::<f64>().map_err(|_| bad())?),
            "gamma" => gamma = Some(v.parse::<f64>().map_err(|_| bad())?),
            "n" => n = Some(v.parse::<usize>().map_err(|_| bad())?),
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("unknown header field `{k}`"),
                })
            }
        }
    }
    let missing = |what: &str| Error::Parse {
        line: 1,
        msg: format!("header lacks `{what}`"),
    };
    let (t, gamma, n) = (
        t.ok_or_else(|| missing("t"))?,
        gamma.ok_or_else(|| missing("gamma"))?,
        n.ok_or_else(|| missing("n"))?,
    );

    let mut xs = Vec::with_capacity(n);
    let mut rho = Vec::with_capacity(n);
    let mut m = Vec::with_capacity(n);
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("x_center") {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        let parse = |s: &str| {
            s.trim().parse::<f64>().map_err(|_| Error::Parse {
                line: idx + 1,
                msg: format!("bad number `{s}`"),
            })
        };
        if cols.len() != 3 {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("expected 3 columns, got {}", cols.len()),
            });
        }
        xs.push(parse(cols[0])?);
        rho.push(parse(cols[1])?);
        m.push(parse(cols[2])?);
    }
    if xs.len() != n || n < 2 {
        return Err(Error::GridMismatch(format!(
            "header says {n} cells, found {}",
            xs.len()
        )));
    }
    let dx = (xs[n - 1] - xs[0]) / (n - 1) as f64;
    let mesh = Mesh::new(xs[0] - 0.5 * dx, xs[n - 1] + 0.5 * dx, n)?;
    GridField::new(mesh, rho, m, gamma, t)
}
