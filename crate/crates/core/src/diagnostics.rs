//! Functionals measured on solver snapshots and exact solutions.
//!
//! Snapshots are moved to the self-similar frame `y = x/τ`,
//!
//! ```text
//! R(y) = τ ρ(τ y),   M(y) = τ² m(τ y) − τ τ̇ y R(y),
//! ```
//!
//! and compared with `Γ = e^{−y²}`. Integrals are cell sums on the native
//! grid, so `Σ R Δy = Σ ρ Δx` holds to rounding.

use std::f64::consts::PI;

use crate::gaussdyn::{exact_state, normalization_trajectory, GaussianParams, TauTrajectory};
use crate::quadrature::cell_nodes;
use crate::solver::GridField;
use crate::{Error, Mesh, Result};

/// Cells with `R ≤ LOG_MASK · max R` are left out of log and `M²/R` terms.
pub const LOG_MASK: f64 = 1e-12;

/// Relative tolerance on `mass(R) = √π` before a Csiszár–Kullback check.
pub const CK_MASS_TOLERANCE: f64 = 1e-6;

/// `∫ Γ dy`.
pub fn gamma_mass() -> f64 {
    PI.sqrt()
}

/// `∫ y² Γ dy`.
pub fn gamma_second_moment() -> f64 {
    0.5 * PI.sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RescaledField {
    pub mesh: Mesh,
    pub r: Vec<f64>,
    pub m: Vec<f64>,
    pub tau: f64,
    pub tau_dot: f64,
    pub time: f64,
}

impl RescaledField {
    /// Builds a field directly in the `y` frame, e.g. `R = Γ` for checks.
    pub fn from_fn(
        mesh: Mesh,
        tau: f64,
        tau_dot: f64,
        time: f64,
        f: impl Fn(f64) -> (f64, f64),
    ) -> Self {
        let (r, m) = mesh.centers().map(&f).unzip();
        Self {
            mesh,
            r,
            m,
            tau,
            tau_dot,
            time,
        }
    }

    pub fn dy(&self) -> f64 {
        self.mesh.dx()
    }

    pub fn mass(&self) -> f64 {
        self.r.iter().sum::<f64>() * self.dy()
    }

    /// Copy with `R` scaled to mass `√π`.
    pub fn normalized(&self) -> Result<Self> {
        let mass = self.mass();
        if !(mass > 0.0) {
            return Err(Error::MassMismatch {
                mass,
                expected: gamma_mass(),
            });
        }
        let s = gamma_mass() / mass;
        let mut out = self.clone();
        out.r.iter_mut().for_each(|r| *r *= s);
        Ok(out)
    }

    fn mask(&self) -> impl Fn(f64) -> bool {
        let cut = LOG_MASK * self.r.iter().copied().fold(0.0, f64::max);
        move |r| r > cut && r > 0.0
    }
}

/// `R = τρ(τy)`, `M = τ²m(τy) − ττ̇yR` on the scaled copy of the grid.
pub fn rescale(field: &GridField, tau: f64, tau_dot: f64) -> Result<RescaledField> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::domain(
            "rescale",
            format!("tau must be positive, got {tau}"),
        ));
    }
    let mesh = Mesh::new(
        field.mesh.x_min / tau,
        field.mesh.x_max / tau,
        field.mesh.n_cells,
    )?;
    let r: Vec<f64> = field.rho.iter().map(|rho| tau * rho).collect();
    let m = mesh
        .centers()
        .zip(field.m.iter().zip(&r))
        .map(|(y, (m, r))| tau * tau * m - tau * tau_dot * y * r)
        .collect();
    Ok(RescaledField {
        mesh,
        r,
        m,
        tau,
        tau_dot,
        time: field.time,
    })
}

/// `ln` of the cell average of `Γ` over every cell, without underflow.
pub fn log_gamma_cell_averages(mesh: &Mesh) -> Vec<f64> {
    let dy = mesh.dx();
    mesh.centers()
        .map(|y| {
            let exps: Vec<(f64, f64)> = cell_nodes(dy)
                .map(|(o, w)| (-(y + o) * (y + o), w))
                .collect();
            let top = exps.iter().map(|e| e.0).fold(f64::NEG_INFINITY, f64::max);
            top + exps
                .iter()
                .map(|(e, w)| w * (e - top).exp())
                .sum::<f64>()
                .ln()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    /// `∫ M dy`
    pub i1: f64,
    /// `∫ y R dy`
    pub i2: f64,
    /// `∫ y² (R − Γ) dy`
    pub j1: f64,
    /// `∫ y M dy`
    pub j2: f64,
}

pub fn moments(rf: &RescaledField) -> Moments {
    let dy = rf.dy();
    let (mut i1, mut i2, mut y2r, mut j2) = (0.0, 0.0, 0.0, 0.0);
    for ((y, r), m) in rf.mesh.centers().zip(&rf.r).zip(&rf.m) {
        i1 += m;
        i2 += y * r;
        y2r += y * y * r;
        j2 += y * m;
    }
    Moments {
        i1: i1 * dy,
        i2: i2 * dy,
        j1: y2r * dy - gamma_second_moment(),
        j2: j2 * dy,
    }
}

/// Closed-form `I₁`, `I₂` from their initial values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentOracle {
    pub i1: f64,
    pub i2: f64,
    /// `∫ m dx`, which decays like `e^{−t}`.
    pub momentum: f64,
    /// `∫ x ρ dx`.
    pub first_moment: f64,
}

/// With `P₀ = I₁(0) + β₀ I₂(0) = ∫m₀` and `X = I₂(0) + P₀(1 − e^{−t}) = ∫xρ`:
/// `I₂(t) = X/τ` and `I₁(t) = τ P₀ e^{−t} − τ̇ X`.
pub fn moment_oracle(t: f64, i1_0: f64, i2_0: f64, traj: &TauTrajectory) -> Result<MomentOracle> {
    let s = traj.state(t)?;
    let p0 = i1_0 + traj.beta0() * i2_0;
    let momentum = p0 * (-t).exp();
    let first_moment = i2_0 - p0 * (-t).exp_m1();
    Ok(MomentOracle {
        i1: s.tau * momentum - s.tau_dot * first_moment,
        i2: first_moment / s.tau,
        momentum,
        first_moment,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Energies {
    /// `ℰ = (1/2τ²)∫M²/R + ∫R log(R/Γ)`
    pub e: f64,
    /// `(1/τ²)∫M²/R`
    pub e_kin: f64,
    /// `(1/2τ²)∫M²/R + ∫_{R>1} R log R + ∫y²R`
    pub e_plus: f64,
    /// `∫ R log(R/Γ)` with `Γ` averaged over each cell.
    pub rel_entropy: f64,
    /// Mass left out by the log mask.
    pub excluded_mass: f64,
}

impl Energies {
    /// `dℰ/dt = −(1 + τ̇/τ) ℰ_kin` along exact solutions.
    pub fn dissipation_rate(&self, rf: &RescaledField) -> f64 {
        (1.0 + rf.tau_dot / rf.tau) * self.e_kin
    }
}

pub fn energies(rf: &RescaledField) -> Energies {
    let dy = rf.dy();
    let keep = rf.mask();
    let log_gamma = log_gamma_cell_averages(&rf.mesh);
    let (mut kin, mut rel, mut pos_log, mut second, mut excluded) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (i, y) in rf.mesh.centers().enumerate() {
        let r = rf.r[i];
        second += y * y * r;
        if !keep(r) {
            excluded += r;
            continue;
        }
        let ln_r = r.ln();
        kin += rf.m[i] * rf.m[i] / r;
        rel += r * (ln_r - log_gamma[i]);
        if r > 1.0 {
            pos_log += r * ln_r;
        }
    }
    let inv_tau2 = 1.0 / (rf.tau * rf.tau);
    let e_kin = inv_tau2 * kin * dy;
    let rel_entropy = rel * dy;
    Energies {
        e: 0.5 * e_kin + rel_entropy,
        e_kin,
        e_plus: 0.5 * e_kin + pos_log * dy + second * dy,
        rel_entropy,
        excluded_mass: excluded * dy,
    }
}

/// `Σ |R − Γ| Δy` with `Γ` averaged over each cell.
pub fn l1_to_gamma(rf: &RescaledField) -> f64 {
    log_gamma_cell_averages(&rf.mesh)
        .iter()
        .zip(&rf.r)
        .map(|(lg, r)| (r - lg.exp()).abs())
        .sum::<f64>()
        * rf.dy()
}

/// `2·mass(R)·∫R log(R/Γ) − ‖R − Γ‖²_{L¹}`; requires `mass(R) = √π`.
pub fn csiszar_kullback_gap(rf: &RescaledField) -> Result<f64> {
    let mass = rf.mass();
    if (mass - gamma_mass()).abs() > CK_MASS_TOLERANCE * gamma_mass() {
        return Err(Error::MassMismatch {
            mass,
            expected: gamma_mass(),
        });
    }
    let l1 = l1_to_gamma(rf);
    Ok(2.0 * mass * energies(rf).rel_entropy - l1 * l1)
}

/// Pointwise `LR = ∂_y²R + 2∂_y(yR)` by centered differences; zero in the
/// two boundary cells.
pub fn fokker_planck_operator(rf: &RescaledField) -> Vec<f64> {
    let n = rf.mesh.n_cells;
    let dy = rf.dy();
    let y = |i: usize| rf.mesh.center(i);
    let mut out = vec![0.0; n];
    for i in 1..n.saturating_sub(1) {
        let lap = (rf.r[i + 1] - 2.0 * rf.r[i] + rf.r[i - 1]) / (dy * dy);
        let drift = (y(i + 1) * rf.r[i + 1] - y(i - 1) * rf.r[i - 1]) / dy;
        out[i] = lap + drift;
    }
    out
}

/// Cubic Lagrange interpolation of cell values, zero outside the grid.
fn interpolate(rf: &RescaledField, y: f64) -> f64 {
    let n = rf.mesh.n_cells as isize;
    let dy = rf.dy();
    let p = (y - rf.mesh.center(0)) / dy;
    if p < -1.0 || p > n as f64 {
        return 0.0;
    }
    let i = p.floor() as isize;
    let s = p - i as f64;
    let get = |j: isize| {
        if j < 0 || j >= n {
            0.0
        } else {
            rf.r[j as usize]
        }
    };
    let (fm, f0, f1, f2) = (get(i - 1), get(i), get(i + 1), get(i + 2));
    fm * (-s * (s - 1.0) * (s - 2.0) / 6.0)
        + f0 * ((s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0)
        + f1 * (-(s + 1.0) * s * (s - 2.0) / 2.0)
        + f2 * ((s + 1.0) * s * (s - 1.0) / 6.0)
}

/// Derivative at `t` of the quadratic through `(ts[j], ·)`.
fn lagrange_derivative_weights(ts: [f64; 3], t: f64) -> [f64; 3] {
    let mut w = [0.0; 3];
    for j in 0..3 {
        for m in 0..3 {
            if m == j {
                continue;
            }
            let mut term = 1.0 / (ts[j] - ts[m]);
            for l in 0..3 {
                if l != j && l != m {
                    term *= (t - ts[l]) / (ts[j] - ts[l]);
                }
            }
            w[j] += term;
        }
    }
    w
}

/// Weak-norm residual `‖τ²∂_tR − LR‖` at snapshot `k` using snapshots
/// `idx` for the time derivative. The norm is the `L¹` norm of the
/// antiderivative in `y`, i.e. `Σ |τ² ∫^y ∂_tR − (∂_yR + 2yR)| Δy`.
fn fp_residual_at(seq: &[RescaledField], k: usize, idx: [usize; 3]) -> f64 {
    let rf = &seq[k];
    let ts = idx.map(|j| seq[j].time);
    let w = lagrange_derivative_weights(ts, rf.time);
    let n = rf.mesh.n_cells;
    let dy = rf.dy();
    let tau2 = rf.tau * rf.tau;
    let mut cumulative = 0.0;
    let mut norm = 0.0;
    for i in 0..n {
        let y = rf.mesh.center(i);
        let dt_r: f64 = idx
            .iter()
            .zip(&w)
            .map(|(&j, wj)| {
                wj * if j == k {
                    rf.r[i]
                } else {
                    interpolate(&seq[j], y)
                }
            })
            .sum();
        let half = 0.5 * tau2 * dt_r * dy;
        cumulative += half;
        if i > 0 && i + 1 < n {
            let flux = (rf.r[i + 1] - rf.r[i - 1]) / (2.0 * dy) + 2.0 * y * rf.r[i];
            norm += (cumulative - flux).abs();
        }
        cumulative += half;
    }
    norm * dy
}

/// `‖τ²∂_tR − LR‖` for every snapshot: centered in time for interior
/// snapshots, one-sided at the two ends.
pub fn fokker_planck_residual(seq: &[RescaledField]) -> Result<Vec<f64>> {
    let n = seq.len();
    if n < 3 {
        return Err(Error::InsufficientSnapshots { needed: 3, got: n });
    }
    if seq.windows(2).any(|w| !(w[1].time > w[0].time)) {
        return Err(Error::domain(
            "fokker_planck_residual",
            "snapshot times must be strictly increasing",
        ));
    }
    Ok((0..n)
        .map(|k| {
            let start = k.saturating_sub(1).min(n - 3);
            fp_residual_at(seq, k, [start, start + 1, start + 2])
        })
        .collect())
}

/// Interior-snapshot residuals only.
pub fn fokker_planck_residual_interior(seq: &[RescaledField]) -> Result<Vec<f64>> {
    let all = fokker_planck_residual(seq)?;
    Ok(all[1..all.len() - 1].to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppendixDiagnostics {
    /// `∫ ρ log(ρ/ρ̄) + m²/ρ dx`
    pub eta_star_int: f64,
    /// `∫ m²/ρ − 2(m̄/ρ̄)m + (m̄/ρ̄)²ρ dx`
    pub q_int: f64,
    /// Smallest pointwise `Q`.
    pub q_min: f64,
    /// `(1+t)^k ∫η_*`
    pub weighted_eta: f64,
    pub tau_j1: f64,
    pub tau_j2: f64,
}

pub const DEFAULT_WEIGHT_EXPONENT: f64 = 0.75;

/// Appendix quantities of `field` against the reference state `exact` on
/// the same grid. Cells at the vacuum floor in either state are skipped.
pub fn appendix_diagnostics(
    field: &GridField,
    exact: &GridField,
    rf: &RescaledField,
    t: f64,
    k: f64,
) -> Result<AppendixDiagnostics> {
    if !field.mesh.matches(&exact.mesh) {
        return Err(Error::GridMismatch(format!(
            "field {:?} vs reference {:?}",
            field.mesh, exact.mesh
        )));
    }
    let floor = field.vacuum_floor;
    let dx = field.dx();
    let (mut eta, mut q, mut q_min) = (0.0, 0.0, f64::INFINITY);
    for i in 0..field.mesh.n_cells {
        let (r, m) = (field.rho[i], field.m[i]);
        let (rb, mb) = (exact.rho[i], exact.m[i]);
        if r <= floor || rb <= floor {
            continue;
        }
        let u_bar = mb / rb;
        let qi = m * m / r - 2.0 * u_bar * m + u_bar * u_bar * r;
        eta += r * (r / rb).ln() + m * m / r;
        q += qi;
        q_min = q_min.min(qi);
    }
    let mo = moments(rf);
    let eta_star_int = eta * dx;
    Ok(AppendixDiagnostics {
        eta_star_int,
        q_int: q * dx,
        q_min: if q_min.is_finite() { q_min } else { 0.0 },
        weighted_eta: (1.0 + t).powf(k) * eta_star_int,
        tau_j1: rf.tau * mo.j1.abs(),
        tau_j2: rf.tau * mo.j2.abs(),
    })
}

/// Channel names in output order.
pub const CHANNELS: [&str; 15] = [
    "I1",
    "I2",
    "J1",
    "J2",
    "E",
    "E_kin",
    "E_plus",
    "rel_entropy",
    "L1_to_Gamma",
    "ck_gap",
    "eta_star",
    "weighted_eta",
    "tauJ1",
    "tauJ2",
    "fp_residual",
];

/// Time series of named channels sharing one time axis.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticSeries {
    pub source: String,
    pub times: Vec<f64>,
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl DiagnosticSeries {
    pub fn new<S: AsRef<str>>(source: impl Into<String>, names: &[S]) -> Self {
        Self {
            source: source.into(),
            times: Vec::new(),
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
            columns: vec![Vec::new(); names.len()],
        }
    }

    pub fn push(&mut self, t: f64, row: &[f64]) -> Result<()> {
        if row.len() != self.names.len() {
            return Err(Error::domain(
                "DiagnosticSeries::push",
                format!("expected {} values, got {}", self.names.len(), row.len()),
            ));
        }
        if self.times.last().is_some_and(|&last| t < last) {
            return Err(Error::domain(
                "DiagnosticSeries::push",
                "times must be sorted",
            ));
        }
        self.times.push(t);
        for (c, v) in self.columns.iter_mut().zip(row) {
            c.push(*v);
        }
        Ok(())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn channel(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.columns[i].as_slice())
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[i]).collect()
    }
}

/// Every channel of [`CHANNELS`] for each snapshot, against the Gaussian
/// reference `reference`. Snapshots are rescaled with
/// [`normalization_trajectory`]. `fp_residual` is NaN when fewer than three
/// snapshots are given.
pub fn diagnose_snapshots(
    snapshots: &[GridField],
    reference: &GaussianParams,
    k: f64,
    source: &str,
) -> Result<DiagnosticSeries> {
    let t_max = snapshots.iter().map(|s| s.time).fold(1.0, f64::max);
    let traj = normalization_trajectory(t_max)?;
    let mut rescaled = Vec::with_capacity(snapshots.len());
    for s in snapshots {
        let st = traj.state(s.time)?;
        rescaled.push(rescale(s, st.tau, st.tau_dot)?);
    }
    let fp = if rescaled.len() >= 3 {
        fokker_planck_residual(&rescaled)?
    } else {
        vec![f64::NAN; rescaled.len()]
    };
    let mut series = DiagnosticSeries::new(source, &CHANNELS);
    for ((snap, rf), fp_res) in snapshots.iter().zip(&rescaled).zip(fp) {
        let mo = moments(rf);
        let en = energies(rf);
        let ck = csiszar_kullback_gap(&rf.normalized()?)?;
        let exact = exact_state(reference, snap.time, &snap.mesh)?;
        let app = appendix_diagnostics(snap, &exact, rf, snap.time, k)?;
        series.push(
            snap.time,
            &[
                mo.i1,
                mo.i2,
                mo.j1,
                mo.j2,
                en.e,
                en.e_kin,
                en.e_plus,
                en.rel_entropy,
                l1_to_gamma(rf),
                ck,
                app.eta_star_int,
                app.weighted_eta,
                app.tau_j1,
                app.tau_j2,
                fp_res,
            ],
        )?;
    }
    Ok(series)
}
