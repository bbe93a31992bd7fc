//! The canned experiments.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use super::config::{Experiment, ExperimentSpec};
use super::output::{csv_text, emit, emit_plotdata, gnuplot_script, RunReport};
use crate::diagnostics::{
    diagnose_snapshots, moment_oracle, moments, rescale, CHANNELS, DEFAULT_WEIGHT_EXPONENT,
};
use crate::gaussdyn::{
    integrate_tau, normalization_trajectory, GaussianInit, GaussianParams, TauConfig,
};
use crate::profiles::{
    barenblatt_coefficients, barenblatt_shape, gaussian_limit, limit_gap, GapGrid,
};
use crate::solver::{
    gaussian_domain, read_snapshot, simulate_with, snapshot_csv, GridField, InitialData, SimConfig,
};
use crate::specfun::{
    f1, f1_derivative, f2, f2_derivative, f2_scaled, kummer_ode_residual, log_gamma,
    wronskian_scaled,
};
use crate::{Error, Mesh, Result};

const GAUSSIAN_TOL: f64 = 1e-11;

/// Runs `spec`, writing its files and `report.txt` into `spec.out_dir`.
pub fn run(spec: &ExperimentSpec) -> Result<RunReport> {
    let start = Instant::now();
    let dir = spec.out_dir.as_path();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut report = RunReport::new(spec.experiment.name());
    match spec.experiment {
        Experiment::Figure1 => figure1(spec, dir, &mut report)?,
        Experiment::GaussianEvolve => gaussian_evolve(spec, dir, &mut report)?,
        Experiment::Simulate => simulate(spec, dir, &mut report)?,
        Experiment::Diagnose => diagnose(spec, dir, &mut report)?,
        Experiment::MomentsStudy => moments_study(spec, dir, &mut report)?,
        Experiment::TauStudy => tau_study(spec, dir, &mut report)?,
        Experiment::SpecfunCheck => specfun_check(spec, dir, &mut report)?,
    }
    report.wall_time = start.elapsed();
    let path = dir.join("report.txt");
    report.files.push(path.clone());
    report.write(&path)?;
    Ok(report)
}

fn positive(key: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidValue {
            key: key.into(),
            msg: format!("must be positive, got {v}"),
        })
    }
}

fn at_least(key: &str, v: u64, min: u64) -> Result<usize> {
    if v >= min {
        Ok(v as usize)
    } else {
        Err(Error::InvalidValue {
            key: key.into(),
            msg: format!("must be at least {min}, got {v}"),
        })
    }
}

fn gaussian_init(spec: &ExperimentSpec, default: GaussianInit) -> GaussianInit {
    GaussianInit {
        alpha0: spec.real("alpha0", default.alpha0),
        beta0: spec.real("beta0", default.beta0),
        b0: spec.real("b0", default.b0),
        c0: spec.real("c0", default.c0),
        xbar0: spec.real("xbar0", default.xbar0),
    }
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    let h = if n > 1 { (b - a) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |i| if i + 1 == n { b } else { a + h * i as f64 })
}

fn logspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    let last = n.saturating_sub(1);
    linspace(a.ln(), b.ln(), n)
        .enumerate()
        .map(move |(i, v)| match i {
            0 => a,
            i if i == last => b,
            _ => v.exp(),
        })
}

fn column(rows: &[Vec<f64>], j: usize) -> impl Iterator<Item = f64> + '_ {
    rows.iter().map(move |r| r[j])
}

fn relative_spread(vals: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    (hi - lo) / hi.abs().max(lo.abs())
}

fn write_table(
    report: &mut RunReport,
    dir: &Path,
    stem: &str,
    header: &[&str],
    rows: &[Vec<f64>],
    logscale_x: bool,
) -> Result<()> {
    let csv = format!("{stem}.csv");
    emit(report, dir, &csv, &csv_text(header, rows))?;
    emit(
        report,
        dir,
        &format!("{stem}.gp"),
        &gnuplot_script(stem, &csv, header, logscale_x),
    )
}

fn figure1(spec: &ExperimentSpec, dir: &Path, report: &mut RunReport) -> Result<()> {
    let gammas = spec
        .reals("gammas")
        .map_or_else(|| vec![2.0, 1.5, 1.1], <[f64]>::to_vec);
    let lambda = positive("lambda", spec.real("lambda", 1.0))?;
    let grid = GapGrid {
        half_width: positive("half_width", spec.real("half_width", 8.0))?,
        points: at_least("points", spec.int("points", 20_001), 2)?,
    };
    let profile_points = at_least("profile_points", spec.int("profile_points", 401), 2)?;
    let profiles = gammas
        .iter()
        .map(|&g| barenblatt_coefficients(g, lambda))
        .collect::<Result<Vec<_>>>()?;

    let mut header = vec!["xi".to_string()];
    header.extend(gammas.iter().map(|g| format!("B_gamma_{g}")));
    header.push("gaussian_limit".into());
    let rows: Vec<Vec<f64>> = linspace(-grid.half_width, grid.half_width, profile_points)
        .map(|xi| {
            let mut row = vec![xi];
            row.extend(profiles.iter().map(|p| barenblatt_shape(p, xi)));
            row.push(gaussian_limit(lambda, xi));
            row
        })
        .collect();
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    write_table(report, dir, "figure1_profiles", &header_refs, &rows, false)?;

    let gaps = gammas
        .iter()
        .map(|&g| Ok(vec![g, limit_gap(g, lambda, &grid)?]))
        .collect::<Result<Vec<_>>>()?;
    emit(
        report,
        dir,
        "figure1_gaps.csv",
        &csv_text(&["gamma", "sup_gap"], &gaps),
    )?;

    let mut by_gamma = gaps.clone();
    by_gamma.sort_by(|a, b| b[0].total_cmp(&a[0]));
    let decreasing = by_gamma.windows(2).all(|w| w[1][1] < w[0][1]);
    let listing: Vec<String> = by_gamma
        .iter()
        .map(|r| format!("{}:{:.4e}", r[0], r[1]))
        .collect();
    report.check(
        "gap_decreasing_in_gamma",
        decreasing,
        format!("sup gaps {}", listing.join(" ")),
    );
    Ok(())
}

fn gaussian_evolve(spec: &ExperimentSpec, dir: &Path, report: &mut RunReport) -> Result<()> {
    let init = gaussian_init(spec, GaussianInit::default());
    let t_end = positive("t_end", spec.real("t_end", 10.0))?;
    let samples = at_least("samples", spec.int("samples", 101), 2)?;
    let tol = positive("tolerance", spec.real("tolerance", 1e-10))?;
    let p = GaussianParams::new(init, t_end, tol)?;
    let rows = linspace(0.0, t_end, samples)
        .map(|t| {
            let g = crate::gaussdyn::params_at(&p, t)?;
            Ok(vec![t, g.tau, g.tau_dot, g.alpha, g.beta, g.b, g.c, g.xbar])
        })
        .collect::<Result<Vec<_>>>()?;
    write_table(
        report,
        dir,
        "gaussian_evolve",
        &["t", "tau", "tau_dot", "alpha", "beta", "b", "c", "xbar"],
        &rows,
        false,
    )?;

    let traj = p.trajectory();
    report.check(
        "tau_positive",
        traj.min_tau() > 0.0,
        format!("min tau {:.6e}", traj.min_tau()),
    );
    let identity = rows
        .iter()
        .map(|r| (r[3] * r[1] * r[1] - init.alpha0).abs())
        .fold(0.0, f64::max);
    report.check(
        "alpha_tau2_identity",
        identity <= 1e-12 * init.alpha0,
        format!("max |alpha tau^2 - alpha0| = {identity:.3e}"),
    );
    let mut residual: f64 = 0.0;
    for w in traj.times().windows(2) {
        let s = traj.state(0.5 * (w[0] + w[1]))?;
        residual = residual.max((s.tau_ddot - 2.0 * init.alpha0 / s.tau + s.tau_dot).abs());
    }
    report.check(
        "tau_ode_residual",
        residual <= 10.0 * tol,
        format!("max midpoint residual {residual:.3e} (tolerance {tol:.1e})"),
    );
    Ok(())
}

fn sim_config(spec: &ExperimentSpec) -> Result<SimConfig> {
    let t_end = spec.real("t_end", 1.0);
    let cells = at_least("cells", spec.int("cells", 800), 3)?;
    let initial = spec.text("initial").unwrap_or("gaussian");
    let (gamma, data, auto_half) = match initial {
        "gaussian" => {
            let p = GaussianParams::new(
                gaussian_init(spec, GaussianInit::default()),
                t_end.max(1e-9),
                GAUSSIAN_TOL,
            )?;
            let half = gaussian_domain(&p, t_end.max(1e-9))?;
            (spec.real("gamma", 1.0), InitialData::Gaussian(p), half)
        }
        "barenblatt" => {
            let gamma = spec.real("gamma", 2.0);
            let profile = barenblatt_coefficients(gamma, spec.real("lambda", 1.0))?;
            let t0 = spec.real("t0", 0.0);
            if !(t0 >= 0.0) {
                return Err(Error::InvalidValue {
                    key: "t0".into(),
                    msg: format!("must be >= 0, got {t0}"),
                });
            }
            // support at the end of the run, with room to spare
            let reach =
                profile.support_edge() * (1.0 + t0 + t_end.max(0.0)).powf(1.0 / (gamma + 1.0));
            (
                gamma,
                InitialData::Barenblatt { profile, t0 },
                1.5 * reach + 1.0,
            )
        }
        other => {
            return Err(Error::InvalidValue {
                key: "initial".into(),
                msg: format!("expected `gaussian` or `barenblatt`, got `{other}`"),
            })
        }
    };
    let half = positive("half_width", spec.real("half_width", auto_half))?;
    let mut cfg = SimConfig::new(Mesh::symmetric(half, cells)?, gamma, t_end, data);
    cfg.cfl = spec.real("cfl", cfg.cfl);
    cfg.vacuum_floor = spec.real("vacuum_floor", cfg.vacuum_floor);
    if let Some(times) = spec.reals("snapshots") {
        cfg.snapshot_times = times.to_vec();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn simulate(spec: &ExperimentSpec, dir: &Path, report: &mut RunReport) -> Result<()> {
    let cfg = sim_config(spec)?;
    let run = simulate_with(&cfg, |_, _| {})?;
    let m0 = cfg.initial_field()?.momentum();
    let mut rows = Vec::with_capacity(run.snapshots.len());
    let mut momentum_err: f64 = 0.0;
    for (k, s) in run.snapshots.iter().enumerate() {
        emit(
            report,
            dir,
            &format!("snapshot_{k:03}.csv"),
            &snapshot_csv(s),
        )?;
        let min_rho = s.rho.iter().copied().fold(f64::INFINITY, f64::min);
        rows.push(vec![s.time, s.mass(), s.momentum(), s.energy(), min_rho]);
        momentum_err = momentum_err.max((s.momentum() - m0 * (-s.time).exp()).abs());
    }
    write_table(
        report,
        dir,
        "simulate_summary",
        &["t", "mass", "momentum", "energy", "min_rho"],
        &rows,
        false,
    )?;

    let defect = run.mass_defect();
    report.check(
        "mass_budget",
        defect.abs() <= 1e-10 * run.initial_mass,
        format!("mass - mass0 + outflow - floor injection = {defect:.3e}"),
    );
    let min_rho = column(&rows, 4).fold(f64::INFINITY, f64::min);
    report.check(
        "positivity",
        min_rho >= 0.0,
        format!("min rho {min_rho:.3e}"),
    );
    let scale = m0.abs().max(run.initial_mass);
    report.check(
        "momentum_decay",
        momentum_err <= 1e-8 * scale,
        format!("max |int m - e^-t int m0| = {momentum_err:.3e}"),
    );
    Ok(())
}

fn snapshot_paths(spec: &ExperimentSpec) -> Result<Vec<PathBuf>> {
    let mut paths: Vec<PathBuf> = spec
        .paths("snapshots")
        .map(<[PathBuf]>::to_vec)
        .unwrap_or_default();
    for d in spec.paths("snapshot_dir").unwrap_or_default() {
        let mut found: Vec<PathBuf> = fs::read_dir(d)
            .map_err(|e| Error::io(d, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
                name.starts_with("snapshot_") && name.ends_with(".csv")
            })
            .collect();
        found.sort();
        paths.extend(found);
    }
    if paths.is_empty() {
        return Err(Error::MissingKey("snapshots".into()));
    }
    Ok(paths)
}

fn diagnose(spec: &ExperimentSpec, dir: &Path, report: &mut RunReport) -> Result<()> {
    let paths = snapshot_paths(spec)?;
    let mut snaps = paths
        .iter()
        .map(|p| read_snapshot(p))
        .collect::<Result<Vec<GridField>>>()?;
    snaps.sort_by(|a, b| a.time.total_cmp(&b.time));
    let t_max = snaps.iter().map(|s| s.time).fold(1.0, f64::max);
    let reference = GaussianParams::new(
        gaussian_init(spec, GaussianInit::default()),
        t_max,
        GAUSSIAN_TOL,
    )?;
    let k = spec.real("k", DEFAULT_WEIGHT_EXPONENT);
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::InvalidValue {
            key: "k".into(),
            msg: format!("must lie in (0, 1), got {k}"),
        });
    }
    let source = paths
        .first()
        .map(|p| p.display().to_string())
        .unwrap_or_default();
    let series = diagnose_snapshots(&snaps, &reference, k, &source)?;

    let mut header = vec!["t"];
    header.extend(CHANNELS);
    let rows: Vec<Vec<f64>> = (0..series.len())
        .map(|i| {
            let mut row = vec![series.times[i]];
            row.extend(series.row(i));
            row
        })
        .collect();
    write_table(report, dir, "diagnostics", &header, &rows, false)?;
    let dat = dir.join("diagnostics.dat");
    emit_plotdata(&series, &dat)?;
    report.files.push(dat);

    let min_of = |name: &str| {
        series
            .channel(name)
            .unwrap_or(&[])
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    };
    let rel = min_of("rel_entropy");
    report.check(
        "rel_entropy_nonnegative",
        rel >= 0.0,
        format!("min {rel:.3e}"),
    );
    let ck = min_of("ck_gap");
    report.check("csiszar_kullback", ck >= -1e-8, format!("min gap {ck:.3e}"));
    let finite = rows
        .iter()
        .all(|r| r[..r.len() - 1].iter().all(|v| v.is_finite()));
    report.check(
        "finite_channels",
        finite,
        format!("{} snapshots", rows.len()),
    );
    Ok(())
}

fn moments_study(spec: &ExperimentSpec, dir: &Path, report: &mut RunReport) -> Result<()> {
    let drifting = GaussianInit {
        c0: 2.0,
        xbar0: 3.0,
        ..GaussianInit::default()
    };
    let init = gaussian_init(spec, drifting);
    let t_end = positive("t_end", spec.real("t_end", 5.0))?;
    let samples = at_least("samples", spec.int("samples", 21), 2)?;
    let cells = at_least("cells", spec.int("cells", 4000), 3)?;
    let p = GaussianParams::new(init, t_end, GAUSSIAN_TOL)?;
    let norm = normalization_trajectory(t_end)?;
    let mesh = Mesh::symmetric(gaussian_domain(&p, t_end)?, cells)?;
    let mut cfg = SimConfig::new(mesh, 1.0, t_end, InitialData::Gaussian(p));
    cfg.snapshot_times = linspace(0.0, t_end, samples).collect();
    let run = simulate_with(&cfg, |_, _| {})?;

    let mut rows = Vec::with_capacity(run.snapshots.len());
    for s in &run.snapshots {
        let st = norm.state(s.time)?;
        let mo = moments(&rescale(s, st.tau, st.tau_dot)?);
        rows.push(vec![s.time, mo.i1, mo.i2, mo.j1, mo.j2, s.momentum()]);
    }
    let (i1_0, i2_0, m0) = (rows[0][1], rows[0][2], rows[0][5]);
    let (mut law, mut closed, mut i2_err, mut mom_err) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for r in rows.iter_mut() {
        let t = r[0];
        let o = moment_oracle(t, i1_0, i2_0, &norm)?;
        law = law.max((r[1] / i1_0 - (-t).exp()).abs());
        closed = closed.max((r[1] - o.i1).abs() / i1_0.abs());
        i2_err = i2_err.max((r[2] - o.i2).abs() / i2_0.abs());
        mom_err = mom_err.max((r[5] - m0 * (-t).exp()).abs() / m0.abs());
        r.extend([i1_0 * (-t).exp(), o.i1, o.i2, m0 * (-t).exp()]);
    }
    write_table(
        report,
        dir,
        "moments",
        &[
            "t",
            "I1",
            "I2",
            "J1",
            "J2",
            "momentum",
            "I1_exp_law",
            "I1_closed_form",
            "I2_oracle",
            "momentum_law",
        ],
        &rows,
        false,
    )?;

    report.check(
        "i1_exponential_law",
        law <= 1e-3,
        format!("max |I1/I1(0) - e^-t| = {law:.3e}"),
    );
    report.check(
        "i1_closed_form",
        closed <= 1e-2,
        format!("max |I1 - (tau P0 e^-t - tau_dot X)| / |I1(0)| = {closed:.3e}"),
    );
    report.check(
        "i2_oracle",
        i2_err <= 0.02,
        format!("max |I2 - oracle| / |I2(0)| = {i2_err:.3e}"),
    );
    report.check(
        "momentum_decay",
        mom_err <= 1e-8,
        format!("max relative |int m - e^-t int m0| = {mom_err:.3e}"),
    );
    Ok(())
}

fn tau_study(spec: &ExperimentSpec, dir: &Path, report: &mut RunReport) -> Result<()> {
    let alpha0 = spec.real("alpha0", 1.0);
    let beta0 = spec.real("beta0", 0.0);
    let t_end = positive("t_end", spec.real("t_end", 1e4))?;
    let samples = at_least("samples", spec.int("samples", 200), 2)?;
    let tol = positive("tolerance", spec.real("tolerance", 1e-11))?;
    let traj = integrate_tau(&TauConfig::new(alpha0, beta0, t_end, tol)?)?;
    let rows = logspace(t_end * 1e-4, t_end, samples)
        .map(|t| {
            let s = traj.state(t)?;
            let root = 2.0 * (alpha0 * t).sqrt();
            Ok(vec![
                t,
                s.tau,
                s.tau_dot,
                s.tau / root,
                s.tau_dot * (t / alpha0).sqrt(),
                s.tau - root,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    write_table(
        report,
        dir,
        "tau_study",
        &[
            "t",
            "tau",
            "tau_dot",
            "tau_over_2sqrt_at",
            "tau_dot_sqrt_t_over_a",
            "tau_minus_2sqrt_at",
        ],
        &rows,
        true,
    )?;

    let last = rows.last().expect("at least two samples");
    let ratio = (last[3] - 1.0).abs();
    report.check(
        "tau_ratio",
        ratio < 0.05,
        format!("|tau/2sqrt(a t) - 1| = {ratio:.3e} at t = {t_end}"),
    );
    let dot = (last[4] - 1.0).abs();
    report.check(
        "tau_dot_ratio",
        dot < 0.1,
        format!("|tau_dot sqrt(t/a) - 1| = {dot:.3e} at t = {t_end}"),
    );
    let mut offset: f64 = 0.0;
    for t in traj
        .times()
        .iter()
        .copied()
        .chain(linspace(0.0, t_end, 10_001))
    {
        offset = offset.max((traj.tau(t)? - 2.0 * (alpha0 * t).sqrt()).abs());
    }
    report.check(
        "tau_offset_bounded",
        offset < 5.0,
        format!("max |tau - 2sqrt(a t)| = {offset:.4} on [0, {t_end}]"),
    );
    Ok(())
}

fn specfun_check(spec: &ExperimentSpec, dir: &Path, report: &mut RunReport) -> Result<()> {
    let t_min = positive("t_min", spec.real("t_min", 0.5))?;
    let t_max = spec.real("t_max", 20.0);
    let points = at_least("points", spec.int("points", 400), 2)?;
    let h = positive("h", spec.real("h", 1e-3))?;
    if !(t_max > t_min) {
        return Err(Error::InvalidValue {
            key: "t_max".into(),
            msg: format!("must exceed t_min = {t_min}"),
        });
    }
    let rows = linspace(t_min, t_max, points)
        .map(|t| {
            Ok(vec![
                t,
                f1(t)?,
                f2(t)?,
                f1_derivative(t)?,
                f2_derivative(t)?,
                wronskian_scaled(t)?,
                kummer_ode_residual(f1, t, h)?,
                kummer_ode_residual(f2, t, h)?,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    write_table(
        report,
        dir,
        "specfun",
        &[
            "t",
            "f1",
            "f2",
            "f1_prime",
            "f2_prime",
            "wronskian_et",
            "res_f1",
            "res_f2",
        ],
        &rows,
        false,
    )?;

    let res = column(&rows, 6).chain(column(&rows, 7)).fold(0.0, f64::max);
    report.check(
        "kummer_ode_residual",
        res <= 1e-6,
        format!("max residual {res:.3e} (h = {h})"),
    );
    let w: Vec<f64> = linspace(0.5, 10.0, 200)
        .map(wronskian_scaled)
        .collect::<Result<_>>()?;
    let w_spread = relative_spread(w.iter().copied());
    report.check(
        "wronskian_constant",
        w_spread <= 1e-6,
        format!("relative variation of e^t W on [0.5, 10] = {w_spread:.3e}"),
    );
    let expected = -(-log_gamma(0.75)?).exp();
    let w_err = (w[0] - expected).abs();
    report.check(
        "wronskian_value",
        w_err <= 1e-10,
        format!("|e^t W + 1/Gamma(3/4)| = {w_err:.3e}"),
    );
    let large: Vec<f64> = logspace(1e3, 1e4, 101).collect();
    let s1 = relative_spread(
        large
            .iter()
            .map(|&t| f1(t).map(|v| v * t.powf(0.25)))
            .collect::<Result<Vec<_>>>()?
            .into_iter(),
    );
    report.check(
        "f1_large_t",
        s1 < 0.02,
        format!("variation of f1 t^1/4 on [1e3, 1e4] = {s1:.3e}"),
    );
    let s2 = relative_spread(
        large
            .iter()
            .map(|&t| f2_scaled(t).map(|v| v * t.powf(-0.25)))
            .collect::<Result<Vec<_>>>()?
            .into_iter(),
    );
    report.check(
        "f2_large_t",
        s2 < 0.02,
        format!("variation of f2 e^t t^-1/4 on [1e3, 1e4] = {s2:.3e}"),
    );
    Ok(())
}
