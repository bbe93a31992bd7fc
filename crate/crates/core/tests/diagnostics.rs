use approx::assert_relative_eq;
use del_core::diagnostics::{
    appendix_diagnostics, csiszar_kullback_gap, diagnose_snapshots, energies,
    fokker_planck_operator, fokker_planck_residual, fokker_planck_residual_interior, gamma_mass,
    l1_to_gamma, log_gamma_cell_averages, moment_oracle, moments, rescale, RescaledField, CHANNELS,
};
use del_core::gaussdyn::{exact_state, normalization_trajectory, GaussianInit, GaussianParams};
use del_core::solver::GridField;
use del_core::{Error, Mesh};
use proptest::prelude::*;

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Cell averages of `Γ(y − y0)`.
fn gamma_shifted(n: usize, half: f64, y0: f64, time: f64) -> RescaledField {
    let mesh = Mesh::symmetric(half, n).unwrap();
    let moved = Mesh::new(mesh.x_min - y0, mesh.x_max - y0, n).unwrap();
    let r = log_gamma_cell_averages(&moved)
        .into_iter()
        .map(f64::exp)
        .collect();
    RescaledField {
        mesh,
        r,
        m: vec![0.0; n],
        tau: 1.0,
        tau_dot: 0.0,
        time,
    }
}

fn drifting(t_end: f64) -> GaussianParams {
    let init = GaussianInit {
        c0: 2.0,
        xbar0: 3.0,
        ..GaussianInit::default()
    };
    GaussianParams::new(init, t_end, 1e-11).unwrap()
}

fn rescaled_exact(p: &GaussianParams, t: f64, n: usize) -> RescaledField {
    let tau = p.trajectory().tau(t).unwrap();
    let mesh = Mesh::symmetric(8.0 * tau + 4.0, n).unwrap();
    let f = exact_state(p, t, &mesh).unwrap();
    let s = normalization_trajectory(t.max(1.0))
        .unwrap()
        .state(t)
        .unwrap();
    rescale(&f, s.tau, s.tau_dot).unwrap()
}

#[test]
fn rescale_identity_and_mass() {
    let mesh = Mesh::symmetric(5.0, 101).unwrap();
    let f = GridField::from_fn(mesh, 1.0, 0.0, |x| ((-x * x).exp(), x * (-x * x).exp())).unwrap();
    let same = rescale(&f, 1.0, 0.0).unwrap();
    assert_eq!(same.r, f.rho);
    assert_eq!(same.m, f.m);
    let scaled = rescale(&f, 2.7, 0.4).unwrap();
    assert_relative_eq!(scaled.mass(), f.mass(), max_relative = 1e-14);
    assert!(rescale(&f, 0.0, 0.0).is_err());
}

#[test]
fn exact_solution_approaches_gamma() {
    let p = drifting(100.0);
    let sup = |t: f64| {
        let rf = rescaled_exact(&p, t, 4000);
        rf.mesh
            .centers()
            .zip(&rf.r)
            .map(|(y, r)| (r - (-y * y).exp()).abs())
            .fold(0.0, f64::max)
    };
    let (s1, s10, s100) = (sup(1.0), sup(10.0), sup(100.0));
    assert!(s1 > s10 && s10 > s100, "{s1} {s10} {s100}");
    assert!(s100 < 0.1);
}

#[test]
fn moments_of_reference_and_shift() {
    let m = moments(&gamma_shifted(2000, 10.0, 0.0, 0.0));
    assert_eq!((m.i1, m.j2), (0.0, 0.0));
    assert!(m.i2.abs() < 1e-14);
    // midpoint rule on cell averages: O(dy²)
    assert!(m.j1.abs() < 1e-4);
    let y0 = 0.7;
    let m = moments(&gamma_shifted(4000, 10.0, y0, 0.0));
    assert_relative_eq!(m.i2, SQRT_PI * y0, max_relative = 1e-6);
    // ∫y²Γ(y − y0) − ∫y²Γ = √π y0²
    assert_relative_eq!(m.j1, SQRT_PI * y0 * y0, max_relative = 1e-4);
}

#[test]
fn oracle_closed_forms() {
    let traj = normalization_trajectory(1e3).unwrap();
    let o = moment_oracle(0.0, 0.4, -1.1, &traj).unwrap();
    assert_eq!((o.i1, o.i2), (0.4, -1.1));
    let e1 = (-1f64).exp();
    let o = moment_oracle(1.0, 1.0, 1.0, &traj).unwrap();
    assert_relative_eq!(
        o.i2,
        (2.0 - e1) / traj.tau(1.0).unwrap(),
        max_relative = 1e-14
    );
    let o = moment_oracle(1e3, 1.0, 0.0, &traj).unwrap();
    assert_relative_eq!(o.i2 * traj.tau(1e3).unwrap(), 1.0, max_relative = 1e-12);
    assert!(moment_oracle(2e3, 1.0, 0.0, &traj).is_err());
}

#[test]
fn oracle_matches_exact_gaussian_moments() {
    let p = drifting(5.0);
    let first = moments(&rescaled_exact(&p, 0.0, 4000));
    let traj = normalization_trajectory(5.0).unwrap();
    for t in [0.5, 1.0, 2.0, 5.0] {
        let mo = moments(&rescaled_exact(&p, t, 4000));
        let o = moment_oracle(t, first.i1, first.i2, &traj).unwrap();
        assert_relative_eq!(mo.i2, o.i2, max_relative = 1e-7);
        assert_relative_eq!(mo.i1, o.i1, epsilon = 1e-7 * first.i1.abs());
    }
}

#[test]
fn energies_of_reference() {
    let rf = gamma_shifted(4000, 10.0, 0.0, 0.0);
    let en = energies(&rf);
    assert_eq!(en.e_kin, 0.0);
    assert!(en.rel_entropy.abs() < 1e-14);
    assert!(en.e.abs() < 1e-14);
    assert_relative_eq!(en.e_plus, SQRT_PI / 2.0, max_relative = 1e-5);
    assert!(l1_to_gamma(&rf) < 1e-14);
}

#[test]
fn kinetic_energy_decays_on_exact_solutions() {
    let p = drifting(1e4);
    let scaled = |t: f64| t.sqrt() * energies(&rescaled_exact(&p, t, 4000)).e_kin;
    let early = [1.0, 3.0, 10.0].map(scaled).into_iter().fold(0.0, f64::max);
    let late = [100.0, 1e3, 1e4]
        .map(scaled)
        .into_iter()
        .fold(0.0, f64::max);
    assert!(late.is_finite() && late <= early, "{early} {late}");
}

#[test]
fn csiszar_kullback_cases() {
    let rf = gamma_shifted(4000, 10.0, 0.0, 0.0);
    assert!(csiszar_kullback_gap(&rf).unwrap().abs() < 1e-12);
    let shifted = gamma_shifted(4000, 10.0, 0.5, 0.0);
    assert!(csiszar_kullback_gap(&shifted).unwrap() > 1e-3);
    let mut heavy = rf.clone();
    heavy.r.iter_mut().for_each(|r| *r *= 2.0);
    assert!(matches!(
        csiszar_kullback_gap(&heavy),
        Err(Error::MassMismatch { .. })
    ));
    assert!(
        csiszar_kullback_gap(&heavy.normalized().unwrap())
            .unwrap()
            .abs()
            < 1e-12
    );
}

#[test]
fn gamma_is_discrete_steady_state() {
    let norm = |n: usize| {
        fokker_planck_operator(&gamma_shifted(n, 8.0, 0.0, 0.0))
            .iter()
            .fold(0.0f64, |a, v| a.max(v.abs()))
    };
    let (a, b, c) = (norm(100), norm(200), norm(400));
    assert!(((a / b).log2() - 2.0).abs() < 0.2);
    assert!(((b / c).log2() - 2.0).abs() < 0.2);
}

#[test]
fn flow_residual_cases() {
    let stationary: Vec<RescaledField> = (0..4)
        .map(|k| gamma_shifted(800, 8.0, 0.0, k as f64))
        .collect();
    let res = fokker_planck_residual(&stationary).unwrap();
    assert_eq!(res.len(), 4);
    assert!(res.iter().all(|&r| r < 1e-3));
    assert_eq!(
        fokker_planck_residual_interior(&stationary).unwrap().len(),
        2
    );
    // frozen off-equilibrium state: residual is the size of LR
    let frozen: Vec<RescaledField> = (0..3)
        .map(|k| gamma_shifted(800, 8.0, 1.0, k as f64))
        .collect();
    let res = fokker_planck_residual(&frozen).unwrap();
    assert!(res.iter().all(|&r| r > 100.0 * 1e-3));
    assert!(matches!(
        fokker_planck_residual(&stationary[..2]),
        Err(Error::InsufficientSnapshots { needed: 3, got: 2 })
    ));
}

#[test]
fn appendix_on_the_reference_state() {
    let p = drifting(2.0);
    let mesh = Mesh::symmetric(20.0, 2000).unwrap();
    let exact = exact_state(&p, 1.0, &mesh).unwrap();
    let rf = rescale(&exact, 1.5, 0.8).unwrap();
    let app = appendix_diagnostics(&exact, &exact, &rf, 1.0, 0.75).unwrap();
    assert!(app.q_int.abs() < 1e-12);
    assert!(app.q_min.abs() < 1e-12);
    let kin: f64 = exact
        .rho
        .iter()
        .zip(&exact.m)
        .map(|(r, m)| m * m / r)
        .sum::<f64>()
        * exact.dx();
    assert_relative_eq!(app.eta_star_int, kin, max_relative = 1e-10);
    assert_relative_eq!(
        app.weighted_eta,
        2f64.powf(0.75) * app.eta_star_int,
        max_relative = 1e-15
    );
    let other = exact_state(&p, 1.0, &Mesh::symmetric(20.0, 1000).unwrap()).unwrap();
    assert!(matches!(
        appendix_diagnostics(&exact, &other, &rf, 1.0, 0.75),
        Err(Error::GridMismatch(_))
    ));
}

#[test]
fn diagnose_series_layout() {
    let p = drifting(3.0);
    let mesh = Mesh::symmetric(30.0, 1500).unwrap();
    let snaps: Vec<GridField> = [0.0, 1.0, 2.0, 3.0]
        .iter()
        .map(|&t| exact_state(&p, t, &mesh).unwrap())
        .collect();
    let series = diagnose_snapshots(&snaps, &p, 0.75, "exact").unwrap();
    assert_eq!(series.len(), 4);
    assert_eq!(series.names().len(), CHANNELS.len());
    let i1 = series.channel("I1").unwrap();
    let traj = normalization_trajectory(3.0).unwrap();
    let o = moment_oracle(2.0, i1[0], series.channel("I2").unwrap()[0], &traj).unwrap();
    assert_relative_eq!(i1[2], o.i1, epsilon = 1e-6);
    assert!(series
        .channel("fp_residual")
        .unwrap()
        .iter()
        .all(|v| v.is_finite()));
    assert!(series
        .channel("rel_entropy")
        .unwrap()
        .iter()
        .all(|&v| v >= 0.0));
    assert!(series.channel("nope").is_none());
    let two = diagnose_snapshots(&snaps[..2], &p, 0.75, "exact").unwrap();
    assert!(two
        .channel("fp_residual")
        .unwrap()
        .iter()
        .all(|v| v.is_nan()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn entropy_bounds_hold(y0 in -2.0f64..2.0, width in 0.4f64..2.5, bump in 0.0f64..0.5) {
        let mesh = Mesh::symmetric(14.0, 1400).unwrap();
        let rf = RescaledField::from_fn(mesh, 1.0, 0.0, 0.0, |y| {
            let z = (y - y0) / width;
            ((-z * z).exp() + bump * (-(y + 1.0) * (y + 1.0) * 4.0).exp(), 0.0)
        }).normalized().unwrap();
        prop_assert!((rf.mass() - gamma_mass()).abs() < 1e-12);
        prop_assert!(energies(&rf).rel_entropy >= 0.0);
        prop_assert!(csiszar_kullback_gap(&rf).unwrap() >= -1e-8);
    }
}
