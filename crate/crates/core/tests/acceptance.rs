// SPDX-License-Identifier: Apache-2.0

//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

mod common;

use std::cmp::Ordering;
use std::process::ExitCode;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::{max_abs, schur_eigenvalues};
use polariton_w::analytic::{entanglement_x, green_matrix, steady_moments};
use polariton_w::dynamics::{
    build_drift, propagate_green, propagate_moments, relaxation_horizon, stability_check, Frame,
    MomentState, NoiseModel, SignalIdlerModes, SignalIdlerSystem, Tolerance,
};
use polariton_w::harness::{
    fig2_default_config, fig3_default_config, render, sweep_fig2, sweep_fig3, AxisName, AxisSpec,
    Format, SweepRow,
};
use polariton_w::model::PumpDrive;
use polariton_w::tomography::{
    fit_w_mixture, reconstruct_rho, validate_rho, window_correlators, CorrelatorGrid, FitOptions,
};
use polariton_w::Mat5;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn pure_w_state() -> Outcome {
    let mut worst = 0.0f64;
    for k in 1..=9 {
        let delta = 0.05 * k as f64;
        let x = entanglement_x(&steady_moments(1.0, 1.0, delta, 0.0).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        worst = worst.max((x - 1.0).abs());
    }
    check(
        worst < 1e-12,
        format!("max |X - 1| = {worst:.3e} over delta = 0.05..0.45"),
    )
}

fn stationary_x(
    delta: f64,
    n_b: f64,
) -> polariton_w::Result<(f64, f64, polariton_w::tomography::RhoDiagnostics)> {
    let sys = SignalIdlerSystem::continuous(1.0, 1.0, delta, 0.0, n_b);
    let horizon = relaxation_horizon(1.0, 1.0, delta, 12.0);
    let state = propagate_moments(
        &MomentState::vacuum(0.0),
        &sys,
        &[horizon],
        Tolerance::default(),
    )?
    .pop()
    .expect("one output time");
    let rho = reconstruct_rho(&CorrelatorGrid::stationary(&state)?)?;
    let fit = fit_w_mixture(&rho, &FitOptions::default())?;
    Ok((fit.x_weight, fit.residual, validate_rho(&rho)))
}

fn oracle_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    for i in 1..=5 {
        let delta = 0.09 * i as f64;
        for j in 0..5 {
            let n_b = 0.25 * j as f64;
            let (x, _, _) = stationary_x(delta, n_b).map_err(|e| e.to_string())?;
            let exact = entanglement_x(&steady_moments(1.0, 1.0, delta, n_b).unwrap()).unwrap();
            worst = worst.max((x - exact).abs());
        }
    }
    check(
        worst < 1e-6,
        format!("max |X_numeric - X_closed| = {worst:.3e} on 5x5 grid"),
    )
}

fn green_identities() -> Outcome {
    let tol = Tolerance::default();
    let g0 = green_matrix(1.0, 1.0, 0.3, 0.5, 0.0).unwrap();
    let identity_ok = g0 == Mat5::identity();

    let mut closed_vs_numeric = 0.0f64;
    for &(gi, gs, delta) in &[(1.0, 1.0, 0.4), (0.6, 1.4, 0.3), (2.0, 0.5, 0.2)] {
        let sys = SignalIdlerSystem::continuous(gi, gs, delta, 0.8, 0.0);
        for k in 0..=20 {
            let t = 0.5 * k as f64;
            let g = propagate_green(&sys, 0.0, t, tol).map_err(|e| e.to_string())?;
            let exact = green_matrix(gi, gs, delta, 0.8, t).unwrap();
            closed_vs_numeric = closed_vs_numeric.max(max_abs(&(g.matrix - exact)));
        }
    }

    let continuous = SignalIdlerSystem::continuous(1.0, 0.7, 0.3, 0.4, 0.0);
    let pulsed = SignalIdlerSystem {
        modes: SignalIdlerModes::resonant(1.3, 0.0, 1.0, 0.8),
        g_s: 0.9,
        drive: PumpDrive::gaussian(0.8, 0.0, 4.0, 1.0),
        noise: NoiseModel::uniform(0.0),
        frame: Frame::Rotating,
    };
    let mut semigroup = 0.0f64;
    for sys in [continuous, pulsed] {
        for (t0, t1, t2) in [(0.0, 2.0, 5.0), (1.5, 4.0, 4.5), (3.0, 6.0, 12.0)] {
            let a = propagate_green(&sys, t0, t1, tol).map_err(|e| e.to_string())?;
            let b = propagate_green(&sys, t1, t2, tol).map_err(|e| e.to_string())?;
            let direct = propagate_green(&sys, t0, t2, tol).map_err(|e| e.to_string())?;
            let composed = b.compose(&a).map_err(|e| e.to_string())?;
            semigroup = semigroup.max(max_abs(&(composed.matrix - direct.matrix)));
        }
    }
    check(
        identity_ok && closed_vs_numeric < 1e-8 && semigroup < 1e-8,
        format!(
            "G(0) = I: {identity_ok}; closed vs numeric {closed_vs_numeric:.3e}; semigroup defect {semigroup:.3e}"
        ),
    )
}

fn stability_boundary() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0004);
    let (mut agree, mut stable, mut unstable) = (0, 0, 0);
    for _ in 0..100 {
        let gi: f64 = rng.random_range(0.1..3.0);
        let gs: f64 = rng.random_range(0.1..3.0);
        let ratio: f64 = rng.random_range(0.5..1.5);
        let delta = ratio * 0.5 * (gi * gs).sqrt();
        let modes = SignalIdlerModes::resonant(0.0, 0.0, gi, gs);
        let drive = PumpDrive::continuous(1.0, 0.0);
        let m = build_drift(delta, &modes, &drive, 0.0, Frame::Rotating)
            .unwrap()
            .matrix;
        let lead = schur_eigenvalues(&m).last().unwrap().re;
        let s = stability_check(gi, gs, delta).unwrap();
        if s.stable {
            stable += 1;
        } else {
            unstable += 1;
        }
        if (lead < 0.0) == (s.margin > 0.0) {
            agree += 1;
        }
    }
    check(
        agree == 100 && stable > 0 && unstable > 0,
        format!("{agree}/100 sign agreements ({stable} stable, {unstable} unstable)"),
    )
}

fn point_values() -> Outcome {
    let m = steady_moments(1.0, 1.0, 0.4, 0.0).unwrap();
    let x0 = entanglement_x(&m).unwrap();
    let m5 = steady_moments(1.0, 1.0, 0.4, 0.5).unwrap();
    let x5 = entanglement_x(&m5).unwrap();
    let err = [
        m.n_ii - 8.0 / 9.0,
        m.n_ss - 2.0 / 9.0,
        m.n_ssp - 2.0 / 9.0,
        m.n_is.norm() - 5.0 / 9.0,
        x0 - 1.0,
        x5 - 728.0 / 1097.0,
    ]
    .iter()
    .fold(0.0f64, |a, e| a.max(e.abs()));
    check(
        err < 1e-13 && (x5 - 0.6636).abs() < 5e-5,
        format!("max deviation {err:.3e}; X(n_b = 0.5) = {x5:.6}"),
    )
}

fn rho_validity() -> Outcome {
    let (mut herm, mut trace, mut min_eig, mut residual) = (0.0f64, 0.0f64, f64::INFINITY, 0.0f64);
    for &(delta, n_b) in &[(0.1, 0.0), (0.25, 0.3), (0.45, 1.0), (0.4, 0.5)] {
        let (_, res, d) = stationary_x(delta, n_b).map_err(|e| e.to_string())?;
        herm = herm.max(d.hermiticity_defect);
        trace = trace.max(d.trace_defect);
        min_eig = min_eig.min(d.min_eigenvalue);
        residual = residual.max(res);
    }
    for &(intensity, temperature) in &[(0.05, 10.0), (0.3, 40.0)] {
        let sys = SignalIdlerSystem {
            modes: SignalIdlerModes::resonant(0.0, 0.0, 1.0, 1.0),
            g_s: 1.0,
            drive: PumpDrive::gaussian(f64::sqrt(intensity), 0.0, 4.0, 1.0),
            noise: NoiseModel {
                n_b: 0.0,
                temperature,
                photoluminescence: Some(Default::default()),
            },
            frame: Frame::Rotating,
        };
        let grid =
            window_correlators(&sys, 40.0, 0.5, Tolerance::default()).map_err(|e| e.to_string())?;
        let d = validate_rho(&reconstruct_rho(&grid).map_err(|e| e.to_string())?);
        herm = herm.max(d.hermiticity_defect);
        trace = trace.max(d.trace_defect);
        min_eig = min_eig.min(d.min_eigenvalue);
    }
    check(
        herm < 1e-10 && trace <= 2.0 * f64::EPSILON && min_eig > -1e-9 && residual < 1e-8,
        format!(
            "hermiticity {herm:.1e}, |tr - 1| {trace:.1e}, min eigenvalue {min_eig:.3e}, stationary residual {residual:.1e}"
        ),
    )
}

fn fig2_trends() -> Outcome {
    let rows = sweep_fig2(&fig2_default_config())
        .map_err(|e| e.to_string())?
        .rows;
    let x = |r: &SweepRow| r.x.unwrap_or(f64::NAN);
    let (mut along_delta, mut along_nb) = (0usize, 0usize);
    let mut violations = Vec::new();
    for a in &rows {
        for b in &rows {
            if a.n_b == b.n_b && a.n_b > 0.0 && b.delta > a.delta {
                along_delta += 1;
                if x(b).partial_cmp(&x(a)) != Some(Ordering::Greater) {
                    violations.push(format!("delta {}->{} at n_b {}", a.delta, b.delta, a.n_b));
                }
            }
            if a.delta == b.delta && b.n_b > a.n_b {
                along_nb += 1;
                if x(b).partial_cmp(&x(a)) != Some(Ordering::Less) {
                    violations.push(format!("n_b {}->{} at delta {}", a.n_b, b.n_b, a.delta));
                }
            }
        }
    }
    check(
        violations.is_empty() && along_delta > 0 && along_nb > 0,
        format!(
            "{} rows, {along_delta} delta pairs, {along_nb} n_b pairs, violations: {:?}",
            rows.len(),
            violations
        ),
    )
}

fn fig3_trends() -> Outcome {
    let rows = sweep_fig3(&fig3_default_config())
        .map_err(|e| e.to_string())?
        .rows;
    let x = |r: &SweepRow| r.x.unwrap_or(f64::NAN);
    let min_intensity = rows
        .iter()
        .map(|r| r.intensity)
        .fold(f64::INFINITY, f64::min);
    let low: f64 = rows
        .iter()
        .filter(|r| r.intensity == min_intensity)
        .map(|r| (1.0 - x(r)).abs())
        .fold(0.0, f64::max);
    let mut violations = Vec::new();
    for a in &rows {
        for b in &rows {
            if a.temperature == b.temperature && b.intensity > a.intensity && x(b) > x(a) {
                violations.push(format!(
                    "intensity {:.3e}->{:.3e} at T {}",
                    a.intensity, b.intensity, a.temperature
                ));
            }
            if a.intensity == b.intensity && b.temperature > a.temperature && x(b) > x(a) {
                violations.push(format!(
                    "T {}->{} at intensity {:.3e}",
                    a.temperature, b.temperature, a.intensity
                ));
            }
        }
    }
    let min_x = rows.iter().map(x).fold(f64::INFINITY, f64::min);
    check(
        low < 1e-3 && violations.is_empty(),
        format!(
            "{} rows; max |1 - X| at intensity {min_intensity:.0e}: {low:.2e}; min X {min_x:.4}; violations: {violations:?}",
            rows.len()
        ),
    )
}

fn background_identity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0009);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let gi: f64 = rng.random_range(0.1..3.0);
        let gs: f64 = rng.random_range(0.1..3.0);
        let delta = rng.random_range(0.0..0.95) * 0.5 * (gi * gs).sqrt();
        let n_b: f64 = rng.random_range(0.0..2.0);
        let m = steady_moments(gi, gs, delta, n_b).map_err(|e| e.to_string())?;
        worst = worst.max((m.n_ss - m.n_ssp - n_b).abs());
    }
    check(
        worst < 1e-12,
        format!("max |n_ss - n_ssp - n_b| = {worst:.3e} over 200 points"),
    )
}

fn determinism() -> Outcome {
    let csv = |rows: &[SweepRow]| render(rows, Format::Csv).map_err(|e| e.to_string());
    let fig2 = fig2_default_config();
    let a = csv(&sweep_fig2(&fig2).map_err(|e| e.to_string())?.rows)?;
    let b = csv(&sweep_fig2(&fig2).map_err(|e| e.to_string())?.rows)?;

    let mut fig3 = fig3_default_config();
    fig3.detection.window_ps = 30.0;
    fig3.sweep = vec![
        AxisSpec::linear(AxisName::Temperature, 10.0, 30.0, 2),
        AxisSpec::log(AxisName::Intensity, 0.01, 0.3, 2),
    ];
    let c = csv(&sweep_fig3(&fig3).map_err(|e| e.to_string())?.rows)?;
    let d = csv(&sweep_fig3(&fig3).map_err(|e| e.to_string())?.rows)?;
    check(
        a == b && c == d,
        format!(
            "fig2 {} bytes identical: {}; fig3 {} bytes identical: {}",
            a.len(),
            a == b,
            c.len(),
            c == d
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("vanishing-noise W state", pure_w_state),
        ("numeric pipeline vs closed form", oracle_equivalence),
        ("Green-function identities", green_identities),
        ("stability boundary", stability_boundary),
        ("derived point values", point_values),
        ("density-matrix validity", rho_validity),
        ("(delta, n_b) sweep trends", fig2_trends),
        ("intensity/temperature sweep trends", fig3_trends),
        ("background identity", background_identity),
        ("sweep determinism", determinism),
    ];
    let mut failures = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let ms = start.elapsed().as_secs_f64() * 1e3;
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {:>2} {name}: {detail} [{ms:.0} ms]", k + 1);
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
