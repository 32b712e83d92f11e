//! Finite-time breaking: the slope criterion, the explicit upper bound on
//! the breaking time, the end-to-end experiment, and resolution studies.
//!
//! With `h(0) = u_0'(x_0)` and `s = sqrt(2) ||u_0||_1`, breaking is
//! guaranteed whenever `h(0) < -s`, and the solution cannot live past
//!
//! `T_0 = ln( (h(0) - s) / (h(0) + s) ) / s`.
//!
//! Both log-argument factors are negative there, the ratio exceeds one, and
//! `T_0 > 0`. The experiment integrates the full nonlocal dynamics, detects
//! threshold crossing, extrapolates the breaking time from `1/h`, and
//! compares it against `T_0`.

use serde::Serialize;

use crate::diagnostics::{h1_norm_sq, HYPOTHESIS_RATIO};
use crate::dynamics::{detect_blowup, integrate, SimConfig, Termination, TrajectoryRecord};
use crate::error::{Error, Result};
use crate::grid::{diff1, Field, Grid};
use crate::initial_data::make_initial_data;
use crate::kernel::{helmholtz_residual, KernelTable};

/// Slack allowed when comparing the extrapolated breaking time against the
/// bound, as a fraction of the bound (covers extrapolation bias).
pub const T0_REL_TOL: f64 = 0.02;

/// Everything the breaking experiment measures and concludes.
#[derive(Debug, Clone, Serialize)]
pub struct BlowupReport {
    /// `u_0'(x_0)`, the monitored initial slope.
    pub h0: f64,
    /// `||u_0||_1`.
    pub u0_h1: f64,
    /// `h0 < -sqrt(2) ||u_0||_1`?
    pub criterion_satisfied: bool,
    /// The breaking-time bound; defined only when the criterion holds.
    pub t0_bound: Option<f64>,
    pub termination: Termination,
    pub t_final: f64,
    /// Threshold-crossing time, when breaking was detected.
    pub t_cross: Option<f64>,
    /// Extrapolated breaking time from the `1/h` fit.
    pub t_est: Option<f64>,
    /// Fitted slope of `1/h(t)` (the Riccati coefficient predicts ~0.5).
    pub inv_slope: Option<f64>,
    /// Did `u_xx(x_0, t)` stay within the hypothesis band throughout?
    pub hypothesis_maintained: bool,
    /// `t_est <= t0_bound (1 + 2%)`; `None` when either side is undefined
    /// or the hypothesis broke (then the comparison would be unsupported).
    pub bound_respected: Option<bool>,
}

/// The breaking-time bound from the slope criterion at node `x0`, or `None`
/// when the criterion fails there. `x0` must be a grid node.
pub fn blowup_time_bound(u0: &Field, x0: f64) -> Result<Option<f64>> {
    let grid = u0.grid();
    if !grid.is_node(x0) {
        return Err(Error::Precondition(format!(
            "x0 = {x0} is not a grid node (h = {})",
            grid.h()
        )));
    }
    let idx = grid.nearest_node(x0);
    let h0 = diff1(u0).values()[idx];
    let s = (2.0f64).sqrt() * h1_norm_sq(u0).sqrt();
    if h0 < -s {
        Ok(Some(((h0 - s) / (h0 + s)).ln() / s))
    } else {
        Ok(None)
    }
}

/// Assemble the breaking report for an already-integrated trajectory whose
/// monitored node was `x0`.
pub fn blowup_report_for(
    cfg: &SimConfig,
    x0: f64,
    traj: &TrajectoryRecord,
) -> Result<BlowupReport> {
    let grid = Grid::new(cfg.n)?;
    if !grid.is_node(x0) {
        return Err(Error::Precondition(format!(
            "x0 = {x0} is not a grid node (h = {})",
            grid.h()
        )));
    }
    let u0 = make_initial_data(&cfg.initial_data, &grid)?;
    let idx = grid.nearest_node(x0);
    let h0 = diff1(&u0).values()[idx];
    let u0_h1 = h1_norm_sq(&u0).sqrt();
    let criterion_satisfied = h0 < -(2.0f64).sqrt() * u0_h1;
    let t0_bound = blowup_time_bound(&u0, x0)?;
    let detection = detect_blowup(traj, cfg);

    let hypothesis_maintained = traj
        .rows
        .iter()
        .all(|r| r.max_abs_uxx == 0.0 || r.uxx_x0.abs() <= HYPOTHESIS_RATIO * r.max_abs_uxx);

    let (t_cross, t_est, inv_slope) = match &detection {
        Some(d) => (Some(d.t_cross), d.t_est, d.inv_slope),
        None => (None, None, None),
    };
    let bound_respected = match (t_est, t0_bound, hypothesis_maintained) {
        (Some(est), Some(bound), true) => Some(est <= bound * (1.0 + T0_REL_TOL)),
        _ => None,
    };

    Ok(BlowupReport {
        h0,
        u0_h1,
        criterion_satisfied,
        t0_bound,
        termination: traj.termination,
        t_final: traj.t_final,
        t_cross,
        t_est,
        inv_slope,
        hypothesis_maintained,
        bound_respected,
    })
}

/// Integrate `cfg`, watch the monitored slope, and fill a [`BlowupReport`].
/// The hypothesis `u_xx(x_0, t) = 0` is maintained by odd symmetry only for
/// `k = 0`; for other `k` the report states the breakdown instead of
/// asserting an unsupported bound comparison.
pub fn run_blowup_experiment(cfg: &SimConfig, x0: f64) -> Result<(BlowupReport, TrajectoryRecord)> {
    cfg.validate()?;
    let mut run_cfg = cfg.clone();
    run_cfg.monitor_x0 = x0;
    let traj = integrate(&run_cfg)?;
    let report = blowup_report_for(&run_cfg, x0, &traj)?;
    Ok((report, traj))
}

/// One resolution's worth of a convergence study.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub conservation_drift: f64,
    pub helmholtz_residual: f64,
    pub t_est: Option<f64>,
    pub worst_riccati_violation: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceStudy {
    pub rows: Vec<ConvergenceRow>,
    /// Observed drift orders between consecutive resolutions.
    pub drift_orders: Vec<f64>,
    /// Observed inversion-residual orders between consecutive resolutions.
    pub residual_orders: Vec<f64>,
}

impl ConvergenceStudy {
    /// Spread of the extrapolated breaking times relative to their median,
    /// when every resolution produced one.
    pub fn t_est_spread(&self) -> Option<f64> {
        let mut ts: Vec<f64> = self.rows.iter().filter_map(|r| r.t_est).collect();
        if ts.len() != self.rows.len() || ts.is_empty() {
            return None;
        }
        ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = ts[ts.len() / 2];
        Some((ts[ts.len() - 1] - ts[0]) / median)
    }
}

impl std::fmt::Display for ConvergenceStudy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "{:>6} {:>14} {:>14} {:>12} {:>14}",
            "n", "drift", "inv_residual", "t_est", "riccati_viol"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>6} {:>14.6e} {:>14.6e} {:>12} {:>14}",
                r.n,
                r.conservation_drift,
                r.helmholtz_residual,
                r.t_est.map_or("-".into(), |t| format!("{t:.6}")),
                r.worst_riccati_violation
                    .map_or("-".into(), |v| format!("{v:.3e}")),
            )?;
        }
        write!(f, "drift orders: ")?;
        for o in &self.drift_orders {
            write!(f, "{o:.2} ")?;
        }
        writeln!(f)?;
        write!(f, "residual orders: ")?;
        for o in &self.residual_orders {
            write!(f, "{o:.2} ")?;
        }
        Ok(())
    }
}

fn observed_orders(ns: &[usize], errs: &[f64]) -> Vec<f64> {
    ns.windows(2)
        .zip(errs.windows(2))
        .map(|(nw, ew)| {
            let h_ratio = (nw[1] - 1) as f64 / (nw[0] - 1) as f64;
            if ew[1] == 0.0 || ew[0] == 0.0 {
                f64::INFINITY
            } else {
                (ew[0] / ew[1]).ln() / h_ratio.ln()
            }
        })
        .collect()
}

/// Re-run `cfg` at each resolution in `ns` and tabulate drift, inversion
/// residual, extrapolated breaking time and the Riccati violation, plus
/// observed orders between consecutive resolutions.
pub fn convergence_study(cfg: &SimConfig, ns: &[usize]) -> Result<ConvergenceStudy> {
    if ns.len() < 3 {
        return Err(Error::config(format!(
            "convergence study needs at least 3 resolutions, got {}",
            ns.len()
        )));
    }
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::config(
            "resolutions must be strictly increasing (no duplicates)",
        ));
    }
    if cfg.initial_data.needs_odd_n() {
        if let Some(bad) = ns.iter().find(|&&n| n % 2 == 0) {
            return Err(Error::config(format!(
                "resolution {bad} is even; n must be odd for symmetric families"
            )));
        }
    }
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let mut run_cfg = cfg.clone();
        run_cfg.n = n;
        // keep the recording cadence at a fixed physical interval across
        // resolutions (dt scales like 1/n), so extrapolation windows match
        run_cfg.record_stride =
            (cfg.record_stride * (n - 1) / (ns[0] - 1)).max(1);
        let traj = integrate(&run_cfg)?;
        let drift = crate::diagnostics::conservation_drift(&traj);

        let grid = Grid::new(n)?;
        let u0 = make_initial_data(&cfg.initial_data, &grid)?;
        let kernel = KernelTable::new(grid);
        let w = kernel.convolve(&u0)?;
        let residual = helmholtz_residual(&u0, &w)?;

        let t_est = detect_blowup(&traj, &run_cfg).and_then(|d| d.t_est);
        let riccati = crate::diagnostics::riccati_monitor(
            &traj,
            traj.monitor_x0,
            traj.initial_h1_norm(),
            f64::NEG_INFINITY,
        )?;
        let worst = match riccati {
            crate::diagnostics::RiccatiMonitor::Checked {
                worst_violation, ..
            } => Some(worst_violation),
            crate::diagnostics::RiccatiMonitor::Inapplicable { .. } => None,
        };
        rows.push(ConvergenceRow {
            n,
            conservation_drift: drift,
            helmholtz_residual: residual,
            t_est,
            worst_riccati_violation: worst,
        });
    }
    let drifts: Vec<f64> = rows.iter().map(|r| r.conservation_drift).collect();
    let residuals: Vec<f64> = rows.iter().map(|r| r.helmholtz_residual).collect();
    Ok(ConvergenceStudy {
        drift_orders: observed_orders(ns, &drifts),
        residual_orders: observed_orders(ns, &residuals),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial_data::{Family, InitialDataSpec};
    use std::f64::consts::PI;

    fn family_a_field(n: usize, a: f64) -> Field {
        let grid = Grid::new(n).unwrap();
        let fam = if a > 0.0 { Family::A } else { Family::C };
        make_initial_data(&InitialDataSpec::family(fam, a), &grid).unwrap()
    }

    #[test]
    fn criterion_margin_is_arithmetic() {
        // 4 pi > sqrt(2) sqrt(5/8 + 4 pi^2), so family A breaks for every
        // positive amplitude.
        let lhs = 4.0 * PI;
        let rhs = (2.0f64).sqrt() * (0.625 + 4.0 * PI * PI).sqrt();
        assert!((lhs - 12.566).abs() < 1e-3);
        assert!((rhs - 8.956).abs() < 1e-3);
        assert!(lhs > rhs);
    }

    #[test]
    fn bound_matches_closed_form() {
        let u0 = family_a_field(1025, 1.0);
        let t0 = blowup_time_bound(&u0, 0.5).unwrap().unwrap();
        // exact ingredients: ||u_0||_1^2 = 5/8 + 4 pi^2, h(0) = -4 pi
        let s = (2.0 * (0.625 + 4.0 * PI * PI)).sqrt();
        let expected = ((-4.0 * PI - s) / (-4.0 * PI + s)).ln() / s;
        assert!((expected - 0.1994).abs() < 1e-4);
        assert!(
            (t0 - expected).abs() / expected < 1e-4,
            "t0 {t0} vs {expected}"
        );
        assert!(t0 > 0.0);
    }

    #[test]
    fn bound_inapplicable_for_positive_slope() {
        let u0 = family_a_field(513, -1.0);
        assert!(blowup_time_bound(&u0, 0.5).unwrap().is_none());
    }

    #[test]
    fn bound_scales_inversely_with_amplitude() {
        let t1 = blowup_time_bound(&family_a_field(513, 1.0), 0.5)
            .unwrap()
            .unwrap();
        for a in [2.0, 4.0, 0.5] {
            let ta = blowup_time_bound(&family_a_field(513, a), 0.5)
                .unwrap()
                .unwrap();
            assert!(
                (ta - t1 / a).abs() / (t1 / a) < 1e-8,
                "a={a}: {ta} vs {}",
                t1 / a
            );
        }
    }

    #[test]
    fn bound_requires_node() {
        let u0 = family_a_field(513, 1.0);
        assert!(matches!(
            blowup_time_bound(&u0, 0.1234567),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn criterion_invariant_under_rescaling() {
        for a in [0.25, 1.0, 3.0, 10.0] {
            let u0 = family_a_field(257, a);
            let h0 = diff1(&u0).values()[128];
            let s = (2.0 * h1_norm_sq(&u0)).sqrt();
            assert!(h0 < -s, "a={a}");
        }
    }

    #[test]
    fn experiment_control_run_stays_smooth() {
        let cfg = SimConfig::new(InitialDataSpec::family(Family::C, -0.1), 129, 0.0, 1.0);
        let (report, traj) = run_blowup_experiment(&cfg, 0.5).unwrap();
        assert_eq!(report.termination, Termination::Completed);
        assert!(!report.criterion_satisfied);
        assert!(report.t0_bound.is_none());
        assert!(report.t_cross.is_none());
        assert!(report.bound_respected.is_none());
        assert_eq!(traj.termination, Termination::Completed);
    }

    #[test]
    fn experiment_headline_coarse() {
        let mut cfg = SimConfig::new(InitialDataSpec::family(Family::A, 1.0), 257, 0.0, 0.5);
        cfg.rhs_form = crate::dynamics::RhsForm::MForm;
        cfg.record_stride = 2;
        let (report, _) = run_blowup_experiment(&cfg, 0.5).unwrap();
        assert!(report.criterion_satisfied);
        assert_eq!(report.termination, Termination::BlowupDetected);
        assert!(report.hypothesis_maintained);
        assert_eq!(report.bound_respected, Some(true));
        let t_est = report.t_est.unwrap();
        let t0 = report.t0_bound.unwrap();
        assert!(t_est <= t0 * (1.0 + T0_REL_TOL), "t_est {t_est} vs t0 {t0}");
    }

    #[test]
    fn experiment_with_dissipation_reports_hypothesis_breakdown() {
        let mut cfg = SimConfig::new(InitialDataSpec::family(Family::A, 1.0), 257, 1.0, 0.5);
        cfg.rhs_form = crate::dynamics::RhsForm::MForm;
        cfg.record_stride = 2;
        let (report, _) = run_blowup_experiment(&cfg, 0.5).unwrap();
        assert!(!report.hypothesis_maintained);
        assert!(report.bound_respected.is_none());
    }

    #[test]
    fn study_validates_inputs() {
        let cfg = SimConfig::new(InitialDataSpec::family(Family::C, -0.1), 65, 0.5, 0.1);
        assert!(convergence_study(&cfg, &[65, 129]).is_err());
        assert!(convergence_study(&cfg, &[65, 65, 129]).is_err());
        assert!(convergence_study(&cfg, &[65, 129, 128]).is_err());
        assert!(convergence_study(&cfg, &[65, 128, 129]).is_err());
    }

    #[test]
    fn study_runs_and_orders_make_sense() {
        let mut cfg = SimConfig::new(InitialDataSpec::family(Family::C, -0.1), 65, 0.0, 0.1);
        cfg.record_stride = 20;
        let study = convergence_study(&cfg, &[65, 129, 257]).unwrap();
        assert_eq!(study.rows.len(), 3);
        assert_eq!(study.drift_orders.len(), 2);
        for r in &study.rows {
            assert!(r.conservation_drift < 1e-2);
            assert!(r.t_est.is_none());
        }
        for o in &study.residual_orders {
            assert!(*o >= 1.5, "residual orders {:?}", study.residual_orders);
        }
    }
}
