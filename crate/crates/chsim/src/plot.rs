//! Static SVG plots of a finished run: the solution waterfall, the energy
//! history against its conserved reference, and the gradient history with
//! the breaking-time extrapolation.
//!
//! Plot emission is best effort; callers treat failures as warnings, the
//! JSON summary is the mandatory artifact.

use std::path::{Path, PathBuf};

use plotters::prelude::*;

use crate::blowup::BlowupReport;
use crate::dynamics::TrajectoryRecord;
use crate::error::{Error, Result};

const SIZE: (u32, u32) = (900, 600);

fn plot_err(e: impl std::fmt::Display) -> Error {
    Error::Plot(e.to_string())
}

/// Emit the three standard plots into `dir`, returning the files written.
/// An empty trajectory produces no plots and no error.
pub fn emit_plots(
    traj: &TrajectoryRecord,
    blowup: Option<&BlowupReport>,
    dir: impl AsRef<Path>,
) -> Result<Vec<PathBuf>> {
    if traj.rows.is_empty() {
        return Ok(Vec::new());
    }
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();

    let waterfall = dir.join("waterfall.svg");
    plot_waterfall(traj, &waterfall)?;
    written.push(waterfall);

    let energy = dir.join("energy.svg");
    plot_energy(traj, &energy)?;
    written.push(energy);

    let gradient = dir.join("gradient.svg");
    plot_gradient(traj, blowup, &gradient)?;
    written.push(gradient);

    Ok(written)
}

/// Snapshots of u(x, t) stacked with a vertical offset increasing in time.
fn plot_waterfall(traj: &TrajectoryRecord, path: &Path) -> Result<()> {
    let snaps = &traj.snapshots;
    let umin = snaps.iter().map(|s| s.u.min()).fold(f64::INFINITY, f64::min);
    let umax = snaps
        .iter()
        .map(|s| s.u.values().iter().cloned().fold(f64::NEG_INFINITY, f64::max))
        .fold(f64::NEG_INFINITY, f64::max);
    let range = (umax - umin).max(1e-12);
    let offset = 0.35 * range;
    let ymax = umax + offset * (snaps.len().saturating_sub(1)) as f64;

    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;
    let mut chart = ChartBuilder::on(&root)
        .caption("u(x, t) waterfall", ("sans-serif", 22))
        .margin(12)
        .x_label_area_size(32)
        .y_label_area_size(48)
        .build_cartesian_2d(0.0..1.0, (umin - 0.05 * range)..(ymax + 0.05 * range))
        .map_err(plot_err)?;
    chart
        .configure_mesh()
        .x_desc("x")
        .y_desc("u + offset(t)")
        .draw()
        .map_err(plot_err)?;

    let m = snaps.len();
    for (i, s) in snaps.iter().enumerate() {
        let shade = 0.15 + 0.85 * (i as f64 / m.max(1) as f64);
        let color = RGBColor(
            (30.0 + 160.0 * shade) as u8,
            40,
            (220.0 - 150.0 * shade) as u8,
        );
        let off = offset * i as f64;
        chart
            .draw_series(LineSeries::new(
                s.u.grid()
                    .nodes()
                    .iter()
                    .zip(s.u.values())
                    .map(|(&x, &v)| (x, v + off)),
                &color,
            ))
            .map_err(plot_err)?;
    }
    root.present().map_err(plot_err)?;
    Ok(())
}

/// Energy history with the flat conservation reference.
fn plot_energy(traj: &TrajectoryRecord, path: &Path) -> Result<()> {
    let e0 = traj.initial_energy;
    let ts: Vec<f64> = traj.rows.iter().map(|r| r.t).collect();
    let es: Vec<f64> = traj.rows.iter().map(|r| r.energy).collect();
    let emin = es.iter().cloned().fold(e0, f64::min);
    let emax = es.iter().cloned().fold(e0, f64::max);
    let pad = ((emax - emin) * 0.3).max(e0.abs() * 1e-6).max(1e-12);

    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;
    let mut chart = ChartBuilder::on(&root)
        .caption("H1 energy vs conserved reference", ("sans-serif", 22))
        .margin(12)
        .x_label_area_size(32)
        .y_label_area_size(72)
        .build_cartesian_2d(0.0..traj.t_final.max(1e-12), (emin - pad)..(emax + pad))
        .map_err(plot_err)?;
    chart
        .configure_mesh()
        .x_desc("t")
        .y_desc("energy")
        .draw()
        .map_err(plot_err)?;
    chart
        .draw_series(LineSeries::new(
            [(0.0, e0), (traj.t_final, e0)],
            &BLACK,
        ))
        .map_err(plot_err)?
        .label("conserved reference");
    chart
        .draw_series(LineSeries::new(
            ts.iter().cloned().zip(es.iter().cloned()),
            &RED,
        ))
        .map_err(plot_err)?
        .label("computed energy");
    root.present().map_err(plot_err)?;
    Ok(())
}

/// `min_x u_x` over time (top) and `1 / min_x u_x` with the fitted
/// extrapolation plus vertical markers at the extrapolated breaking time
/// and at the theoretical bound (bottom).
fn plot_gradient(
    traj: &TrajectoryRecord,
    blowup: Option<&BlowupReport>,
    path: &Path,
) -> Result<()> {
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;
    let (top, bottom) = root.split_vertically(SIZE.1 / 2);

    let ts: Vec<f64> = traj.rows.iter().map(|r| r.t).collect();
    let gs: Vec<f64> = traj.rows.iter().map(|r| r.min_ux).collect();
    let t_hi = blowup
        .and_then(|b| b.t0_bound.map(|t0| t0 * 1.1))
        .unwrap_or(traj.t_final)
        .max(traj.t_final);

    let gmin = gs.iter().cloned().fold(f64::INFINITY, f64::min);
    let gmax = gs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let pad = ((gmax - gmin) * 0.1).max(1e-12);
    let mut chart = ChartBuilder::on(&top)
        .caption("min_x u_x(t)", ("sans-serif", 20))
        .margin(10)
        .x_label_area_size(28)
        .y_label_area_size(72)
        .build_cartesian_2d(0.0..t_hi, (gmin - pad)..(gmax + pad))
        .map_err(plot_err)?;
    chart.configure_mesh().draw().map_err(plot_err)?;
    chart
        .draw_series(LineSeries::new(
            ts.iter().cloned().zip(gs.iter().cloned()),
            &BLUE,
        ))
        .map_err(plot_err)?;

    // reciprocal panel: breaking shows up as a straight line hitting zero
    let inv: Vec<(f64, f64)> = traj
        .rows
        .iter()
        .filter(|r| r.min_ux < 0.0)
        .map(|r| (r.t, 1.0 / r.min_ux))
        .collect();
    let imin = inv.iter().map(|p| p.1).fold(0.0f64, f64::min);
    let mut chart = ChartBuilder::on(&bottom)
        .caption("1 / min_x u_x(t) and extrapolation", ("sans-serif", 20))
        .margin(10)
        .x_label_area_size(28)
        .y_label_area_size(72)
        .build_cartesian_2d(0.0..t_hi, (imin * 1.1 - 1e-12)..0.05f64.min(-imin * 0.1 + 1e-9))
        .map_err(plot_err)?;
    chart.configure_mesh().draw().map_err(plot_err)?;
    if !inv.is_empty() {
        chart
            .draw_series(LineSeries::new(inv.iter().cloned(), &BLUE))
            .map_err(plot_err)?;
    }

    if let Some(report) = blowup {
        if let (Some(t_est), Some(slope)) = (report.t_est, report.inv_slope) {
            // fitted line through (t_est, 0) with the fitted slope
            let t_lo = inv.first().map(|p| p.0).unwrap_or(0.0);
            chart
                .draw_series(LineSeries::new(
                    [(t_lo, slope * (t_lo - t_est)), (t_est, 0.0)],
                    &RED,
                ))
                .map_err(plot_err)?;
            chart
                .draw_series(LineSeries::new(
                    [(t_est, imin), (t_est, 0.0)],
                    &RED,
                ))
                .map_err(plot_err)?;
            let style = TextStyle::from(("sans-serif", 14)).color(&RED);
            chart
                .plotting_area()
                .draw(&Text::new("T_est", (t_est, imin * 0.45), style))
                .map_err(plot_err)?;
        }
        if let Some(t0) = report.t0_bound {
            chart
                .draw_series(LineSeries::new([(t0, imin), (t0, 0.0)], &BLACK))
                .map_err(plot_err)?;
            let style = TextStyle::from(("sans-serif", 14)).color(&BLACK);
            chart
                .plotting_area()
                .draw(&Text::new("T_0", (t0, imin * 0.6), style))
                .map_err(plot_err)?;
        }
    }
    root.present().map_err(plot_err)?;
    Ok(())
}
