//! Time-series CSV and run-summary JSON serialization.
//!
//! The CSV column contract is fixed: one row per recorded step, shortest
//! round-tripping decimal floats, LF line endings. Reloading a file
//! reproduces the written values bit for bit.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::blowup::BlowupReport;
use crate::diagnostics::{agmon_check, conservation_drift, poincare_check, sup_bound_check};
use crate::dynamics::{SimConfig, Termination, TrajectoryRecord};
use crate::error::{Error, Result};

/// Exact header of the time-series CSV.
pub const CSV_HEADER: &str =
    "t,energy,energy_drift_rel,max_abs_u,min_ux,h_x0,uxx_x0,neumann_res_0,neumann_res_1,conv_min,dt";

/// Current summary schema.
pub const SCHEMA_VERSION: u32 = 1;

pub fn write_timeseries(traj: &TrajectoryRecord, path: impl AsRef<Path>) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    out.write_all(CSV_HEADER.as_bytes())?;
    out.write_all(b"\n")?;
    for r in &traj.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.t,
            r.energy,
            r.energy_drift_rel,
            r.max_abs_u,
            r.min_ux,
            r.h_x0,
            r.uxx_x0,
            r.neumann_res_0,
            r.neumann_res_1,
            r.conv_min,
            r.dt
        )?;
    }
    Ok(())
}

/// Reload a time-series CSV into raw rows (one `[f64; 11]` per data line).
pub fn read_timeseries(path: impl AsRef<Path>) -> Result<Vec<[f64; 11]>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => {
            return Err(Error::config(format!(
                "unexpected CSV header: {other:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut row = [0.0f64; 11];
        let mut fields = line.split(',');
        for slot in row.iter_mut() {
            let field = fields.next().ok_or_else(|| {
                Error::config(format!("row {}: too few columns", i + 1))
            })?;
            *slot = field.parse().map_err(|_| {
                Error::config(format!("row {}: bad float {field:?}", i + 1))
            })?;
        }
        if fields.next().is_some() {
            return Err(Error::config(format!("row {}: too many columns", i + 1)));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Tri-state outcome of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inapplicable,
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inapplicable => "inapplicable",
        };
        write!(f, "{s}")
    }
}

/// End-of-run summary; the JSON artifact of every CLI invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub schema_version: u32,
    pub config: SimConfig,
    pub termination: Termination,
    pub t_final: f64,
    pub max_conservation_drift: f64,
    pub sup_bound: Verdict,
    pub agmon_u0: Verdict,
    pub poincare_u0: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blowup: Option<BlowupReport>,
    pub wall_clock_seconds: f64,
}

/// Assemble the summary from a finished run. The Agmon/Poincare verdicts
/// are evaluated on the initial state; the sup bound over the whole
/// trajectory.
pub fn build_summary(
    cfg: &SimConfig,
    traj: &TrajectoryRecord,
    blowup: Option<BlowupReport>,
    wall_clock_seconds: f64,
) -> RunSummary {
    let u0 = &traj.snapshots[0].u;
    RunSummary {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        termination: traj.termination,
        t_final: traj.t_final,
        max_conservation_drift: conservation_drift(traj),
        sup_bound: sup_bound_check(traj, traj.initial_h1_norm()).into(),
        agmon_u0: agmon_check(u0).holds.into(),
        poincare_u0: poincare_check(u0).holds.into(),
        blowup,
        wall_clock_seconds,
    }
}

pub fn write_summary(summary: &RunSummary, path: impl AsRef<Path>) -> Result<()> {
    let json = serde_json::to_string_pretty(summary)
        .map_err(|e| Error::config(format!("summary serialization failed: {e}")))?;
    let mut out = std::fs::File::create(path)?;
    out.write_all(json.as_bytes())?;
    out.write_all(b"\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::integrate;
    use crate::initial_data::{Family, InitialDataSpec};

    fn temp_path(name: &str) -> std::path::PathBuf {
        let mut p = std::env::temp_dir();
        p.push(format!("chsim-test-{}-{name}", std::process::id()));
        p
    }

    fn zero_run(steps: usize) -> (SimConfig, TrajectoryRecord) {
        let n = 65;
        let values = vec![0.0; n];
        let mut cfg = SimConfig::new(InitialDataSpec::CustomSamples { values }, n, 0.0, 1.0);
        cfg.dt_max = 1.0 / steps as f64;
        cfg.t_end = 1.0;
        let traj = integrate(&cfg).unwrap();
        (cfg, traj)
    }

    #[test]
    fn header_matches_contract_byte_for_byte() {
        assert_eq!(
            CSV_HEADER,
            "t,energy,energy_drift_rel,max_abs_u,min_ux,h_x0,uxx_x0,\
             neumann_res_0,neumann_res_1,conv_min,dt"
        );
    }

    #[test]
    fn zero_field_three_step_run() {
        let (_, traj) = zero_run(3);
        let path = temp_path("zero3.csv");
        write_timeseries(&traj, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let data: Vec<&str> = lines.collect();
        assert_eq!(data.len(), 3);
        for row in &data {
            let energy: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
            assert_eq!(energy, 0.0);
        }
        assert!(!text.contains('\r'));
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let cfg = SimConfig::new(
            InitialDataSpec::family(Family::C, -0.1),
            65,
            0.5,
            0.05,
        );
        let traj = integrate(&cfg).unwrap();
        assert!(!traj.rows.is_empty());
        let path = temp_path("roundtrip.csv");
        write_timeseries(&traj, &path).unwrap();
        let rows = read_timeseries(&path).unwrap();
        assert_eq!(rows.len(), traj.rows.len());
        for (got, want) in rows.iter().zip(&traj.rows) {
            let reference = [
                want.t,
                want.energy,
                want.energy_drift_rel,
                want.max_abs_u,
                want.min_ux,
                want.h_x0,
                want.uxx_x0,
                want.neumann_res_0,
                want.neumann_res_1,
                want.conv_min,
                want.dt,
            ];
            for (a, b) in got.iter().zip(&reference) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
        }
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn summary_json_parses_with_schema_version() {
        let cfg = SimConfig::new(InitialDataSpec::family(Family::C, -0.1), 65, 0.5, 0.02);
        let traj = integrate(&cfg).unwrap();
        let summary = build_summary(&cfg, &traj, None, 0.1);
        let path = temp_path("summary.json");
        write_summary(&summary, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["schema_version"], 1);
        assert_eq!(parsed["termination"], "completed");
        assert_eq!(parsed["sup_bound"], "pass");
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let (_, traj) = zero_run(3);
        let err = write_timeseries(&traj, "/definitely/not/a/dir/x.csv").unwrap_err();
        assert!(matches!(err, Error::Io(_)));
    }
}
