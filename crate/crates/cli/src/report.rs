//! CSV trajectories and comparison reports.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use blochosc::bloch::{bloch_residual, bloch_residual_series};
use blochosc::density::liouville_residual_matrix;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::runner::{MethodRun, ScenarioRun};

pub const DEVIATION_TOL: f64 = 1e-6;
pub const RESIDUAL_TOL: f64 = 1e-6;
pub const CONSTRAINT_TOL: f64 = 1e-9;
pub const NORM_DRIFT_TOL: f64 = 1e-9;

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV text for one method run, keeping every `stride`-th grid node.
pub fn csv(run: &MethodRun, field: &blochosc::FieldModel, stride: usize) -> CliResult<String> {
    let traj = &run.trajectory;
    let residuals = bloch_residual_series(traj, field).map_err(|e| CliError::Internal(e.to_string()))?;
    let mut out = String::new();
    out.push_str("t,Mx,My,Mz");
    if run.invariant.is_some() {
        out.push_str(",Mix,Miy,Miz");
    }
    out.push_str(",bloch_residual,norm_sq\n");
    let imag = run.invariant.as_ref().map(|inv| inv.imaginary());
    for (k, rec) in traj.records.iter().enumerate().step_by(stride.max(1)) {
        let m = rec.m;
        let _ = write!(out, "{},{},{},{}", num(rec.t), num(m.x), num(m.y), num(m.z));
        if let Some(imag) = &imag {
            let mi = imag.records[k].m;
            let _ = write!(out, ",{},{},{}", num(mi.x), num(mi.y), num(mi.z));
        }
        let _ = writeln!(out, ",{},{}", num(residuals[k]), num(m.norm_squared()));
    }
    Ok(out)
}

pub fn csv_path(out_dir: &Path, stem: &str, run: &MethodRun) -> PathBuf {
    out_dir.join(format!("{stem}_{}.csv", run.method.as_str()))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Writes one CSV per method and returns the paths.
pub fn write_csvs(run: &ScenarioRun, out_dir: &Path) -> CliResult<Vec<PathBuf>> {
    let stride = run.config.output.stride;
    let mut paths = Vec::new();
    for m in &run.runs {
        let path = csv_path(out_dir, run.config.stem(), m);
        write_file(&path, &csv(m, &run.field, stride)?)?;
        paths.push(path);
    }
    Ok(paths)
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PairDeviation {
    pub a: String,
    pub b: String,
    pub max_deviation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConstraintDefects {
    /// max |M.M| / sum |M_a|^2
    pub null: f64,
    /// max ||M_r|^2 - |M_i|^2| / |M_r|^2
    pub equal_norm: f64,
    /// max |M_r . M_i| / |M_r|^2
    pub orthogonality: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct MethodResiduals {
    pub method: String,
    pub bloch: f64,
    pub liouville: f64,
    pub norm_drift: f64,
    pub constraint: Option<ConstraintDefects>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ComparisonReport {
    pub scenario: String,
    pub field: String,
    pub t0: f64,
    pub t1: f64,
    pub dt: f64,
    pub deviations: Vec<PairDeviation>,
    pub residuals: Vec<MethodResiduals>,
    pub pass: bool,
}

/// Pairwise deviations and residuals. Every trajectory is rescaled to unit
/// initial norm first, which aligns the free scale of the invariant.
pub fn compare(run: &ScenarioRun) -> CliResult<ComparisonReport> {
    if run.runs.len() < 2 {
        return Err(CliError::Config(format!(
            "scenario '{}': compare needs at least two methods (e.g. methods = [\"direct\", \"invariant\"])",
            run.name()
        )));
    }
    let internal = |e: blochosc::Error| CliError::solver(run.name(), e);
    let unit: Vec<_> = run.runs.iter().map(|r| r.trajectory.unit_initial_norm()).collect();
    let mut deviations = Vec::new();
    for i in 0..unit.len() {
        for j in i + 1..unit.len() {
            let d = unit[i].max_deviation(&unit[j]);
            deviations.push(PairDeviation {
                a: unit[i].method.to_string(),
                b: unit[j].method.to_string(),
                max_deviation: d,
                pass: d <= DEVIATION_TOL,
            });
        }
    }
    let mut residuals = Vec::new();
    for (r, u) in run.runs.iter().zip(&unit) {
        let bloch = bloch_residual(u, &run.field).map_err(internal)?;
        let liouville = liouville_residual_matrix(u, &run.field).map_err(internal)?;
        let norm_drift = u.norm_drift();
        let constraint = r.invariant.as_ref().map(|inv| {
            let (equal_norm, orthogonality) = inv.max_split_defects();
            ConstraintDefects { null: inv.max_null_defect(), equal_norm, orthogonality }
        });
        let constraint_ok = constraint
            .as_ref()
            .is_none_or(|c| c.null <= CONSTRAINT_TOL && c.equal_norm <= CONSTRAINT_TOL && c.orthogonality <= CONSTRAINT_TOL);
        residuals.push(MethodResiduals {
            method: r.method.to_string(),
            bloch,
            liouville,
            norm_drift,
            constraint,
            pass: bloch <= RESIDUAL_TOL && liouville <= RESIDUAL_TOL && norm_drift <= NORM_DRIFT_TOL && constraint_ok,
        });
    }
    let pass = deviations.iter().all(|d| d.pass) && residuals.iter().all(|r| r.pass);
    Ok(ComparisonReport {
        scenario: run.name().to_string(),
        field: run.runs[0].trajectory.field_description.clone(),
        t0: run.grid.t0(),
        t1: run.grid.t1(),
        dt: run.grid.dt(),
        deviations,
        residuals,
        pass,
    })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn render_text(reports: &[ComparisonReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let _ = writeln!(out, "scenario {}  [{}]", r.scenario, verdict(r.pass));
        let _ = writeln!(out, "  field {}", r.field);
        let _ = writeln!(out, "  t in [{}, {}], dt = {}", r.t0, r.t1, r.dt);
        for d in &r.deviations {
            let _ = writeln!(out, "  {:<4} {} vs {}: max deviation {:.3e}", verdict(d.pass), d.a, d.b, d.max_deviation);
        }
        for m in &r.residuals {
            let _ = write!(
                out,
                "  {:<4} {}: bloch {:.3e}, liouville {:.3e}, norm drift {:.3e}",
                verdict(m.pass),
                m.method,
                m.bloch,
                m.liouville,
                m.norm_drift
            );
            if let Some(c) = &m.constraint {
                let _ = write!(out, ", null {:.3e}, equal norm {:.3e}, orthogonality {:.3e}", c.null, c.equal_norm, c.orthogonality);
            }
            out.push('\n');
        }
    }
    out
}

pub fn render_json(reports: &[ComparisonReport]) -> CliResult<String> {
    serde_json::to_string_pretty(reports)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::Internal(e.to_string()))
}

/// Writes `compare_report.txt` and `compare_report.json`, sorted by scenario.
pub fn write_reports(reports: &mut [ComparisonReport], out_dir: &Path) -> CliResult<(PathBuf, PathBuf)> {
    reports.sort_by(|a, b| a.scenario.cmp(&b.scenario));
    let txt = out_dir.join("compare_report.txt");
    let json = out_dir.join("compare_report.json");
    write_file(&txt, &render_text(reports))?;
    write_file(&json, &render_json(reports)?)?;
    Ok((txt, json))
}
