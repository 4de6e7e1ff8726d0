//! Runs every configured method of a scenario on a shared grid.

use blochosc::aux_solver::{closed_form_aux_constant, closed_form_aux_oscillating, default_initial_conditions, solve_aux};
use blochosc::bloch::integrate_bloch;
use blochosc::invariant::{closed_form_constant, closed_form_oscillating, complex_magnetization};
use blochosc::riccati::{integrate_riccati, m_from_param, xi_from_m};
use blochosc::{
    Branch, Complex64, ComplexParameter, Error, FieldModel, Grid, InvariantTrajectory, Method, Record, Trajectory, Vec3R,
};
use rayon::prelude::*;

use crate::config::{complex, vec3, MethodName, ScenarioConfig};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone)]
pub struct MethodRun {
    pub method: Method,
    /// M for every method; the real part M_r for the invariant method.
    pub trajectory: Trajectory,
    pub invariant: Option<InvariantTrajectory>,
}

#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub config: ScenarioConfig,
    pub field: FieldModel,
    pub grid: Grid,
    pub runs: Vec<MethodRun>,
}

impl ScenarioRun {
    pub fn name(&self) -> &str {
        &self.config.name
    }
}

/// Resolved initial data shared by all methods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Initial {
    pub big_m0: f64,
    pub phi: f64,
    pub u0: Complex64,
    pub du0: Complex64,
    pub m0: Vec3R,
}

fn aux_start(cfg: &ScenarioConfig, field: &FieldModel, big_m0: f64, phi: f64) -> blochosc::Result<(Complex64, Complex64)> {
    if let (Some(u0), Some(du0)) = (cfg.init.u0, cfg.init.du0) {
        return Ok((complex(u0), complex(du0)));
    }
    let t0 = cfg.time.t0;
    match field {
        FieldModel::Constant(c) => closed_form_aux_constant(c, big_m0, phi, Branch::Plus, t0),
        FieldModel::Rotating(r) => closed_form_aux_oscillating(r, big_m0, phi, Branch::Plus, t0).map(|(u, du, _)| (u, du)),
        FieldModel::Tabulated(_) => default_initial_conditions(field, t0),
    }
}

pub fn resolve_initial(cfg: &ScenarioConfig, field: &FieldModel) -> CliResult<Initial> {
    let big_m0 = cfg.init.big_m0.unwrap_or(1.0);
    let phi = cfg.init.phi.unwrap_or(0.0);
    let needs_aux = cfg.methods.contains(&MethodName::Invariant);
    let (u0, du0) = match aux_start(cfg, field, big_m0, phi) {
        Ok(v) => v,
        Err(e) if needs_aux => return Err(CliError::solver(&cfg.name, e)),
        Err(_) => (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
    };
    let m0 = match cfg.init.m0 {
        Some(m) => vec3(m),
        None => complex_magnetization(u0, du0, field, cfg.time.t0)
            .ok()
            .map(|m| m.real().0)
            .filter(|m| m.norm() > 0.0 && m.iter().all(|x| x.is_finite()))
            .map(|m| m.normalize())
            .unwrap_or_else(|| Vec3R::new(1.0, 0.0, 0.0)),
    };
    Ok(Initial { big_m0, phi, u0, du0, m0 })
}

fn run_method(method: MethodName, cfg: &ScenarioConfig, field: &FieldModel, grid: &Grid, init: &Initial) -> blochosc::Result<MethodRun> {
    let method_tag: Method = method.into();
    let (trajectory, invariant) = match method {
        MethodName::Direct => (integrate_bloch(field, init.m0, grid)?, None),
        MethodName::Invariant => {
            let aux = solve_aux(field, init.u0, init.du0, grid)?;
            let inv = InvariantTrajectory::from_aux(&aux, field)?;
            (inv.real(), Some(inv))
        }
        MethodName::Riccati => {
            // the Riccati form precesses the other way, so it is driven with -B
            let p0 = match cfg.init.xi0 {
                Some(xi) => ComplexParameter::xi(complex(xi)),
                None => xi_from_m(&init.m0.normalize())?,
            };
            let path = integrate_riccati(&field.negated(), p0, grid)?;
            let records = path.iter().map(|(t, p)| Record { t: *t, m: m_from_param(p) }).collect();
            (Trajectory::new(Method::Riccati, field, records), None)
        }
        MethodName::ClosedForm => {
            field.sample(grid.t0())?.require_nondegenerate()?;
            let (m0, phi) = (init.big_m0, init.phi);
            let traj = match field {
                FieldModel::Constant(c) => {
                    Trajectory::sampled(Method::ClosedForm, field, grid, |t| Ok(closed_form_constant(c, m0, phi, t).0))?
                }
                FieldModel::Rotating(r) => {
                    Trajectory::sampled(Method::ClosedForm, field, grid, |t| Ok(closed_form_oscillating(r, m0, phi, t)?.0))?
                }
                FieldModel::Tabulated(_) => {
                    return Err(Error::InvalidField("no closed form for tabulated fields".into()));
                }
            };
            (traj, None)
        }
    };
    Ok(MethodRun { method: method_tag, trajectory, invariant })
}

pub fn run_scenario(cfg: &ScenarioConfig) -> CliResult<ScenarioRun> {
    cfg.validate()?;
    let field = cfg.field.build()?;
    let grid = cfg.grid(&field)?;
    let init = resolve_initial(cfg, &field)?;
    let mut runs = Vec::with_capacity(cfg.methods.len());
    for &m in &cfg.methods {
        runs.push(run_method(m, cfg, &field, &grid, &init).map_err(|e| CliError::solver(&cfg.name, e))?);
    }
    Ok(ScenarioRun { config: cfg.clone(), field, grid, runs })
}

/// Runs scenarios in parallel; results come back sorted by name.
pub fn run_all(configs: &[ScenarioConfig]) -> Vec<CliResult<ScenarioRun>> {
    let mut sorted: Vec<&ScenarioConfig> = configs.iter().collect();
    sorted.sort_by(|a, b| a.name.cmp(&b.name));
    sorted.par_iter().map(|c| run_scenario(c)).collect()
}
