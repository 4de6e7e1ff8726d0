//! Scenario files.
//!
//! ```toml
//! [[scenario]]
//! name = "larmor"
//! methods = ["direct", "invariant", "closed-form"]
//! field = { kind = "constant", b0 = [1.0, 0.0, 0.0] }
//! time = { t0 = 0.0, t1 = 10.0, dt = 1e-3 }
//! init = { M0 = 1.0, phi = 0.0 }
//! output = { path = "larmor", stride = 10 }
//! ```
//!
//! Complex numbers are written as `[re, im]`. Unknown keys are rejected.

use std::path::Path;

use blochosc::{Complex64, FieldModel, Grid, Method, Vec3R};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub scenario: Vec<ScenarioConfig>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub field: FieldSpec,
    pub methods: Vec<MethodName>,
    pub time: TimeSpec,
    #[serde(default)]
    pub init: InitSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FieldSpec {
    Constant { b0: [f64; 3] },
    Rotating { b0x: f64, b0y: f64, b0z: f64, omega: f64 },
    Tabulated { times: Vec<f64>, values: Vec<[f64; 3]> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodName {
    Direct,
    Invariant,
    Riccati,
    ClosedForm,
}

impl From<MethodName> for Method {
    fn from(m: MethodName) -> Method {
        match m {
            MethodName::Direct => Method::Direct,
            MethodName::Invariant => Method::Invariant,
            MethodName::Riccati => Method::Riccati,
            MethodName::ClosedForm => Method::ClosedForm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    pub t0: f64,
    pub t1: f64,
    pub dt: Option<f64>,
}

/// Initial data. Defaults:
/// * `M0 = 1`, `phi = 0` for the closed forms and the auxiliary start;
/// * `u0, du0` from the u+ closed form (a B+-based start for tabulated fields);
/// * `m0` from the normalized real part of the invariant at t0, else (1, 0, 0);
/// * `xi0` from `m0`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct InitSpec {
    pub m0: Option<[f64; 3]>,
    pub u0: Option<[f64; 2]>,
    pub du0: Option<[f64; 2]>,
    #[serde(rename = "M0")]
    pub big_m0: Option<f64>,
    pub phi: Option<f64>,
    pub xi0: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<String>,
    #[serde(default = "one")]
    pub stride: usize,
}

fn one() -> usize {
    1
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { path: None, stride: 1 }
    }
}

/// Command-line overrides applied after parsing.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
}

pub fn complex(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

pub fn vec3(v: [f64; 3]) -> Vec3R {
    Vec3R::new(v[0], v[1], v[2])
}

impl FieldSpec {
    pub fn build(&self) -> CliResult<FieldModel> {
        match self {
            FieldSpec::Constant { b0 } => Ok(FieldModel::constant(vec3(*b0))),
            FieldSpec::Rotating { b0x, b0y, b0z, omega } => Ok(FieldModel::rotating(*b0x, *b0y, *b0z, *omega)),
            FieldSpec::Tabulated { times, values } => {
                FieldModel::tabulated(times.clone(), values.iter().copied().map(vec3).collect())
                    .map_err(|e| CliError::Config(format!("field: {e}")))
            }
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> CliResult<()> {
        let err = |msg: String| Err(CliError::Config(format!("scenario '{}': {msg}", self.name)));
        if self.name.trim().is_empty() {
            return Err(CliError::Config("scenario name must not be empty".into()));
        }
        if self.methods.is_empty() {
            return err("at least one method is required".into());
        }
        let mut seen = self.methods.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.methods.len() {
            return err("methods contain duplicates".into());
        }
        let TimeSpec { t0, t1, dt } = self.time;
        if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
            return err(format!("time: need finite t1 > t0, got t0 = {t0}, t1 = {t1}"));
        }
        if let Some(dt) = dt {
            if !(dt.is_finite() && dt > 0.0) {
                return err(format!("time.dt = {dt} must be positive"));
            }
        }
        if self.output.stride == 0 {
            return err("output.stride must be at least 1".into());
        }
        if let Some(m0) = self.init.big_m0 {
            if !(m0.is_finite() && m0 > 0.0) {
                return err(format!("init.M0 = {m0} must be positive"));
            }
        }
        if self.init.u0.is_some() != self.init.du0.is_some() {
            return err("init.u0 and init.du0 must be given together".into());
        }
        if matches!(self.field, FieldSpec::Tabulated { .. }) && self.methods.contains(&MethodName::ClosedForm) {
            return err("closed-form is only available for constant and rotating fields".into());
        }
        if let Some(m0) = self.init.m0 {
            if vec3(m0).norm() == 0.0 || m0.iter().any(|x| !x.is_finite()) {
                return err("init.m0 must be a finite nonzero vector".into());
            }
        }
        self.field.build()?;
        Ok(())
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(dt) = o.dt {
            self.time.dt = Some(dt);
        }
        if let Some(t1) = o.t_end {
            self.time.t1 = t1;
        }
    }

    /// Output stem: `output.path` or the scenario name.
    pub fn stem(&self) -> &str {
        self.output.path.as_deref().unwrap_or(&self.name)
    }

    /// Explicit `dt`, or 1/5000 of the shortest characteristic period.
    pub fn grid(&self, field: &FieldModel) -> CliResult<Grid> {
        let dt = self.time.dt.unwrap_or_else(|| default_dt(field));
        Grid::new(self.time.t0, self.time.t1, dt).map_err(|e| CliError::Config(format!("scenario '{}': {e}", self.name)))
    }
}

pub fn default_dt(field: &FieldModel) -> f64 {
    let w = field.characteristic_frequency();
    if w > 0.0 && w.is_finite() {
        std::f64::consts::TAU / w / 5000.0
    } else {
        1e-3
    }
}

pub fn parse(text: &str) -> CliResult<Vec<ScenarioConfig>> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    if file.scenario.is_empty() {
        return Err(CliError::Config("no [[scenario]] entries".into()));
    }
    let mut names: Vec<&str> = file.scenario.iter().map(|s| s.name.as_str()).collect();
    names.sort_unstable();
    if names.windows(2).any(|w| w[0] == w[1]) {
        return Err(CliError::Config("scenario names must be unique".into()));
    }
    Ok(file.scenario)
}

pub fn load(path: &Path, overrides: &Overrides) -> CliResult<Vec<ScenarioConfig>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let mut scenarios = parse(&text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })?;
    for s in &mut scenarios {
        s.apply(overrides);
        s.validate()?;
    }
    Ok(scenarios)
}
