//! Built-in scenarios exercising every method against every other.

use crate::config::{FieldSpec, InitSpec, MethodName, OutputSpec, ScenarioConfig, TimeSpec};
use crate::error::CliResult;
use crate::report::{compare, ComparisonReport};
use crate::runner::run_all;

fn scenario(name: &str, field: FieldSpec, methods: &[MethodName], init: InitSpec) -> ScenarioConfig {
    ScenarioConfig {
        name: name.into(),
        field,
        methods: methods.to_vec(),
        time: TimeSpec { t0: 0.0, t1: 10.0, dt: Some(1e-3) },
        init,
        output: OutputSpec::default(),
    }
}

/// Smooth field with B+ bounded away from zero, sampled every 0.05.
fn chirp() -> FieldSpec {
    let times: Vec<f64> = (0..=220).map(|k| -0.5 + 0.05 * k as f64).collect();
    let values = times
        .iter()
        .map(|&t| [1.0 + 0.3 * (0.8 * t).sin(), 0.2 * (0.5 * t).cos(), 0.4 - 0.05 * t])
        .collect();
    FieldSpec::Tabulated { times, values }
}

pub fn builtin_scenarios() -> Vec<ScenarioConfig> {
    use MethodName::*;
    let all = [Direct, Invariant, Riccati, ClosedForm];
    vec![
        scenario("constant-x", FieldSpec::Constant { b0: [1.0, 0.0, 0.0] }, &all, InitSpec::default()),
        scenario(
            "constant-tilted",
            FieldSpec::Constant { b0: [0.6, -0.3, 0.5] },
            &all,
            InitSpec { big_m0: Some(1.5), phi: Some(0.3), ..InitSpec::default() },
        ),
        scenario(
            "rotating-resonant",
            FieldSpec::Rotating { b0x: 1.0, b0y: 0.0, b0z: 0.0, omega: 1.0 },
            &all,
            InitSpec::default(),
        ),
        scenario(
            "rotating-detuned",
            FieldSpec::Rotating { b0x: 0.5, b0y: 0.2, b0z: 1.0, omega: 1.0 },
            &all,
            InitSpec { phi: Some(-0.7), ..InitSpec::default() },
        ),
        scenario("tabulated-chirp", chirp(), &[Direct, Invariant, Riccati], InitSpec::default()),
    ]
}

pub fn run_verify() -> CliResult<Vec<ComparisonReport>> {
    let scenarios = builtin_scenarios();
    let mut reports = Vec::new();
    for run in run_all(&scenarios) {
        reports.push(compare(&run?)?);
    }
    Ok(reports)
}
