//! Shared fixtures for the benchmarks.

use blochosc::{FieldModel, Grid, Vec3R};

pub fn rotating() -> FieldModel {
    FieldModel::rotating(0.5, 0.2, 1.0, 1.0)
}

pub fn tabulated() -> FieldModel {
    let times: Vec<f64> = (0..=220).map(|k| -0.5 + 0.05 * k as f64).collect();
    let values = times
        .iter()
        .map(|&t| Vec3R::new(1.0 + 0.3 * (0.8 * t).sin(), 0.2 * (0.5 * t).cos(), 0.4 - 0.05 * t))
        .collect();
    FieldModel::tabulated(times, values).expect("valid table")
}

/// [0, 10] with `steps` RK4 steps.
pub fn grid(steps: usize) -> Grid {
    Grid::new(0.0, 10.0, 10.0 / steps as f64).expect("valid grid")
}
