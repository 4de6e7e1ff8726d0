//! Stereographic (complex-parameter) form of the Bloch equation.
//!
//! This module uses the opposite cross-product order to [`crate::bloch`]:
//! the unit vector m obeys dm/dt + B x m = 0, which in the chart
//! xi = (m_x + i m_y)/(1 - m_z) becomes the Riccati equation
//!
//! ```text
//! xi' = i B- xi^2 - i B_z xi - i B+.
//! ```
//!
//! Integrating it with the field -B therefore reproduces the direct Bloch
//! trajectory for +B.
//!
//! The second chart eta = -1/conj(xi) = -(m_x + i m_y)/(1 + m_z) covers the
//! north pole. For real B, substituting xi = -1/conj(eta) into the equation
//! returns the identical equation for eta, so both charts share one
//! right-hand side and switching charts mid-run costs nothing.

use num_complex::Complex64;

use crate::aux_solver::{check_grid_nondegenerate, divergence_residual, integrate_divergence, AuxSample, DivergenceEquation};
use crate::error::{Error, Result};
use crate::fields::FieldModel;
use crate::odeint::{rk4_step, Grid};
use crate::Vec3R;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Switch to the other chart once |value| exceeds this.
pub const CHART_SWITCH_ABOVE: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    Xi,
    Eta,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexParameter {
    pub value: Complex64,
    pub chart: Chart,
}

impl ComplexParameter {
    pub fn xi(value: Complex64) -> Self {
        Self { value, chart: Chart::Xi }
    }

    pub fn eta(value: Complex64) -> Self {
        Self { value, chart: Chart::Eta }
    }

    /// The same point expressed in the other chart (-1/conj).
    pub fn flipped(&self) -> Self {
        let chart = match self.chart {
            Chart::Xi => Chart::Eta,
            Chart::Eta => Chart::Xi,
        };
        Self { value: -1.0 / self.value.conj(), chart }
    }

    /// xi value; infinite at the north pole.
    pub fn as_xi(&self) -> Complex64 {
        match self.chart {
            Chart::Xi => self.value,
            Chart::Eta => -1.0 / self.value.conj(),
        }
    }
}

/// Encodes a unit vector. Uses the xi chart for m_z <= 0.9 and the eta
/// chart above, away from the pole of xi.
pub fn xi_from_m(m: &Vec3R) -> Result<ComplexParameter> {
    let norm = m.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotUnit { norm });
    }
    let transverse = Complex64::new(m.x, m.y);
    if m.z <= 0.9 {
        Ok(ComplexParameter::xi(transverse / (1.0 - m.z)))
    } else {
        Ok(ComplexParameter::eta(-transverse / (1.0 + m.z)))
    }
}

/// Inverse stereographic map.
pub fn m_from_param(p: &ComplexParameter) -> Vec3R {
    let r2 = p.value.norm_sqr();
    let denom = 1.0 + r2;
    match p.chart {
        Chart::Xi => {
            let t = 2.0 * p.value / denom;
            Vec3R::new(t.re, t.im, (r2 - 1.0) / denom)
        }
        Chart::Eta => {
            let t = -2.0 * p.value / denom;
            Vec3R::new(t.re, t.im, (1.0 - r2) / denom)
        }
    }
}

/// Right-hand side of the Riccati equation (shared by both charts).
pub fn riccati_rhs(field: &FieldModel, t: f64, value: Complex64) -> Result<Complex64> {
    let s = field.sample(t)?;
    Ok(I * s.b_minus() * value * value - I * s.b_z() * value - I * s.b_plus())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartSwitching {
    Enabled,
    Disabled,
}

pub fn integrate_riccati(field: &FieldModel, p0: ComplexParameter, grid: &Grid) -> Result<Vec<(f64, ComplexParameter)>> {
    integrate_riccati_with(field, p0, grid, ChartSwitching::Enabled)
}

pub fn integrate_riccati_with(
    field: &FieldModel,
    p0: ComplexParameter,
    grid: &Grid,
    switching: ChartSwitching,
) -> Result<Vec<(f64, ComplexParameter)>> {
    let rhs = |t: f64, y: &[Complex64], dy: &mut [Complex64]| {
        dy[0] = riccati_rhs(field, t, y[0])?;
        Ok(())
    };
    let mut p = p0;
    if switching == ChartSwitching::Enabled && p.value.norm() > CHART_SWITCH_ABOVE {
        p = p.flipped();
    }
    let mut t = grid.t0();
    let mut out = Vec::with_capacity(grid.steps() + 1);
    out.push((t, p));
    for k in 1..=grid.steps() {
        let t_next = grid.node(k);
        let next = rk4_step(&rhs, t, &[p.value], t_next - t)?[0];
        if !next.is_finite() {
            return Err(Error::NonFiniteState { t: t_next });
        }
        p.value = next;
        // the reverse switch happens implicitly: a value above 2 in one
        // chart is below 1/2 in the other
        if switching == ChartSwitching::Enabled && p.value.norm() > CHART_SWITCH_ABOVE {
            p = p.flipped();
        }
        t = t_next;
        out.push((t, p));
    }
    Ok(out)
}

/// Initial data (z0, z0') for the linearized equation that reproduces
/// `xi0` at `t0`: z0 = 1, z0' = -i B- xi0 + i B_z/2.
pub fn linearized_initial_state(field: &FieldModel, t0: f64, xi0: Complex64) -> Result<(Complex64, Complex64)> {
    let s = field.sample(t0)?.require_nondegenerate()?;
    let z0 = Complex64::new(1.0, 0.0);
    Ok((z0, z0 * (-I * s.b_minus() * xi0 + I * s.b_z() / 2.0)))
}

/// Raw samples (t, z, z') of the linearized equation
/// d/dt(z'/B-) + [B^2/4 - B- d/dt(i B_z/(2 B-))] z/B- = 0.
pub fn integrate_linearized(field: &FieldModel, z0: Complex64, dz0: Complex64, grid: &Grid) -> Result<Vec<AuxSample>> {
    if z0 == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidInput("z0 must be nonzero".into()));
    }
    integrate_divergence(DivergenceEquation::Linearized, field, z0, dz0, grid)
}

/// Residual of the linearized equation on arbitrary samples (z, z').
pub fn linearized_equation_residual(samples: &[AuxSample], field: &FieldModel) -> Result<f64> {
    divergence_residual(DivergenceEquation::Linearized, samples, field)
}

/// xi(t) = (i/B-)(z'/z - i B_z/2) along the solution of the linearized equation.
pub fn linearized_solution(field: &FieldModel, z0: Complex64, dz0: Complex64, grid: &Grid) -> Result<Vec<(f64, Complex64)>> {
    check_grid_nondegenerate(field, grid)?;
    let samples = integrate_linearized(field, z0, dz0, grid)?;
    let z_max = samples.iter().map(|s| s.u.norm()).fold(0.0, f64::max);
    samples
        .iter()
        .map(|s| {
            if s.u.norm() < 1e-12 * z_max {
                return Err(Error::ZeroCrossing { t: s.t });
            }
            let f = field.sample(s.t)?;
            Ok((s.t, (I / f.b_minus()) * (s.du / s.u - I * f.b_z() / 2.0)))
        })
        .collect()
}
