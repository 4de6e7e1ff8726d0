//! The auxiliary equation
//!
//! ```text
//! d/dt (u'/B+) + [B^2/4 - B+ d/dt(i B_z / (2 B+))] (u/B+) = 0
//! ```
//!
//! whose solutions generate the linear invariant a(t) of the oscillator,
//! together with its closed forms for constant and rotating fields, the
//! canonical form `u = B+^{1/2} v`, and the companion equation satisfied by
//! the evolution-operator entries (the complex conjugate of the auxiliary
//! equation).
//!
//! Normalization of u is free: scaling u by lambda scales the resulting
//! magnetization by lambda^2.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::{ConstantField, FieldModel, FieldSample, RotatingField};
use crate::odeint::{central_derivative, central_second_derivative, rk4_integrate, Grid, OdeProblem};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuxSource {
    Numeric,
    ClosedFormConstant,
    ClosedFormOscillating,
}

/// Which of the two independent closed-form solutions u+ / u-.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxSample {
    pub t: f64,
    pub u: Complex64,
    pub du: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuxSolution {
    pub samples: Vec<AuxSample>,
    pub source: AuxSource,
}

impl AuxSolution {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    /// Samples with u replaced by its complex conjugate.
    pub fn conjugated(&self) -> Vec<AuxSample> {
        self.samples
            .iter()
            .map(|s| AuxSample { t: s.t, u: s.u.conj(), du: s.du.conj() })
            .collect()
    }
}

/// Second-order equations of the divergence form
/// `d/dt (x'/P) + K (x/P) = 0` that appear in the oscillator connection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivergenceEquation {
    /// P = B+, K = B^2/4 - B+ d/dt(i B_z/(2 B+)).
    Auxiliary,
    /// P = B-, K = B^2/4 + B- d/dt(i B_z/(2 B-)); conjugate of `Auxiliary`.
    Evolution,
    /// P = B-, K = B^2/4 - B- d/dt(i B_z/(2 B-)); the linearized Riccati
    /// equation for the stereographic parameter.
    Linearized,
}

impl DivergenceEquation {
    /// `(P, K)` at one field sample; P must be nonzero.
    pub fn coefficients(&self, s: &FieldSample) -> (Complex64, Complex64) {
        let quarter_b2 = Complex64::new(s.norm_sq() / 4.0, 0.0);
        // P d/dt(i B_z/(2P)) = (i/2)(B_z' - B_z P'/P)
        let drift = |p: Complex64, dp: Complex64| (I / 2.0) * (s.b_z_dot() - s.b_z() * dp / p);
        match self {
            DivergenceEquation::Auxiliary => {
                let p = s.b_plus();
                (p, quarter_b2 - drift(p, s.b_plus_dot()))
            }
            DivergenceEquation::Evolution => {
                let p = s.b_minus();
                (p, quarter_b2 + drift(p, s.b_minus_dot()))
            }
            DivergenceEquation::Linearized => {
                let p = s.b_minus();
                (p, quarter_b2 - drift(p, s.b_minus_dot()))
            }
        }
    }
}

/// Checks the field is evaluable and non-degenerate at every node and RK4
/// midpoint of `grid`.
pub(crate) fn check_grid_nondegenerate(field: &FieldModel, grid: &Grid) -> Result<()> {
    let nodes = grid.nodes();
    for w in nodes.windows(2) {
        field.sample(w[0])?.require_nondegenerate()?;
        field.sample(0.5 * (w[0] + w[1]))?.require_nondegenerate()?;
    }
    field.sample(grid.t1())?.require_nondegenerate()?;
    Ok(())
}

/// Integrates `eq` as the first-order system x' = P y, y' = -K x / P with
/// y = x'/P. Returns (t, x, x') at every node.
pub fn integrate_divergence(
    eq: DivergenceEquation,
    field: &FieldModel,
    x0: Complex64,
    dx0: Complex64,
    grid: &Grid,
) -> Result<Vec<AuxSample>> {
    check_grid_nondegenerate(field, grid)?;
    let (p0, _) = eq.coefficients(&field.sample(grid.t0())?);
    let problem = OdeProblem::new(vec![x0, dx0 / p0], |t, y: &[Complex64], dy: &mut [Complex64]| {
        let (p, k) = eq.coefficients(&field.sample(t)?);
        dy[0] = p * y[1];
        dy[1] = -k * y[0] / p;
        Ok(())
    });
    rk4_integrate(&problem, grid)?
        .into_iter()
        .map(|(t, y)| {
            let (p, _) = eq.coefficients(&field.sample(t)?);
            Ok(AuxSample { t, u: y[0], du: p * y[1] })
        })
        .collect()
}

/// Max over interior nodes of |d/dt(x'/P) + K x/P|, the derivative taken by
/// central differences on the samples.
pub fn divergence_residual(eq: DivergenceEquation, samples: &[AuxSample], field: &FieldModel) -> Result<f64> {
    if samples.len() < 3 {
        return Err(Error::InvalidInput("residual needs at least 3 samples".into()));
    }
    let ts: Vec<f64> = samples.iter().map(|s| s.t).collect();
    let mut ys = Vec::with_capacity(samples.len());
    let mut terms = Vec::with_capacity(samples.len());
    for s in samples {
        let (p, k) = eq.coefficients(&field.sample(s.t)?.require_nondegenerate()?);
        ys.push(s.du / p);
        terms.push(k * s.u / p);
    }
    Ok((1..samples.len() - 1)
        .map(|i| (central_derivative(&ts, &ys, i) + terms[i]).norm())
        .fold(0.0, f64::max))
}

/// Numerical solution of the auxiliary equation from (u0, u0').
pub fn solve_aux(field: &FieldModel, u0: Complex64, du0: Complex64, grid: &Grid) -> Result<AuxSolution> {
    if u0 == Complex64::new(0.0, 0.0) && du0 == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidInput("(u0, du0) = (0, 0) gives the trivial solution".into()));
    }
    let samples = integrate_divergence(DivergenceEquation::Auxiliary, field, u0, du0, grid)?;
    Ok(AuxSolution { samples, source: AuxSource::Numeric })
}

fn check_scale(m0: f64) -> Result<()> {
    if m0 > 0.0 && m0.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("M0 = {m0} must be positive")))
    }
}

/// Closed form for a constant field B0:
/// u+(t) = B0+ sqrt(M0) exp(+i (B0 t + phi)/2),
/// u-(t) = B0+ sqrt(M0) exp(-i (B0 t + phi)/2), with B0 = |B0|.
pub fn closed_form_aux_constant(
    field: &ConstantField,
    m0: f64,
    phi: f64,
    branch: Branch,
    t: f64,
) -> Result<(Complex64, Complex64)> {
    check_scale(m0)?;
    FieldModel::Constant(*field).sample(t)?.require_nondegenerate()?;
    let b0p = Complex64::new(field.b0.x, field.b0.y) / 2.0;
    let b0 = field.b0.norm();
    let sign = match branch {
        Branch::Plus => 1.0,
        Branch::Minus => -1.0,
    };
    let u = b0p * m0.sqrt() * Complex64::from_polar(1.0, sign * (b0 * t + phi) / 2.0);
    Ok((u, I * sign * b0 / 2.0 * u))
}

/// Effective frequency Omega = sqrt(B0^2 + 2 omega B0z + omega^2) of a rotating field.
pub fn effective_frequency(field: &RotatingField) -> Result<f64> {
    let disc = field.b0_norm_sq() + 2.0 * field.omega * field.b0z + field.omega * field.omega;
    if disc < 0.0 {
        return Err(Error::ComplexOmega { discriminant: disc });
    }
    Ok(disc.sqrt())
}

/// Closed form for a rotating field:
/// u+(t) = B0+ sqrt(M0) exp(+i [(Omega - omega) t + phi]/2),
/// u-(t) = B0+ sqrt(M0) exp(-i [(Omega + omega) t + phi]/2).
/// Returns (u, u', Omega).
pub fn closed_form_aux_oscillating(
    field: &RotatingField,
    m0: f64,
    phi: f64,
    branch: Branch,
    t: f64,
) -> Result<(Complex64, Complex64, f64)> {
    check_scale(m0)?;
    FieldModel::Rotating(*field).sample(t)?.require_nondegenerate()?;
    let omega_eff = effective_frequency(field)?;
    let rate = match branch {
        Branch::Plus => omega_eff - field.omega,
        Branch::Minus => -(omega_eff + field.omega),
    };
    let sign = match branch {
        Branch::Plus => 1.0,
        Branch::Minus => -1.0,
    };
    let u = field.b0_plus() * m0.sqrt() * Complex64::from_polar(1.0, (rate * t + sign * phi) / 2.0);
    Ok((u, I * rate / 2.0 * u, omega_eff))
}

/// Samples the closed-form solution matching `field` on `grid`.
pub fn sample_closed_form(field: &FieldModel, m0: f64, phi: f64, branch: Branch, grid: &Grid) -> Result<AuxSolution> {
    type Eval<'a> = Box<dyn Fn(f64) -> Result<(Complex64, Complex64)> + 'a>;
    let (source, eval): (AuxSource, Eval) = match field {
        FieldModel::Constant(c) => (
            AuxSource::ClosedFormConstant,
            Box::new(move |t| closed_form_aux_constant(c, m0, phi, branch, t)),
        ),
        FieldModel::Rotating(r) => (
            AuxSource::ClosedFormOscillating,
            Box::new(move |t| closed_form_aux_oscillating(r, m0, phi, branch, t).map(|(u, du, _)| (u, du))),
        ),
        FieldModel::Tabulated(_) => {
            return Err(Error::InvalidField("no closed form for tabulated fields".into()));
        }
    };
    let samples = grid
        .nodes()
        .into_iter()
        .map(|t| eval(t).map(|(u, du)| AuxSample { t, u, du }))
        .collect::<Result<_>>()?;
    Ok(AuxSolution { samples, source })
}

/// Initial data used when none is supplied: the u+ closed form with M0 = 1,
/// phi = 0 for constant and rotating fields; for tabulated fields
/// u0 = B+(t0), du0 = i |B(t0)| u0 / 2.
pub fn default_initial_conditions(field: &FieldModel, t0: f64) -> Result<(Complex64, Complex64)> {
    match field {
        FieldModel::Constant(c) => closed_form_aux_constant(c, 1.0, 0.0, Branch::Plus, t0),
        FieldModel::Rotating(r) => closed_form_aux_oscillating(r, 1.0, 0.0, Branch::Plus, t0).map(|(u, du, _)| (u, du)),
        FieldModel::Tabulated(_) => {
            let s = field.sample(t0)?.require_nondegenerate()?;
            let u0 = s.b_plus();
            Ok((u0, I * s.b.norm() / 2.0 * u0))
        }
    }
}

/// Auxiliary-equation residual of the samples.
pub fn aux_equation_residual(aux: &AuxSolution, field: &FieldModel) -> Result<f64> {
    divergence_residual(DivergenceEquation::Auxiliary, &aux.samples, field)
}

/// Residual of the evolution-operator equation for arbitrary samples (x, x').
pub fn evolution_equation_residual(samples: &[AuxSample], field: &FieldModel) -> Result<f64> {
    divergence_residual(DivergenceEquation::Evolution, samples, field)
}

/// Residual of the evolution-operator equation at x = conj(u).
pub fn conjugate_equation_residual(aux: &AuxSolution, field: &FieldModel) -> Result<f64> {
    evolution_equation_residual(&aux.conjugated(), field)
}

/// v(t) = u(t) B+(t)^{-1/2}, the square root following a continuous branch
/// from the principal value at the first sample.
pub fn to_canonical(aux: &AuxSolution, field: &FieldModel) -> Result<Vec<(f64, Complex64)>> {
    let mut out = Vec::with_capacity(aux.samples.len());
    let mut prev_arg: Option<f64> = None;
    for s in &aux.samples {
        let bp = field.sample(s.t)?.require_nondegenerate()?.b_plus();
        let mut arg = bp.arg();
        if let Some(prev) = prev_arg {
            let two_pi = 2.0 * std::f64::consts::PI;
            arg += two_pi * ((prev - arg) / two_pi).round();
        }
        prev_arg = Some(arg);
        let inv_sqrt = Complex64::from_polar(bp.norm().powf(-0.5), -arg / 2.0);
        out.push((s.t, s.u * inv_sqrt));
    }
    Ok(out)
}

/// Frequency term of the canonical equation v'' + Q v = 0:
/// Q = B^2/4 - B+ d/dt(i B_z/(2 B+)) - (3/4)(B+'/B+)^2 + (1/2) B+''/B+.
pub fn canonical_frequency(s: &FieldSample) -> Complex64 {
    let (_, k) = DivergenceEquation::Auxiliary.coefficients(s);
    let ratio = s.b_plus_dot() / s.b_plus();
    k - 0.75 * ratio * ratio + 0.5 * s.b_plus_ddot() / s.b_plus()
}

/// Max over interior nodes of |v'' + Q v| with v'' from central differences.
pub fn canonical_residual(points: &[(f64, Complex64)], field: &FieldModel) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::InvalidInput("residual needs at least 3 samples".into()));
    }
    let ts: Vec<f64> = points.iter().map(|p| p.0).collect();
    let vs: Vec<Complex64> = points.iter().map(|p| p.1).collect();
    let mut worst: f64 = 0.0;
    for i in 1..points.len() - 1 {
        let q = canonical_frequency(&field.sample(ts[i])?.require_nondegenerate()?);
        worst = worst.max((central_second_derivative(&ts, &vs, i) + q * vs[i]).norm());
    }
    Ok(worst)
}
