//! Direct integration of the Bloch (Landau-Lifshitz) equation
//! dM/dt + M x B = 0, the reference all other methods are checked against.
//!
//! The norm of M is a constant of the motion. The integrator never
//! renormalizes, so the measured drift doubles as a quality metric.

use crate::error::{Error, Result};
use crate::fields::FieldModel;
use crate::odeint::{central_derivative, derivative_series, rk4_integrate, Grid, OdeProblem};
use crate::Vec3R;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Direct,
    Invariant,
    Riccati,
    ClosedForm,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Invariant => "invariant",
            Method::Riccati => "riccati",
            Method::ClosedForm => "closed-form",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Record {
    pub t: f64,
    pub m: Vec3R,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub records: Vec<Record>,
    pub method: Method,
    pub field_description: String,
    pub initial: Vec3R,
}

impl Trajectory {
    pub fn new(method: Method, field: &FieldModel, records: Vec<Record>) -> Self {
        let initial = records.first().map(|r| r.m).unwrap_or_else(Vec3R::zeros);
        Self { records, method, field_description: describe(field), initial }
    }

    /// Samples `f` at every node of `grid`.
    pub fn sampled<F>(method: Method, field: &FieldModel, grid: &Grid, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<Vec3R>,
    {
        let records = grid
            .nodes()
            .into_iter()
            .map(|t| f(t).map(|m| Record { t, m }))
            .collect::<Result<_>>()?;
        Ok(Self::new(method, field, records))
    }

    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }

    pub fn vectors(&self) -> Vec<Vec3R> {
        self.records.iter().map(|r| r.m).collect()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for r in &mut out.records {
            r.m *= factor;
        }
        out.initial *= factor;
        out
    }

    /// Rescales so the first record has unit norm.
    pub fn unit_initial_norm(&self) -> Self {
        let n = self.records.first().map(|r| r.m.norm()).unwrap_or(0.0);
        if n > 0.0 {
            self.scaled(1.0 / n)
        } else {
            self.clone()
        }
    }

    /// max_t | |m(t)|^2 - |m(t0)|^2 | / |m(t0)|^2.
    pub fn norm_drift(&self) -> f64 {
        let Some(first) = self.records.first() else { return 0.0 };
        let n0 = first.m.norm_squared();
        if n0 == 0.0 {
            return self.records.iter().map(|r| r.m.norm_squared()).fold(0.0, f64::max);
        }
        self.records
            .iter()
            .map(|r| (r.m.norm_squared() - n0).abs() / n0)
            .fold(0.0, f64::max)
    }

    /// Largest Euclidean distance between corresponding records.
    pub fn max_deviation(&self, other: &Trajectory) -> f64 {
        self.records
            .iter()
            .zip(&other.records)
            .map(|(a, b)| (a.m - b.m).norm())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn describe(field: &FieldModel) -> String {
    match field {
        FieldModel::Constant(c) => format!("constant B0=({}, {}, {})", c.b0.x, c.b0.y, c.b0.z),
        FieldModel::Rotating(r) => format!(
            "rotating B0=({}, {}, {}) omega={}",
            r.b0x, r.b0y, r.b0z, r.omega
        ),
        FieldModel::Tabulated(t) => {
            let (a, b) = t.domain();
            format!("tabulated {} samples on [{a}, {b}]", t.times().len())
        }
    }
}

fn bloch_rhs(m: &Vec3R, b: &Vec3R) -> Vec3R {
    // dM/dt = -M x B
    -m.cross(b)
}

pub fn integrate_bloch(field: &FieldModel, m0: Vec3R, grid: &Grid) -> Result<Trajectory> {
    if let Some((start, end)) = field.domain() {
        for t in [grid.t0(), grid.t1()] {
            if !(start..=end).contains(&t) {
                return Err(Error::OutOfDomain { t, start, end });
            }
        }
    }
    let problem = OdeProblem::new(vec![m0.x, m0.y, m0.z], |t, y: &[f64], dy: &mut [f64]| {
        let d = bloch_rhs(&Vec3R::new(y[0], y[1], y[2]), &field.eval(t)?);
        dy.copy_from_slice(d.as_slice());
        Ok(())
    });
    let records = rk4_integrate(&problem, grid)?
        .into_iter()
        .map(|(t, y)| Record { t, m: Vec3R::new(y[0], y[1], y[2]) })
        .collect();
    Ok(Trajectory::new(Method::Direct, field, records))
}

/// Precession about a constant field of magnitude `b0` along +z:
/// (M_perp cos(b0 t + phi), M_perp sin(b0 t + phi), M_z).
pub fn constant_field_solution(b0: f64, m_perp: f64, m_z: f64, phi: f64, t: f64) -> Vec3R {
    let (s, c) = (b0 * t + phi).sin_cos();
    Vec3R::new(m_perp * c, m_perp * s, m_z)
}

/// |dM/dt + M x B| at every record; central differences inside, one-sided
/// three-point stencils at the two ends.
pub fn bloch_residual_series(traj: &Trajectory, field: &FieldModel) -> Result<Vec<f64>> {
    if traj.len() < 3 {
        return Err(Error::InvalidInput("residual needs at least 3 records".into()));
    }
    let ts = traj.times();
    let ms = traj.vectors();
    let mut out = Vec::with_capacity(ms.len());
    for ((t, m), dm) in ts.iter().zip(&ms).zip(component_derivatives(&ts, &ms)) {
        out.push((dm - bloch_rhs(m, &field.eval(*t)?)).norm());
    }
    Ok(out)
}

fn component_derivatives(ts: &[f64], ms: &[Vec3R]) -> Vec<Vec3R> {
    let comp = |k: usize| derivative_series(ts, &ms.iter().map(|m| m[k]).collect::<Vec<_>>());
    let (x, y, z) = (comp(0), comp(1), comp(2));
    (0..ts.len()).map(|i| Vec3R::new(x[i], y[i], z[i])).collect()
}

/// Max over interior records of |central-difference dM/dt + M x B|.
pub fn bloch_residual(traj: &Trajectory, field: &FieldModel) -> Result<f64> {
    if traj.len() < 3 {
        return Err(Error::InvalidInput("residual needs at least 3 records".into()));
    }
    let ts = traj.times();
    let comps: Vec<Vec<f64>> = (0..3).map(|k| traj.records.iter().map(|r| r.m[k]).collect()).collect();
    let mut worst: f64 = 0.0;
    for i in 1..traj.len() - 1 {
        let dm = Vec3R::new(
            central_derivative(&ts, &comps[0], i),
            central_derivative(&ts, &comps[1], i),
            central_derivative(&ts, &comps[2], i),
        );
        let m = traj.records[i].m;
        worst = worst.max((dm - bloch_rhs(&m, &field.eval(ts[i])?)).norm());
    }
    Ok(worst)
}
