//! Time-dependent magnetic field models.
//!
//! Units are dimensionless with the gyromagnetic factor absorbed into the
//! field (hbar = 1, gamma = 1), so field strength and angular frequency share
//! reciprocal-time units.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::Vec3R;

/// |B+| below `DEGENERACY_THRESHOLD * max(1, |B|)` counts as B+ = 0.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantField {
    pub b0: Vec3R,
}

/// Field rotating in the xy-plane on top of a static z component:
///
/// B_x(t) =  B0x cos(wt) + B0y sin(wt)
/// B_y(t) = -B0x sin(wt) + B0y cos(wt)
/// B_z(t) =  B0z
///
/// so that B+(t) = B0+ exp(-i w t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatingField {
    pub b0x: f64,
    pub b0y: f64,
    pub b0z: f64,
    pub omega: f64,
}

impl RotatingField {
    pub fn b0_plus(&self) -> Complex64 {
        Complex64::new(self.b0x, self.b0y) / 2.0
    }

    pub fn b0_norm_sq(&self) -> f64 {
        self.b0x * self.b0x + self.b0y * self.b0y + self.b0z * self.b0z
    }
}

/// Sampled field interpolated by a natural cubic spline per component.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedField {
    times: Vec<f64>,
    values: Vec<Vec3R>,
    splines: [CubicSpline; 3],
}

impl TabulatedField {
    pub fn new(times: Vec<f64>, values: Vec<Vec3R>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidField(format!(
                "{} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if times.len() < 4 {
            return Err(Error::InvalidField(format!(
                "tabulated field needs at least 4 samples, got {}",
                times.len()
            )));
        }
        if times.iter().any(|t| !t.is_finite()) || values.iter().any(|v| !v.iter().all(|c| c.is_finite())) {
            return Err(Error::InvalidField("non-finite sample".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidField("sample times must be strictly increasing".into()));
        }
        let component = |k: usize| {
            let ys: Vec<f64> = values.iter().map(|v| v[k]).collect();
            CubicSpline::natural(&times, &ys)
        };
        let splines = [component(0), component(1), component(2)];
        Ok(Self { times, values, splines })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[Vec3R] {
        &self.values
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.times[0], self.times[self.times.len() - 1])
    }

    fn sample(&self, t: f64) -> Result<FieldSample> {
        let (start, end) = self.domain();
        if !(start..=end).contains(&t) {
            return Err(Error::OutOfDomain { t, start, end });
        }
        let mut b = Vec3R::zeros();
        let mut db = Vec3R::zeros();
        let mut ddb = Vec3R::zeros();
        for k in 0..3 {
            let (v, d1, d2) = self.splines[k].eval(t);
            b[k] = v;
            db[k] = d1;
            ddb[k] = d2;
        }
        Ok(FieldSample { t, b, db, ddb })
    }
}

#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum FieldModel {
    Constant(ConstantField),
    Rotating(RotatingField),
    Tabulated(TabulatedField),
}

/// Field value and its first two time derivatives at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub t: f64,
    pub b: Vec3R,
    pub db: Vec3R,
    pub ddb: Vec3R,
}

impl FieldSample {
    /// B+ = (B_x + i B_y) / 2.
    pub fn b_plus(&self) -> Complex64 {
        Complex64::new(self.b.x, self.b.y) / 2.0
    }

    pub fn b_plus_dot(&self) -> Complex64 {
        Complex64::new(self.db.x, self.db.y) / 2.0
    }

    pub fn b_plus_ddot(&self) -> Complex64 {
        Complex64::new(self.ddb.x, self.ddb.y) / 2.0
    }

    /// B- = conj(B+).
    pub fn b_minus(&self) -> Complex64 {
        self.b_plus().conj()
    }

    pub fn b_minus_dot(&self) -> Complex64 {
        self.b_plus_dot().conj()
    }

    pub fn b_z(&self) -> f64 {
        self.b.z
    }

    pub fn b_z_dot(&self) -> f64 {
        self.db.z
    }

    pub fn norm_sq(&self) -> f64 {
        self.b.norm_squared()
    }

    pub fn is_degenerate(&self) -> bool {
        self.b_plus().norm() < DEGENERACY_THRESHOLD * self.b.norm().max(1.0)
    }

    pub fn require_nondegenerate(self) -> Result<Self> {
        if self.is_degenerate() {
            Err(Error::DegenerateField { t: self.t })
        } else {
            Ok(self)
        }
    }
}

impl FieldModel {
    pub fn constant(b0: Vec3R) -> Self {
        FieldModel::Constant(ConstantField { b0 })
    }

    pub fn rotating(b0x: f64, b0y: f64, b0z: f64, omega: f64) -> Self {
        FieldModel::Rotating(RotatingField { b0x, b0y, b0z, omega })
    }

    pub fn tabulated(times: Vec<f64>, values: Vec<Vec3R>) -> Result<Self> {
        TabulatedField::new(times, values).map(FieldModel::Tabulated)
    }

    /// Interval on which the field can be evaluated; `None` means all t.
    pub fn domain(&self) -> Option<(f64, f64)> {
        match self {
            FieldModel::Tabulated(tab) => Some(tab.domain()),
            _ => None,
        }
    }

    pub fn sample(&self, t: f64) -> Result<FieldSample> {
        match self {
            FieldModel::Constant(c) => Ok(FieldSample {
                t,
                b: c.b0,
                db: Vec3R::zeros(),
                ddb: Vec3R::zeros(),
            }),
            FieldModel::Rotating(r) => {
                let (s, c) = (r.omega * t).sin_cos();
                let w = r.omega;
                let b = Vec3R::new(r.b0x * c + r.b0y * s, -r.b0x * s + r.b0y * c, r.b0z);
                let db = Vec3R::new(w * (-r.b0x * s + r.b0y * c), -w * (r.b0x * c + r.b0y * s), 0.0);
                let ddb = Vec3R::new(-w * w * b.x, -w * w * b.y, 0.0);
                Ok(FieldSample { t, b, db, ddb })
            }
            FieldModel::Tabulated(tab) => tab.sample(t),
        }
    }

    pub fn eval(&self, t: f64) -> Result<Vec3R> {
        self.sample(t).map(|s| s.b)
    }

    pub fn b_plus(&self, t: f64) -> Result<Complex64> {
        self.sample(t).map(|s| s.b_plus())
    }

    pub fn b_plus_dot(&self, t: f64) -> Result<Complex64> {
        self.sample(t).map(|s| s.b_plus_dot())
    }

    pub fn b_plus_ddot(&self, t: f64) -> Result<Complex64> {
        self.sample(t).map(|s| s.b_plus_ddot())
    }

    pub fn b_z_dot(&self, t: f64) -> Result<f64> {
        self.sample(t).map(|s| s.b_z_dot())
    }

    /// The field with B replaced by -B everywhere.
    pub fn negated(&self) -> Self {
        match self {
            FieldModel::Constant(c) => FieldModel::constant(-c.b0),
            FieldModel::Rotating(r) => FieldModel::rotating(-r.b0x, -r.b0y, -r.b0z, r.omega),
            FieldModel::Tabulated(tab) => FieldModel::Tabulated(TabulatedField {
                times: tab.times.clone(),
                values: tab.values.iter().map(|v| -v).collect(),
                splines: [tab.splines[0].negated(), tab.splines[1].negated(), tab.splines[2].negated()],
            }),
        }
    }

    /// Largest angular frequency present: max of |B|, |omega| and the
    /// effective rotating-frame frequency.
    pub fn characteristic_frequency(&self) -> f64 {
        match self {
            FieldModel::Constant(c) => c.b0.norm(),
            FieldModel::Rotating(r) => {
                let disc = r.b0_norm_sq() + 2.0 * r.omega * r.b0z + r.omega * r.omega;
                r.b0_norm_sq().sqrt().max(r.omega.abs()).max(disc.max(0.0).sqrt())
            }
            FieldModel::Tabulated(tab) => tab.values.iter().map(|v| v.norm()).fold(0.0, f64::max),
        }
    }
}

/// Natural cubic spline through (x_i, y_i).
#[derive(Debug, Clone, PartialEq)]
struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    // second derivatives at the knots
    m: Vec<f64>,
}

impl CubicSpline {
    fn natural(xs: &[f64], ys: &[f64]) -> Self {
        let n = xs.len();
        let mut m = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm on the interior knots.
            let k = n - 2;
            let mut diag = vec![0.0; k];
            let mut upper = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            for j in 0..k {
                let i = j + 1;
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                diag[j] = 2.0 * (h0 + h1);
                upper[j] = h1;
                rhs[j] = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
            }
            for j in 1..k {
                let lower = xs[j + 1] - xs[j];
                let f = lower / diag[j - 1];
                diag[j] -= f * upper[j - 1];
                rhs[j] -= f * rhs[j - 1];
            }
            m[k] = rhs[k - 1] / diag[k - 1];
            for j in (0..k - 1).rev() {
                m[j + 1] = (rhs[j] - upper[j] * m[j + 2]) / diag[j];
            }
        }
        Self { xs: xs.to_vec(), ys: ys.to_vec(), m }
    }

    fn negated(&self) -> Self {
        Self {
            xs: self.xs.clone(),
            ys: self.ys.iter().map(|y| -y).collect(),
            m: self.m.iter().map(|y| -y).collect(),
        }
    }

    /// Value, first and second derivative at x (x inside the knot range).
    fn eval(&self, x: f64) -> (f64, f64, f64) {
        let n = self.xs.len();
        let i = self.xs.partition_point(|&k| k <= x).clamp(1, n - 1) - 1;
        let h = self.xs[i + 1] - self.xs[i];
        let a = self.xs[i + 1] - x;
        let b = x - self.xs[i];
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let c0 = self.ys[i] / h - m0 * h / 6.0;
        let c1 = self.ys[i + 1] / h - m1 * h / 6.0;
        let value = m0 * a.powi(3) / (6.0 * h) + m1 * b.powi(3) / (6.0 * h) + c0 * a + c1 * b;
        let d1 = -m0 * a * a / (2.0 * h) + m1 * b * b / (2.0 * h) - c0 + c1;
        let d2 = (m0 * a + m1 * b) / h;
        (value, d1, d2)
    }
}
