//! Complex magnetization from a solution of the auxiliary equation.
//!
//! With w = (u' - i B_z u/2)/B+, the square of the linear invariant a(t)
//! maps back to the spin invariant -sum_a M_a S_a with
//!
//! ```text
//! M_x = -2 (u^2 + w^2),   M_y = 2i (u^2 - w^2),   M_z = -4i u w.
//! ```
//!
//! M is a null vector (M . M = 0 without conjugation), so its real and
//! imaginary parts have equal length and are orthogonal; each solves the
//! Bloch equation on its own.

use num_complex::Complex64;

use crate::aux_solver::{effective_frequency, AuxSolution};
use crate::bloch::{Method, Record, Trajectory};
use crate::error::{Error, Result};
use crate::fields::{ConstantField, FieldModel, RotatingField};
use crate::{Vec3C, Vec3R};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnetizationC(pub Vec3C);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnetizationR(pub Vec3R);

impl MagnetizationC {
    /// M_x^2 + M_y^2 + M_z^2 (no conjugation).
    pub fn null_sum(&self) -> Complex64 {
        self.0.x * self.0.x + self.0.y * self.0.y + self.0.z * self.0.z
    }

    /// sum_a |M_a|^2.
    pub fn magnitude_sq(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    /// |M . M| relative to sum |M_a|^2; zero for the zero vector.
    pub fn null_defect(&self) -> f64 {
        let m = self.magnitude_sq();
        if m == 0.0 {
            0.0
        } else {
            self.null_sum().norm() / m
        }
    }

    pub fn real(&self) -> MagnetizationR {
        MagnetizationR(self.0.map(|c| c.re))
    }

    pub fn imag(&self) -> MagnetizationR {
        MagnetizationR(self.0.map(|c| c.im))
    }
}

/// (Re M, Im M).
pub fn split(mc: &MagnetizationC) -> (MagnetizationR, MagnetizationR) {
    (mc.real(), mc.imag())
}

/// Relative equal-length and orthogonality defects of the two real parts:
/// (| |Mr|^2 - |Mi|^2 |, |Mr . Mi|) / |Mr|^2.
pub fn split_defects(mc: &MagnetizationC) -> (f64, f64) {
    let (r, i) = split(mc);
    let scale = r.0.norm_squared();
    if scale == 0.0 {
        return (i.0.norm_squared(), 0.0);
    }
    (
        (r.0.norm_squared() - i.0.norm_squared()).abs() / scale,
        r.0.dot(&i.0).abs() / scale,
    )
}

pub fn complex_magnetization(u: Complex64, du: Complex64, field: &FieldModel, t: f64) -> Result<MagnetizationC> {
    let s = field.sample(t)?.require_nondegenerate()?;
    let w = (du - I * s.b_z() * u / 2.0) / s.b_plus();
    let (u2, w2) = (u * u, w * w);
    Ok(MagnetizationC(Vec3C::new(
        -2.0 * (u2 + w2),
        2.0 * I * (u2 - w2),
        -4.0 * I * u * w,
    )))
}

/// Complex magnetization along every sample of an auxiliary solution.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantTrajectory {
    pub field: FieldModel,
    pub samples: Vec<(f64, MagnetizationC)>,
}

impl InvariantTrajectory {
    pub fn from_aux(aux: &AuxSolution, field: &FieldModel) -> Result<Self> {
        let samples = aux
            .samples
            .iter()
            .map(|s| complex_magnetization(s.u, s.du, field, s.t).map(|m| (s.t, m)))
            .collect::<Result<_>>()?;
        Ok(Self { field: field.clone(), samples })
    }

    fn part(&self, f: impl Fn(&MagnetizationC) -> MagnetizationR) -> Trajectory {
        let records = self.samples.iter().map(|(t, m)| Record { t: *t, m: f(m).0 }).collect();
        Trajectory::new(Method::Invariant, &self.field, records)
    }

    pub fn real(&self) -> Trajectory {
        self.part(MagnetizationC::real)
    }

    pub fn imaginary(&self) -> Trajectory {
        self.part(MagnetizationC::imag)
    }

    pub fn max_null_defect(&self) -> f64 {
        self.samples.iter().map(|(_, m)| m.null_defect()).fold(0.0, f64::max)
    }

    /// Max over samples of the two split defects.
    pub fn max_split_defects(&self) -> (f64, f64) {
        self.samples.iter().map(|(_, m)| split_defects(m)).fold((0.0, 0.0), |acc, d| {
            (acc.0.max(d.0), acc.1.max(d.1))
        })
    }
}

/// True when B0 is parallel to +z, where the constant-field closed form
/// vanishes identically.
pub fn closed_form_vanishes(field: &ConstantField) -> bool {
    let b0 = field.b0.norm();
    (b0 - field.b0.z).abs() <= 1e-12 * b0.max(1.0)
}

/// Complex closed-form magnetization for a constant field, generated by the
/// u+ solution:
///
/// ```text
/// M_x = -(M0/2) [(B0x + iB0y)^2 - (B0 - B0z)^2] e^{i(B0 t + phi)}
/// M_y =  (iM0/2) [(B0x + iB0y)^2 + (B0 - B0z)^2] e^{i(B0 t + phi)}
/// M_z =  M0 (B0x + iB0y)(B0 - B0z) e^{i(B0 t + phi)}
/// ```
pub fn closed_form_complex_constant(field: &ConstantField, m0: f64, phi: f64, t: f64) -> MagnetizationC {
    let b = field.b0;
    let b0 = b.norm();
    let transverse = Complex64::new(b.x, b.y);
    let d = b0 - b.z;
    let phase = Complex64::from_polar(1.0, b0 * t + phi);
    MagnetizationC(Vec3C::new(
        -0.5 * m0 * (transverse * transverse - d * d) * phase,
        0.5 * I * m0 * (transverse * transverse + d * d) * phase,
        m0 * transverse * d * phase,
    ))
}

/// Real part of the constant-field closed form. The imaginary part equals
/// -(1/B0) dM_r/dt.
pub fn closed_form_constant(field: &ConstantField, m0: f64, phi: f64, t: f64) -> MagnetizationR {
    let b = field.b0;
    let b0 = b.norm();
    let d = b0 - b.z;
    let (s, c) = (b0 * t + phi).sin_cos();
    let a_minus = b.x * b.x - b.y * b.y - d * d;
    let a_plus = b.x * b.x - b.y * b.y + d * d;
    MagnetizationR(Vec3R::new(
        -0.5 * m0 * a_minus * c + m0 * b.x * b.y * s,
        -0.5 * m0 * a_plus * s - m0 * b.x * b.y * c,
        m0 * d * (b.x * c - b.y * s),
    ))
}

/// Eigenvalues -+ M0 B0 (B0 - B0z)/2 of the constant-field closed-form invariant.
pub fn closed_form_constant_eigenvalues(field: &ConstantField, m0: f64) -> (f64, f64) {
    let b0 = field.b0.norm();
    let half = 0.5 * m0 * b0 * (b0 - field.b0.z);
    (-half, half)
}

/// Complex closed-form magnetization for the rotating field, with
/// D = Omega - omega - B0z:
///
/// ```text
/// M_x = -(M0/2) [(B0x + iB0y)^2 e^{-iwt} - D^2 e^{iwt}] e^{i(Omega t + phi)}
/// M_y =  (iM0/2) [(B0x + iB0y)^2 e^{-iwt} + D^2 e^{iwt}] e^{i(Omega t + phi)}
/// M_z =  M0 (B0x + iB0y) D e^{i(Omega t + phi)}
/// ```
pub fn closed_form_complex_oscillating(field: &RotatingField, m0: f64, phi: f64, t: f64) -> Result<MagnetizationC> {
    let omega_eff = effective_frequency(field)?;
    let transverse = Complex64::new(field.b0x, field.b0y);
    let d = omega_eff - field.omega - field.b0z;
    let rot = Complex64::from_polar(1.0, field.omega * t);
    let phase = Complex64::from_polar(1.0, omega_eff * t + phi);
    let a = transverse * transverse * rot.conj();
    let dd = d * d * rot;
    Ok(MagnetizationC(Vec3C::new(
        -0.5 * m0 * (a - dd) * phase,
        0.5 * I * m0 * (a + dd) * phase,
        m0 * transverse * d * phase,
    )))
}

/// Real part of the rotating-field closed form, written out in terms of
/// a = B0x^2 - B0y^2, b = 2 B0x B0y, D = Omega - omega - B0z and
/// Phi = Omega t + phi:
///
/// ```text
/// M_x = -(M0/2) [{a - D^2} cos wt + b sin wt] cos Phi
///       -(M0/2) [{a + D^2} sin wt - b cos wt] sin Phi
/// M_y = -(M0/2) [{a + D^2} cos wt + b sin wt] sin Phi
///       +(M0/2) [{a - D^2} sin wt - b cos wt] cos Phi
/// M_z =  M0 D [B0x cos Phi - B0y sin Phi]
/// ```
///
/// The `{a - D^2} sin wt` coefficient in M_y is what the real part of the
/// complex form yields; with `{a + D^2}` there the result no longer solves
/// the Bloch equation for omega != 0. At omega = 0 this reduces to
/// [`closed_form_constant`].
pub fn closed_form_oscillating(field: &RotatingField, m0: f64, phi: f64, t: f64) -> Result<MagnetizationR> {
    let omega_eff = effective_frequency(field)?;
    let a = field.b0x * field.b0x - field.b0y * field.b0y;
    let b = 2.0 * field.b0x * field.b0y;
    let d = omega_eff - field.omega - field.b0z;
    let d2 = d * d;
    let (sw, cw) = (field.omega * t).sin_cos();
    let (sp, cp) = (omega_eff * t + phi).sin_cos();
    let h = 0.5 * m0;
    Ok(MagnetizationR(Vec3R::new(
        -h * ((a - d2) * cw + b * sw) * cp - h * ((a + d2) * sw - b * cw) * sp,
        -h * ((a + d2) * cw + b * sw) * sp + h * ((a - d2) * sw - b * cw) * cp,
        m0 * d * (field.b0x * cp - field.b0y * sp),
    )))
}

/// Steady precession in a rotating field with B0y = 0:
/// M = (A cos wt, -A sin wt, M0z), A = 2 B0+ M0z/(omega + B0z), B0+ = B0x/2.
pub fn resonance_solution(field: &RotatingField, m0z: f64, t: f64) -> Result<MagnetizationR> {
    if field.b0y != 0.0 {
        return Err(Error::InvalidInput("resonance solution needs B0y = 0".into()));
    }
    let denom = field.omega + field.b0z;
    if denom.abs() <= 1e-12 * (field.omega.abs() + field.b0z.abs()).max(1.0) {
        return Err(Error::ResonanceDenominatorZero);
    }
    let amplitude = 2.0 * field.b0_plus().re * m0z / denom;
    let (s, c) = (field.omega * t).sin_cos();
    Ok(MagnetizationR(Vec3R::new(amplitude * c, -amplitude * s, m0z)))
}
