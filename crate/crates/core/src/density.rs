//! Two-dimensional (Pauli) representation of the spin invariants.
//!
//! Here S_a = sigma_a/2 with the standard Pauli matrices, so S_a^2 = 1/4
//! holds exactly, unlike the bosonic representation in [`crate::algebra`].
//!
//! The invariant I = -sum M_a S_a is traceless with free scale, so it is not
//! a unit-trace density matrix; [`normalized_density`] provides the affine
//! map to one.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::bloch::Trajectory;
use crate::error::{Error, Result};
use crate::fields::FieldModel;
use crate::Vec3R;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinMatrix2(pub Matrix2<Complex64>);

impl SpinMatrix2 {
    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (self.0 - self.0.adjoint()).iter().all(|c| c.norm() <= tol)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn commutator(&self, other: &SpinMatrix2) -> SpinMatrix2 {
        SpinMatrix2(self.0 * other.0 - other.0 * self.0)
    }
}

/// S_x, S_y, S_z as Pauli halves.
pub fn spin_matrices() -> [SpinMatrix2; 3] {
    let half = Complex64::new(0.5, 0.0);
    [
        SpinMatrix2(Matrix2::new(ZERO, ONE, ONE, ZERO) * half),
        SpinMatrix2(Matrix2::new(ZERO, -I, I, ZERO) * half),
        SpinMatrix2(Matrix2::new(ONE, ZERO, ZERO, -ONE) * half),
    ]
}

fn combine(v: &Vec3R, sign: f64) -> SpinMatrix2 {
    let s = spin_matrices();
    let c = |x: f64| Complex64::new(x, 0.0);
    let m = s[0].0 * c(v.x) + s[1].0 * c(v.y) + s[2].0 * c(v.z);
    SpinMatrix2(m * Complex64::new(sign, 0.0))
}

/// I = -sum_a M_a S_a.
pub fn assemble(m: &Vec3R) -> SpinMatrix2 {
    combine(m, -1.0)
}

/// sum_a B_a S_a: the spin generator paired with the Bloch equation
/// dM/dt + M x B = 0 through the Liouville equation, and the image of the
/// oscillator Hamiltonian under the bosonic map.
pub fn hamiltonian(b: &Vec3R) -> SpinMatrix2 {
    combine(b, 1.0)
}

/// Eigenvalues (-|M|/2, +|M|/2) of [`assemble`].
pub fn eigenvalues(m: &Vec3R) -> (f64, f64) {
    let half = m.norm() / 2.0;
    (-half, half)
}

/// Eigenvalues of a general 2x2 matrix from its characteristic polynomial,
/// ordered by real part.
pub fn matrix_eigenvalues(m: &SpinMatrix2) -> (Complex64, Complex64) {
    let half_trace = m.trace() / 2.0;
    let disc = (half_trace * half_trace - m.0.determinant()).sqrt();
    let (a, b) = (half_trace - disc, half_trace + disc);
    if a.re <= b.re {
        (a, b)
    } else {
        (b, a)
    }
}

/// 1/2 + I/|M|: unit trace, eigenvalues {0, 1}. Returns 1/2 for M = 0.
pub fn normalized_density(m: &Vec3R) -> SpinMatrix2 {
    let n = m.norm();
    let identity = Matrix2::identity() * Complex64::new(0.5, 0.0);
    if n == 0.0 {
        return SpinMatrix2(identity);
    }
    SpinMatrix2(identity + assemble(m).0 / Complex64::new(n, 0.0))
}

/// Max over interior records of the Frobenius norm of
/// i (I(t+) - I(t-))/(t+ - t-) + [I(t), H(t)].
pub fn liouville_residual_matrix(traj: &Trajectory, field: &FieldModel) -> Result<f64> {
    if traj.len() < 3 {
        return Err(Error::InvalidInput("residual needs at least 3 records".into()));
    }
    let rec = &traj.records;
    let mut worst: f64 = 0.0;
    for k in 1..rec.len() - 1 {
        let (tm, t, tp) = (rec[k - 1].t, rec[k].t, rec[k + 1].t);
        let (hm, hp) = (t - tm, tp - t);
        // second-order derivative weights on a possibly non-uniform grid
        let denom = hm * hp * (hm + hp);
        let dm = rec[k + 1].m * (hm * hm / denom) - rec[k - 1].m * (hp * hp / denom)
            + rec[k].m * ((hp * hp - hm * hm) / denom);
        let derivative = assemble(&dm);
        let inv = assemble(&rec[k].m);
        let h = hamiltonian(&field.eval(t)?);
        let r = SpinMatrix2(derivative.0 * I + inv.commutator(&h).0);
        worst = worst.max(r.frobenius_norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{bloch_residual, integrate_bloch, Method};
    use crate::invariant::closed_form_oscillating;
    use crate::fields::RotatingField;
    use crate::odeint::Grid;
    use proptest::prelude::*;

    fn mat_close(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>, tol: f64) -> bool {
        (a - b).iter().all(|c| c.norm() <= tol)
    }

    #[test]
    fn pauli_relations_exact() {
        let s = spin_matrices();
        let quarter = Matrix2::identity() * Complex64::new(0.25, 0.0);
        for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            assert_eq!(s[a].commutator(&s[b]).0, s[c].0 * I);
        }
        for m in &s {
            assert_eq!(m.0 * m.0, quarter);
        }
    }

    #[test]
    fn assemble_examples() {
        let m = assemble(&Vec3R::new(0.0, 0.0, 1.0));
        let expected = Matrix2::new(Complex64::new(-0.5, 0.0), ZERO, ZERO, Complex64::new(0.5, 0.0));
        assert_eq!(m.0, expected);
        assert_eq!(assemble(&Vec3R::zeros()).0, Matrix2::zeros());
        let m = assemble(&Vec3R::new(1.0, 2.0, 3.0));
        assert!(((m.0 * m.0).trace() - Complex64::new(7.0, 0.0)).norm() < 1e-14);
        assert!(m.is_hermitian(0.0));
        assert_eq!(m.trace(), ZERO);
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(eigenvalues(&Vec3R::new(3.0, 4.0, 0.0)), (-2.5, 2.5));
        assert_eq!(eigenvalues(&Vec3R::zeros()), (0.0, 0.0));
    }

    proptest! {
        #[test]
        fn eigenvalues_match_characteristic_polynomial(x in -3.0..3.0f64, y in -3.0..3.0f64, z in -3.0..3.0f64) {
            let m = Vec3R::new(x, y, z);
            let (lo, hi) = eigenvalues(&m);
            let (a, b) = matrix_eigenvalues(&assemble(&m));
            prop_assert!((a - Complex64::new(lo, 0.0)).norm() <= 1e-12);
            prop_assert!((b - Complex64::new(hi, 0.0)).norm() <= 1e-12);
        }
    }

    #[test]
    fn normalized_density_is_projector() {
        let rho = normalized_density(&Vec3R::new(0.3, -1.2, 2.0));
        assert!((rho.trace() - ONE).norm() < 1e-14);
        assert!(mat_close(&(rho.0 * rho.0), &rho.0, 1e-14));
        assert_eq!(normalized_density(&Vec3R::zeros()).trace(), ONE);
    }

    #[test]
    fn liouville_residual_for_bloch_trajectories() {
        let field = FieldModel::rotating(0.7, 0.4, 0.3, 1.3);
        let grid = Grid::new(0.0, 10.0, 1e-3).unwrap();
        let traj = integrate_bloch(&field, Vec3R::new(0.3, -0.5, 0.81), &grid).unwrap();
        let l = liouville_residual_matrix(&traj, &field).unwrap();
        assert!(l <= 1e-6, "{l}");
        // both residuals measure the same equation: ||r_L||_F = |r_B| / sqrt(2)
        let b = bloch_residual(&traj, &field).unwrap();
        assert!((l / b - 0.5f64.sqrt()).abs() < 1e-3, "{}", l / b);
    }

    #[test]
    fn liouville_negative_control() {
        let field = FieldModel::constant(Vec3R::new(1.0, 0.0, 0.0));
        let grid = Grid::new(0.0, 1.0, 1e-2).unwrap();
        let m = Vec3R::new(0.0, 0.0, 1.0);
        let traj = Trajectory::sampled(Method::Direct, &field, &grid, |_| Ok(m)).unwrap();
        let r = liouville_residual_matrix(&traj, &field).unwrap();
        let expected = assemble(&m).commutator(&hamiltonian(&Vec3R::new(1.0, 0.0, 0.0))).frobenius_norm();
        assert!((r - expected).abs() < 1e-14 && r > 0.1);
    }

    #[test]
    fn closed_form_oscillating_satisfies_liouville() {
        let r = RotatingField { b0x: 1.0, b0y: 0.0, b0z: 0.0, omega: 1.0 };
        let field = FieldModel::Rotating(r);
        let grid = Grid::new(0.0, 10.0, 1e-3).unwrap();
        let traj = Trajectory::sampled(Method::ClosedForm, &field, &grid, |t| Ok(closed_form_oscillating(&r, 1.0, 0.0, t)?.0)).unwrap();
        assert!(liouville_residual_matrix(&traj, &field).unwrap() <= 1e-6);
    }
}
