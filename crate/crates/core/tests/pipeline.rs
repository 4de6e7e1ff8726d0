//! End-to-end checks through the public API.

use blochosc::aux_solver::{
    canonical_residual, closed_form_aux_oscillating, conjugate_equation_residual, sample_closed_form, solve_aux,
    to_canonical,
};
use blochosc::bloch::{bloch_residual, integrate_bloch};
use blochosc::density::{assemble, normalized_density};
use blochosc::invariant::complex_magnetization;
use blochosc::riccati::{integrate_riccati, m_from_param, xi_from_m};
use blochosc::{Branch, Complex64, FieldModel, Grid, InvariantTrajectory, RotatingField, Vec3R};

fn chirp() -> FieldModel {
    let times: Vec<f64> = (0..=130).map(|k| -0.25 + 0.05 * k as f64).collect();
    let values = times
        .iter()
        .map(|&t| Vec3R::new(0.9 + 0.4 * (1.1 * t).sin(), -0.3 + 0.2 * t, 0.5 * (0.7 * t).cos()))
        .collect();
    FieldModel::tabulated(times, values).unwrap()
}

#[test]
fn tabulated_field_methods_agree() {
    let field = chirp();
    let grid = Grid::new(0.0, 6.0, 1e-3).unwrap();
    let (u0, du0) = (Complex64::new(0.4, 0.1), Complex64::new(-0.2, 0.3));
    let aux = solve_aux(&field, u0, du0, &grid).unwrap();
    let inv = InvariantTrajectory::from_aux(&aux, &field).unwrap();
    assert!(inv.max_null_defect() < 1e-12);
    let mr = inv.real().unit_initial_norm();
    let mi = inv.imaginary().unit_initial_norm();

    let direct = integrate_bloch(&field, mr.records[0].m, &grid).unwrap();
    assert!(mr.max_deviation(&direct) < 1e-9);
    let direct_i = integrate_bloch(&field, mi.records[0].m, &grid).unwrap();
    assert!(mi.max_deviation(&direct_i) < 1e-9);

    let path = integrate_riccati(&field.negated(), xi_from_m(&mr.records[0].m).unwrap(), &grid).unwrap();
    let dev = path
        .iter()
        .zip(&direct.records)
        .map(|((_, p), r)| (m_from_param(p) - r.m).norm())
        .fold(0.0, f64::max);
    assert!(dev < 1e-9, "{dev}");
    assert!(bloch_residual(&direct, &field).unwrap() < 1e-5);
}

#[test]
fn auxiliary_solver_is_fourth_order() {
    let r = RotatingField { b0x: 0.8, b0y: 0.3, b0z: 0.5, omega: 1.2 };
    let field = FieldModel::Rotating(r);
    let (u0, du0, _) = closed_form_aux_oscillating(&r, 1.0, 0.0, Branch::Plus, 0.0).unwrap();
    let err = |dt: f64| {
        let grid = Grid::new(0.0, 4.0, dt).unwrap();
        let aux = solve_aux(&field, u0, du0, &grid).unwrap();
        let last = aux.samples.last().unwrap();
        let (u, _, _) = closed_form_aux_oscillating(&r, 1.0, 0.0, Branch::Plus, last.t).unwrap();
        (last.u - u).norm()
    };
    let ratio = err(0.04) / err(0.02);
    assert!((12.0..20.0).contains(&ratio), "{ratio}");
}

#[test]
fn both_branches_give_invariants() {
    let r = RotatingField { b0x: 0.8, b0y: 0.3, b0z: 0.5, omega: 1.2 };
    let field = FieldModel::Rotating(r);
    let grid = Grid::new(0.0, 5.0, 1e-3).unwrap();
    for branch in [Branch::Plus, Branch::Minus] {
        let aux = sample_closed_form(&field, 1.0, 0.4, branch, &grid).unwrap();
        let mr = InvariantTrajectory::from_aux(&aux, &field).unwrap().real().unit_initial_norm();
        assert!(bloch_residual(&mr, &field).unwrap() < 1e-6);
        assert!(conjugate_equation_residual(&aux, &field).unwrap() < 1e-6);
        let v = to_canonical(&aux, &field).unwrap();
        assert!(canonical_residual(&v, &field).unwrap() < 1e-5);
    }
}

#[test]
fn normalized_density_along_a_trajectory() {
    let field = FieldModel::constant(Vec3R::new(0.3, 0.8, -0.4));
    let (u, du) = (Complex64::new(0.2, 0.1), Complex64::new(-0.3, 0.4));
    for t in [0.0, 1.0, 2.5] {
        let m = complex_magnetization(u, du, &field, t).unwrap().real().0;
        let rho = normalized_density(&m);
        assert!((rho.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(rho.is_hermitian(1e-15));
        assert!(assemble(&m).is_hermitian(0.0));
        let sq = rho.0 * rho.0;
        assert!((sq - rho.0).iter().all(|z| z.norm() < 1e-14));
    }
}

#[test]
fn readme_example() -> blochosc::Result<()> {
    use blochosc::aux_solver::default_initial_conditions;
    let field = FieldModel::rotating(1.0, 0.0, 0.0, 1.0);
    let grid = Grid::new(0.0, 10.0, 1e-3)?;
    let (u0, du0) = default_initial_conditions(&field, 0.0)?;
    let aux = solve_aux(&field, u0, du0, &grid)?;
    let m_r = InvariantTrajectory::from_aux(&aux, &field)?.real().unit_initial_norm();
    let direct = integrate_bloch(&field, m_r.records[0].m, &grid)?;
    assert!(m_r.max_deviation(&direct) < 1e-9);
    Ok(())
}
