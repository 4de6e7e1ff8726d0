//! Exact identities of the bosonic su(2) realization, checked to 1e-12.

use std::fmt::Write as _;

use blochosc::algebra::{
    annihilation_form, commutator, oscillator_hamiltonian, spin_generators, square_linear, su11_generators,
};
use blochosc::invariant::complex_magnetization;
use blochosc::{Complex64, FieldModel, PolyForm, Vec3R};

pub const TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Identity {
    pub name: String,
    pub lhs: PolyForm,
    pub rhs: PolyForm,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub name: String,
    pub error: f64,
    pub pass: bool,
    pub lhs: PolyForm,
    pub rhs: PolyForm,
}

fn identity(name: impl Into<String>, lhs: PolyForm, rhs: PolyForm) -> Identity {
    Identity { name: name.into(), lhs, rhs }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn standard_identities() -> Vec<Identity> {
    let i = c(0.0, 1.0);
    let (sx, sy, sz) = spin_generators();
    let (k1, k2, k3) = su11_generators();
    let mut out = vec![
        identity("[q, p] = i", commutator(&PolyForm::q(), &PolyForm::p()), PolyForm::scalar(i)),
        identity("[S_x, S_y] = i S_z", commutator(&sx, &sy), i * sz),
        identity("[S_y, S_z] = i S_x", commutator(&sy, &sz), i * sx),
        identity("[S_z, S_x] = i S_y", commutator(&sz, &sx), i * sy),
        identity("[K1, K2] = -i K3", commutator(&k1, &k2), -i * k3),
        identity("[K2, K3] = i K1", commutator(&k2, &k3), i * k1),
        identity("[K3, K1] = i K2", commutator(&k3, &k1), i * k2),
        identity("S_x = -K3", sx, -k3),
        identity("S_y = -i K1", sy, -i * k1),
        identity("S_z = i K2", sz, i * k2),
    ];
    let fields = [
        (FieldModel::constant(Vec3R::new(1.0, 2.0, 3.0)), 0.0),
        (FieldModel::rotating(0.7, -0.4, 0.3, 1.3), 0.9),
    ];
    for (k, (field, t)) in fields.iter().enumerate() {
        let b = field.eval(*t).expect("analytic field");
        let h = oscillator_hamiltonian(field, *t).expect("analytic field");
        let rhs = b.x * sx + b.y * sy + b.z * sz;
        out.push(identity(format!("H_osc = B.S (field {})", k + 1), h, rhs));
        let (u, du) = (c(0.3, -0.2), c(-0.1, 0.9));
        let a = annihilation_form(u, du, field, *t).expect("nondegenerate field");
        let m = complex_magnetization(u, du, field, *t).expect("nondegenerate field").0;
        out.push(identity(
            format!("a^2 = sum M_a S_a (field {})", k + 1),
            square_linear(&a).expect("linear form"),
            m.x * sx + m.y * sy + m.z * sz,
        ));
    }
    out
}

pub fn evaluate(identities: &[Identity]) -> Vec<Outcome> {
    identities
        .iter()
        .map(|id| {
            let error = id.lhs.max_abs_diff(&id.rhs);
            Outcome { name: id.name.clone(), error, pass: error <= TOLERANCE, lhs: id.lhs, rhs: id.rhs }
        })
        .collect()
}

fn show(f: &PolyForm) -> String {
    let terms = [("1", f.c0), ("q", f.cq), ("p", f.cp), ("q^2", f.cqq), ("p^2", f.cpp), ("(qp+pq)/2", f.cqp)];
    let parts: Vec<String> = terms
        .iter()
        .filter(|(_, v)| v.norm() > 0.0)
        .map(|(name, v)| format!("({}{:+}i) {name}", v.re, v.im))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

pub fn render(outcomes: &[Outcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        if o.pass {
            let _ = writeln!(out, "PASS  {}  (err {:.1e})", o.name, o.error);
        } else {
            let _ = writeln!(out, "FAIL  {}  (err {:.3e})", o.name, o.error);
            let _ = writeln!(out, "        lhs = {}", show(&o.lhs));
            let _ = writeln!(out, "        rhs = {}", show(&o.rhs));
        }
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    let _ = writeln!(out, "{passed}/{} identities hold", outcomes.len());
    out
}
