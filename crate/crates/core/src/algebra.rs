//! Exact algebra of Weyl-ordered polynomials of degree at most two in the
//! canonical pair (q, p) with [q, p] = i.
//!
//! The one-mode bosonic realization of su(2) used here is
//!
//! ```text
//! S_x = (p^2 + q^2)/4,   S_y = i (p^2 - q^2)/4,   S_z = i (pq + qp)/4,
//! ```
//!
//! i.e. S_x = -K3, S_y = -i K1, S_z = i K2 in terms of the su(1,1)
//! generators K1, K2, K3. S_y and S_z are anti-Hermitian. The Casimir-type
//! relation S_a^2 = 1/4 of the two-dimensional representation does NOT hold
//! here (the oscillator has infinitely many states); S_a * S_a is degree
//! four and is never formed.
//!
//! Commutators of degree-two forms are computed as `i` times the Poisson
//! bracket of their Weyl symbols, which is exact for this degree.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::FieldModel;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// `c0 + cq q + cp p + cqq q^2 + cpp p^2 + cqp (qp + pq)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PolyForm {
    pub c0: Complex64,
    pub cq: Complex64,
    pub cp: Complex64,
    pub cqq: Complex64,
    pub cpp: Complex64,
    pub cqp: Complex64,
}

/// `sx S_x + sy S_y + sz S_z + scalar`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SpinCoeffs {
    pub sx: Complex64,
    pub sy: Complex64,
    pub sz: Complex64,
    pub scalar: Complex64,
}

impl SpinCoeffs {
    pub fn new(sx: Complex64, sy: Complex64, sz: Complex64) -> Self {
        Self { sx, sy, sz, scalar: ZERO }
    }

    pub fn max_abs_diff(&self, other: &SpinCoeffs) -> f64 {
        [self.sx - other.sx, self.sy - other.sy, self.sz - other.sz, self.scalar - other.scalar]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

impl PolyForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: Complex64) -> Self {
        Self { c0: c, ..Self::default() }
    }

    pub fn q() -> Self {
        Self { cq: Complex64::new(1.0, 0.0), ..Self::default() }
    }

    pub fn p() -> Self {
        Self { cp: Complex64::new(1.0, 0.0), ..Self::default() }
    }

    pub fn linear(cq: Complex64, cp: Complex64) -> Self {
        Self { cq, cp, ..Self::default() }
    }

    pub fn quadratic(cqq: Complex64, cpp: Complex64, cqp: Complex64) -> Self {
        Self { cqq, cpp, cqp, ..Self::default() }
    }

    /// Builds a quadratic form from separately ordered cross terms
    /// `qp_coeff * q p + pq_coeff * p q`, normalized to Weyl order using
    /// q p = (qp + pq)/2 + i/2 and p q = (qp + pq)/2 - i/2.
    pub fn from_ordered(cqq: Complex64, cpp: Complex64, qp_coeff: Complex64, pq_coeff: Complex64) -> Self {
        Self {
            c0: (qp_coeff - pq_coeff) * I / 2.0,
            cqq,
            cpp,
            cqp: qp_coeff + pq_coeff,
            ..Self::default()
        }
    }

    pub fn is_linear(&self) -> bool {
        self.cqq == ZERO && self.cpp == ZERO && self.cqp == ZERO
    }

    pub fn has_linear_terms(&self) -> bool {
        self.cq != ZERO || self.cp != ZERO
    }

    pub fn degree(&self) -> usize {
        if !self.is_linear() {
            2
        } else if self.has_linear_terms() {
            1
        } else {
            0
        }
    }

    fn coeffs(&self) -> [Complex64; 6] {
        [self.c0, self.cq, self.cp, self.cqq, self.cpp, self.cqp]
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &PolyForm) -> f64 {
        (*self - *other).coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Coefficientwise complex conjugation, i.e. the adjoint for real q, p.
    pub fn conj(&self) -> Self {
        let c = self.coeffs().map(|c| c.conj());
        Self { c0: c[0], cq: c[1], cp: c[2], cqq: c[3], cpp: c[4], cqp: c[5] }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.conj()) <= tol
    }

    fn d_dq(&self) -> Symbol1 {
        Symbol1 { c0: self.cq, cq: self.cqq * 2.0, cp: self.cqp }
    }

    fn d_dp(&self) -> Symbol1 {
        Symbol1 { c0: self.cp, cq: self.cqp, cp: self.cpp * 2.0 }
    }
}

/// Affine symbol `c0 + cq q + cp p` (commuting variables).
#[derive(Clone, Copy)]
struct Symbol1 {
    c0: Complex64,
    cq: Complex64,
    cp: Complex64,
}

impl Symbol1 {
    /// Classical product of two affine symbols as a Weyl symbol.
    fn times(self, o: Symbol1) -> PolyForm {
        PolyForm {
            c0: self.c0 * o.c0,
            cq: self.c0 * o.cq + self.cq * o.c0,
            cp: self.c0 * o.cp + self.cp * o.c0,
            cqq: self.cq * o.cq,
            cpp: self.cp * o.cp,
            cqp: self.cq * o.cp + self.cp * o.cq,
        }
    }
}

macro_rules! coeffwise {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for PolyForm {
            type Output = PolyForm;
            fn $method(self, o: PolyForm) -> PolyForm {
                PolyForm {
                    c0: self.c0 $op o.c0,
                    cq: self.cq $op o.cq,
                    cp: self.cp $op o.cp,
                    cqq: self.cqq $op o.cqq,
                    cpp: self.cpp $op o.cpp,
                    cqp: self.cqp $op o.cqp,
                }
            }
        }
    };
}

coeffwise!(Add, add, +);
coeffwise!(Sub, sub, -);

impl Mul<PolyForm> for Complex64 {
    type Output = PolyForm;
    fn mul(self, f: PolyForm) -> PolyForm {
        PolyForm {
            c0: self * f.c0,
            cq: self * f.cq,
            cp: self * f.cp,
            cqq: self * f.cqq,
            cpp: self * f.cpp,
            cqp: self * f.cqp,
        }
    }
}

impl Mul<PolyForm> for f64 {
    type Output = PolyForm;
    fn mul(self, f: PolyForm) -> PolyForm {
        Complex64::new(self, 0.0) * f
    }
}

impl Neg for PolyForm {
    type Output = PolyForm;
    fn neg(self) -> PolyForm {
        -1.0 * self
    }
}

/// Poisson bracket `{a, b} = a_q b_p - a_p b_q` of the Weyl symbols.
pub fn poisson_bracket(a: &PolyForm, b: &PolyForm) -> PolyForm {
    a.d_dq().times(b.d_dp()) - a.d_dp().times(b.d_dq())
}

/// `[a, b]`, exact for degree <= 2.
pub fn commutator(a: &PolyForm, b: &PolyForm) -> PolyForm {
    I * poisson_bracket(a, b)
}

/// Operator product `a b` in Weyl order. Only products whose total degree
/// stays within 2 are representable; for those the Moyal series stops at
/// `ab + (i/2){a, b}`.
pub fn weyl_product(a: &PolyForm, b: &PolyForm) -> Result<PolyForm> {
    let degree = a.degree() + b.degree();
    if degree > 2 {
        return Err(Error::DegreeOverflow(degree));
    }
    let sa = Symbol1 { c0: a.c0, cq: a.cq, cp: a.cp };
    let sb = Symbol1 { c0: b.c0, cq: b.cq, cp: b.cp };
    let bracket = poisson_bracket(a, b);
    Ok(sa.times(sb) + (I / 2.0) * bracket)
}

/// `(S_x, S_y, S_z)` in the one-mode bosonic representation.
pub fn spin_generators() -> (PolyForm, PolyForm, PolyForm) {
    let quarter = Complex64::new(0.25, 0.0);
    let sx = PolyForm::quadratic(quarter, quarter, ZERO);
    let sy = PolyForm::quadratic(-I * 0.25, I * 0.25, ZERO);
    // i (pq + qp)/4 = (i/2) (pq + qp)/2
    let sz = PolyForm::quadratic(ZERO, ZERO, I * 0.5);
    (sx, sy, sz)
}

/// `(K1, K2, K3)` of su(1,1) with d/dq -> i p:
/// K1 = (q^2 - p^2)/4, K2 = (qp + pq)/4, K3 = -(p^2 + q^2)/4.
pub fn su11_generators() -> (PolyForm, PolyForm, PolyForm) {
    let quarter = Complex64::new(0.25, 0.0);
    let k1 = PolyForm::quadratic(quarter, -quarter, ZERO);
    // -(i/2)(q d/dq + 1/2) with q d/dq = i q p, q p normalized to Weyl order
    let k2 = (-I / 2.0) * (I * PolyForm::from_ordered(ZERO, ZERO, Complex64::new(1.0, 0.0), ZERO) + PolyForm::scalar(Complex64::new(0.5, 0.0)));
    let k3 = PolyForm::quadratic(-quarter, -quarter, ZERO);
    (k1, k2, k3)
}

/// Inverse of the bosonic representation on purely quadratic forms, using
/// p^2 = 2(S_x - i S_y), q^2 = 2(S_x + i S_y) and (pq + qp)/2 = -2i S_z.
pub fn quadratic_to_spin(f: &PolyForm) -> Result<SpinCoeffs> {
    if f.has_linear_terms() {
        return Err(Error::NonQuadratic);
    }
    Ok(SpinCoeffs {
        sx: (f.cqq + f.cpp) * 2.0,
        sy: (f.cqq - f.cpp) * I * 2.0,
        sz: -I * 2.0 * f.cqp,
        scalar: f.c0,
    })
}

pub fn spin_to_quadratic(s: &SpinCoeffs) -> PolyForm {
    let (sx, sy, sz) = spin_generators();
    s.sx * sx + s.sy * sy + s.sz * sz + PolyForm::scalar(s.scalar)
}

/// H(t) = B+ p^2/2 + B+* q^2/2 + (i B_z/2) (pq + qp)/2.
///
/// Under [`quadratic_to_spin`] this is `B_x S_x + B_y S_y + B_z S_z`, the
/// spin generator whose Liouville flow is dM/dt + M x B = 0. It is not
/// Hermitian unless B_y = B_z = 0.
pub fn oscillator_hamiltonian(field: &FieldModel, t: f64) -> Result<PolyForm> {
    let s = field.sample(t)?;
    let bp = s.b_plus();
    Ok(PolyForm::quadratic(bp.conj() / 2.0, bp / 2.0, I * s.b_z() / 2.0))
}

/// Linear invariant a(t) = -i [u p - (1/B+)(u' - i B_z u/2) q].
pub fn annihilation_form(u: Complex64, du: Complex64, field: &FieldModel, t: f64) -> Result<PolyForm> {
    let s = field.sample(t)?.require_nondegenerate()?;
    let w = (du - I * s.b_z() * u / 2.0) / s.b_plus();
    Ok(PolyForm::linear(I * w, -I * u))
}

/// `(cp p + cq q)^2 = cp^2 p^2 + cq^2 q^2 + cp cq (pq + qp)`.
pub fn square_linear(l: &PolyForm) -> Result<PolyForm> {
    if !l.is_linear() {
        return Err(Error::NonLinear);
    }
    weyl_product(l, l)
}

/// Coefficient norm of `i (F(t+h) - F(t-h))/(2h) + [F(t), H(t)]`.
pub fn liouville_residual_form<F>(form_at: F, field: &FieldModel, t: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<PolyForm>,
{
    if h <= 0.0 {
        return Err(Error::InvalidInput(format!("step h = {h} must be positive")));
    }
    let derivative = (1.0 / (2.0 * h)) * (form_at(t + h)? - form_at(t - h)?);
    let residual = I * derivative + commutator(&form_at(t)?, &oscillator_hamiltonian(field, t)?);
    Ok(residual.coeff_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Vec3R;
    use proptest::prelude::*;

    const TOL: f64 = 1e-12;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn canonical_commutator() {
        let r = commutator(&PolyForm::q(), &PolyForm::p());
        assert!(r.max_abs_diff(&PolyForm::scalar(I)) < TOL);
    }

    #[test]
    fn su2_relations() {
        let (sx, sy, sz) = spin_generators();
        assert!(commutator(&sx, &sy).max_abs_diff(&(I * sz)) < TOL);
        assert!(commutator(&sy, &sz).max_abs_diff(&(I * sx)) < TOL);
        assert!(commutator(&sz, &sx).max_abs_diff(&(I * sy)) < TOL);
        assert!(commutator(&sx, &sx).coeff_norm() == 0.0);
    }

    #[test]
    fn su11_relations_and_maps() {
        let (k1, k2, k3) = su11_generators();
        let (sx, sy, sz) = spin_generators();
        assert!(commutator(&k1, &k2).max_abs_diff(&(-I * k3)) < TOL);
        assert!(commutator(&k2, &k3).max_abs_diff(&(I * k1)) < TOL);
        assert!(commutator(&k3, &k1).max_abs_diff(&(I * k2)) < TOL);
        assert!(sx.max_abs_diff(&(-k3)) < TOL);
        assert!(sy.max_abs_diff(&(-I * k1)) < TOL);
        assert!(sz.max_abs_diff(&(I * k2)) < TOL);
        // K1, K2, K3 Hermitian; S_y, S_z anti-Hermitian
        assert!(k1.is_hermitian(TOL) && k2.is_hermitian(TOL) && k3.is_hermitian(TOL));
        assert!(sy.conj().max_abs_diff(&(-sy)) < TOL);
        assert!(sz.conj().max_abs_diff(&(-sz)) < TOL);
    }

    #[test]
    fn sx_coefficients() {
        let (sx, _, _) = spin_generators();
        assert_eq!(sx, PolyForm::quadratic(c(0.25, 0.0), c(0.25, 0.0), ZERO));
    }

    #[test]
    fn weyl_normalization_of_ordered_products() {
        // q p - p q = i
        let f = PolyForm::from_ordered(ZERO, ZERO, c(1.0, 0.0), c(-1.0, 0.0));
        assert!(f.max_abs_diff(&PolyForm::scalar(I)) < TOL);
        // q p from the product of q and p
        let qp = weyl_product(&PolyForm::q(), &PolyForm::p()).unwrap();
        assert!(qp.max_abs_diff(&PolyForm::from_ordered(ZERO, ZERO, c(1.0, 0.0), ZERO)) < TOL);
    }

    #[test]
    fn quadratic_to_spin_examples() {
        let p2 = PolyForm::quadratic(ZERO, c(1.0, 0.0), ZERO);
        let s = quadratic_to_spin(&p2).unwrap();
        assert!(s.max_abs_diff(&SpinCoeffs::new(c(2.0, 0.0), c(0.0, -2.0), ZERO)) < TOL);

        let (sx, _, _) = spin_generators();
        let s = quadratic_to_spin(&sx).unwrap();
        assert!(s.max_abs_diff(&SpinCoeffs::new(c(1.0, 0.0), ZERO, ZERO)) < TOL);

        let cross = PolyForm::quadratic(ZERO, ZERO, c(1.0, 0.0));
        let s = quadratic_to_spin(&cross).unwrap();
        assert!(s.max_abs_diff(&SpinCoeffs::new(ZERO, ZERO, c(0.0, -2.0))) < TOL);

        assert_eq!(quadratic_to_spin(&PolyForm::q()), Err(Error::NonQuadratic));
    }

    #[test]
    fn oscillator_hamiltonian_examples() {
        let h = oscillator_hamiltonian(&FieldModel::constant(Vec3R::new(1.0, 0.0, 0.0)), 0.0).unwrap();
        assert!(h.max_abs_diff(&PolyForm::quadratic(c(0.25, 0.0), c(0.25, 0.0), ZERO)) < TOL);

        let h = oscillator_hamiltonian(&FieldModel::constant(Vec3R::new(0.0, 0.0, 1.0)), 0.0).unwrap();
        assert!(h.max_abs_diff(&PolyForm::quadratic(ZERO, ZERO, c(0.0, 0.5))) < TOL);

        // maps onto +B.S (the Liouville-consistent spin generator)
        let h = oscillator_hamiltonian(&FieldModel::constant(Vec3R::new(1.0, 2.0, 3.0)), 0.0).unwrap();
        let s = quadratic_to_spin(&h).unwrap();
        assert!(s.max_abs_diff(&SpinCoeffs::new(c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0))) < TOL);
    }

    #[test]
    fn oscillator_hamiltonian_hermiticity() {
        let herm = oscillator_hamiltonian(&FieldModel::constant(Vec3R::new(1.3, 0.0, 0.0)), 0.0).unwrap();
        assert!(herm.is_hermitian(TOL));
        for b in [Vec3R::new(1.0, 0.5, 0.0), Vec3R::new(1.0, 0.0, 0.5)] {
            let h = oscillator_hamiltonian(&FieldModel::constant(b), 0.0).unwrap();
            assert!(!h.is_hermitian(1e-3));
        }
    }

    #[test]
    fn annihilation_form_examples() {
        let f = FieldModel::constant(Vec3R::new(1.0, 0.0, 0.0));
        let a = annihilation_form(c(1.0, 0.0), ZERO, &f, 0.0).unwrap();
        assert!(a.max_abs_diff(&PolyForm::linear(ZERO, -I)) < TOL);
        let a = annihilation_form(ZERO, c(1.0, 0.0), &f, 0.0).unwrap();
        assert!(a.max_abs_diff(&PolyForm::linear(c(0.0, 2.0), ZERO)) < TOL);

        let degenerate = FieldModel::constant(Vec3R::new(0.0, 0.0, 1.0));
        assert_eq!(
            annihilation_form(c(1.0, 0.0), ZERO, &degenerate, 2.0),
            Err(Error::DegenerateField { t: 2.0 })
        );
    }

    #[test]
    fn square_linear_examples() {
        let p2 = square_linear(&PolyForm::p()).unwrap();
        assert!(p2.max_abs_diff(&PolyForm::quadratic(ZERO, c(1.0, 0.0), ZERO)) < TOL);

        let s = square_linear(&(PolyForm::p() + PolyForm::q())).unwrap();
        // p^2 + q^2 + (pq + qp) -> cqp = 2
        assert!(s.max_abs_diff(&PolyForm::quadratic(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0))) < TOL);

        let (sx, _, _) = spin_generators();
        assert_eq!(square_linear(&sx), Err(Error::NonLinear));
        assert_eq!(weyl_product(&sx, &sx), Err(Error::DegreeOverflow(4)));
    }

    #[test]
    fn a_squared_gives_complex_magnetization() {
        // u = 1/2, du = i/4, B = (1,0,0): a^2 = 0 S_x + i S_y + 1 S_z, coefficients equal to M
        let f = FieldModel::constant(Vec3R::new(1.0, 0.0, 0.0));
        let a = annihilation_form(c(0.5, 0.0), c(0.0, 0.25), &f, 0.0).unwrap();
        let s = quadratic_to_spin(&square_linear(&a).unwrap()).unwrap();
        let expected = SpinCoeffs::new(ZERO, I, c(1.0, 0.0));
        assert!(s.max_abs_diff(&expected) < TOL, "{s:?}");
    }

    #[test]
    fn liouville_residual_of_stationary_hamiltonian() {
        let f = FieldModel::constant(Vec3R::new(0.3, -1.0, 0.7));
        let r = liouville_residual_form(|t| oscillator_hamiltonian(&f, t).map(|h| c(2.5, 1.0) * h), &f, 1.0, 1e-3).unwrap();
        assert!(r < 1e-14);
        assert!(liouville_residual_form(|t| oscillator_hamiltonian(&f, t), &f, 1.0, 0.0).is_err());
    }

    #[test]
    fn liouville_residual_of_annihilation_form() {
        let f = FieldModel::constant(Vec3R::new(1.0, 0.0, 0.0));
        // u(t) = exp(i t/2)/2 solves the auxiliary equation for this field
        let u = |t: f64| Complex64::from_polar(0.5, t / 2.0);
        let exact = |t: f64| annihilation_form(u(t), I * 0.5 * u(t), &f, t);
        let r = liouville_residual_form(exact, &f, 1.0, 1e-4).unwrap();
        assert!(r < 1e-6, "{r}");

        let fake = |t: f64| annihilation_form(c(1.0, 0.0), ZERO, &f, t);
        let r = liouville_residual_form(fake, &f, 1.0, 1e-4).unwrap();
        assert!(r > 1e-2, "{r}");
    }

    fn arb_c() -> impl Strategy<Value = Complex64> {
        (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| c(a, b))
    }

    fn arb_form() -> impl Strategy<Value = PolyForm> {
        prop::array::uniform6(arb_c()).prop_map(|k| PolyForm { c0: k[0], cq: k[1], cp: k[2], cqq: k[3], cpp: k[4], cqp: k[5] })
    }

    proptest! {
        #[test]
        fn commutator_is_antisymmetric_and_bilinear(a in arb_form(), b in arb_form(), d in arb_form(), k in arb_c()) {
            let ab = commutator(&a, &b);
            let ba = commutator(&b, &a);
            prop_assert!((ab + ba).coeff_norm() < 1e-12);
            let lhs = commutator(&(k * a + d), &b);
            let rhs = k * commutator(&a, &b) + commutator(&d, &b);
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-11);
        }

        #[test]
        fn jacobi_identity(a in arb_form(), b in arb_form(), d in arb_form()) {
            let j = commutator(&a, &commutator(&b, &d))
                + commutator(&b, &commutator(&d, &a))
                + commutator(&d, &commutator(&a, &b));
            prop_assert!(j.coeff_norm() < 1e-10);
        }

        #[test]
        fn spin_map_round_trips(sx in arb_c(), sy in arb_c(), sz in arb_c(), s0 in arb_c()) {
            let s = SpinCoeffs { sx, sy, sz, scalar: s0 };
            let back = quadratic_to_spin(&spin_to_quadratic(&s)).unwrap();
            prop_assert!(back.max_abs_diff(&s) < 1e-12);
        }

        #[test]
        fn quadratic_map_round_trips(a in arb_form()) {
            let f = PolyForm { cq: ZERO, cp: ZERO, ..a };
            let back = spin_to_quadratic(&quadratic_to_spin(&f).unwrap());
            prop_assert!(back.max_abs_diff(&f) < 1e-12);
        }
    }
}
