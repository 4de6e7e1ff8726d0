//! Fixed-step classical Runge-Kutta integration over real or complex state
//! vectors, plus the finite-difference stencils used by residual checks.

use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Scalar type of an ODE state vector.
pub trait OdeScalar: Copy + Add<Output = Self> + Mul<f64, Output = Self> + Default {
    fn is_finite(&self) -> bool;
}

impl OdeScalar for f64 {
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl OdeScalar for Complex64 {
    fn is_finite(&self) -> bool {
        Complex64::is_finite(*self)
    }
}

/// Uniform time grid from `t0` to `t1`; the last step is shortened so the
/// final node lands exactly on `t1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    t0: f64,
    t1: f64,
    dt: f64,
}

impl Grid {
    pub fn new(t0: f64, t1: f64, dt: f64) -> Result<Self> {
        if !(t0.is_finite() && t1.is_finite() && dt.is_finite()) {
            return Err(Error::InvalidGrid("non-finite bound".into()));
        }
        if t1 <= t0 {
            return Err(Error::InvalidGrid(format!("t1 = {t1} must exceed t0 = {t0}")));
        }
        if dt <= 0.0 {
            return Err(Error::InvalidGrid(format!("dt = {dt} must be positive")));
        }
        Ok(Self { t0, t1, dt })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> usize {
        // the relative slack keeps 10/1e-3 from producing a 1e-12 tail step
        let ratio = (self.t1 - self.t0) / self.dt;
        ((ratio - 1e-9 * ratio.max(1.0)).ceil() as usize).max(1)
    }

    pub fn node(&self, k: usize) -> f64 {
        if k >= self.steps() {
            self.t1
        } else {
            self.t0 + k as f64 * self.dt
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.steps()).map(|k| self.node(k)).collect()
    }
}

/// First-order system `y' = f(t, y)` with its initial state.
pub struct OdeProblem<S, F> {
    pub state0: Vec<S>,
    pub rhs: F,
}

impl<S, F> OdeProblem<S, F>
where
    S: OdeScalar,
    F: Fn(f64, &[S], &mut [S]) -> Result<()>,
{
    pub fn new(state0: Vec<S>, rhs: F) -> Self {
        Self { state0, rhs }
    }

    pub fn dimension(&self) -> usize {
        self.state0.len()
    }
}

fn axpy<S: OdeScalar>(out: &mut [S], base: &[S], k: &[S], h: f64) {
    for ((o, b), k) in out.iter_mut().zip(base).zip(k) {
        *o = *b + *k * h;
    }
}

/// One classical RK4 step of size `h` from `(t, y)`.
pub fn rk4_step<S, F>(rhs: &F, t: f64, y: &[S], h: f64) -> Result<Vec<S>>
where
    S: OdeScalar,
    F: Fn(f64, &[S], &mut [S]) -> Result<()>,
{
    let n = y.len();
    let mut k1 = vec![S::default(); n];
    let mut k2 = vec![S::default(); n];
    let mut k3 = vec![S::default(); n];
    let mut k4 = vec![S::default(); n];
    let mut tmp = vec![S::default(); n];

    rhs(t, y, &mut k1)?;
    axpy(&mut tmp, y, &k1, h / 2.0);
    rhs(t + h / 2.0, &tmp, &mut k2)?;
    axpy(&mut tmp, y, &k2, h / 2.0);
    rhs(t + h / 2.0, &tmp, &mut k3)?;
    axpy(&mut tmp, y, &k3, h);
    rhs(t + h, &tmp, &mut k4)?;

    let next = (0..n)
        .map(|i| y[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0))
        .collect();
    Ok(next)
}

/// Integrates `problem` over `grid`, returning the state at every node
/// including both endpoints.
pub fn rk4_integrate<S, F>(problem: &OdeProblem<S, F>, grid: &Grid) -> Result<Vec<(f64, Vec<S>)>>
where
    S: OdeScalar,
    F: Fn(f64, &[S], &mut [S]) -> Result<()>,
{
    let steps = grid.steps();
    let mut out = Vec::with_capacity(steps + 1);
    let mut t = grid.t0();
    let mut y = problem.state0.clone();
    if !y.iter().all(OdeScalar::is_finite) {
        return Err(Error::NonFiniteState { t });
    }
    out.push((t, y.clone()));
    for k in 1..=steps {
        let t_next = grid.node(k);
        y = rk4_step(&problem.rhs, t, &y, t_next - t)?;
        if !y.iter().all(OdeScalar::is_finite) {
            return Err(Error::NonFiniteState { t: t_next });
        }
        t = t_next;
        out.push((t, y.clone()));
    }
    Ok(out)
}

/// Three-point first derivative at interior node `i` of a possibly
/// non-uniform grid (second order).
pub fn central_derivative<S: OdeScalar>(ts: &[f64], ys: &[S], i: usize) -> S {
    let hm = ts[i] - ts[i - 1];
    let hp = ts[i + 1] - ts[i];
    let denom = hm * hp * (hm + hp);
    ys[i + 1] * (hm * hm / denom) + ys[i - 1] * (-hp * hp / denom) + ys[i] * ((hp * hp - hm * hm) / denom)
}

/// Three-point second derivative at interior node `i`.
pub fn central_second_derivative<S: OdeScalar>(ts: &[f64], ys: &[S], i: usize) -> S {
    let hm = ts[i] - ts[i - 1];
    let hp = ts[i + 1] - ts[i];
    let denom = hm * hp * (hm + hp);
    ys[i + 1] * (2.0 * hm / denom) + ys[i - 1] * (2.0 * hp / denom) + ys[i] * (-2.0 * (hm + hp) / denom)
}

/// Second-order derivative estimate at every node; one-sided three-point
/// stencils at the two ends.
pub fn derivative_series<S: OdeScalar>(ts: &[f64], ys: &[S]) -> Vec<S> {
    let n = ts.len();
    assert!(n >= 3, "need at least three samples");
    let mut out = Vec::with_capacity(n);
    let one_sided = |a: usize, b: usize, c: usize| {
        // derivative at a from samples a, b, c
        let h1 = ts[b] - ts[a];
        let h2 = ts[c] - ts[a];
        let wb = h2 / (h1 * (h2 - h1));
        let wc = -h1 / (h2 * (h2 - h1));
        let wa = -(wb + wc);
        ys[a] * wa + ys[b] * wb + ys[c] * wc
    };
    out.push(one_sided(0, 1, 2));
    for i in 1..n - 1 {
        out.push(central_derivative(ts, ys, i));
    }
    out.push(one_sided(n - 1, n - 2, n - 3));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn exp_it(dt: f64) -> f64 {
        let problem = OdeProblem::new(vec![Complex64::new(1.0, 0.0)], |_t, y: &[Complex64], dy: &mut [Complex64]| {
            dy[0] = Complex64::i() * y[0];
            Ok(())
        });
        let grid = Grid::new(0.0, PI, dt).unwrap();
        let out = rk4_integrate(&problem, &grid).unwrap();
        let (t, y) = out.last().unwrap();
        assert_eq!(*t, PI);
        (y[0] - Complex64::new(-1.0, 0.0)).norm()
    }

    #[test]
    fn zero_rhs_keeps_state() {
        let c = Complex64::new(0.3, -2.0);
        let problem = OdeProblem::new(vec![c, c], |_t, _y: &[Complex64], dy: &mut [Complex64]| {
            dy.fill(Complex64::default());
            Ok(())
        });
        let out = rk4_integrate(&problem, &Grid::new(0.0, 1.0, 0.1).unwrap()).unwrap();
        assert_eq!(out.len(), 11);
        assert!(out.iter().all(|(_, y)| y[0] == c && y[1] == c));
    }

    #[test]
    fn exponential_growth() {
        let problem = OdeProblem::new(vec![1.0_f64], |_t, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[0];
            Ok(())
        });
        let out = rk4_integrate(&problem, &Grid::new(0.0, 1.0, 0.01).unwrap()).unwrap();
        let (t, y) = out.last().unwrap();
        assert_eq!(*t, 1.0);
        assert!((y[0] - std::f64::consts::E).abs() < 1e-8);
    }

    #[test]
    fn fourth_order_convergence() {
        let e1 = exp_it(PI / 40.0);
        let e2 = exp_it(PI / 80.0);
        let ratio = e1 / e2;
        assert!((16.0 * 0.8..16.0 * 1.2).contains(&ratio), "ratio {ratio}");
        // error bound C dt^4 with C ~ t/120
        let dt = PI / 40.0;
        assert!(e1 <= PI * dt.powi(4) / 100.0);
    }

    #[test]
    fn grid_lands_on_endpoint() {
        let g = Grid::new(0.0, 1.0, 0.3).unwrap();
        assert_eq!(g.steps(), 4);
        let nodes = g.nodes();
        assert_eq!(nodes.len(), 5);
        assert_eq!(*nodes.last().unwrap(), 1.0);
        assert!((nodes[3] - 0.9).abs() < 1e-15);

        let g = Grid::new(0.0, 10.0, 1e-3).unwrap();
        assert_eq!(g.steps(), 10_000);
        assert_eq!(g.node(10_000), 10.0);
    }

    #[test]
    fn invalid_grids() {
        assert!(Grid::new(1.0, 1.0, 0.1).is_err());
        assert!(Grid::new(0.0, 1.0, 0.0).is_err());
        assert!(Grid::new(0.0, 1.0, -0.1).is_err());
        assert!(Grid::new(0.0, f64::NAN, 0.1).is_err());
    }

    #[test]
    fn non_finite_state_reported() {
        let problem = OdeProblem::new(vec![1.0_f64], |_t, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[0] * y[0] * 1e300;
            Ok(())
        });
        let err = rk4_integrate(&problem, &Grid::new(0.0, 1.0, 0.1).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NonFiniteState { .. }));
    }

    #[test]
    fn stencils_on_nonuniform_grid() {
        let ts = [0.0, 0.1, 0.25, 0.3, 0.42];
        let ys: Vec<f64> = ts.iter().map(|t| 1.0 + 2.0 * t - 3.0 * t * t).collect();
        // exact on quadratics
        for i in 1..4 {
            assert!((central_derivative(&ts, &ys, i) - (2.0 - 6.0 * ts[i])).abs() < 1e-12);
            assert!((central_second_derivative(&ts, &ys, i) + 6.0).abs() < 1e-10);
        }
        let d = derivative_series(&ts, &ys);
        for (t, d) in ts.iter().zip(&d) {
            assert!((d - (2.0 - 6.0 * t)).abs() < 1e-12);
        }
    }
}
