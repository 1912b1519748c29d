//! Forward integrator for the discrete relative-geodesic equations: a
//! per-interval scalar root solve for the Cayley increment, boundary
//! conditions at both ends, and the accumulated deformation energy.
//!
//! Convention: stored ω_k and v_k are the *scaled* updates (the step size
//! is folded in), so the stepping equations carry no h at all; the energy
//! divides by h once at the end.

use thiserror::Error;

use crate::curve::DiscreteCurve;
use crate::linalg::{j, rot, Vec2};
use crate::numerics::solve_scalar;
use crate::scalar::{real, Real};
use crate::se2::{a_matrix, b_matrix, cayley_rotation, GroupElement, Metric};

/// Absolute tolerance of the per-interval root solve (widened to a small
/// multiple of machine epsilon for narrower scalar types).
const STEP_TOL: f64 = 1e-13;
/// Iteration cap of the per-interval root solve.
const STEP_MAX_ITER: usize = 100;

fn step_tolerance<S: Real>() -> S {
    real::<S>(STEP_TOL).max(S::epsilon() * real::<S>(50.0))
}
/// First points further than this from the origin fail `init_leftmost`.
const ORIGIN_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum SolveError {
    #[error("curves must share a parameter grid ({0} vs {1} intervals)")]
    CurveMismatch(usize, usize),
    #[error("both curves must start at the origin")]
    NotNormalized,
    #[error("no root of the stepping equation at interval {index}")]
    RootFindFailed { index: usize },
}

/// Momentum of interval k seen from its start node: the ω-derivative of the
/// interval energy through the left Legendre leg, projected onto rotations.
/// `c` is the template point at that node.
pub(crate) fn momentum_minus<S: Real>(metric: Metric<S>, c: Vec2<S>, omega: S, v: Vec2<S>) -> S {
    let quarter = real::<S>(0.25);
    metric.m() * (S::one() + quarter * omega * omega) * omega
        + quarter * omega * v.norm_sq()
        + v.dot(j(c))
        - omega * real::<S>(0.5) * v.dot(c)
}

/// Momentum of interval k seen from its end node (the right Legendre leg);
/// `c` is the template point at the *end* node. Differs from
/// [`momentum_minus`] only in the sign of the ω·vᵀc term.
pub(crate) fn momentum_plus<S: Real>(metric: Metric<S>, c: Vec2<S>, omega: S, v: Vec2<S>) -> S {
    let quarter = real::<S>(0.25);
    metric.m() * (S::one() + quarter * omega * omega) * omega
        + quarter * omega * v.norm_sq()
        + v.dot(j(c))
        + omega * real::<S>(0.5) * v.dot(c)
}

/// Solves the interval constraint A(ω)v = b for the scaled linear update.
pub fn velocity_from_omega<S: Real>(b: Vec2<S>, omega: S) -> Vec2<S> {
    b_matrix(omega).mul_vec(b)
}

/// Discrete trajectory in SE(2) deforming `c0` into `c1`.
#[derive(Clone, Debug)]
pub struct GeodesicPath<S> {
    /// Rotation angles θ_0 … θ_N.
    pub theta: Vec<S>,
    /// Translations x_0 … x_N (admissibility: R_{θ_k}(c₀)_k + x_k = (c₁)_k).
    pub x: Vec<Vec2<S>>,
    /// Scaled rotational updates ω_0 … ω_{N−1}.
    pub omega: Vec<S>,
    /// Scaled linear updates v_0 … v_{N−1}.
    pub v: Vec<Vec2<S>>,
    /// Deformation energy E₀ = (1/2h)Σ(mω_k² + ‖v_k‖²).
    pub energy: S,
}

impl<S: Real> GeodesicPath<S> {
    pub fn element(&self, k: usize) -> GroupElement<S> {
        GroupElement::new(self.theta[k], self.x[k])
    }
}

/// Solver state between intervals: the next interval to solve, the angle
/// at its start node, and the previous interval's scaled updates.
#[derive(Clone, Copy, Debug)]
pub struct StepState<S> {
    pub k: usize,
    pub theta: S,
    pub omega_prev: S,
    pub v_prev: Vec2<S>,
}

/// A deformation problem: two discrete curves over a common parameter grid
/// and the rotation weight of the metric.
#[derive(Clone, Copy, Debug)]
pub struct Problem<'a, S: Real> {
    c0: &'a DiscreteCurve<S>,
    c1: &'a DiscreteCurve<S>,
    metric: Metric<S>,
}

impl<'a, S: Real> Problem<'a, S> {
    pub fn new(
        c0: &'a DiscreteCurve<S>,
        c1: &'a DiscreteCurve<S>,
        metric: Metric<S>,
    ) -> Result<Self, SolveError> {
        if c0.n() != c1.n() {
            return Err(SolveError::CurveMismatch(c0.n(), c1.n()));
        }
        Ok(Problem { c0, c1, metric })
    }

    pub fn n(&self) -> usize {
        self.c0.n()
    }

    pub fn h(&self) -> S {
        self.c0.h()
    }

    pub fn metric(&self) -> Metric<S> {
        self.metric
    }

    pub fn c0(&self) -> &'a DiscreteCurve<S> {
        self.c0
    }

    pub fn c1(&self) -> &'a DiscreteCurve<S> {
        self.c1
    }

    /// Right-hand side of the interval constraint:
    /// b_k = R_{−θ_k}((c₁)_{k+1} − (c₁)_k) − R̂_{ω_k}(c₀)_{k+1} + (c₀)_k.
    pub fn b_vector(&self, k: usize, theta_k: S, omega_k: S) -> Vec2<S> {
        let dc1 = self.c1.point(k + 1) - self.c1.point(k);
        rot(-theta_k, dc1) - cayley_rotation(omega_k).mul_vec(self.c0.point(k + 1))
            + self.c0.point(k)
    }

    /// Interior stationarity residual at node k: the momentum mismatch
    /// between interval k and interval k−1, both projected at (c₀)_k.
    pub fn eom_residual(&self, k: usize, omega_k: S, v_k: Vec2<S>, omega_prev: S, v_prev: Vec2<S>) -> S {
        let c = self.c0.point(k);
        momentum_minus(self.metric, c, omega_k, v_k)
            - momentum_plus(self.metric, c, omega_prev, v_prev)
    }

    /// ∂(momentum_minus)/∂ω at node k, holding v fixed.
    pub(crate) fn coeff_c(&self, k: usize, omega: S, v: Vec2<S>) -> S {
        let quarter = real::<S>(0.25);
        self.metric.m() * (S::one() + real::<S>(0.75) * omega * omega)
            + quarter * v.norm_sq()
            - real::<S>(0.5) * v.dot(self.c0.point(k))
    }

    /// ∂(momentum_minus)/∂v at node k.
    pub(crate) fn coeff_d(&self, k: usize, omega: S, v: Vec2<S>) -> Vec2<S> {
        let c = self.c0.point(k);
        v * (omega * real::<S>(0.5)) + j(c) - c * (omega * real::<S>(0.5))
    }

    /// Sensitivity of v_k to ω_k at fixed θ_k: J(b_k/2 + A(ω_k)(c₀)_{k+1}).
    pub(crate) fn dv_domega(&self, k: usize, omega: S, b: Vec2<S>) -> Vec2<S> {
        j(b * real::<S>(0.5) + a_matrix(omega).mul_vec(self.c0.point(k + 1)))
    }

    /// Sensitivity of v_k to θ_k at fixed ω_k: B(ω_k)R_{−θ_k}J·Δ(c₁)_k.
    pub(crate) fn dv_dtheta(&self, k: usize, theta: S, omega: S) -> Vec2<S> {
        let dc1 = self.c1.point(k + 1) - self.c1.point(k);
        b_matrix(omega).mul_vec(rot(-theta, j(dc1)))
    }

    /// Boundary state for curves already translated to start at the origin:
    /// ω₀ = 0 and v₀ = R_{−θ₀}(c₁)₁ − (c₀)₁.
    pub fn init_leftmost(&self, theta0: S) -> Result<StepState<S>, SolveError> {
        let tol = real::<S>(ORIGIN_TOL);
        if self.c0.point(0).norm() > tol || self.c1.point(0).norm() > tol {
            return Err(SolveError::NotNormalized);
        }
        let v0 = rot(-theta0, self.c1.point(1)) - self.c0.point(1);
        Ok(StepState { k: 1, theta: theta0, omega_prev: S::zero(), v_prev: v0 })
    }

    /// Boundary state for curves in general position: solves the left
    /// natural condition momentum_minus((c₀)₀, ω₀, v₀(ω₀)) = 0 for ω₀.
    /// Coincides with [`Problem::init_leftmost`] when (c₀)₀ = 0 (the
    /// momentum then factors as ω₀·(positive), forcing ω₀ = 0).
    pub fn init_natural(&self, theta0: S) -> Result<StepState<S>, SolveError> {
        let c = self.c0.point(0);
        let fdf = |omega: S| {
            let b = self.b_vector(0, theta0, omega);
            let v = velocity_from_omega(b, omega);
            let f = momentum_minus(self.metric, c, omega, v);
            let df = self.coeff_c(0, omega, v)
                + self.coeff_d(0, omega, v).dot(self.dv_domega(0, omega, b));
            (f, df)
        };
        let omega0 = solve_scalar(&fdf, S::zero(), step_tolerance::<S>(), STEP_MAX_ITER)
            .ok_or(SolveError::RootFindFailed { index: 0 })?;
        let v0 = velocity_from_omega(self.b_vector(0, theta0, omega0), omega0);
        Ok(StepState {
            k: 1,
            theta: theta0 + angle_from_omega(omega0),
            omega_prev: omega0,
            v_prev: v0,
        })
    }

    /// Solves interval k = state.k for ω_k (root of the momentum mismatch
    /// nearest ω_{k−1}), advancing the state to node k+1.
    pub fn step(&self, state: &StepState<S>) -> Result<StepState<S>, SolveError> {
        let k = state.k;
        assert!(k >= 1 && k < self.n(), "step index out of range");
        let rhs = momentum_plus(self.metric, self.c0.point(k), state.omega_prev, state.v_prev);
        let fdf = |omega: S| {
            let b = self.b_vector(k, state.theta, omega);
            let v = velocity_from_omega(b, omega);
            let f = momentum_minus(self.metric, self.c0.point(k), omega, v) - rhs;
            let df = self.coeff_c(k, omega, v)
                + self.coeff_d(k, omega, v).dot(self.dv_domega(k, omega, b));
            (f, df)
        };
        let omega = solve_scalar(&fdf, state.omega_prev, step_tolerance::<S>(), STEP_MAX_ITER)
            .ok_or(SolveError::RootFindFailed { index: k })?;
        let v = velocity_from_omega(self.b_vector(k, state.theta, omega), omega);
        Ok(StepState {
            k: k + 1,
            theta: state.theta + angle_from_omega(omega),
            omega_prev: omega,
            v_prev: v,
        })
    }

    /// Integrates the full trajectory from θ₀: left boundary solve, then
    /// one interval root solve per remaining interval, then admissibility
    /// for the translations.
    pub fn integrate(&self, theta0: S) -> Result<GeodesicPath<S>, SolveError> {
        let n = self.n();
        let mut theta = Vec::with_capacity(n + 1);
        let mut omega = Vec::with_capacity(n);
        let mut v = Vec::with_capacity(n);

        theta.push(theta0);
        let mut state = self.init_natural(theta0)?;
        theta.push(state.theta);
        omega.push(state.omega_prev);
        v.push(state.v_prev);
        for _ in 1..n {
            state = self.step(&state)?;
            theta.push(state.theta);
            omega.push(state.omega_prev);
            v.push(state.v_prev);
        }

        let x = (0..=n)
            .map(|k| self.c1.point(k) - rot(theta[k], self.c0.point(k)))
            .collect();
        let energy = omega
            .iter()
            .zip(&v)
            .map(|(&w, vk)| self.metric.m() * w * w + vk.norm_sq())
            .fold(S::zero(), |a, e| a + e)
            / (real::<S>(2.0) * self.h());
        Ok(GeodesicPath { theta, x, omega, v, energy })
    }

    /// Right natural boundary condition: the end-node momentum of the last
    /// interval. Zero exactly when the trajectory is stationary for the
    /// deformation energy with free θ_N.
    pub fn terminal_residual(&self, path: &GeodesicPath<S>) -> S {
        let n = self.n();
        momentum_plus(self.metric, self.c0.point(n), path.omega[n - 1], path.v[n - 1])
    }
}

/// Angle advance of a scaled Cayley update: Δθ = 2·atan(ω/2).
pub(crate) fn angle_from_omega<S: Real>(omega: S) -> S {
    (omega * real::<S>(0.5)).atan() * real::<S>(2.0)
}
