//! Continuous-limit theory: closed-form discrepancies for the degenerate
//! cases, the two-geodesic structure against straight segments, and a
//! shooting solver for the second-order boundary-value problem in θ(s).
//! Everything here is an independent cross-check for the discrete solver.

use thiserror::Error;

use crate::curve::{CurveSpec, DiscreteCurve};
use crate::linalg::{j, rot, Vec2};
use crate::numerics::{rk4_step, simpson, simpson_samples};
use crate::scalar::{real, Real};
use crate::se2::{GroupElement, Metric};

/// Fixed RK4 step count for one shot of the θ-ODE over [0, 1].
const ODE_STEPS: usize = 2000;
/// Quadrature panels for the closed-form discrepancy integrals.
const QUAD_PANELS: usize = 10_000;
/// Residual scan with maximum magnitude below this is a continuum of
/// geodesics (every θ(0) works), not a set of isolated roots.
const FAMILY_TOL: f64 = 1e-12;
/// Terminal momentum tolerance for refined roots.
const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum AnalyticError {
    #[error("terminal residual has no sign change over the θ(0) grid")]
    NoRootFound,
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error("curve spec has no closed-form derivatives")]
    Unsupported,
}

/// A twice-differentiable parametrized plane curve on [0, 1].
pub trait SmoothCurve<S: Real> {
    fn point(&self, s: S) -> Vec2<S>;
    fn velocity(&self, s: S) -> Vec2<S>;
    fn acceleration(&self, s: S) -> Vec2<S>;

    /// Uniform sampling into a discrete curve (N+1 points).
    fn sample(&self, n: usize) -> DiscreteCurve<S> {
        let points = (0..=n)
            .map(|k| self.point(real::<S>(k as f64) / real::<S>(n as f64)))
            .collect();
        DiscreteCurve::new(points).expect("smooth curve samples are finite")
    }
}

/// Closed-form curve for the analytic generators (all specs except the
/// polynomial family, whose parametrization is only defined by an ODE).
#[derive(Clone, Copy, Debug)]
pub struct SpecCurve {
    spec: CurveSpec,
}

impl SpecCurve {
    pub fn new(spec: CurveSpec) -> Result<Self, AnalyticError> {
        match spec {
            CurveSpec::Poly { .. } => Err(AnalyticError::Unsupported),
            _ => Ok(SpecCurve { spec }),
        }
    }
}

impl<S: Real> SmoothCurve<S> for SpecCurve {
    fn point(&self, s: S) -> Vec2<S> {
        self.spec.eval(s)
    }

    fn velocity(&self, s: S) -> Vec2<S> {
        let pi = S::PI();
        let two_pi = pi + pi;
        match self.spec {
            CurveSpec::Point { .. } => Vec2::zero(),
            CurveSpec::Segment { dx, dy } => Vec2::new(real(dx), real(dy)),
            CurveSpec::Circle { r } => {
                let (sn, cs) = (two_pi * s).sin_cos();
                Vec2::new(-two_pi * real::<S>(r) * sn, two_pi * real::<S>(r) * cs)
            }
            CurveSpec::Semicircle => {
                let (sn, cs) = (pi * s).sin_cos();
                Vec2::new(-pi * sn, pi * cs)
            }
            CurveSpec::Eight => {
                let four_pi = two_pi + two_pi;
                Vec2::new(four_pi * (four_pi * s).cos(), two_pi * (two_pi * s).cos())
            }
            CurveSpec::Poly { .. } => unreachable!("rejected at construction"),
        }
    }

    fn acceleration(&self, s: S) -> Vec2<S> {
        let pi = S::PI();
        let two_pi = pi + pi;
        match self.spec {
            CurveSpec::Point { .. } | CurveSpec::Segment { .. } => Vec2::zero(),
            CurveSpec::Circle { r } => {
                let (sn, cs) = (two_pi * s).sin_cos();
                let w2 = two_pi * two_pi * real::<S>(r);
                Vec2::new(-w2 * cs, -w2 * sn)
            }
            CurveSpec::Semicircle => {
                let (sn, cs) = (pi * s).sin_cos();
                Vec2::new(-pi * pi * cs, -pi * pi * sn)
            }
            CurveSpec::Eight => {
                let four_pi = two_pi + two_pi;
                Vec2::new(
                    -four_pi * four_pi * (four_pi * s).sin(),
                    -two_pi * two_pi * (two_pi * s).sin(),
                )
            }
            CurveSpec::Poly { .. } => unreachable!("rejected at construction"),
        }
    }
}

/// A curve moved by a constant rigid motion.
#[derive(Clone, Copy, Debug)]
pub struct Transformed<S, C> {
    pub g: GroupElement<S>,
    pub inner: C,
}

impl<S: Real, C: SmoothCurve<S>> SmoothCurve<S> for Transformed<S, C> {
    fn point(&self, s: S) -> Vec2<S> {
        self.g.act(self.inner.point(s))
    }
    fn velocity(&self, s: S) -> Vec2<S> {
        rot(self.g.theta, self.inner.velocity(s))
    }
    fn acceleration(&self, s: S) -> Vec2<S> {
        rot(self.g.theta, self.inner.acceleration(s))
    }
}

/// A curve given by explicit closures (used heavily in tests).
pub struct FnCurve<S> {
    pub point: Box<dyn Fn(S) -> Vec2<S>>,
    pub velocity: Box<dyn Fn(S) -> Vec2<S>>,
    pub acceleration: Box<dyn Fn(S) -> Vec2<S>>,
}

impl<S: Real> SmoothCurve<S> for FnCurve<S> {
    fn point(&self, s: S) -> Vec2<S> {
        (self.point)(s)
    }
    fn velocity(&self, s: S) -> Vec2<S> {
        (self.velocity)(s)
    }
    fn acceleration(&self, s: S) -> Vec2<S> {
        (self.acceleration)(s)
    }
}

/// Element that moves the curve start to the origin and its initial
/// velocity onto the positive x-axis.
pub fn normalizing_element<S: Real>(c: &impl SmoothCurve<S>) -> GroupElement<S> {
    let v0 = c.velocity(S::zero());
    let alpha = v0.y.atan2(v0.x);
    GroupElement::new(-alpha, rot(-alpha, -c.point(S::zero())))
}

/// The curve in canonical position (start at the origin, initial velocity
/// along +x).
pub fn tangent_normalized<S: Real, C: SmoothCurve<S>>(curve: C) -> Transformed<S, C> {
    Transformed { g: normalizing_element(&curve), inner: curve }
}

/// Discrepancy from a point curve: ½∫‖c₁'‖², the geodesics being the
/// θ(0)-family of constant-rotation deformations.
pub fn discrepancy_c0_zero<S: Real>(c1: &impl SmoothCurve<S>) -> S {
    simpson(S::zero(), S::one(), QUAD_PANELS, |s| c1.velocity(s).norm_sq())
        * real::<S>(0.5)
}

/// Discrepancy onto a point curve:
/// ½∫(‖c₀'‖² − ((c₀')ᵀJc₀)² / (m + ‖c₀‖²)).
pub fn discrepancy_c1_zero<S: Real>(c0: &impl SmoothCurve<S>, metric: Metric<S>) -> S {
    simpson(S::zero(), S::one(), QUAD_PANELS, |s| {
        let c = c0.point(s);
        let dc = c0.velocity(s);
        let twist = dc.dot(j(c));
        dc.norm_sq() - twist * twist / (metric.m() + c.norm_sq())
    }) * real::<S>(0.5)
}

/// Momentum conjugate to θ: p = (m + ‖c₀‖²)θ' + (c₁')ᵀR_θ J c₀ − (c₀')ᵀJc₀.
/// Vanishes at both ends of any relative geodesic.
pub fn scalar_momentum<S: Real>(
    c0: &impl SmoothCurve<S>,
    c1: &impl SmoothCurve<S>,
    metric: Metric<S>,
    theta: S,
    thetadot: S,
    s: S,
) -> S {
    let c = c0.point(s);
    (metric.m() + c.norm_sq()) * thetadot + c1.velocity(s).dot(rot(theta, j(c)))
        - c0.velocity(s).dot(j(c))
}

/// The c₁-independent part p̂ = (m + ‖c₀‖²)θ' − (c₀')ᵀJc₀, conserved along
/// geodesics whenever c₁'' ≡ 0.
pub fn perturbed_momentum<S: Real>(
    c0: &impl SmoothCurve<S>,
    metric: Metric<S>,
    theta: S,
    thetadot: S,
    s: S,
) -> S {
    let _ = theta;
    let c = c0.point(s);
    (metric.m() + c.norm_sq()) * thetadot - c0.velocity(s).dot(j(c))
}

/// Deformation-energy density ½(mθ'² + ‖R_{−θ}c₁' − c₀' + θ'Jc₀‖²) along an
/// admissible curve reconstructed from θ.
pub fn reduced_lagrangian<S: Real>(
    c0: &impl SmoothCurve<S>,
    c1: &impl SmoothCurve<S>,
    metric: Metric<S>,
    theta: S,
    thetadot: S,
    s: S,
) -> S {
    let v = rot(-theta, c1.velocity(s)) - c0.velocity(s) + j(c0.point(s)) * thetadot;
    (metric.m() * thetadot * thetadot + v.norm_sq()) * real::<S>(0.5)
}

/// θ'' isolated from the Euler-Lagrange equation
/// (m + ‖c₀‖²)θ'' + 2c₀ᵀc₀'θ' + c₀ᵀJ(c₀'' − R_{−θ}c₁'') = 0.
pub fn theta_accel<S: Real>(
    c0: &impl SmoothCurve<S>,
    c1: &impl SmoothCurve<S>,
    metric: Metric<S>,
    theta: S,
    thetadot: S,
    s: S,
) -> S {
    let c = c0.point(s);
    let dc = c0.velocity(s);
    let forcing = c.dot(j(c0.acceleration(s) - rot(-theta, c1.acceleration(s))));
    -(real::<S>(2.0) * c.dot(dc) * thetadot + forcing) / (metric.m() + c.norm_sq())
}

/// One geodesic candidate of the continuous problem: θ and θ' on the
/// uniform shot grid (ODE_STEPS+1 nodes), its energy, and the terminal
/// momentum left over.
#[derive(Clone, Debug)]
pub struct ContinuousSolution<S> {
    pub theta0: S,
    pub theta: Vec<S>,
    pub thetadot: Vec<S>,
    pub energy: S,
    pub residual: S,
}

/// Result of the θ(0) sweep: either isolated geodesics or a continuum
/// (every θ(0) satisfies both boundary conditions, as happens for point
/// curves), represented by one member.
#[derive(Clone, Debug)]
pub struct BvpResult<S> {
    pub family: bool,
    pub solutions: Vec<ContinuousSolution<S>>,
}

impl<S: Real> BvpResult<S> {
    pub fn minimal_energy(&self) -> S {
        self.solutions
            .iter()
            .map(|sol| sol.energy)
            .fold(S::infinity(), S::min)
    }
}

/// Integrates the θ-ODE from a given initial angle, with θ'(0) supplied by
/// the left natural boundary condition p(0) = 0.
pub fn shoot_theta0<S: Real>(
    c0: &impl SmoothCurve<S>,
    c1: &impl SmoothCurve<S>,
    metric: Metric<S>,
    theta0: S,
) -> ContinuousSolution<S> {
    let h = S::one() / real::<S>(ODE_STEPS as f64);
    let rhs = |s: S, y: [S; 2]| [y[1], theta_accel(c0, c1, metric, y[0], y[1], s)];

    let c = c0.point(S::zero());
    let thetadot0 = (c0.velocity(S::zero()).dot(j(c))
        - c1.velocity(S::zero()).dot(rot(theta0, j(c))))
        / (metric.m() + c.norm_sq());

    let mut theta = Vec::with_capacity(ODE_STEPS + 1);
    let mut thetadot = Vec::with_capacity(ODE_STEPS + 1);
    let mut y = [theta0, thetadot0];
    theta.push(y[0]);
    thetadot.push(y[1]);
    for i in 0..ODE_STEPS {
        y = rk4_step(&rhs, real::<S>(i as f64) * h, y, h);
        theta.push(y[0]);
        thetadot.push(y[1]);
    }
    let residual = scalar_momentum(c0, c1, metric, y[0], y[1], S::one());
    let energy = energy_of_profile(c0, c1, metric, &theta, &thetadot);
    ContinuousSolution { theta0, theta, thetadot, energy, residual }
}

fn energy_of_profile<S: Real>(
    c0: &impl SmoothCurve<S>,
    c1: &impl SmoothCurve<S>,
    metric: Metric<S>,
    theta: &[S],
    thetadot: &[S],
) -> S {
    let h = S::one() / real::<S>((theta.len() - 1) as f64);
    let values: Vec<S> = theta
        .iter()
        .zip(thetadot)
        .enumerate()
        .map(|(i, (&t, &td))| {
            reduced_lagrangian(c0, c1, metric, t, td, real::<S>(i as f64) * h)
        })
        .collect();
    simpson_samples(&values, h)
}

/// Scans θ(0) over a uniform grid on [0, 2π), refines every sign change of
/// the terminal momentum by bisection, and returns all isolated geodesics —
/// or the flagged family when the residual vanishes across the whole grid.
pub fn solve_continuous_bvp<S: Real>(
    c0: &impl SmoothCurve<S>,
    c1: &impl SmoothCurve<S>,
    metric: Metric<S>,
    theta0_grid: usize,
) -> Result<BvpResult<S>, AnalyticError> {
    assert!(theta0_grid >= 2, "need at least two grid points");
    let two_pi = S::PI() + S::PI();
    let grid: Vec<S> = (0..theta0_grid)
        .map(|i| two_pi * real::<S>(i as f64) / real::<S>(theta0_grid as f64))
        .collect();
    let residuals: Vec<S> = grid
        .iter()
        .map(|&t| shoot_theta0(c0, c1, metric, t).residual)
        .collect();

    let max_residual = residuals.iter().fold(S::zero(), |a, r| a.max(r.abs()));
    if max_residual < real::<S>(FAMILY_TOL) {
        return Ok(BvpResult {
            family: true,
            solutions: vec![shoot_theta0(c0, c1, metric, grid[0])],
        });
    }

    let mut roots: Vec<S> = Vec::new();
    for i in 0..theta0_grid {
        let (ra, rb) = (residuals[i], residuals[(i + 1) % theta0_grid]);
        if !(ra * rb < S::zero() || ra == S::zero()) {
            continue;
        }
        let mut lo = grid[i];
        let mut hi = if i + 1 < theta0_grid { grid[i + 1] } else { two_pi };
        if ra == S::zero() {
            roots.push(lo);
            continue;
        }
        let mut flo = ra;
        for _ in 0..200 {
            let mid = (lo + hi) * real::<S>(0.5);
            let fmid = shoot_theta0(c0, c1, metric, mid).residual;
            if fmid.abs() < real::<S>(RESIDUAL_TOL)
                || hi - lo < real::<S>(1e-15)
            {
                lo = mid;
                hi = mid;
                break;
            }
            if fmid * flo < S::zero() {
                hi = mid;
            } else {
                lo = mid;
                flo = fmid;
            }
        }
        roots.push((lo + hi) * real::<S>(0.5));
    }
    if roots.is_empty() {
        return Err(AnalyticError::NoRootFound);
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| {
        let mut d = (*a - *b).abs() % two_pi;
        d = d.min(two_pi - d);
        d < real::<S>(1e-8)
    });
    Ok(BvpResult {
        family: false,
        solutions: roots
            .into_iter()
            .map(|t| shoot_theta0(c0, c1, metric, t))
            .collect(),
    })
}

/// The exactly two geodesics from `c0` to an affine curve with constant
/// velocity `big_c`: θ(s) = θ(1) − ∫ₛ¹ (c₀'ᵀJc₀)/(m+‖c₀‖²) du with the
/// terminal angle aligning R_{θ(1)}c₀(1) with ±big_c. Requires c₀(0) = 0
/// (which makes the left boundary condition automatic), c₀(1) ≠ 0, and
/// big_c ≠ 0.
pub fn segment_geodesics<S: Real>(
    c0: &impl SmoothCurve<S>,
    metric: Metric<S>,
    big_c: Vec2<S>,
) -> Result<[ContinuousSolution<S>; 2], AnalyticError> {
    if c0.point(S::zero()).norm() > real::<S>(1e-12) {
        return Err(AnalyticError::PreconditionViolated("c0 must start at the origin"));
    }
    let end = c0.point(S::one());
    if end.norm() == S::zero() {
        return Err(AnalyticError::PreconditionViolated("c0 must end away from the origin"));
    }
    if big_c.norm() == S::zero() {
        return Err(AnalyticError::PreconditionViolated("segment direction must be nonzero"));
    }

    let twist_rate = |s: S| {
        let c = c0.point(s);
        c0.velocity(s).dot(j(c)) / (metric.m() + c.norm_sq())
    };
    // Cumulative integral of the twist rate on the shot grid, one Simpson
    // panel per interval.
    let n = ODE_STEPS;
    let h = S::one() / real::<S>(n as f64);
    let mut cumulative = Vec::with_capacity(n + 1);
    let mut acc = S::zero();
    cumulative.push(acc);
    for i in 0..n {
        let s = real::<S>(i as f64) * h;
        let panel = (twist_rate(s)
            + real::<S>(4.0) * twist_rate(s + h * real::<S>(0.5))
            + twist_rate(s + h))
            * h
            / real::<S>(6.0);
        acc += panel;
        cumulative.push(acc);
    }
    let total = acc;

    let sigma = end.cross(big_c).atan2(end.dot(big_c));
    let c1 = FnCurve {
        point: {
            let big_c = big_c;
            Box::new(move |s| big_c * s)
        },
        velocity: Box::new(move |_| big_c),
        acceleration: Box::new(|_| Vec2::zero()),
    };
    let branch = |theta1: S| {
        let theta: Vec<S> = cumulative.iter().map(|&f| theta1 - (total - f)).collect();
        let thetadot: Vec<S> = (0..=n).map(|i| twist_rate(real::<S>(i as f64) * h)).collect();
        let energy = energy_of_profile(c0, &c1, metric, &theta, &thetadot);
        let residual = scalar_momentum(c0, &c1, metric, theta1, thetadot[n], S::one());
        ContinuousSolution { theta0: theta[0], theta, thetadot, energy, residual }
    };
    Ok([branch(sigma), branch(sigma - S::PI())])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    type M = Metric<f64>;

    fn spec(s: CurveSpec) -> SpecCurve {
        SpecCurve::new(s).unwrap()
    }

    fn segment_x() -> SpecCurve {
        spec(CurveSpec::Segment { dx: 1.0, dy: 0.0 })
    }

    /// Smooth non-degenerate test curve with analytic derivatives.
    fn wiggle() -> FnCurve<f64> {
        let w = 2.0 * PI;
        FnCurve {
            point: Box::new(move |s| {
                Vec2::new(0.3 + s + 0.2 * (w * s).sin(), 0.4 * (w * s).cos() - 0.1 * s)
            }),
            velocity: Box::new(move |s| {
                Vec2::new(1.0 + 0.2 * w * (w * s).cos(), -0.4 * w * (w * s).sin() - 0.1)
            }),
            acceleration: Box::new(move |s| {
                Vec2::new(-0.2 * w * w * (w * s).sin(), -0.4 * w * w * (w * s).cos())
            }),
        }
    }

    #[test]
    fn spec_curve_derivatives_match_central_differences() {
        let eps = 1e-6;
        for s in [
            CurveSpec::Segment { dx: 0.3, dy: -1.1 },
            CurveSpec::Circle { r: 0.7 },
            CurveSpec::Semicircle,
            CurveSpec::Eight,
        ] {
            let c = spec(s);
            for i in 1..10 {
                let t = 0.03 + 0.094 * i as f64;
                let fd_v = (c.point(t + eps) - c.point(t - eps)) * (0.5 / eps);
                let fd_a = (c.velocity(t + eps) - c.velocity(t - eps)) * (0.5 / eps);
                let v: Vec2<f64> = c.velocity(t);
                let a: Vec2<f64> = c.acceleration(t);
                assert!((fd_v - v).norm() <= 1e-5 * (1.0 + v.norm()), "{s:?} velocity at {t}");
                assert!((fd_a - a).norm() <= 1e-4 * (1.0 + a.norm()), "{s:?} acceleration at {t}");
            }
        }
    }

    #[test]
    fn transformed_matches_pointwise_action() {
        let g = GroupElement::new(0.9, Vec2::new(-0.2, 1.4));
        let base = spec(CurveSpec::Eight);
        let moved = Transformed { g, inner: base };
        let s = 0.37;
        assert!((moved.point(s) - g.act(base.point(s))).norm() < 1e-15);
        let eps = 1e-6;
        let fd = (moved.point(s + eps) - moved.point(s - eps)) * (0.5 / eps);
        assert!((fd - moved.velocity(s)).norm() < 1e-8);
    }

    #[test]
    fn tangent_normalized_canonical_position() {
        let c = tangent_normalized(spec(CurveSpec::Circle { r: 1.0 }));
        assert!(c.point(0.0).norm() < 1e-15);
        let v0: Vec2<f64> = c.velocity(0.0);
        assert!(v0.y.abs() < 1e-15 && v0.x > 0.0);
    }

    #[test]
    fn point_to_semicircle_is_half_pi_squared() {
        let d: f64 = discrepancy_c0_zero(&spec(CurveSpec::Semicircle));
        assert_abs_diff_eq!(d, PI * PI / 2.0, epsilon = 1e-10);
        let d: f64 = discrepancy_c0_zero(&segment_x());
        assert_abs_diff_eq!(d, 0.5, epsilon = 1e-12);
        let d: f64 = discrepancy_c0_zero(&spec(CurveSpec::Point { x: 3.0, y: -1.0 }));
        assert_abs_diff_eq!(d, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn semicircle_to_point_is_third_pi_squared() {
        let d: f64 = discrepancy_c1_zero(&spec(CurveSpec::Semicircle), M::new(2.0));
        assert_abs_diff_eq!(d, PI * PI / 3.0, epsilon = 1e-10);
        // General-m closed form ½·m/(m+1)·π² on the unit semicircle.
        for m in [0.5, 1.0, 7.0] {
            let d: f64 = discrepancy_c1_zero(&spec(CurveSpec::Semicircle), M::new(m));
            assert_abs_diff_eq!(d, 0.5 * m / (m + 1.0) * PI * PI, epsilon = 1e-9);
        }
    }

    #[test]
    fn radial_c0_has_no_rotation_credit() {
        // For c₀(s) = s·x₀ the twist term vanishes and the discrepancy onto
        // a point equals the plain kinetic energy ½∫‖c₀'‖².
        let x0 = Vec2::new(0.8, -0.6);
        let c0 = FnCurve {
            point: Box::new(move |s| x0 * s),
            velocity: Box::new(move |_| x0),
            acceleration: Box::new(|_| Vec2::zero()),
        };
        let d = discrepancy_c1_zero(&c0, M::new(2.0));
        assert_abs_diff_eq!(d, 0.5 * x0.norm_sq(), epsilon = 1e-12);
    }

    #[test]
    fn asymmetry_strict_for_non_radial_curve() {
        let c = spec(CurveSpec::Semicircle);
        let m = M::new(2.0);
        assert!(discrepancy_c1_zero(&c, m) < discrepancy_c0_zero(&c));
        let w = wiggle();
        assert!(discrepancy_c1_zero(&w, m) < discrepancy_c0_zero(&w));
    }

    #[test]
    fn momenta_relations() {
        let c0 = wiggle();
        let c1 = spec(CurveSpec::Eight);
        let m = M::new(2.0);
        for (s, theta, thetadot) in [(0.2, 0.7, -1.3), (0.8, -2.0, 0.4)] {
            let p = scalar_momentum(&c0, &c1, m, theta, thetadot, s);
            let phat = perturbed_momentum(&c0, m, theta, thetadot, s);
            let c = c0.point(s);
            assert_abs_diff_eq!(
                p - phat,
                c1.velocity(s).dot(rot(theta, j(c))),
                epsilon = 1e-13
            );
        }
        // c₀ ≡ 0 collapses both momenta to mθ'.
        let pt = spec(CurveSpec::Point { x: 0.0, y: 0.0 });
        assert_abs_diff_eq!(
            scalar_momentum(&pt, &c1, m, 0.3, 1.7, 0.5),
            2.0 * 1.7,
            epsilon = 1e-15
        );
    }

    #[test]
    fn segment_pair_has_energies_zero_and_two() {
        let sols = segment_geodesics(&segment_x(), M::new(2.0), Vec2::new(0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(sols[0].theta0, PI / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sols[0].energy, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sols[1].theta0, PI / 2.0 - PI, epsilon = 1e-12);
        assert_abs_diff_eq!(sols[1].energy, 2.0, epsilon = 1e-10);
        for sol in &sols {
            assert!(sol.theta.iter().all(|&t| (t - sol.theta0).abs() < 1e-12));
        }
    }

    #[test]
    fn identical_segments_give_zero_and_two() {
        let sols = segment_geodesics(&segment_x(), M::new(2.0), Vec2::new(1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(sols[0].theta0, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sols[0].energy, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sols[1].energy, 2.0, epsilon = 1e-10);
    }

    #[test]
    fn segment_geodesics_conserve_perturbed_momentum() {
        // Curved c₀ against an affine target: p̂ must vanish along both
        // branches and the scalar momentum at both ends.
        let c0 = spec(CurveSpec::Semicircle);
        let shifted = Transformed {
            g: GroupElement::new(0.0, Vec2::new(-1.0, 0.0)),
            inner: c0,
        };
        let m = M::new(2.0);
        let big_c = Vec2::new(0.3, 1.1);
        let sols = segment_geodesics(&shifted, m, big_c).unwrap();
        let n = sols[0].theta.len() - 1;
        for sol in &sols {
            for i in [0, n / 3, n / 2, n] {
                let s = i as f64 / n as f64;
                let phat = perturbed_momentum(&shifted, m, sol.theta[i], sol.thetadot[i], s);
                assert!(phat.abs() < 1e-9, "phat = {phat:.3e}");
            }
            assert!(sol.residual.abs() < 1e-9);
        }
    }

    #[test]
    fn precondition_checks() {
        let m = M::new(2.0);
        // Unit semicircle starts at (1, 0), not the origin.
        assert!(matches!(
            segment_geodesics(&spec(CurveSpec::Semicircle), m, Vec2::new(1.0, 0.0)),
            Err(AnalyticError::PreconditionViolated(_))
        ));
        assert!(matches!(
            segment_geodesics(&segment_x(), m, Vec2::zero()),
            Err(AnalyticError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn bvp_family_for_point_source() {
        let c0 = spec(CurveSpec::Point { x: 0.0, y: 0.0 });
        let c1 = spec(CurveSpec::Semicircle);
        let res = solve_continuous_bvp(&c0, &c1, M::new(2.0), 16).unwrap();
        assert!(res.family);
        assert_abs_diff_eq!(res.minimal_energy(), PI * PI / 2.0, epsilon = 1e-8);
        // Every member of the family has the same energy.
        for t in [0.9, 2.7, 5.5] {
            let sol = shoot_theta0(&c0, &c1, M::new(2.0), t);
            assert_abs_diff_eq!(sol.energy, PI * PI / 2.0, epsilon = 1e-8);
            assert!(sol.residual.abs() < 1e-12);
        }
    }

    #[test]
    fn bvp_reproduces_segment_branches() {
        let c0 = segment_x();
        let c1 = spec(CurveSpec::Segment { dx: 0.0, dy: 1.0 });
        let m = M::new(2.0);
        let res = solve_continuous_bvp(&c0, &c1, m, 64).unwrap();
        assert!(!res.family);
        let mut energies: Vec<f64> = res.solutions.iter().map(|s| s.energy).collect();
        energies.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(energies.len(), 2, "found {energies:?}");
        assert_abs_diff_eq!(energies[0], 0.0, epsilon = 1e-8);
        assert_abs_diff_eq!(energies[1], 2.0, epsilon = 1e-6);
        for sol in &res.solutions {
            // Scalar momentum vanishes at both ends.
            let p0 = scalar_momentum(&c0, &c1, m, sol.theta[0], sol.thetadot[0], 0.0);
            assert!(p0.abs() < 1e-10);
            assert!(sol.residual.abs() < 1e-9);
        }
    }

    /// Second route to the geodesics: integrate (θ, p) with θ' recovered
    /// from the momentum, p' from the Euler-Lagrange right-hand side.
    fn shoot_via_momentum(
        c0: &impl SmoothCurve<f64>,
        c1: &impl SmoothCurve<f64>,
        m: M,
        theta0: f64,
    ) -> f64 {
        let n = ODE_STEPS;
        let h = 1.0 / n as f64;
        let thetadot_of = |s: f64, theta: f64, p: f64| {
            let c = c0.point(s);
            (p - c1.velocity(s).dot(rot(theta, j(c))) + c0.velocity(s).dot(j(c)))
                / (m.m() + c.norm_sq())
        };
        let rhs = |s: f64, y: [f64; 2]| {
            let td = thetadot_of(s, y[0], y[1]);
            let dp = c0.point(s).dot(rot(-y[0], c1.velocity(s))) * td
                - c0.velocity(s).dot(rot(-y[0], j(c1.velocity(s))));
            [td, dp]
        };
        let mut y = [theta0, 0.0];
        for i in 0..n {
            y = rk4_step(&rhs, i as f64 * h, y, h);
        }
        y[0]
    }

    #[test]
    fn theta_ode_agrees_with_momentum_form() {
        let c0 = tangent_normalized(spec(CurveSpec::Circle { r: 1.0 }));
        let c1 = tangent_normalized(spec(CurveSpec::Eight));
        let m = M::new(2.0);
        for theta0 in [0.3, 1.9, 4.4] {
            let direct = shoot_theta0(&c0, &c1, m, theta0);
            let via_p = shoot_via_momentum(&c0, &c1, m, theta0);
            assert!(
                (direct.theta[ODE_STEPS] - via_p).abs() < 1e-8,
                "theta(1) mismatch at theta0 = {theta0}: {} vs {via_p}",
                direct.theta[ODE_STEPS]
            );
        }
    }

    #[test]
    fn euler_lagrange_residual_by_finite_differences() {
        let c0 = tangent_normalized(spec(CurveSpec::Circle { r: 1.0 }));
        let c1 = tangent_normalized(spec(CurveSpec::Eight));
        let m = M::new(2.0);
        let res = solve_continuous_bvp(&c0, &c1, m, 32).unwrap();
        assert!(!res.family);
        let sol = &res.solutions[0];
        let n = ODE_STEPS;
        let h = 1.0 / n as f64;
        for i in (100..n - 100).step_by(317) {
            let s = i as f64 * h;
            let p_at = |k: usize| {
                scalar_momentum(&c0, &c1, m, sol.theta[k], sol.thetadot[k], k as f64 * h)
            };
            // Five-point stencil: the third derivative of p carries (4π)³
            // from the figure eight, so O(h²) truncation would dominate.
            let dp = (p_at(i - 2) - 8.0 * p_at(i - 1) + 8.0 * p_at(i + 1) - p_at(i + 2))
                / (12.0 * h);
            let rhs = c0.point(s).dot(rot(-sol.theta[i], c1.velocity(s))) * sol.thetadot[i]
                - c0.velocity(s).dot(rot(-sol.theta[i], j(c1.velocity(s))));
            assert!(
                (dp - rhs).abs() < 1e-5 * (1.0 + rhs.abs()),
                "EL residual at s={s}: dp={dp} rhs={rhs}"
            );
        }
    }

    #[test]
    fn left_boundary_momentum_vanishes() {
        let c0 = wiggle();
        let c1 = spec(CurveSpec::Eight);
        let m = M::new(2.0);
        for theta0 in [0.0, 1.0, 3.9] {
            let sol = shoot_theta0(&c0, &c1, m, theta0);
            let p0 = scalar_momentum(&c0, &c1, m, sol.theta[0], sol.thetadot[0], 0.0);
            assert!(p0.abs() < 1e-12);
        }
    }
}
