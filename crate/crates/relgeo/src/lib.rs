//! Relative geodesics between parametrized planar curves.
//!
//! Two discrete curves `c0`, `c1` with the same number of samples are
//! compared by looking for the cheapest motion `g(s)` in SE(2) that carries
//! `c0` onto `c1` pointwise, where cost is measured by a left-invariant
//! metric on the group. The minimal deformation energy is the *discrepancy*
//! of the pair; the minimizing motion is their *relative geodesic*.
//!
//! Three independent routes to that quantity live here:
//!
//! * [`discrete`] + [`shooting`] — a variational integrator built on the
//!   Cayley map, driven by Newton shooting in the initial angle,
//! * [`energy`] — direct minimization of the discrete energy over the full
//!   angle trajectory, with an analytic gradient,
//! * [`analytic`] — the continuous boundary-value problem for smooth curves,
//!   integrated by RK4 and solved by bisection on the boundary momentum.
//!
//! The first two operate on the same discrete data and must agree to
//! round-off; the third converges to them as the sampling is refined.
//! [`morph`] renders a computed motion as a sequence of intermediate curves.
//!
//! Everything is generic over the scalar type through [`scalar::Real`];
//! the aliases at the crate root fix `f64`, which is what the command-line
//! front end and the tests use.

pub mod analytic;
pub mod curve;
pub mod discrete;
pub mod energy;
pub mod linalg;
pub mod morph;
pub mod numerics;
pub mod scalar;
pub mod se2;
pub mod shooting;

pub use curve::{CurveSpec, NormalizeMode};
pub use scalar::Real;

pub type Vec2 = linalg::Vec2<f64>;
pub type Mat2 = linalg::Mat2<f64>;
pub type GroupElement = se2::GroupElement<f64>;
pub type AlgebraElement = se2::AlgebraElement<f64>;
pub type CoAlgebraElement = se2::CoAlgebraElement<f64>;
pub type Metric = se2::Metric<f64>;
pub type DiscreteCurve = curve::DiscreteCurve<f64>;
pub type Problem<'a> = discrete::Problem<'a, f64>;
pub type GeodesicPath = discrete::GeodesicPath<f64>;
pub type ScanPoint = shooting::ScanPoint<f64>;
pub type Candidate = shooting::Candidate<f64>;
pub type DiscrepancyResult = shooting::DiscrepancyResult<f64>;
pub type MinimizeOutcome = energy::MinimizeOutcome<f64>;
pub type MorphFrame = morph::MorphFrame<f64>;
pub type ContinuousSolution = analytic::ContinuousSolution<f64>;
pub type BvpResult = analytic::BvpResult<f64>;
