//! Intermediate curves between the endpoints of a solved deformation:
//! each node's transformation is interpolated along its one-parameter
//! subgroup, g_ε = exp(ε·log g), and applied to the template curve.

use thiserror::Error;

use crate::curve::DiscreteCurve;
use crate::discrete::GeodesicPath;
use crate::scalar::{real, Real};
use crate::se2::{exp_se2, log_se2, AlgebraElement, GroupElement};

#[derive(Debug, Error, PartialEq)]
pub enum MorphError {
    #[error("rotation at node {index} lies outside the exponential chart")]
    LogUndefined { index: usize },
}

/// One intermediate curve of the deformation.
#[derive(Clone, Debug)]
pub struct MorphFrame<S> {
    pub epsilon: S,
    pub curve: DiscreteCurve<S>,
}

/// exp(ε·log g): the identity at ε = 0, g itself at ε = 1. Requires the
/// rotation angle to reduce strictly inside (−π, π).
pub fn interpolate_element<S: Real>(
    g: &GroupElement<S>,
    epsilon: S,
) -> Result<GroupElement<S>, crate::se2::Se2Error> {
    let xi = log_se2(g)?;
    Ok(exp_se2(AlgebraElement::new(epsilon * xi.omega, xi.v * epsilon)))
}

/// Interpolates the whole transformation field at `frames` uniform ε values
/// in [0, 1] and applies it pointwise to the template curve. The first
/// frame reproduces c₀ and the last reproduces c₁ (through admissibility).
pub fn morph<S: Real>(
    path: &GeodesicPath<S>,
    c0: &DiscreteCurve<S>,
    frames: usize,
) -> Result<Vec<MorphFrame<S>>, MorphError> {
    assert!(frames >= 2, "need at least the two endpoint frames");
    assert_eq!(path.theta.len(), c0.n() + 1, "path and curve grids differ");

    let logs: Vec<AlgebraElement<S>> = (0..=c0.n())
        .map(|k| log_se2(&path.element(k)).map_err(|_| MorphError::LogUndefined { index: k }))
        .collect::<Result<_, _>>()?;

    let mut out = Vec::with_capacity(frames);
    for f in 0..frames {
        let epsilon = real::<S>(f as f64) / real::<S>((frames - 1) as f64);
        let points = logs
            .iter()
            .enumerate()
            .map(|(k, xi)| {
                let g = exp_se2(AlgebraElement::new(epsilon * xi.omega, xi.v * epsilon));
                g.act(c0.point(k))
            })
            .collect();
        out.push(MorphFrame {
            epsilon,
            curve: DiscreteCurve::new(points).expect("interpolated points stay finite"),
        });
    }
    Ok(out)
}
