//! Shooting on the initial angle: propagate first variations along an
//! integrated trajectory, Newton-iterate θ₀ against the terminal momentum,
//! scan the energy landscape, and extract the discrepancy (the least
//! geodesic energy).

use thiserror::Error;

use crate::discrete::{GeodesicPath, Problem, SolveError};
use crate::linalg::Vec2;
use crate::scalar::{real, Real};

/// Default |terminal residual| target of the Newton iteration.
pub const NEWTON_TOL: f64 = 1e-10;
/// Default Newton iteration cap.
pub const NEWTON_MAX_ITER: usize = 50;
/// Linearization denominators below this are treated as degenerate.
const SINGULAR_TOL: f64 = 1e-14;
/// A residual scan entirely below this marks a θ₀-family of geodesics.
const FAMILY_TOL: f64 = 1e-9;
/// Converged starting angles closer than this (mod 2π) are one candidate.
const DEDUPE_TOL: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum ShootError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("degenerate first-variation linearization at interval {index}")]
    SingularVariation { index: usize },
    #[error("Newton stalled at theta0 = {theta0} (residual {residual:.3e})")]
    NoConvergence { theta0: f64, residual: f64 },
    #[error("no Newton start converged")]
    NoCandidates,
}

/// Sensitivities to θ₀ (per unit δθ₀) after interval k has been processed:
/// δθ_{k+1}, δω_k, δv_k.
#[derive(Clone, Copy, Debug)]
pub struct VariationState<S> {
    pub dtheta: S,
    pub domega: S,
    pub dv: Vec2<S>,
}

/// Variation seeded at the left boundary: δθ₀ = 1, with δω₀ from implicit
/// differentiation of the left natural condition (zero when (c₀)₀ = 0) and
/// δv₀ through both the ω- and θ-sensitivities of the interval constraint.
pub fn init_variation<S: Real>(
    problem: &Problem<S>,
    path: &GeodesicPath<S>,
) -> Result<VariationState<S>, ShootError> {
    let (theta0, omega0, v0) = (path.theta[0], path.omega[0], path.v[0]);
    let b = problem.b_vector(0, theta0, omega0);
    let p = problem.dv_domega(0, omega0, b);
    let q = problem.dv_dtheta(0, theta0, omega0);
    let cd = problem.coeff_d(0, omega0, v0);
    let denom = problem.coeff_c(0, omega0, v0) + cd.dot(p);
    if denom.abs() < real::<S>(SINGULAR_TOL) {
        return Err(ShootError::SingularVariation { index: 0 });
    }
    let domega = -cd.dot(q) / denom;
    let dv = p * domega + q;
    let dtheta = S::one() + domega / (S::one() + real::<S>(0.25) * omega0 * omega0);
    Ok(VariationState { dtheta, domega, dv })
}

/// Advances the variation across interval k (1 ≤ k ≤ N−1): solves the
/// linearized interval equation for δω_k, then updates δv_k and δθ_{k+1}.
pub fn propagate_variation<S: Real>(
    problem: &Problem<S>,
    path: &GeodesicPath<S>,
    var: &VariationState<S>,
    k: usize,
) -> Result<VariationState<S>, ShootError> {
    let (theta, omega, v) = (path.theta[k], path.omega[k], path.v[k]);
    let (omega_prev, v_prev) = (path.omega[k - 1], path.v[k - 1]);

    let rhs = problem.coeff_c(k, -omega_prev, -v_prev) * var.domega
        + problem.coeff_d(k, -omega_prev, -v_prev).dot(var.dv);

    let b = problem.b_vector(k, theta, omega);
    let p = problem.dv_domega(k, omega, b);
    let q = problem.dv_dtheta(k, theta, omega);
    let cd = problem.coeff_d(k, omega, v);
    let denom = problem.coeff_c(k, omega, v) + cd.dot(p);
    if denom.abs() < real::<S>(SINGULAR_TOL) {
        return Err(ShootError::SingularVariation { index: k });
    }
    let domega = (rhs - cd.dot(q) * var.dtheta) / denom;
    let dv = p * domega + q * var.dtheta;
    let dtheta = var.dtheta + domega / (S::one() + real::<S>(0.25) * omega * omega);
    Ok(VariationState { dtheta, domega, dv })
}

/// d(terminal residual)/dθ₀ along the forward-integrated family.
pub fn terminal_residual_derivative<S: Real>(
    problem: &Problem<S>,
    path: &GeodesicPath<S>,
) -> Result<S, ShootError> {
    let n = problem.n();
    let mut var = init_variation(problem, path)?;
    for k in 1..n {
        var = propagate_variation(problem, path, &var, k)?;
    }
    let (omega, v) = (path.omega[n - 1], path.v[n - 1]);
    Ok(problem.coeff_c(n, -omega, -v) * var.domega
        + problem.coeff_d(n, -omega, -v).dot(var.dv))
}

/// Newton iteration on θ₀: the terminal residual divided by its first
/// variation, until |residual| < tol. Returns the converged path and angle.
pub fn newton_solve<S: Real>(
    problem: &Problem<S>,
    theta_guess: S,
    tol: S,
    max_iter: usize,
) -> Result<(GeodesicPath<S>, S), ShootError> {
    assert!(tol > S::zero());
    let mut theta0 = theta_guess;
    let mut residual = S::infinity();
    for _ in 0..=max_iter {
        let path = problem.integrate(theta0)?;
        residual = problem.terminal_residual(&path);
        if residual.abs() < tol {
            return Ok((path, theta0));
        }
        let slope = terminal_residual_derivative(problem, &path)?;
        let next = theta0 - residual / slope;
        if !next.is_finite() {
            break;
        }
        theta0 = next;
    }
    Err(ShootError::NoConvergence {
        theta0: theta0.to_f64().unwrap_or(f64::NAN),
        residual: residual.to_f64().unwrap_or(f64::NAN),
    })
}

/// One θ₀ sample of the energy landscape. Failed integrations are recorded
/// with NaN energy and residual.
#[derive(Clone, Copy, Debug)]
pub struct ScanPoint<S> {
    pub theta0: S,
    pub energy: S,
    pub residual: S,
}

/// Integrates at `grid` uniform angles over [0, 2π).
pub fn scan_theta0<S: Real>(problem: &Problem<S>, grid: usize) -> Vec<ScanPoint<S>> {
    assert!(grid >= 2, "scan needs at least two angles");
    let two_pi = S::PI() + S::PI();
    (0..grid)
        .map(|i| {
            let theta0 = two_pi * real::<S>(i as f64) / real::<S>(grid as f64);
            match problem.integrate(theta0) {
                Ok(path) => ScanPoint {
                    theta0,
                    energy: path.energy,
                    residual: problem.terminal_residual(&path),
                },
                Err(_) => ScanPoint { theta0, energy: S::nan(), residual: S::nan() },
            }
        })
        .collect()
}

/// A shooting outcome retained by the discrepancy search.
#[derive(Clone, Copy, Debug)]
pub struct Candidate<S> {
    pub theta0: S,
    pub energy: S,
    pub residual: S,
    pub converged: bool,
}

/// Result of the global θ₀ search.
#[derive(Clone, Debug)]
pub struct DiscrepancyResult<S> {
    /// Least energy over converged candidates.
    pub discrepancy: S,
    /// Its starting angle, reduced to [0, 2π).
    pub theta0_min: S,
    /// True when every θ₀ satisfies the boundary conditions (degenerate
    /// cases such as point curves); candidates then hold the scan itself.
    pub family: bool,
    pub candidates: Vec<Candidate<S>>,
}

/// Global discrepancy search with the default Newton settings.
pub fn discrepancy<S: Real>(
    problem: &Problem<S>,
    grid: usize,
) -> Result<DiscrepancyResult<S>, ShootError> {
    discrepancy_with_tol(problem, grid, real::<S>(NEWTON_TOL), NEWTON_MAX_ITER)
}

/// Scans θ₀, starts a Newton solve from every cyclic local minimum of the
/// scanned energy and every residual sign change, deduplicates converged
/// angles (1e-6 apart mod 2π), and takes the least converged energy.
pub fn discrepancy_with_tol<S: Real>(
    problem: &Problem<S>,
    grid: usize,
    tol: S,
    max_iter: usize,
) -> Result<DiscrepancyResult<S>, ShootError> {
    let scan = scan_theta0(problem, grid);
    let two_pi = S::PI() + S::PI();

    let finite: Vec<&ScanPoint<S>> = scan.iter().filter(|p| p.energy.is_finite()).collect();
    if finite.is_empty() {
        return Err(ShootError::NoCandidates);
    }

    // Degenerate family: the terminal condition holds everywhere, so the
    // scan itself is the candidate set. The energy is flat across the
    // family; report the first angle rather than the argmin of rounding
    // noise.
    let max_res = finite.iter().fold(S::zero(), |a, p| a.max(p.residual.abs()));
    if finite.len() == scan.len() && max_res < real::<S>(FAMILY_TOL) {
        return Ok(DiscrepancyResult {
            discrepancy: scan[0].energy,
            theta0_min: reduce_angle(scan[0].theta0),
            family: true,
            candidates: scan
                .iter()
                .map(|p| Candidate {
                    theta0: p.theta0,
                    energy: p.energy,
                    residual: p.residual,
                    converged: true,
                })
                .collect(),
        });
    }

    // Newton starts: cyclic energy minima and residual sign-change
    // midpoints (NaN scan points never qualify).
    let mut starts: Vec<S> = Vec::new();
    let n = scan.len();
    for i in 0..n {
        let (prev, here, next) =
            (scan[(i + n - 1) % n].energy, scan[i].energy, scan[(i + 1) % n].energy);
        if here.is_finite()
            && (!prev.is_finite() || here <= prev)
            && (!next.is_finite() || here <= next)
        {
            starts.push(scan[i].theta0);
        }
        let (ra, rb) = (scan[i].residual, scan[(i + 1) % n].residual);
        if ra.is_finite() && rb.is_finite() && ra * rb < S::zero() {
            // Midpoint of the bracketing grid interval.
            starts.push(scan[i].theta0 + S::PI() / real::<S>(n as f64));
        }
    }

    let mut converged: Vec<Candidate<S>> = Vec::new();
    let mut failed: Vec<Candidate<S>> = Vec::new();
    for &start in &starts {
        match newton_solve(problem, start, tol, max_iter) {
            Ok((path, theta0)) => converged.push(Candidate {
                theta0: reduce_angle(theta0),
                energy: path.energy,
                residual: problem.terminal_residual(&path),
                converged: true,
            }),
            Err(ShootError::NoConvergence { theta0, residual }) => {
                let theta0 = real::<S>(theta0);
                if let Ok(path) = problem.integrate(theta0) {
                    failed.push(Candidate {
                        theta0: reduce_angle(theta0),
                        energy: path.energy,
                        residual: real::<S>(residual),
                        converged: false,
                    });
                }
            }
            // Integration or linearization broke down along this start;
            // other starts may still succeed.
            Err(_) => {}
        }
    }
    if converged.is_empty() {
        return Err(ShootError::NoCandidates);
    }

    converged.sort_by(|a, b| a.theta0.partial_cmp(&b.theta0).unwrap());
    converged.dedup_by(|a, b| {
        let mut d = (a.theta0 - b.theta0).abs() % two_pi;
        d = d.min(two_pi - d);
        d < real::<S>(DEDUPE_TOL)
    });

    let best = converged
        .iter()
        .min_by(|a, b| a.energy.partial_cmp(&b.energy).unwrap())
        .copied()
        .unwrap();
    let mut candidates = converged;
    candidates.extend(failed);
    candidates.sort_by(|a, b| a.theta0.partial_cmp(&b.theta0).unwrap());
    Ok(DiscrepancyResult {
        discrepancy: best.energy,
        theta0_min: best.theta0,
        family: false,
        candidates,
    })
}

/// Reduces an angle into [0, 2π).
fn reduce_angle<S: Real>(theta: S) -> S {
    let two_pi = S::PI() + S::PI();
    let mut t = theta % two_pi;
    if t < S::zero() {
        t += two_pi;
    }
    t
}
