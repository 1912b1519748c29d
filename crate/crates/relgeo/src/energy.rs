//! The deformation energy as a function of the angle vector alone
//! (translations eliminated through admissibility), its analytic gradient,
//! and a conjugate-gradient minimizer. Independent of the shooting solver;
//! the two must agree at stationary points, which the tests enforce.

use thiserror::Error;

use crate::discrete::Problem;
use crate::linalg::{j, rot};
use crate::scalar::{real, Real};
use crate::se2::{cayley_rotation, cayley_rotation_derivative};

/// Iteration cap of [`minimize`].
const MAX_ITERATIONS: usize = 100_000;
/// Armijo sufficient-decrease constant.
const ARMIJO_C: f64 = 1e-4;
/// Line-search backtracking factor.
const SHRINK: f64 = 0.5;
/// Maximum backtracking halvings per line search.
const MAX_BACKTRACK: usize = 60;

#[derive(Debug, Error, PartialEq)]
pub enum EnergyError {
    #[error("angle increment at interval {index} leaves the Cayley chart")]
    AngleGap { index: usize },
}

/// Scaled rotational update of interval k; errors when the increment
/// leaves the principal branch.
fn omega_of<S: Real>(dtheta: S, index: usize) -> Result<S, EnergyError> {
    if dtheta.abs() >= S::PI() {
        return Err(EnergyError::AngleGap { index });
    }
    Ok((dtheta * real::<S>(0.5)).tan() * real::<S>(2.0))
}

/// Deformation energy E₀ of the admissible trajectory with the given
/// angles: (1/2h)Σ(mω_k² + (1+ω_k²/4)‖b_k‖²).
pub fn energy<S: Real>(problem: &Problem<S>, theta: &[S]) -> Result<S, EnergyError> {
    let n = problem.n();
    assert_eq!(theta.len(), n + 1, "need one angle per node");
    let m = problem.metric().m();
    let quarter = real::<S>(0.25);
    let mut sum = S::zero();
    for k in 0..n {
        let omega = omega_of(theta[k + 1] - theta[k], k)?;
        let b = problem.b_vector(k, theta[k], omega);
        let d = S::one() + quarter * omega * omega;
        sum += m * omega * omega + d * b.norm_sq();
    }
    Ok(sum / (real::<S>(2.0) * problem.h()))
}

/// Analytic gradient of [`energy`] with respect to each angle.
pub fn gradient<S: Real>(problem: &Problem<S>, theta: &[S]) -> Result<Vec<S>, EnergyError> {
    let n = problem.n();
    assert_eq!(theta.len(), n + 1, "need one angle per node");
    let m = problem.metric().m();
    let quarter = real::<S>(0.25);

    // Per-interval quantities: Q_i (the ω-channel derivative through the
    // Cayley chart) and D_i·f_i·g_i (the explicit θ_i-dependence of b_i).
    let mut q = Vec::with_capacity(n);
    let mut direct = Vec::with_capacity(n);
    for i in 0..n {
        let omega = omega_of(theta[i + 1] - theta[i], i)?;
        let b = problem.b_vector(i, theta[i], omega);
        let d = S::one() + quarter * omega * omega;
        let c_next = problem.c0().point(i + 1);
        let qi = d * ((m + quarter * b.norm_sq()) * omega
            - d * b.dot(cayley_rotation_derivative(omega).mul_vec(c_next)));
        q.push(qi);
        let f = problem.c0().point(i) - cayley_rotation(omega).mul_vec(c_next);
        let dc1 = problem.c1().point(i + 1) - problem.c1().point(i);
        let g = j(rot(-theta[i], dc1));
        direct.push(d * f.dot(g));
    }

    let h = problem.h();
    let mut grad = Vec::with_capacity(n + 1);
    grad.push((direct[0] - q[0]) / h);
    for k in 1..n {
        grad.push((q[k - 1] - q[k] + direct[k]) / h);
    }
    grad.push(q[n - 1] / h);
    Ok(grad)
}

/// Result of a minimization run. `converged` is false when the iteration
/// cap was reached or a line search stalled; the best iterate is still
/// returned.
#[derive(Clone, Debug)]
pub struct MinimizeOutcome<S> {
    pub theta: Vec<S>,
    pub energy: S,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimizes the energy over all angles by nonlinear conjugate gradients
/// (Polak-Ribière with restarts) under Armijo backtracking, from the given
/// initial angle vector, until ‖gradient‖∞ < tol.
pub fn minimize<S: Real>(
    problem: &Problem<S>,
    theta_init: &[S],
    tol: S,
) -> Result<MinimizeOutcome<S>, EnergyError> {
    let n = problem.n();
    assert_eq!(theta_init.len(), n + 1, "need one angle per node");
    assert!(tol > S::zero());

    let mut theta = theta_init.to_vec();
    let mut f = energy(problem, &theta)?;
    let mut grad = gradient(problem, &theta)?;
    let mut dir: Vec<S> = grad.iter().map(|&g| -g).collect();
    let mut alpha_prev = S::one();

    let inf_norm = |v: &[S]| v.iter().fold(S::zero(), |a, x| a.max(x.abs()));
    let dot = |a: &[S], b: &[S]| {
        a.iter().zip(b).fold(S::zero(), |acc, (&x, &y)| acc + x * y)
    };

    for iter in 0..MAX_ITERATIONS {
        if inf_norm(&grad) < tol {
            return Ok(MinimizeOutcome { theta, energy: f, iterations: iter, converged: true });
        }

        let mut slope = dot(&grad, &dir);
        if slope >= S::zero() || iter % (n + 1) == 0 {
            // Restart along steepest descent.
            dir = grad.iter().map(|&g| -g).collect();
            slope = dot(&grad, &dir);
        }

        // Line search around the previously accepted step: backtrack until
        // the Armijo test holds, then expand while doubling keeps both the
        // test and the decrease. Out-of-chart trial points count as +∞;
        // near-stationary decreases drown in rounding, so the test gets an
        // absolute slack of a couple ulps of f.
        let slack = (S::epsilon() + S::epsilon()) * f.abs();
        let armijo = |alpha: S| -> Option<(Vec<S>, S)> {
            let trial: Vec<S> =
                theta.iter().zip(&dir).map(|(&t, &d)| t + alpha * d).collect();
            match energy(problem, &trial) {
                Ok(ft) if ft <= f + real::<S>(ARMIJO_C) * alpha * slope + slack => {
                    Some((trial, ft))
                }
                _ => None,
            }
        };
        let mut alpha = alpha_prev.min(real::<S>(1e3));
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACK {
            if let Some(hit) = armijo(alpha) {
                accepted = Some(hit);
                break;
            }
            alpha *= real::<S>(SHRINK);
        }
        let Some((mut next, mut fnext)) = accepted else {
            return Ok(MinimizeOutcome { theta, energy: f, iterations: iter, converged: false });
        };
        for _ in 0..MAX_BACKTRACK {
            let bigger = alpha + alpha;
            if bigger > real::<S>(1e3) {
                break;
            }
            match armijo(bigger) {
                Some((t2, f2)) if f2 < fnext => {
                    alpha = bigger;
                    next = t2;
                    fnext = f2;
                }
                _ => break,
            }
        }
        alpha_prev = alpha;

        let grad_next = gradient(problem, &next)?;
        // Polak-Ribière with the non-negativity safeguard.
        let gg = dot(&grad, &grad);
        let beta = if gg > S::zero() {
            let mixed = grad_next
                .iter()
                .zip(&grad)
                .fold(S::zero(), |a, (&gn, &g)| a + gn * (gn - g));
            (mixed / gg).max(S::zero())
        } else {
            S::zero()
        };
        dir = grad_next
            .iter()
            .zip(&dir)
            .map(|(&gn, &d)| -gn + beta * d)
            .collect();
        theta = next;
        f = fnext;
        grad = grad_next;
    }
    Ok(MinimizeOutcome { theta, energy: f, iterations: MAX_ITERATIONS, converged: false })
}
