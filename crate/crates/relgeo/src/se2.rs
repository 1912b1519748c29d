//! The group SE(2) of planar rigid motions, its Lie algebra, and the Cayley
//! machinery the discrete solver is built on.
//!
//! A group element is stored as `(theta, x)` with rotation angle `theta`
//! (unreduced: accumulated angles keep their winding) and translation `x`.
//! An algebra element is `(omega, v)` with matrix form
//! `[[-omega J, v], [0, 0]]`, `J = [[0, 1], [-1, 0]]`, so positive `omega`
//! generates counterclockwise rotation. The dual pairing is
//! `<(pi, p), (omega, v)> = pi omega + p . v`.

use thiserror::Error;

use crate::linalg::{j, rot, Mat2, Mat3, Vec2};
use crate::scalar::{real, Real};

/// Angle below which trigonometric quotients switch to series expansions.
const SMALL_ANGLE: f64 = 1e-4;

#[derive(Debug, Error, PartialEq)]
pub enum Se2Error {
    /// The Cayley chart covers rotations of angle strictly inside `(-pi, pi)`.
    #[error("rotation angle {theta} outside the Cayley chart (-pi, pi)")]
    AngleOutOfRange { theta: f64 },
    /// Logarithm requested at a rotation of angle exactly `pi`.
    #[error("logarithm undefined at rotation angle {theta}")]
    LogUndefined { theta: f64 },
}

/// Rigid motion `c -> R_theta c + x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupElement<S> {
    pub theta: S,
    pub x: Vec2<S>,
}

/// Element `(omega, v)` of the Lie algebra se(2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgebraElement<S> {
    pub omega: S,
    pub v: Vec2<S>,
}

/// Element `(pi, p)` of the dual algebra.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoAlgebraElement<S> {
    pub pi: S,
    pub p: Vec2<S>,
}

/// Left-invariant metric `|(omega, v)|^2 = m omega^2 + |v|^2` on se(2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Metric<S> {
    m: S,
}

impl<S: Real> Metric<S> {
    /// The rotational weight `m` must be positive.
    pub fn new(m: S) -> Self {
        assert!(m > S::zero(), "metric weight must be positive");
        Metric { m }
    }

    #[inline]
    pub fn m(&self) -> S {
        self.m
    }

    #[inline]
    pub fn norm_sq(&self, xi: AlgebraElement<S>) -> S {
        self.m * xi.omega * xi.omega + xi.v.norm_sq()
    }
}

impl<S: Real> GroupElement<S> {
    #[inline]
    pub fn new(theta: S, x: Vec2<S>) -> Self {
        GroupElement { theta, x }
    }

    #[inline]
    pub fn identity() -> Self {
        GroupElement { theta: S::zero(), x: Vec2::zero() }
    }

    /// Group product; in homogeneous matrices this is
    /// `[[R_a, x_a],[0,1]] [[R_b, x_b],[0,1]]`.
    #[inline]
    pub fn compose(&self, other: &Self) -> Self {
        GroupElement {
            theta: self.theta + other.theta,
            x: rot(self.theta, other.x) + self.x,
        }
    }

    #[inline]
    pub fn inverse(&self) -> Self {
        GroupElement {
            theta: -self.theta,
            x: -rot(-self.theta, self.x),
        }
    }

    /// Action on a point of the plane: `R_theta c + x`.
    #[inline]
    pub fn act(&self, c: Vec2<S>) -> Vec2<S> {
        rot(self.theta, c) + self.x
    }

    /// Homogeneous 3x3 form `[[R_theta, x], [0, 1]]`.
    pub fn matrix(&self) -> Mat3<S> {
        let (s, c) = self.theta.sin_cos();
        Mat3::new([
            [c, -s, self.x.x],
            [s, c, self.x.y],
            [S::zero(), S::zero(), S::one()],
        ])
    }
}

impl<S: Real> AlgebraElement<S> {
    #[inline]
    pub fn new(omega: S, v: Vec2<S>) -> Self {
        AlgebraElement { omega, v }
    }

    #[inline]
    pub fn zero() -> Self {
        AlgebraElement { omega: S::zero(), v: Vec2::zero() }
    }

    /// Matrix form `[[-omega J, v], [0, 0]]`.
    pub fn matrix(&self) -> Mat3<S> {
        Mat3::new([
            [S::zero(), -self.omega, self.v.x],
            [self.omega, S::zero(), self.v.y],
            [S::zero(), S::zero(), S::zero()],
        ])
    }

    /// Components `(omega, v)` read back from a matrix produced by finite
    /// differencing curves through the identity.
    pub fn from_matrix(m: &Mat3<S>) -> Self {
        AlgebraElement {
            omega: m.m[1][0],
            v: Vec2::new(m.m[0][2], m.m[1][2]),
        }
    }
}

impl<S: Real> CoAlgebraElement<S> {
    #[inline]
    pub fn new(pi: S, p: Vec2<S>) -> Self {
        CoAlgebraElement { pi, p }
    }

    /// Dual pairing `<mu, xi> = pi omega + p . v`.
    #[inline]
    pub fn pair(&self, xi: AlgebraElement<S>) -> S {
        self.pi * xi.omega + self.p.dot(xi.v)
    }
}

/// Reduces an angle to the principal branch `(-pi, pi]`.
pub fn principal_angle<S: Real>(theta: S) -> S {
    let two_pi = S::PI() + S::PI();
    let mut t = theta % two_pi;
    if t > S::PI() {
        t -= two_pi;
    } else if t <= -S::PI() {
        t += two_pi;
    }
    t
}

/// Rotation block of the Cayley map,
/// `(1 + omega^2/4)^-1 [[1 - omega^2/4, -omega], [omega, 1 - omega^2/4]]`,
/// a rotation by `2 atan(omega/2)`.
pub fn cayley_rotation<S: Real>(omega: S) -> Mat2<S> {
    let q = omega * omega * real::<S>(0.25);
    let d = S::one() + q;
    Mat2::new((S::one() - q) / d, -omega / d, omega / d, (S::one() - q) / d)
}

/// Derivative of [`cayley_rotation`] with respect to `omega`.
pub fn cayley_rotation_derivative<S: Real>(omega: S) -> Mat2<S> {
    let q = omega * omega * real::<S>(0.25);
    let d2 = (S::one() + q) * (S::one() + q);
    Mat2::new(-omega / d2, -(S::one() - q) / d2, (S::one() - q) / d2, -omega / d2)
}

/// `A(omega) = (1 + omega^2/4)^-1 [[1, -omega/2], [omega/2, 1]]`; the
/// translation block of the Cayley map is `A(omega) v`.
pub fn a_matrix<S: Real>(omega: S) -> Mat2<S> {
    let half = omega * real::<S>(0.5);
    let d = S::one() + half * half;
    Mat2::new(S::one() / d, -half / d, half / d, S::one() / d)
}

/// `B(omega) = A(omega)^-1 = [[1, omega/2], [-omega/2, 1]]`.
pub fn b_matrix<S: Real>(omega: S) -> Mat2<S> {
    let half = omega * real::<S>(0.5);
    Mat2::new(S::one(), half, -half, S::one())
}

/// Cayley map se(2) -> SE(2): rotation by `2 atan(omega/2)` and translation
/// `A(omega) v`. Unlike the exponential it is defined for all `omega` and
/// needs no trigonometry.
pub fn cayley<S: Real>(xi: AlgebraElement<S>) -> GroupElement<S> {
    let theta = real::<S>(2.0) * (xi.omega * real::<S>(0.5)).atan();
    GroupElement::new(theta, a_matrix(xi.omega).mul_vec(xi.v))
}

/// Inverse Cayley map. The rotation angle is reduced to the principal branch
/// first; angles reducing to exactly `pi` are outside the chart.
pub fn cayley_inv<S: Real>(g: &GroupElement<S>) -> Result<AlgebraElement<S>, Se2Error> {
    let t = principal_angle(g.theta);
    if !(t.abs() < S::PI()) {
        return Err(Se2Error::AngleOutOfRange { theta: g.theta.to_f64().unwrap_or(f64::NAN) });
    }
    let omega = real::<S>(2.0) * (t * real::<S>(0.5)).tan();
    Ok(AlgebraElement::new(omega, b_matrix(omega).mul_vec(g.x)))
}

/// Matrix `M(xi)` of the inverse right-trivialized tangent of the Cayley map,
/// acting on algebra coordinates `(omega, v1, v2)`:
///
/// ```text
/// [ 1 + omega^2/4        0        0   ]
/// [ -v2/2 + omega v1/4   1   omega/2  ]
/// [  v1/2 + omega v2/4  -omega/2   1  ]
/// ```
pub fn dcay_inv_matrix<S: Real>(xi: AlgebraElement<S>) -> Mat3<S> {
    let half = real::<S>(0.5);
    let quarter = real::<S>(0.25);
    let om = xi.omega;
    Mat3::new([
        [S::one() + om * om * quarter, S::zero(), S::zero()],
        [-xi.v.y * half + om * xi.v.x * quarter, S::one(), om * half],
        [xi.v.x * half + om * xi.v.y * quarter, -om * half, S::one()],
    ])
}

/// Dual map `mu -> M(xi)^T mu`, used to transport momenta in the discrete
/// equations of motion.
pub fn dcay_inv_star<S: Real>(
    xi: AlgebraElement<S>,
    mu: CoAlgebraElement<S>,
) -> CoAlgebraElement<S> {
    let half = real::<S>(0.5);
    let quarter = real::<S>(0.25);
    let om = xi.omega;
    let pi = (S::one() + om * om * quarter) * mu.pi
        + (-xi.v.y * half + om * xi.v.x * quarter) * mu.p.x
        + (xi.v.x * half + om * xi.v.y * quarter) * mu.p.y;
    let p = Vec2::new(
        mu.p.x - om * half * mu.p.y,
        om * half * mu.p.x + mu.p.y,
    );
    CoAlgebraElement::new(pi, p)
}

/// Adjoint action `Ad_g xi = (omega, omega J x_g + R_theta v)`.
pub fn ad_group<S: Real>(g: &GroupElement<S>, xi: AlgebraElement<S>) -> AlgebraElement<S> {
    AlgebraElement::new(xi.omega, j(g.x) * xi.omega + rot(g.theta, xi.v))
}

/// Projection of a momentum onto the annihilator complement of the isotropy
/// direction at `c`: `pi + p . J c`.
#[inline]
pub fn project<S: Real>(c: Vec2<S>, mu: CoAlgebraElement<S>) -> S {
    mu.pi + mu.p.dot(j(c))
}

/// Group exponential: rotation by `omega` and translation `V(omega) v` with
/// `V(omega) = [[sin w / w, -(1-cos w)/w], [(1-cos w)/w, sin w / w]]`.
pub fn exp_se2<S: Real>(xi: AlgebraElement<S>) -> GroupElement<S> {
    let w = xi.omega;
    let (a, b) = if w.abs() < real::<S>(SMALL_ANGLE) {
        let w2 = w * w;
        (
            S::one() - w2 / real::<S>(6.0),
            w * real::<S>(0.5) - w * w2 / real::<S>(24.0),
        )
    } else {
        (w.sin() / w, (S::one() - w.cos()) / w)
    };
    let x = Vec2::new(a * xi.v.x - b * xi.v.y, b * xi.v.x + a * xi.v.y);
    GroupElement::new(w, x)
}

/// Group logarithm on the principal branch. Rotations reducing to exactly
/// `pi` are rejected.
pub fn log_se2<S: Real>(g: &GroupElement<S>) -> Result<AlgebraElement<S>, Se2Error> {
    let w = principal_angle(g.theta);
    if !(w.abs() < S::PI()) {
        return Err(Se2Error::LogUndefined { theta: g.theta.to_f64().unwrap_or(f64::NAN) });
    }
    let (a, b) = if w.abs() < real::<S>(SMALL_ANGLE) {
        let w2 = w * w;
        (
            S::one() - w2 / real::<S>(6.0),
            w * real::<S>(0.5) - w * w2 / real::<S>(24.0),
        )
    } else {
        (w.sin() / w, (S::one() - w.cos()) / w)
    };
    let det = a * a + b * b;
    let v = Vec2::new(
        (a * g.x.x + b * g.x.y) / det,
        (-b * g.x.x + a * g.x.y) / det,
    );
    Ok(AlgebraElement::new(w, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    type G = GroupElement<f64>;
    type Xi = AlgebraElement<f64>;

    fn close_group(a: &G, b: &G, tol: f64) -> bool {
        principal_angle(a.theta - b.theta).abs() < tol && (a.x - b.x).norm() < tol
    }

    #[test]
    fn compose_quarter_turns() {
        let g = G::new(PI / 2.0, Vec2::new(1.0, 0.0));
        let gg = g.compose(&g);
        assert_abs_diff_eq!(gg.theta, PI, epsilon = 1e-15);
        assert_abs_diff_eq!(gg.x.x, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(gg.x.y, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn inverse_quarter_turn() {
        let g = G::new(PI / 2.0, Vec2::new(1.0, 0.0));
        let gi = g.inverse();
        assert_abs_diff_eq!(gi.theta, -PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(gi.x.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(gi.x.y, 1.0, epsilon = 1e-15);
        assert!(close_group(&g.compose(&gi), &G::identity(), 1e-15));
    }

    #[test]
    fn act_is_group_action() {
        let g = G::new(0.7, Vec2::new(0.3, -0.2));
        let k = G::new(-1.9, Vec2::new(1.1, 0.5));
        let c = Vec2::new(-0.4, 2.0);
        let via_compose = g.compose(&k).act(c);
        let via_nested = g.act(k.act(c));
        assert!((via_compose - via_nested).norm() < 1e-14);
    }

    #[test]
    fn norm_sq_example() {
        let metric = Metric::new(2.0);
        assert_abs_diff_eq!(
            metric.norm_sq(Xi::new(1.0, Vec2::new(1.0, 1.0))),
            4.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn left_invariance_of_trivialized_norm() {
        // A tangent vector at g written as g * xi keeps its body components
        // under left translation by any h, hence the same norm.
        let g = G::new(0.4, Vec2::new(1.0, -0.3));
        let h = G::new(-2.2, Vec2::new(0.2, 5.0));
        let xi = Xi::new(0.8, Vec2::new(-1.0, 0.25));
        let vg = g.matrix().mul_mat(xi.matrix());
        let vhg = h.matrix().mul_mat(vg);
        let xi_back = AlgebraElement::from_matrix(&g.inverse().matrix().mul_mat(vg));
        let xi_back_h = AlgebraElement::from_matrix(
            &h.compose(&g).inverse().matrix().mul_mat(vhg),
        );
        let metric = Metric::new(2.0);
        assert_abs_diff_eq!(metric.norm_sq(xi), metric.norm_sq(xi_back), epsilon = 1e-12);
        assert_abs_diff_eq!(
            metric.norm_sq(xi_back),
            metric.norm_sq(xi_back_h),
            epsilon = 1e-12
        );
    }

    #[test]
    fn cayley_at_zero_and_two() {
        assert!(close_group(&cayley(Xi::zero()), &G::identity(), 1e-16));
        let g = cayley(Xi::new(2.0, Vec2::zero()));
        assert_abs_diff_eq!(g.theta, PI / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn cayley_matches_matrix_form() {
        let xi = Xi::new(1.3, Vec2::new(0.4, -2.0));
        let g = cayley(xi);
        let rhat = cayley_rotation(xi.omega);
        let rg = Mat2::rotation(g.theta);
        assert!(rhat.max_abs_diff(rg) < 1e-15);
    }

    #[test]
    fn cayley_inv_round_trip_and_angle() {
        let g = G::new(PI / 2.0, Vec2::new(1.0, 1.0));
        let xi = cayley_inv(&g).unwrap();
        assert_abs_diff_eq!(xi.omega, 2.0, epsilon = 1e-14);
        assert!(close_group(&cayley(xi), &g, 1e-14));
    }

    #[test]
    fn cayley_inv_rejects_half_turn() {
        let g = G::new(PI, Vec2::zero());
        assert!(matches!(cayley_inv(&g), Err(Se2Error::AngleOutOfRange { .. })));
        let g = G::new(3.0 * PI, Vec2::zero());
        assert!(matches!(cayley_inv(&g), Err(Se2Error::AngleOutOfRange { .. })));
    }

    #[test]
    fn cayley_inv_reduces_winding() {
        let g = G::new(2.0 * PI + 0.3, Vec2::new(0.1, 0.0));
        let xi = cayley_inv(&g).unwrap();
        assert_abs_diff_eq!(xi.omega, 2.0 * (0.15f64).tan(), epsilon = 1e-13);
    }

    #[test]
    fn dcay_inv_matrix_examples() {
        let id = dcay_inv_matrix(Xi::zero());
        assert!(id.max_abs_diff(Mat3::identity()) < 1e-16);
        let m = dcay_inv_matrix(Xi::new(2.0, Vec2::zero()));
        let want = Mat3::new([[2.0, 0.0, 0.0], [0.0, 1.0, 1.0], [0.0, -1.0, 1.0]]);
        assert!(m.max_abs_diff(want) < 1e-15);
    }

    /// Finite-difference forward tangent of the Cayley map at xi applied to
    /// eta: d/dt Cay(xi + t eta) Cay(xi)^{-1} at t = 0, as a matrix.
    fn dcay_fd(xi: Xi, eta: Xi, eps: f64) -> Xi {
        let plus = cayley(Xi::new(xi.omega + eps * eta.omega, xi.v + eta.v * eps));
        let minus = cayley(Xi::new(xi.omega - eps * eta.omega, xi.v - eta.v * eps));
        let inv = cayley(xi).inverse();
        let a = plus.compose(&inv).matrix();
        let b = minus.compose(&inv).matrix();
        let mut d = [[0.0; 3]; 3];
        for i in 0..3 {
            for jj in 0..3 {
                d[i][jj] = (a.m[i][jj] - b.m[i][jj]) / (2.0 * eps);
            }
        }
        AlgebraElement::from_matrix(&Mat3::new(d))
    }

    #[test]
    fn dcay_inv_matrix_inverts_fd_tangent() {
        let cases = [
            (Xi::new(0.9, Vec2::new(0.2, -0.7)), Xi::new(-0.3, Vec2::new(1.0, 0.4))),
            (Xi::new(-1.6, Vec2::new(1.4, 0.1)), Xi::new(0.8, Vec2::new(-0.2, -1.1))),
        ];
        for (xi, eta) in cases {
            let fwd = dcay_fd(xi, eta, 1e-6);
            let back = dcay_inv_matrix(xi).mul_vec([fwd.omega, fwd.v.x, fwd.v.y]);
            assert_abs_diff_eq!(back[0], eta.omega, epsilon = 1e-6);
            assert_abs_diff_eq!(back[1], eta.v.x, epsilon = 1e-6);
            assert_abs_diff_eq!(back[2], eta.v.y, epsilon = 1e-6);
        }
    }

    #[test]
    fn dcay_inv_star_is_transpose_in_pairing() {
        let xi = Xi::new(0.7, Vec2::new(-0.4, 1.2));
        let eta = Xi::new(-1.1, Vec2::new(0.6, 0.3));
        let mu = CoAlgebraElement::new(0.9, Vec2::new(-1.3, 0.5));
        let m_eta = dcay_inv_matrix(xi).mul_vec([eta.omega, eta.v.x, eta.v.y]);
        let lhs = mu.pi * m_eta[0] + mu.p.x * m_eta[1] + mu.p.y * m_eta[2];
        let rhs = dcay_inv_star(xi, mu).pair(eta);
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
    }

    #[test]
    fn dcay_inv_star_first_component_closed_form() {
        // First component equals (1 + omega^2/4) pi - p . B(omega) J v / 2.
        let xi = Xi::new(1.2, Vec2::new(0.5, -0.9));
        let mu = CoAlgebraElement::new(-0.4, Vec2::new(0.7, 1.1));
        let got = dcay_inv_star(xi, mu).pi;
        let want = (1.0 + xi.omega * xi.omega / 4.0) * mu.pi
            - 0.5 * mu.p.dot(b_matrix(xi.omega).mul_vec(j(xi.v)));
        assert_abs_diff_eq!(got, want, epsilon = 1e-14);
    }

    #[test]
    fn ad_group_examples() {
        let xi = Xi::new(1.0, Vec2::new(1.0, 0.0));
        let rot_g = G::new(PI / 2.0, Vec2::zero());
        let got = ad_group(&rot_g, xi);
        assert_abs_diff_eq!(got.omega, 1.0, epsilon = 1e-15);
        assert!((got.v - Vec2::new(0.0, 1.0)).norm() < 1e-15);

        let trans_g = G::new(0.0, Vec2::new(0.0, 1.0));
        let got = ad_group(&trans_g, xi);
        assert!((got.v - Vec2::new(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn ad_group_matches_conjugation() {
        let g = G::new(-0.8, Vec2::new(0.4, 1.7));
        let xi = Xi::new(0.6, Vec2::new(-1.0, 0.2));
        let conj = g
            .matrix()
            .mul_mat(xi.matrix())
            .mul_mat(g.inverse().matrix());
        let direct = ad_group(&g, xi).matrix();
        assert!(conj.max_abs_diff(direct) < 1e-13);
    }

    #[test]
    fn dcay_inv_adjoint_relation() {
        // dCay^{-1}_xi (eta) = dCay^{-1}_{-xi} (Ad_{Cay(-xi)} eta)
        let xi = Xi::new(0.9, Vec2::new(0.3, -0.6));
        let eta = Xi::new(-0.5, Vec2::new(0.8, 0.2));
        let lhs = dcay_inv_matrix(xi).mul_vec([eta.omega, eta.v.x, eta.v.y]);
        let neg = Xi::new(-xi.omega, -xi.v);
        let ad = ad_group(&cayley(neg), eta);
        let rhs = dcay_inv_matrix(neg).mul_vec([ad.omega, ad.v.x, ad.v.y]);
        for i in 0..3 {
            assert_abs_diff_eq!(lhs[i], rhs[i], epsilon = 1e-13);
        }
    }

    #[test]
    fn project_examples() {
        let mu = CoAlgebraElement::new(1.0, Vec2::new(0.0, 1.0));
        assert_abs_diff_eq!(project(Vec2::new(1.0, 0.0), mu), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(project(Vec2::zero(), mu), mu.pi, epsilon = 1e-15);
    }

    #[test]
    fn project_kills_isotropy_momenta() {
        // Momenta of the form (p . J c, p) annihilate nothing beyond the
        // isotropy direction: P_c((- p . J c, p)) recovers zero.
        let c = Vec2::new(0.6, -1.4);
        let p = Vec2::new(1.1, 0.8);
        let mu = CoAlgebraElement::new(-p.dot(j(c)), p);
        assert_abs_diff_eq!(project(c, mu), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn ab_matrices_and_bj_identity() {
        assert!(a_matrix(0.0).max_abs_diff(Mat2::identity()) < 1e-16);
        assert!(b_matrix(0.0).max_abs_diff(Mat2::identity()) < 1e-16);
        let b = b_matrix(2.0).mul_vec(Vec2::new(1.0, 0.0));
        assert!((b - Vec2::new(1.0, -1.0)).norm() < 1e-15);
        for om in [-3.0f64, -0.4, 0.9, 7.5] {
            let prod = a_matrix(om).mul_mat(b_matrix(om));
            assert!(prod.max_abs_diff(Mat2::identity()) < 1e-14);
            // B(omega) J = J - (omega/2) I
            let bj = b_matrix(om).mul_mat(Mat2::new(0.0, 1.0, -1.0, 0.0));
            let want = Mat2::new(-om / 2.0, 1.0, -1.0, -om / 2.0);
            assert!(bj.max_abs_diff(want) < 1e-14);
        }
    }

    #[test]
    fn cayley_rotation_derivative_at_zero_and_fd() {
        let d0 = cayley_rotation_derivative(0.0);
        assert!(d0.max_abs_diff(Mat2::new(0.0, -1.0, 1.0, 0.0)) < 1e-16);
        for om in [-1.0f64, 0.5, 3.0] {
            let eps = 1e-6;
            let plus = cayley_rotation(om + eps);
            let minus = cayley_rotation(om - eps);
            let fd = Mat2::new(
                (plus.a - minus.a) / (2.0 * eps),
                (plus.b - minus.b) / (2.0 * eps),
                (plus.c - minus.c) / (2.0 * eps),
                (plus.d - minus.d) / (2.0 * eps),
            );
            assert!(cayley_rotation_derivative(om).max_abs_diff(fd) < 1e-8);
        }
    }

    #[test]
    fn rotation_derivative_is_skew_in_body_frame() {
        // d(R^T R)/domega = 0, so R^T dR/domega must be antisymmetric.
        for om in [-2.4f64, 0.1, 1.7] {
            let s = cayley_rotation(om)
                .transpose()
                .mul_mat(cayley_rotation_derivative(om));
            assert!(s.a.abs() < 1e-15 && s.d.abs() < 1e-15);
            assert!((s.b + s.c).abs() < 1e-15);
        }
    }

    #[test]
    fn exp_log_examples() {
        assert!(close_group(&exp_se2(Xi::zero()), &G::identity(), 1e-16));
        let g = exp_se2(Xi::new(PI / 2.0, Vec2::zero()));
        assert_abs_diff_eq!(g.theta, PI / 2.0, epsilon = 1e-15);
        assert!(log_se2(&G::identity()).unwrap() == Xi::zero());
        assert!(matches!(
            log_se2(&G::new(PI, Vec2::new(0.3, 0.0))),
            Err(Se2Error::LogUndefined { .. })
        ));
    }

    #[test]
    fn exp_log_round_trip_small_angles() {
        // Exercises the series branch.
        let xi = Xi::new(3e-5, Vec2::new(0.7, -0.2));
        let back = log_se2(&exp_se2(xi)).unwrap();
        assert_abs_diff_eq!(back.omega, xi.omega, epsilon = 1e-16);
        assert!((back.v - xi.v).norm() < 1e-12);
    }

    proptest! {
        #[test]
        fn cayley_pair_is_identity(
            om in -20.0f64..20.0,
            vx in -5.0f64..5.0,
            vy in -5.0f64..5.0,
        ) {
            let xi = Xi::new(om, Vec2::new(vx, vy));
            let neg = Xi::new(-om, Vec2::new(-vx, -vy));
            let prod = cayley(neg).compose(&cayley(xi));
            prop_assert!(principal_angle(prod.theta).abs() < 1e-13);
            prop_assert!(prod.x.norm() < 1e-12);
        }

        #[test]
        fn cayley_round_trip(
            om in -50.0f64..50.0,
            vx in -10.0f64..10.0,
            vy in -10.0f64..10.0,
        ) {
            let xi = Xi::new(om, Vec2::new(vx, vy));
            let back = cayley_inv(&cayley(xi)).unwrap();
            let scale = 1.0 + om.abs().max(vx.abs()).max(vy.abs());
            prop_assert!((back.omega - om).abs() < 1e-10 * scale * scale);
            prop_assert!((back.v - xi.v).norm() < 1e-10 * scale * scale);
        }

        #[test]
        fn exp_log_round_trip(
            om in -3.1f64..3.1,
            vx in -5.0f64..5.0,
            vy in -5.0f64..5.0,
        ) {
            let xi = Xi::new(om, Vec2::new(vx, vy));
            let back = log_se2(&exp_se2(xi)).unwrap();
            prop_assert!((back.omega - om).abs() < 1e-12);
            prop_assert!((back.v - xi.v).norm() < 1e-10);
        }

        #[test]
        fn norm_sq_positive_definite(
            om in -10.0f64..10.0,
            vx in -10.0f64..10.0,
            vy in -10.0f64..10.0,
            m in 0.01f64..50.0,
        ) {
            let metric = Metric::new(m);
            let xi = Xi::new(om, Vec2::new(vx, vy));
            let n = metric.norm_sq(xi);
            prop_assert!(n >= 0.0);
            if om != 0.0 || vx != 0.0 || vy != 0.0 {
                prop_assert!(n > 0.0);
            }
        }

        #[test]
        fn compose_inverse_round_trip(
            th in -6.0f64..6.0,
            x in -4.0f64..4.0,
            y in -4.0f64..4.0,
        ) {
            let g = G::new(th, Vec2::new(x, y));
            let e = g.compose(&g.inverse());
            prop_assert!(principal_angle(e.theta).abs() < 1e-13);
            prop_assert!(e.x.norm() < 1e-13);
        }
    }
}
