//! Discrete planar curves: the two inputs `c0`, `c1` of the matching
//! problem, their analytic generators, normalization, and measurement.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::linalg::{rot, Vec2};
use crate::numerics::rk4_step;
use crate::scalar::{real, Real};
use crate::se2::GroupElement;

/// Fixed substep for the arclength ODE of the polynomial curves; each
/// parameter interval is integrated with steps no larger than this.
const ARCLENGTH_SUBSTEP: f64 = 1e-4;

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("curve needs at least two points")]
    TooFewPoints,
    #[error("non-finite coordinate at point {index}")]
    NonFinite { index: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unsupported curve spec `{0}`")]
    UnsupportedSpec(String),
    #[error("first two points coincide; cannot orient the initial chord")]
    DegenerateTangent,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A planar curve sampled at N+1 uniformly spaced parameter values,
/// s_k = k/N on [0, 1].
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteCurve<S> {
    points: Vec<Vec2<S>>,
}

/// How `normalized` places a curve into canonical position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalizeMode {
    /// Translate the first point to the origin and rotate the first chord
    /// onto the positive x-axis.
    RotateToChord,
    /// Only translate the first point to the origin.
    TranslateOnly,
}

impl<S: Real> DiscreteCurve<S> {
    pub fn new(points: Vec<Vec2<S>>) -> Result<Self, CurveError> {
        if points.len() < 2 {
            return Err(CurveError::TooFewPoints);
        }
        if let Some(index) = points.iter().position(|p| !p.is_finite()) {
            return Err(CurveError::NonFinite { index });
        }
        Ok(DiscreteCurve { points })
    }

    /// Number of parameter intervals N (one less than the point count).
    #[inline]
    pub fn n(&self) -> usize {
        self.points.len() - 1
    }

    /// Parameter step h = 1/N.
    #[inline]
    pub fn h(&self) -> S {
        S::one() / real::<S>(self.n() as f64)
    }

    #[inline]
    pub fn points(&self) -> &[Vec2<S>] {
        &self.points
    }

    #[inline]
    pub fn point(&self, k: usize) -> Vec2<S> {
        self.points[k]
    }

    /// Applies a constant rigid motion to every sample.
    pub fn transformed(&self, g: &GroupElement<S>) -> Self {
        DiscreteCurve {
            points: self.points.iter().map(|&p| g.act(p)).collect(),
        }
    }

    /// Canonical position: first point at the origin and, in
    /// `RotateToChord` mode, the first chord along the positive x-axis.
    /// Returns the transformed curve together with the element applied.
    pub fn normalized(&self, mode: NormalizeMode) -> Result<(Self, GroupElement<S>), CurveError> {
        let p0 = self.points[0];
        let g = match mode {
            NormalizeMode::TranslateOnly => GroupElement::new(S::zero(), -p0),
            NormalizeMode::RotateToChord => {
                let chord = self.points[1] - p0;
                if chord.norm() == S::zero() {
                    return Err(CurveError::DegenerateTangent);
                }
                let alpha = chord.y.atan2(chord.x);
                GroupElement::new(-alpha, rot(-alpha, -p0))
            }
        };
        Ok((self.transformed(&g), g))
    }

    /// Total turning of the polyline: the sum of absolute exterior angles at
    /// interior vertices. For finely arclength-sampled smooth curves this
    /// converges to the integral of |curvature|. Vertices touching a
    /// zero-length edge contribute nothing.
    pub fn total_absolute_curvature(&self) -> S {
        assert!(self.n() >= 2, "curvature needs at least two edges");
        let mut total = S::zero();
        for k in 1..self.n() {
            let e0 = self.points[k] - self.points[k - 1];
            let e1 = self.points[k + 1] - self.points[k];
            if e0.norm() == S::zero() || e1.norm() == S::zero() {
                continue;
            }
            total += e0.cross(e1).atan2(e0.dot(e1)).abs();
        }
        total
    }

    /// Writes one `x,y` pair per line, 17 significant digits (lossless for
    /// f64 round trips).
    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<(), CurveError> {
        let mut out = String::new();
        for p in &self.points {
            writeln!(out, "{:.16e},{:.16e}", p.x, p.y).expect("string write");
        }
        fs::write(path, out)?;
        Ok(())
    }

    /// Reads the format written by `save_csv`; blank lines are skipped.
    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self, CurveError> {
        let text = fs::read_to_string(path)?;
        let mut points = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            let mut coord = |what: &str| -> Result<S, CurveError> {
                let field = fields.next().ok_or_else(|| CurveError::Parse {
                    line: i + 1,
                    msg: format!("missing {what}"),
                })?;
                let value: f64 = field.trim().parse().map_err(|e| CurveError::Parse {
                    line: i + 1,
                    msg: format!("bad {what} `{}`: {e}", field.trim()),
                })?;
                Ok(real(value))
            };
            let x = coord("x")?;
            let y = coord("y")?;
            if fields.next().is_some() {
                return Err(CurveError::Parse {
                    line: i + 1,
                    msg: "expected exactly two fields".into(),
                });
            }
            points.push(Vec2::new(x, y));
        }
        DiscreteCurve::new(points)
    }
}

/// Analytic generators for the test curves. All are parametrized on [0, 1].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CurveSpec {
    /// Constant curve at the given point.
    Point { x: f64, y: f64 },
    /// Straight segment s ↦ s·(dx, dy).
    Segment { dx: f64, dy: f64 },
    /// (r cos 2πs, r sin 2πs).
    Circle { r: f64 },
    /// (cos πs, sin πs).
    Semicircle,
    /// Figure eight (sin 4πs, sin 2πs).
    Eight,
    /// Graph of y = x^p traversed at unit speed from the origin, total
    /// arclength 1.
    Poly { p: u32 },
}

impl CurveSpec {
    /// Samples the curve at s_k = k/n, k = 0..=n.
    pub fn sample<S: Real>(&self, n: usize) -> Result<DiscreteCurve<S>, CurveError> {
        assert!(n >= 1, "need at least one parameter interval");
        match *self {
            CurveSpec::Poly { p } => {
                assert!(p >= 1, "polynomial exponent must be at least 1");
                return Ok(sample_polynomial_arclength(p, n));
            }
            CurveSpec::Circle { r } => assert!(r > 0.0, "circle radius must be positive"),
            _ => {}
        }
        let mut points = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let s = real::<S>(k as f64) / real::<S>(n as f64);
            points.push(self.eval(s));
        }
        DiscreteCurve::new(points)
    }

    /// Closed-form evaluation; panics for `Poly`, which has no closed form
    /// (use `sample` or `sample_polynomial_arclength`).
    pub(crate) fn eval<S: Real>(&self, s: S) -> Vec2<S> {
        let pi = S::PI();
        let two_pi = pi + pi;
        match *self {
            CurveSpec::Point { x, y } => Vec2::new(real(x), real(y)),
            CurveSpec::Segment { dx, dy } => Vec2::new(s * real(dx), s * real(dy)),
            CurveSpec::Circle { r } => {
                let (sn, cs) = (two_pi * s).sin_cos();
                Vec2::new(real::<S>(r) * cs, real::<S>(r) * sn)
            }
            CurveSpec::Semicircle => {
                let (sn, cs) = (pi * s).sin_cos();
                Vec2::new(cs, sn)
            }
            CurveSpec::Eight => Vec2::new((real::<S>(2.0) * two_pi * s).sin(), (two_pi * s).sin()),
            CurveSpec::Poly { .. } => panic!("polynomial curve has no closed form"),
        }
    }
}

impl FromStr for CurveSpec {
    type Err = CurveError;

    /// Parses the command-line shorthand: `point`, `segment:dx=0,dy=1`,
    /// `circle:r=1`, `semicircle`, `eight`, `poly:p=6`.
    fn from_str(s: &str) -> Result<Self, CurveError> {
        let bad = || CurveError::UnsupportedSpec(s.to_string());
        let (kind, args) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        let mut params = std::collections::BTreeMap::new();
        if let Some(args) = args {
            for item in args.split(',') {
                let (key, value) = item.split_once('=').ok_or_else(bad)?;
                let value: f64 = value.trim().parse().map_err(|_| bad())?;
                params.insert(key.trim().to_string(), value);
            }
        }
        let get = |key: &str, default: f64| params.get(key).copied().unwrap_or(default);
        let spec = match kind {
            "point" => CurveSpec::Point { x: get("x", 0.0), y: get("y", 0.0) },
            "segment" => CurveSpec::Segment { dx: get("dx", 0.0), dy: get("dy", 1.0) },
            "circle" => {
                let r = get("r", 1.0);
                if r <= 0.0 {
                    return Err(bad());
                }
                CurveSpec::Circle { r }
            }
            "semicircle" => CurveSpec::Semicircle,
            "eight" => CurveSpec::Eight,
            "poly" => {
                let p = get("p", 6.0);
                if p < 1.0 || p.fract() != 0.0 || p > 1e6 {
                    return Err(bad());
                }
                CurveSpec::Poly { p: p as u32 }
            }
            _ => return Err(bad()),
        };
        Ok(spec)
    }
}

/// Samples (x_p(s), x_p(s)^p) where x_p solves x' = 1/sqrt(1 + p² x^(2p-2)),
/// x(0) = 0 — the graph of y = x^p traversed at unit speed, so the total
/// arclength over [0, 1] is exactly 1.
pub fn sample_polynomial_arclength<S: Real>(p: u32, n: usize) -> DiscreteCurve<S> {
    assert!(p >= 1 && n >= 1);
    let p_sq = real::<S>((p as f64) * (p as f64));
    let rhs = move |_s: S, y: [S; 1]| -> [S; 1] {
        let slope_sq = p_sq * y[0].powi(2 * p as i32 - 2);
        [S::one() / (S::one() + slope_sq).sqrt()]
    };
    let h = S::one() / real::<S>(n as f64);
    let substeps = (h.to_f64().unwrap() / ARCLENGTH_SUBSTEP).ceil() as usize;
    let dt = h / real::<S>(substeps as f64);
    let mut points = Vec::with_capacity(n + 1);
    let mut y = [S::zero()];
    let mut record = |x: S| points.push(Vec2::new(x, x.powi(p as i32)));
    record(y[0]);
    for k in 0..n {
        let s0 = real::<S>(k as f64) * h;
        for j in 0..substeps {
            y = rk4_step(&rhs, s0 + dt * real::<S>(j as f64), y, dt);
        }
        record(y[0]);
    }
    DiscreteCurve::new(points).expect("polynomial samples are finite")
}
