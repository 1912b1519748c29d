//! Curve ingestion: textual curve specs (`circle:r=0.5`, `poly:p=7`,
//! `csv:points.csv`) resolved into sampled, normalized discrete curves.

use std::path::PathBuf;

use relgeo::{CurveSpec, DiscreteCurve, NormalizeMode};

use crate::Failure;

/// One `--c0`/`--c1` argument before sampling.
pub enum Source {
    Spec(CurveSpec),
    Csv(PathBuf),
}

fn param(pairs: &[(String, f64)], key: &str, what: &str) -> Result<f64, Failure> {
    pairs
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| Failure::Input(format!("{what} needs a `{key}=` parameter")))
}

/// Parses `name` or `name:key=value,key=value`. Unknown names, unknown
/// keys, and malformed numbers are input errors.
pub fn parse(text: &str) -> Result<Source, Failure> {
    let (name, rest) = match text.split_once(':') {
        Some((n, r)) => (n, Some(r)),
        None => (text, None),
    };

    if name == "csv" {
        let path = rest.filter(|r| !r.is_empty()).ok_or_else(|| {
            Failure::Input("csv source needs a path, as in `csv:points.csv`".into())
        })?;
        return Ok(Source::Csv(PathBuf::from(path)));
    }

    let mut pairs: Vec<(String, f64)> = Vec::new();
    if let Some(rest) = rest {
        for item in rest.split(',') {
            let (k, v) = item.split_once('=').ok_or_else(|| {
                Failure::Input(format!("curve parameter `{item}` is not `key=value`"))
            })?;
            let value: f64 = v
                .parse()
                .map_err(|_| Failure::Input(format!("curve parameter `{item}`: bad number")))?;
            pairs.push((k.to_string(), value));
        }
    }

    let known: &[&str] = match name {
        "point" => &["x", "y"],
        "segment" => &["dx", "dy"],
        "circle" => &["r"],
        "poly" => &["p"],
        "semicircle" | "eight" => &[],
        _ => {
            return Err(Failure::Input(format!(
                "unknown curve `{name}` (point, segment, circle, semicircle, eight, poly, csv)"
            )))
        }
    };
    if let Some((k, _)) = pairs.iter().find(|(k, _)| !known.contains(&k.as_str())) {
        return Err(Failure::Input(format!("curve `{name}` has no parameter `{k}`")));
    }
    let get = |key: &str, default: f64| {
        pairs
            .iter()
            .find(|(k, _)| k == key)
            .map_or(default, |(_, v)| *v)
    };

    let spec = match name {
        "point" => CurveSpec::Point { x: get("x", 0.0), y: get("y", 0.0) },
        "segment" => CurveSpec::Segment { dx: get("dx", 1.0), dy: get("dy", 0.0) },
        "circle" => CurveSpec::Circle { r: get("r", 1.0) },
        "semicircle" => CurveSpec::Semicircle,
        "eight" => CurveSpec::Eight,
        "poly" => {
            let p = param(&pairs, "p", "poly")?;
            if p < 1.0 || p.fract() != 0.0 || p > u32::MAX as f64 {
                return Err(Failure::Input("poly exponent must be an integer ≥ 1".into()));
            }
            CurveSpec::Poly { p: p as u32 }
        }
        _ => unreachable!(),
    };
    Ok(Source::Spec(spec))
}

fn materialize(source: &Source, n: usize) -> Result<DiscreteCurve, Failure> {
    match source {
        Source::Spec(spec) => spec
            .sample(n)
            .map_err(|e| Failure::Input(format!("cannot sample curve: {e}"))),
        Source::Csv(path) => DiscreteCurve::load_csv(path)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
    }
}

/// Canonical placement. Constant curves have no chord to rotate to, so
/// they fall back to translation.
fn normalize(curve: DiscreteCurve, rotate: bool) -> DiscreteCurve {
    if rotate {
        if let Ok((normalized, _)) = curve.normalized(NormalizeMode::RotateToChord) {
            return normalized;
        }
    }
    curve
        .normalized(NormalizeMode::TranslateOnly)
        .expect("translation never fails")
        .0
}

/// Samples, matches lengths, and normalizes a curve pair. Spec-sourced
/// curves use `n` intervals; a CSV fixes the node count for both.
pub fn resolve_pair(
    c0: &str,
    c1: &str,
    n: usize,
    rotate: bool,
) -> Result<(DiscreteCurve, DiscreteCurve), Failure> {
    let s0 = parse(c0)?;
    let s1 = parse(c1)?;

    // A CSV dictates the interval count; two CSVs must agree.
    let n = match (&s0, &s1) {
        (Source::Csv(p0), Source::Csv(p1)) => {
            let a = materialize(&s0, n)?;
            let b = materialize(&s1, n)?;
            if a.n() != b.n() {
                return Err(Failure::Input(format!(
                    "{} has {} intervals but {} has {}",
                    p0.display(),
                    a.n(),
                    p1.display(),
                    b.n()
                )));
            }
            return Ok((normalize(a, rotate), normalize(b, rotate)));
        }
        (Source::Csv(_), _) => materialize(&s0, n)?.n(),
        (_, Source::Csv(_)) => materialize(&s1, n)?.n(),
        _ => n,
    };

    let a = materialize(&s0, n)?;
    let b = materialize(&s1, n)?;
    Ok((normalize(a, rotate), normalize(b, rotate)))
}
