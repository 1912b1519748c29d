//! `relgeo` — relative geodesics between planar curves from the command
//! line: discrepancy search, starting-angle scans, single geodesics,
//! grid-refinement tables, the polynomial-graph study, and morph export.
//!
//! Scalar results print as JSON; per-index series print as CSV. Identical
//! invocations produce byte-identical output. Exit codes: 0 success,
//! 2 input or configuration error, 3 solver failure, 4 interpolation
//! outside the exponential chart.

mod output;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use relgeo::morph::{morph, MorphError};
use relgeo::shooting::{discrepancy_with_tol, newton_solve, scan_theta0, NEWTON_MAX_ITER};
use relgeo::{DiscreteCurve, Metric, Problem};

use output::{csv, emit, float, json as json_text};

/// A failed run, carrying its process exit code.
pub enum Failure {
    /// Unusable input or configuration (exit 2).
    Input(String),
    /// A solver gave up (exit 3).
    Solver(String),
    /// A rotation left the exponential chart during interpolation (exit 4).
    Chart(String),
}

#[derive(Parser)]
#[command(name = "relgeo", version, about = "Relative geodesics between planar curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PairArgs {
    /// Template curve: `point`, `segment:dx=..,dy=..`, `circle:r=..`,
    /// `semicircle`, `eight`, `poly:p=..`, or `csv:PATH`.
    #[arg(long)]
    c0: String,
    /// Target curve, same forms as --c0.
    #[arg(long)]
    c1: String,
    /// Intervals when sampling curve specs (a CSV fixes the count).
    #[arg(long = "N", default_value_t = 100)]
    n: usize,
    /// Rotational mass of the metric.
    #[arg(long, default_value_t = 2.0)]
    m: f64,
    /// Normalize by translation only, keeping each curve's orientation.
    #[arg(long)]
    no_rotate: bool,
}

impl PairArgs {
    fn resolve(&self) -> Result<(DiscreteCurve, DiscreteCurve, Metric), Failure> {
        if self.n < 1 {
            return Err(Failure::Input("N must be at least 1".into()));
        }
        let metric = validated_metric(self.m)?;
        let (c0, c1) = source::resolve_pair(&self.c0, &self.c1, self.n, !self.no_rotate)?;
        Ok((c0, c1, metric))
    }
}

fn validated_metric(m: f64) -> Result<Metric, Failure> {
    if !(m.is_finite() && m > 0.0) {
        return Err(Failure::Input("metric mass m must be finite and positive".into()));
    }
    Ok(Metric::new(m))
}

fn validated_grid(grid: usize) -> Result<usize, Failure> {
    if grid < 2 {
        return Err(Failure::Input("grid must have at least 2 angles".into()));
    }
    Ok(grid)
}

fn validated_tol(tol: f64) -> Result<f64, Failure> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Failure::Input("tol must be finite and positive".into()));
    }
    Ok(tol)
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Global discrepancy: the least deformation energy over all geodesics.
    Discrepancy {
        #[command(flatten)]
        pair: PairArgs,
        /// Starting angles scanned for geodesic candidates.
        #[arg(long, default_value_t = 128)]
        grid: usize,
        /// Newton tolerance on the terminal residual.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output file (standard output when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Energy and terminal residual over a uniform grid of starting angles.
    Scan {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 128)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One geodesic from a starting-angle guess, as per-node CSV.
    Geodesic {
        #[command(flatten)]
        pair: PairArgs,
        /// Starting angle handed to the Newton iteration.
        #[arg(long, default_value_t = 0.0)]
        guess: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Discrepancy under grid refinement, with order-of-accuracy estimates.
    Convergence {
        /// Template curve spec (CSV sources cannot be resampled).
        #[arg(long, default_value = "circle:r=1")]
        c0: String,
        /// Target curve spec.
        #[arg(long, default_value = "eight")]
        c1: String,
        /// Comma-separated interval counts.
        #[arg(long = "N", value_delimiter = ',', default_value = "10,100,1000,10000")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 2.0)]
        m: f64,
        #[arg(long, default_value_t = 128)]
        grid: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        no_rotate: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Discrepancy from a straight unit segment to unit-speed polynomial
    /// graphs, with their total absolute curvature.
    Polystudy {
        /// Comma-separated polynomial exponents.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,10,15,20,25")]
        p: Vec<u32>,
        #[arg(long = "N", default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 2.0)]
        m: f64,
        #[arg(long, default_value_t = 128)]
        grid: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Intermediate curves of a solved deformation, one CSV per frame.
    Morph {
        #[command(flatten)]
        pair: PairArgs,
        /// Number of frames, endpoints included.
        #[arg(long, default_value_t = 5)]
        frames: usize,
        #[arg(long, default_value_t = 128)]
        grid: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Starting angle; the global minimizer when omitted.
        #[arg(long)]
        guess: Option<f64>,
        /// Directory receiving frame_000.csv, frame_001.csv, ...
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (code, message) = match failure {
                Failure::Input(m) => (2, m),
                Failure::Solver(m) => (3, m),
                Failure::Chart(m) => (4, m),
            };
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Discrepancy { pair, grid, tol, format, out } => {
            let grid = validated_grid(grid)?;
            let tol = validated_tol(tol)?;
            let (c0, c1, metric) = pair.resolve()?;
            let problem = Problem::new(&c0, &c1, metric)
                .map_err(|e| Failure::Input(e.to_string()))?;
            let result = discrepancy_with_tol(&problem, grid, tol, NEWTON_MAX_ITER)
                .map_err(|e| Failure::Solver(e.to_string()))?;

            let text = match format {
                Format::Json => json_text(&json!({
                    "discrepancy": result.discrepancy,
                    "theta0_min": result.theta0_min,
                    "family": result.family,
                    "candidates": result
                        .candidates
                        .iter()
                        .map(|c| json!({
                            "theta0": c.theta0,
                            "energy": c.energy,
                            "residual": c.residual,
                            "converged": c.converged,
                        }))
                        .collect::<Vec<_>>(),
                })),
                Format::Csv => csv(
                    "discrepancy,theta0_min,family",
                    [format!(
                        "{},{},{}",
                        float(result.discrepancy),
                        float(result.theta0_min),
                        result.family
                    )],
                ),
            };
            emit(&out, &text)
        }

        Command::Scan { pair, grid, out } => {
            let grid = validated_grid(grid)?;
            let (c0, c1, metric) = pair.resolve()?;
            let problem = Problem::new(&c0, &c1, metric)
                .map_err(|e| Failure::Input(e.to_string()))?;
            let rows = scan_theta0(&problem, grid).into_iter().map(|p| {
                format!("{},{},{}", float(p.theta0), float(p.energy), float(p.residual))
            });
            emit(&out, &csv("theta0,energy,terminal_residual", rows))
        }

        Command::Geodesic { pair, guess, tol, out } => {
            let tol = validated_tol(tol)?;
            let (c0, c1, metric) = pair.resolve()?;
            let problem = Problem::new(&c0, &c1, metric)
                .map_err(|e| Failure::Input(e.to_string()))?;
            let (path, _) = newton_solve(&problem, guess, tol, NEWTON_MAX_ITER)
                .map_err(|e| Failure::Solver(e.to_string()))?;

            let n = problem.n();
            let rows = (0..=n).map(|k| {
                if k < n {
                    format!(
                        "{k},{},{},{},{},{},{}",
                        float(path.theta[k]),
                        float(path.x[k].x),
                        float(path.x[k].y),
                        float(path.omega[k]),
                        float(path.v[k].x),
                        float(path.v[k].y)
                    )
                } else {
                    // The last node carries no outgoing update.
                    format!(
                        "{k},{},{},{},,,",
                        float(path.theta[k]),
                        float(path.x[k].x),
                        float(path.x[k].y)
                    )
                }
            });
            emit(&out, &csv("k,theta,x1,x2,omega,v1,v2", rows))
        }

        Command::Convergence { c0, c1, n, m, grid, tol, no_rotate, out } => {
            let grid = validated_grid(grid)?;
            let tol = validated_tol(tol)?;
            let metric = validated_metric(m)?;
            if n.is_empty() || n.iter().any(|&v| v < 1) {
                return Err(Failure::Input("N list entries must be at least 1".into()));
            }
            for text in [&c0, &c1] {
                if matches!(source::parse(text)?, source::Source::Csv(_)) {
                    return Err(Failure::Input(
                        "convergence resamples its curves; csv sources cannot be used".into(),
                    ));
                }
            }

            let mut deltas = Vec::with_capacity(n.len());
            for &count in &n {
                let (a, b) = source::resolve_pair(&c0, &c1, count, !no_rotate)?;
                let problem = Problem::new(&a, &b, metric)
                    .map_err(|e| Failure::Input(e.to_string()))?;
                let result = discrepancy_with_tol(&problem, grid, tol, NEWTON_MAX_ITER)
                    .map_err(|e| Failure::Solver(e.to_string()))?;
                deltas.push(result.discrepancy);
            }

            // Order estimate from successive differences; defined for a
            // consecutive triple of counts with one refinement ratio.
            let rows = (0..n.len()).map(|i| {
                let order = if i >= 2 {
                    let r_prev = n[i - 1] as f64 / n[i - 2] as f64;
                    let r_cur = n[i] as f64 / n[i - 1] as f64;
                    let e_prev = (deltas[i - 2] - deltas[i - 1]).abs();
                    let e_cur = (deltas[i - 1] - deltas[i]).abs();
                    if (r_prev - r_cur).abs() < 1e-12 && e_cur > 0.0 {
                        float((e_prev / e_cur).ln() / r_prev.ln())
                    } else {
                        String::new()
                    }
                } else {
                    String::new()
                };
                format!("{},{},{order}", n[i], float(deltas[i]))
            });
            emit(&out, &csv("N,discrepancy,order", rows))
        }

        Command::Polystudy { p, n, m, grid, tol, out } => {
            let grid = validated_grid(grid)?;
            let tol = validated_tol(tol)?;
            let metric = validated_metric(m)?;
            if n < 1 {
                return Err(Failure::Input("N must be at least 1".into()));
            }
            if p.is_empty() || p.iter().any(|&v| v < 1) {
                return Err(Failure::Input("exponent list entries must be at least 1".into()));
            }

            let baseline: DiscreteCurve = relgeo::CurveSpec::Segment { dx: 1.0, dy: 0.0 }
                .sample(n)
                .map_err(|e| Failure::Input(e.to_string()))?;
            let rows = p
                .iter()
                .map(|&exponent| {
                    let curve: DiscreteCurve = relgeo::CurveSpec::Poly { p: exponent }
                        .sample(n)
                        .map_err(|e| Failure::Input(e.to_string()))?;
                    let problem = Problem::new(&baseline, &curve, metric)
                        .map_err(|e| Failure::Input(e.to_string()))?;
                    let result = discrepancy_with_tol(&problem, grid, tol, NEWTON_MAX_ITER)
                        .map_err(|e| Failure::Solver(e.to_string()))?;
                    Ok(format!(
                        "{exponent},{},{}",
                        float(result.discrepancy),
                        float(curve.total_absolute_curvature())
                    ))
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            emit(&out, &csv("p,discrepancy,total_curvature", rows))
        }

        Command::Morph { pair, frames, grid, tol, guess, out } => {
            let grid = validated_grid(grid)?;
            let tol = validated_tol(tol)?;
            if frames < 2 {
                return Err(Failure::Input("need at least the two endpoint frames".into()));
            }
            let (c0, c1, metric) = pair.resolve()?;
            let problem = Problem::new(&c0, &c1, metric)
                .map_err(|e| Failure::Input(e.to_string()))?;

            let theta0 = match guess {
                Some(g) => g,
                None => {
                    discrepancy_with_tol(&problem, grid, tol, NEWTON_MAX_ITER)
                        .map_err(|e| Failure::Solver(e.to_string()))?
                        .theta0_min
                }
            };
            let (path, _) = newton_solve(&problem, theta0, tol, NEWTON_MAX_ITER)
                .map_err(|e| Failure::Solver(e.to_string()))?;

            let frames = morph(&path, &c0, frames).map_err(|e| match e {
                MorphError::LogUndefined { .. } => Failure::Chart(e.to_string()),
            })?;

            std::fs::create_dir_all(&out)
                .map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
            for (i, frame) in frames.iter().enumerate() {
                let file = out.join(format!("frame_{i:03}.csv"));
                frame
                    .curve
                    .save_csv(&file)
                    .map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
            }
            Ok(())
        }
    }
}
