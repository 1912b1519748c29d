//! Minimal end-to-end use of the library: every geodesic branch from a
//! circle to a figure eight, and the discrepancy between them.

use relgeo::{shooting, CurveSpec, Metric, NormalizeMode, Problem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (c0, _) = CurveSpec::Circle { r: 1.0 }
        .sample(100)?
        .normalized(NormalizeMode::RotateToChord)?;
    let (c1, _) = CurveSpec::Eight
        .sample(100)?
        .normalized(NormalizeMode::RotateToChord)?;
    let problem = Problem::new(&c0, &c1, Metric::new(2.0))?;

    let result = shooting::discrepancy(&problem, 128)?;
    for cand in &result.candidates {
        println!("theta0 = {:<20} E = {}", cand.theta0, cand.energy);
    }
    println!("delta = {}", result.discrepancy);
    Ok(())
}
