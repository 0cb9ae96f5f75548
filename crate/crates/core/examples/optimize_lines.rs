//! Minimizes the 6-th power frame potential of seven unit vectors in the
//! plane and prints the resulting line angles.

use eccentricity::optimize::{minimize_potential, OptimizeConfig};
use eccentricity::RngSeed;

fn main() -> eccentricity::Result<()> {
    let config = OptimizeConfig {
        seed: RngSeed::new(1),
        ..OptimizeConfig::new(7, 2, 3)
    };
    let r = minimize_potential(&config)?;
    println!(
        "m²·potential = {:.10} (bound {:.10}, gap {:.2e}) after {} iterations",
        r.scaled_potential,
        49.0 * r.bound,
        r.gap,
        r.iterations
    );
    let mut angles: Vec<f64> = r
        .vectors
        .iter()
        .map(|v| {
            v[1].atan2(v[0])
                .rem_euclid(std::f64::consts::PI)
                .to_degrees()
        })
        .collect();
    angles.sort_by(f64::total_cmp);
    println!(
        "line angles (deg): {:?}",
        angles
            .iter()
            .map(|a| (a * 100.0).round() / 100.0)
            .collect::<Vec<_>>()
    );
    Ok(())
}
