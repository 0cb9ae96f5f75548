//! Closed-form sphere moments next to seeded Monte Carlo estimates.

use eccentricity::sphere::{complex_spherical_moment, monte_carlo_moment, spherical_moment};
use eccentricity::{RngSeed, SphereSpec};

fn main() -> eccentricity::Result<()> {
    let samples = 100_000;
    println!("field   n k  closed form    estimate ± stderr");
    for n in [2, 3, 5] {
        for k in 1..=3 {
            for (spec, exact) in [
                (SphereSpec::real(n), spherical_moment(n, k)),
                (SphereSpec::complex(n), complex_spherical_moment(n, k)),
            ] {
                let est = monte_carlo_moment(spec, k, samples, RngSeed::new(7))?;
                println!(
                    "{:<7} {n} {k}  {exact:.6}     {:.6} ± {:.6}",
                    spec.field.to_string(),
                    est.estimate,
                    est.stderr
                );
            }
        }
    }
    Ok(())
}
