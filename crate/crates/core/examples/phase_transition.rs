//! Uniform measure against antipodal pairs on both sides of the critical
//! exponent, for geodesic and chord distances.

use eccentricity::energy::{phase_transition_experiment, EnergyKind, PhaseConfig};
use eccentricity::RngSeed;

fn main() -> eccentricity::Result<()> {
    let config = PhaseConfig {
        seed: RngSeed::new(3),
        ..PhaseConfig::default()
    };
    for (kind, n, deltas) in [
        (EnergyKind::Geodesic, 2, vec![0.5, 0.9, 1.0, 1.1, 2.0]),
        (EnergyKind::Euclidean, 3, vec![1.0, 1.9, 2.0, 2.1, 3.0]),
    ] {
        println!("{kind:?}, n = {n}");
        println!("   δ   uniform ± 3σ          antipodal   best random  winner");
        for r in phase_transition_experiment(kind, n, &deltas, config)? {
            println!(
                "  {:.1}  {:.5} ± {:.5}   {:.5}     {:.5}      {:?}",
                r.delta,
                r.uniform,
                3.0 * r.uniform_stderr,
                r.antipodal,
                r.best_candidate,
                r.winner
            );
        }
    }
    Ok(())
}
