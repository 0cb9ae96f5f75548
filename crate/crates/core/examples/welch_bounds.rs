//! Classical and improved bounds for seven lines in the plane, checked
//! against the seven-line collection shipped in `examples/data`.
//!
//! ```text
//! cargo run --example welch_bounds
//! ```

use eccentricity::cli::load_collection;
use eccentricity::welch::{bounds_table, evaluate};
use eccentricity::{Field, Normalization};

fn main() -> eccentricity::Result<()> {
    let (m, n) = (7, 2);
    println!(
        "{:>2} {:>12} {:>12} {:>10}",
        "k", "m²·classical", "m²·improved", "c_max ≥"
    );
    for row in bounds_table(m, n, 5, Field::Real)? {
        let mm = (m * m) as f64;
        println!(
            "{:>2} {:>12.6} {:>12.6} {:>10.6}",
            row.k,
            mm * row.classical_bound,
            row.scaled_bound,
            row.applicable_cmax().map_or(f64::NAN, |c| c.cmax)
        );
    }

    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/seven_lines.csv");
    let z = load_collection(path, Normalization::Renormalize, &mut std::io::empty())?;
    println!("\nseven_lines.csv (renormalized)");
    for r in evaluate(&z, 3)? {
        println!(
            "k={} m²·potential = {:.5}  gap = {:.2e}  coherence = {:.4}",
            r.bounds.k, r.scaled_potential, r.potential_gap, r.coherence
        );
    }
    Ok(())
}
