//! Taylor coefficients of `arccos(t)^δ` and `(2−2t)^{δ/2}` at zero, with the
//! sign check that drives the energy bounds.

use eccentricity::series::{
    series_arccos, series_chord_pow, series_compose_pow_arccos, verify_sign_lemma,
};

fn main() -> eccentricity::Result<()> {
    let order = 8;
    for delta in [0.5, 1.0, 1.5] {
        let a = series_compose_pow_arccos(delta, order)?;
        let c = series_chord_pow(2.0 * delta, order)?;
        println!("δ = {delta}");
        println!("  arccos^δ      {:?}", rounded(a.coeffs()));
        println!("  (2−2t)^δ      {:?}", rounded(c.coeffs()));
    }

    let f = series_arccos(40);
    for alpha in [0.25, 0.5, 0.75, 1.5] {
        println!("arccos^{alpha}: {:?}", verify_sign_lemma(&f, alpha, 40));
    }
    Ok(())
}

fn rounded(c: &[f64]) -> Vec<f64> {
    c.iter().map(|x| (x * 1e5).round() / 1e5).collect()
}
