//! Independent oracles shared by the integration test targets.
#![allow(dead_code)]

use eccentricity::{UnitVectorCollection, Vectors};
use num_complex::Complex64;
use std::f64::consts::PI;

/// The 7×2 example collection, renormalized. `printed` keeps the published
/// sign of the last column's first entry.
pub fn seven_lines(printed: bool) -> UnitVectorCollection {
    let x7 = if printed { 0.30 } else { -0.30 };
    let cols = vec![
        vec![0.99, 0.08],
        vec![0.14, 0.99],
        vec![0.56, 0.83],
        vec![-0.68, 0.73],
        vec![0.93, -0.36],
        vec![-0.86, -0.50],
        vec![x7, 0.95],
    ];
    UnitVectorCollection::new(
        Vectors::Real(cols),
        None,
        eccentricity::Normalization::Renormalize,
    )
    .unwrap()
}

/// `Σ_{i,j} w_i w_j |⟨x_i,x_j⟩|^{2k}` straight from the definition.
pub fn direct_potential(x: &[Vec<f64>], w: &[f64], k: usize) -> f64 {
    let mut s = 0.0;
    for (xi, wi) in x.iter().zip(w) {
        for (xj, wj) in x.iter().zip(w) {
            let d: f64 = xi.iter().zip(xj).map(|(a, b)| a * b).sum();
            s += wi * wj * d.abs().powi(2 * k as i32);
        }
    }
    s
}

/// Taylor coefficient `c_k` of an analytic `f` by the trapezoid rule on
/// the circle `|z| = r`.
pub fn cauchy_coeff(f: impl Fn(Complex64) -> Complex64, k: usize, r: f64, points: usize) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..points {
        let theta = 2.0 * PI * j as f64 / points as f64;
        let z = Complex64::from_polar(r, theta);
        acc += f(z) * Complex64::from_polar(1.0, -(k as f64) * theta);
    }
    (acc / points as f64).re / r.powi(k as i32)
}

pub fn arccos_pow(delta: f64) -> impl Fn(Complex64) -> Complex64 {
    move |z: Complex64| z.acos().powf(delta)
}

pub fn chord_pow(delta: f64) -> impl Fn(Complex64) -> Complex64 {
    move |z: Complex64| (Complex64::new(2.0, 0.0) - 2.0 * z).powf(delta / 2.0)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `f^{(k)}(0)/k!` by a central k-th difference with two Richardson levels.
pub fn fd_coeff(f: impl Fn(f64) -> f64, k: usize, h: f64) -> f64 {
    let raw = |h: f64| {
        let mut s = 0.0;
        for j in 0..=k {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            s += sign * binomial(k, j) * f((k as f64 / 2.0 - j as f64) * h);
        }
        s / h.powi(k as i32) / factorial(k)
    };
    let (d1, d2, d3) = (raw(h), raw(h / 2.0), raw(h / 4.0));
    let r1 = (4.0 * d2 - d1) / 3.0;
    let r2 = (4.0 * d3 - d2) / 3.0;
    (16.0 * r2 - r1) / 15.0
}

/// Step that balances roundoff against truncation for the k-th difference.
pub fn fd_step(k: usize) -> f64 {
    [0.0, 0.02, 0.03, 0.04, 0.05, 0.06, 0.08][k.min(6)]
}
