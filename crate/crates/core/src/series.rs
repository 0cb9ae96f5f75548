//! Truncated power series at 0.
//!
//! Used to expand `arccos(t)^δ` and `(2 − 2t)^{δ/2}` as `a_0 − Σ a_k t^k` so
//! that an energy `∬ F(⟨x,y⟩)` becomes `a_0 − Σ a_k I_k(μ)`.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Error, Result};

/// Default truncation order for series-based energy evaluation.
pub const DEFAULT_ORDER: usize = 256;

/// Coefficients `c_0..c_N`; every coefficient up to `N` is known.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<f64>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid(
                "power series needs at least the constant coefficient",
            ));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::invalid(format!("coefficient {i} is not finite")));
        }
        Ok(Self { coeffs })
    }

    /// A polynomial viewed as a series of order `order` (higher terms are exactly zero).
    pub fn polynomial(coeffs: &[f64], order: usize) -> Result<Self> {
        if coeffs.len() > order + 1 {
            return Err(Error::invalid(
                "polynomial degree exceeds the requested order",
            ));
        }
        let mut c = coeffs.to_vec();
        c.resize(order + 1, 0.0);
        Self::new(c)
    }

    pub fn constant(value: f64, order: usize) -> Result<Self> {
        Self::polynomial(&[value], order)
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs[k]
    }

    /// Partial sum `Σ_{k≤N} c_k t^k` (Horner).
    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::Truncation {
                requested: order,
                available: self.order(),
            });
        }
        Ok(Self {
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    /// Cauchy product truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|k| (0..=k).map(|j| self.coeffs[j] * other.coeffs[k - j]).sum())
            .collect();
        Self { coeffs }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }
}

/// `arccos(t) = π/2 − Σ_k r_k t^{2k+1}/(2k+1)` with `r_k = (2k)!/(4^k (k!)²)`.
pub fn series_arccos(order: usize) -> PowerSeries {
    let mut coeffs = vec![0.0; order + 1];
    coeffs[0] = FRAC_PI_2;
    let mut central = 1.0;
    let mut k = 0usize;
    while 2 * k < order {
        if k > 0 {
            central *= (2 * k - 1) as f64 / (2 * k) as f64;
        }
        coeffs[2 * k + 1] = -central / (2 * k + 1) as f64;
        k += 1;
    }
    PowerSeries { coeffs }
}

/// `f^α` to order `order` via `m f_0 g_m = Σ_{j=1}^{m} (jα − (m−j)) f_j g_{m−j}`.
pub fn series_pow(f: &PowerSeries, alpha: f64, order: usize) -> Result<PowerSeries> {
    let f0 = f.coeffs[0];
    if f0 <= 0.0 {
        return Err(Error::SingularExpansion(f0));
    }
    if order > f.order() {
        return Err(Error::Truncation {
            requested: order,
            available: f.order(),
        });
    }
    let fc = &f.coeffs;
    let mut g = Vec::with_capacity(order + 1);
    g.push(f0.powf(alpha));
    for m in 1..=order {
        let s: f64 = (1..=m)
            .map(|j| (j as f64 * alpha - (m - j) as f64) * fc[j] * g[m - j])
            .sum();
        g.push(s / (m as f64 * f0));
    }
    PowerSeries::new(g)
}

/// Coefficients of `arccos(t)^δ` at 0.
pub fn series_compose_pow_arccos(delta: f64, order: usize) -> Result<PowerSeries> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::invalid(format!(
            "exponent must be positive, got {delta}"
        )));
    }
    series_pow(&series_arccos(order), delta, order)
}

/// Coefficients of `(2 − 2t)^{δ/2}`, i.e. `‖x − y‖^δ` as a function of `⟨x, y⟩`.
pub fn series_chord_pow(delta: f64, order: usize) -> Result<PowerSeries> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::invalid(format!(
            "exponent must be positive, got {delta}"
        )));
    }
    series_pow(
        &PowerSeries::polynomial(&[2.0, -2.0], order.max(1))?,
        delta / 2.0,
        order,
    )
}

/// Hypothesis of the sign lemma that an input fails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Hypothesis {
    /// `0 < α < 1`
    ExponentInUnitInterval,
    /// `f_0 > 0`
    PositiveConstant,
    /// `f_1 < 0`
    NegativeSlope,
    /// `f_k ≤ 0` for `k ≥ 2`; carries the first offending index.
    NonPositiveHigher(usize),
    /// The series must reach the requested order.
    OrderAvailable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SignReport {
    /// `g_k < 0` for every `1 ≤ k ≤ N`.
    AllNegative { order: usize },
    /// First `k` with `g_k ≥ 0`.
    Violation { index: usize, value: f64 },
    /// Preconditions not met; no conclusion drawn.
    HypothesisFailed(Hypothesis),
}

impl SignReport {
    pub fn holds(&self) -> bool {
        matches!(self, SignReport::AllNegative { .. })
    }
}

/// Checks that `f^α` has strictly negative coefficients `1..=order` when
/// `f_0 > 0`, `f_1 < 0`, `f_k ≤ 0` (k ≥ 2) and `0 < α < 1`.
pub fn verify_sign_lemma(f: &PowerSeries, alpha: f64, order: usize) -> SignReport {
    if !(alpha > 0.0 && alpha < 1.0) {
        return SignReport::HypothesisFailed(Hypothesis::ExponentInUnitInterval);
    }
    if order > f.order() || order == 0 {
        return SignReport::HypothesisFailed(Hypothesis::OrderAvailable);
    }
    let c = f.coeffs();
    if c[0] <= 0.0 {
        return SignReport::HypothesisFailed(Hypothesis::PositiveConstant);
    }
    if c[1] >= 0.0 {
        return SignReport::HypothesisFailed(Hypothesis::NegativeSlope);
    }
    if let Some(k) = (2..=order).find(|&k| c[k] > 0.0) {
        return SignReport::HypothesisFailed(Hypothesis::NonPositiveHigher(k));
    }
    let g = series_pow(f, alpha, order).expect("f_0 > 0 checked above");
    match (1..=order).find(|&k| g.coeff(k) >= 0.0) {
        Some(index) => SignReport::Violation {
            index,
            value: g.coeff(index),
        },
        None => SignReport::AllNegative { order },
    }
}

/// Upper bound on `Σ_{k>N} |c_k|` for a series with `c_k ≤ 0` (k ≥ 1), given
/// the closed-form value `f(1)`.
///
/// With non-positive coefficients the partial sums at `t = 1` decrease
/// monotonically to `f(1)`, so the neglected tail is `S_N − f(1)`.
pub fn tail_bound(f: &PowerSeries, value_at_one: f64) -> Result<f64> {
    if let Some(k) = (1..=f.order()).find(|&k| f.coeff(k) > 0.0) {
        return Err(Error::invalid(format!(
            "coefficient {k} is positive; subtract the exceptional polynomial first"
        )));
    }
    let tail = f.eval(1.0) - value_at_one;
    if tail < -1e-12 {
        return Err(Error::invalid(format!(
            "reference value {value_at_one} exceeds the partial sum by {}",
            -tail
        )));
    }
    Ok(tail.max(0.0))
}
