//! Distance energies of probability measures on `S^{n−1}`.
//!
//! `G_δ(μ) = ∬ arccos(⟨x,y⟩)^δ` (geodesic) and `E_δ(μ) = ∬ ‖x − y‖^δ`
//! (Euclidean). The uniform measure maximizes both below the transition
//! exponent (1 and 2 respectively); above it the antipodal pair wins, and at
//! the transition every centrally symmetric measure ties.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::Serialize;

use crate::collection::{dot, Normalization, UnitVectorCollection, Vectors};
use crate::error::{Error, Result};
use crate::series::PowerSeries;
use crate::sphere::{MeanEstimate, RngSeed, SphereSampler, SphereSpec};
use crate::tensor::polynomial_energies;

/// Equality tolerance for ties on the exact pairwise path.
pub const TIE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EnergyKind {
    Geodesic,
    Euclidean,
}

impl EnergyKind {
    /// Exponent at which the maximizer switches from uniform to antipodal.
    pub fn transition(self) -> f64 {
        match self {
            EnergyKind::Geodesic => 1.0,
            EnergyKind::Euclidean => 2.0,
        }
    }

    /// Energy of `½(δ_p + δ_{−p})`: half the pairs sit at the maximal distance.
    pub fn antipodal_value(self, delta: f64) -> f64 {
        match self {
            EnergyKind::Geodesic => 0.5 * PI.powf(delta),
            EnergyKind::Euclidean => 0.5 * 2f64.powf(delta),
        }
    }

    fn kernel(self, delta: f64) -> impl Fn(&[f64], &[f64]) -> f64 {
        move |x, y| match self {
            EnergyKind::Geodesic => dot(x, y).clamp(-1.0, 1.0).acos().powf(delta),
            EnergyKind::Euclidean => {
                let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                d2.powf(delta / 2.0)
            }
        }
    }
}

/// Weighted point set on the unit sphere of `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure(UnitVectorCollection);

impl DiscreteMeasure {
    pub fn new(support: Vec<Vec<f64>>, weights: Option<Vec<f64>>) -> Result<Self> {
        UnitVectorCollection::new(Vectors::Real(support), weights, Normalization::Strict).map(Self)
    }

    pub fn from_collection(c: UnitVectorCollection) -> Result<Self> {
        if c.real_vectors().is_none() {
            return Err(Error::UnsupportedField {
                op: "DiscreteMeasure",
                field: c.field(),
                hint: "",
            });
        }
        Ok(Self(c))
    }

    pub fn point_mass(p: Vec<f64>) -> Result<Self> {
        Self::new(vec![p], None)
    }

    /// `½(δ_p + δ_{−p})`.
    pub fn antipodal_pair(p: Vec<f64>) -> Result<Self> {
        let q = p.iter().map(|x| -x).collect();
        Self::new(vec![p, q], None)
    }

    /// `½(δ_{e_1} + δ_{−e_1})` in `R^n`.
    pub fn antipodal_axis(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        let mut p = vec![0.0; n];
        p[0] = 1.0;
        Self::antipodal_pair(p)
    }

    /// `½(μ + μ∘(−id))`: each point gets an antipode and weights are halved.
    pub fn symmetrized(&self) -> Self {
        let pts = self.support();
        let support = pts
            .iter()
            .cloned()
            .chain(pts.iter().map(|p| p.iter().map(|x| -x).collect()))
            .collect();
        let weights = self
            .weights()
            .iter()
            .chain(self.weights())
            .map(|w| w / 2.0)
            .collect();
        Self(
            UnitVectorCollection::new(Vectors::Real(support), Some(weights), Normalization::Strict)
                .expect("antipodes of unit vectors are unit vectors"),
        )
    }

    pub fn support(&self) -> &[Vec<f64>] {
        self.0.real_vectors().expect("real by construction")
    }

    pub fn weights(&self) -> &[f64] {
        self.0.weights()
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_collection(&self) -> &UnitVectorCollection {
        &self.0
    }

    /// `Σ w_i x_i`
    pub fn center_of_mass(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dim()];
        for (x, w) in self.support().iter().zip(self.weights()) {
            for (ci, xi) in c.iter_mut().zip(x) {
                *ci += w * xi;
            }
        }
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnergyMethod {
    ClosedForm,
    PairwiseSum,
    MonteCarlo,
    Series,
}

/// An energy value with the bound on its error.
///
/// `error_bound` is 0 on exact paths, the standard error for Monte Carlo and
/// the certified truncation tail for series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyResult {
    pub value: f64,
    pub method: EnergyMethod,
    pub error_bound: f64,
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::invalid(format!(
            "exponent must be positive, got {delta}"
        )));
    }
    Ok(())
}

/// `Σ_{i,j} w_i w_j K(x_i, x_j)`; rows run in parallel, the reduction is sequential.
fn pairwise(mu: &DiscreteMeasure, kernel: impl Fn(&[f64], &[f64]) -> f64 + Sync) -> f64 {
    let pts = mu.support();
    let w = mu.weights();
    let rows: Vec<f64> = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            w[i] * pts
                .iter()
                .zip(w)
                .map(|(y, wj)| wj * kernel(&pts[i], y))
                .sum::<f64>()
        })
        .collect();
    rows.iter().sum()
}

/// Exact pairwise energy of a discrete measure.
pub fn energy(mu: &DiscreteMeasure, kind: EnergyKind, delta: f64) -> Result<EnergyResult> {
    check_delta(delta)?;
    Ok(EnergyResult {
        value: pairwise(mu, kind.kernel(delta)),
        method: EnergyMethod::PairwiseSum,
        error_bound: 0.0,
    })
}

/// `G_δ(μ) = Σ w_i w_j arccos(⟨x_i, x_j⟩)^δ`.
pub fn geodesic_energy(mu: &DiscreteMeasure, delta: f64) -> Result<EnergyResult> {
    energy(mu, EnergyKind::Geodesic, delta)
}

/// `E_δ(μ) = Σ w_i w_j ‖x_i − x_j‖^δ`.
pub fn euclidean_energy(mu: &DiscreteMeasure, delta: f64) -> Result<EnergyResult> {
    energy(mu, EnergyKind::Euclidean, delta)
}

/// Largest possible geodesic energy: `(π/2)^δ` for `δ ≤ 1` (Jensen applied to
/// `G_1 ≤ π/2`) and `π^δ/2` for `δ ≥ 1`, attained by the antipodal pair.
pub fn geodesic_energy_upper_bound(delta: f64) -> f64 {
    if delta <= 1.0 {
        FRAC_PI_2.powf(delta)
    } else {
        0.5 * PI.powf(delta)
    }
}

const MC_CHUNK: usize = 1 << 15;

/// Monte Carlo energy of the uniform measure from i.i.d. pairs.
///
/// Pairs are drawn in fixed-size chunks, each on its own substream of `seed`,
/// so the estimate does not depend on the thread count.
pub fn uniform_energy(
    n: usize,
    kind: EnergyKind,
    delta: f64,
    samples: usize,
    seed: RngSeed,
) -> Result<EnergyResult> {
    check_delta(delta)?;
    if samples < 2 {
        return Err(Error::invalid("uniform_energy needs at least 2 samples"));
    }
    if n == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let est = uniform_energy_estimate(n, kind, delta, samples, seed);
    Ok(EnergyResult {
        value: est.estimate,
        method: EnergyMethod::MonteCarlo,
        error_bound: est.stderr,
    })
}

fn uniform_energy_estimate(
    n: usize,
    kind: EnergyKind,
    delta: f64,
    samples: usize,
    seed: RngSeed,
) -> MeanEstimate {
    let kernel = kind.kernel(delta);
    let chunks = samples.div_ceil(MC_CHUNK);
    let values: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = MC_CHUNK.min(samples - c * MC_CHUNK);
            let stream = (seed.stream << 32) | c as u64;
            let mut s = SphereSampler::new(SphereSpec::real(n), seed.with_stream(stream));
            (0..len)
                .map(|_| {
                    let x = s.next_real();
                    let y = s.next_real();
                    kernel(&x, &y)
                })
                .collect()
        })
        .collect();
    MeanEstimate::from_samples(values.into_iter().flatten())
}

/// `F_0 + Σ_{k=1}^{N} F_k I_k(μ)` for `F(t) = Σ F_k t^k`.
///
/// `tail` bounds `Σ_{k>N} |F_k|` (see [`crate::series::tail_bound`]) and,
/// since `|⟨x, y⟩| ≤ 1`, the truncation error as well.
pub fn series_energy(mu: &DiscreteMeasure, f: &PowerSeries, tail: f64) -> Result<EnergyResult> {
    if !tail.is_finite() || tail < 0.0 {
        return Err(Error::invalid("tail bound must be non-negative"));
    }
    let moments = polynomial_energies(mu.as_collection(), f.order())?;
    let value = f.coeff(0)
        + f.coeffs()[1..]
            .iter()
            .zip(&moments)
            .map(|(c, m)| c * m)
            .sum::<f64>();
    Ok(EnergyResult {
        value,
        method: EnergyMethod::Series,
        error_bound: tail,
    })
}

/// Settings for [`phase_transition_experiment`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseConfig {
    /// Monte Carlo pairs for the uniform energy.
    pub samples: usize,
    /// Number of random discrete measures compared at each exponent.
    pub candidates: usize,
    /// Support size of each random measure.
    pub support_size: usize,
    pub seed: RngSeed,
}

impl Default for PhaseConfig {
    fn default() -> Self {
        Self {
            samples: 200_000,
            candidates: 8,
            support_size: 12,
            seed: RngSeed::new(0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Winner {
    Uniform,
    Antipodal,
    /// All centrally symmetric candidates agree within [`TIE_TOL`].
    Tie,
    /// Neither side separated by 3σ.
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseRow {
    pub kind: EnergyKind,
    pub n: usize,
    pub delta: f64,
    pub uniform: f64,
    pub uniform_stderr: f64,
    pub antipodal: f64,
    /// Best energy among the random discrete candidates (symmetrized or not).
    pub best_candidate: f64,
    /// Largest deviation of a centrally symmetric candidate from the antipodal value.
    pub symmetric_spread: f64,
    pub winner: Winner,
    /// No candidate beats the winner by more than its tolerance.
    pub winner_dominates: bool,
}

/// Random measure with exponential weights normalized to one.
fn random_measure(n: usize, size: usize, seed: RngSeed) -> DiscreteMeasure {
    let mut sampler = SphereSampler::new(SphereSpec::real(n), seed);
    let support: Vec<Vec<f64>> = (0..size).map(|_| sampler.next_real()).collect();
    let mut rng = seed.with_stream(seed.stream ^ (1 << 63)).rng();
    let raw: Vec<f64> = (0..size)
        .map(|_| rng.sample::<f64, _>(Exp1) + 1e-3)
        .collect();
    let total: f64 = raw.iter().sum();
    let mut weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    // absorb rounding so the sum is 1 to within an ulp
    let drift = 1.0 - weights.iter().sum::<f64>();
    weights[0] += drift;
    DiscreteMeasure::new(support, Some(weights)).expect("sampled points are unit vectors")
}

/// Compares the uniform measure, the antipodal pair and random discrete
/// measures for each exponent in `deltas` (each in `(0, 4]`).
pub fn phase_transition_experiment(
    kind: EnergyKind,
    n: usize,
    deltas: &[f64],
    config: PhaseConfig,
) -> Result<Vec<PhaseRow>> {
    if n < 2 {
        return Err(Error::invalid("phase experiment needs dimension n ≥ 2"));
    }
    if let Some(d) = deltas.iter().find(|&&d| !(d > 0.0 && d <= 4.0)) {
        return Err(Error::invalid(format!("exponent {d} outside (0, 4]")));
    }
    if config.candidates == 0 || config.support_size == 0 {
        return Err(Error::invalid(
            "need at least one candidate with non-empty support",
        ));
    }
    let candidates: Vec<DiscreteMeasure> = (0..config.candidates)
        .map(|c| {
            random_measure(
                n,
                config.support_size,
                config.seed.with_stream(1000 + c as u64),
            )
        })
        .collect();
    let symmetric: Vec<DiscreteMeasure> = candidates
        .iter()
        .map(DiscreteMeasure::symmetrized)
        .collect();
    let antipodal_measure = DiscreteMeasure::antipodal_axis(n)?;

    deltas
        .iter()
        .enumerate()
        .map(|(i, &delta)| {
            let seed = config.seed.with_stream(i as u64);
            let u = uniform_energy_estimate(n, kind, delta, config.samples, seed);
            let antipodal = energy(&antipodal_measure, kind, delta)?.value;
            let mut best_candidate = f64::NEG_INFINITY;
            for mu in candidates.iter().chain(&symmetric) {
                best_candidate = best_candidate.max(energy(mu, kind, delta)?.value);
            }
            let mut symmetric_spread: f64 = 0.0;
            for mu in &symmetric {
                symmetric_spread =
                    symmetric_spread.max((energy(mu, kind, delta)?.value - antipodal).abs());
            }

            let band = 3.0 * u.stderr;
            let at_transition = (delta - kind.transition()).abs() < 1e-12;
            let winner = if at_transition {
                if symmetric_spread <= TIE_TOL {
                    Winner::Tie
                } else {
                    Winner::Undecided
                }
            } else if u.estimate - band > antipodal {
                Winner::Uniform
            } else if antipodal > u.estimate + band {
                Winner::Antipodal
            } else {
                Winner::Undecided
            };
            let winner_dominates = match winner {
                Winner::Uniform => best_candidate <= u.estimate + band,
                Winner::Antipodal | Winner::Tie => best_candidate <= antipodal + TIE_TOL,
                Winner::Undecided => false,
            };
            Ok(PhaseRow {
                kind,
                n,
                delta,
                uniform: u.estimate,
                uniform_stderr: u.stderr,
                antipodal,
                best_candidate,
                symmetric_spread,
                winner,
                winner_dominates,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{series_arccos, series_chord_pow, tail_bound};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn orthonormal_pair() -> DiscreteMeasure {
        DiscreteMeasure::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], None).unwrap()
    }

    #[test]
    fn geodesic_examples() {
        let a = DiscreteMeasure::antipodal_axis(3).unwrap();
        assert_eq!(geodesic_energy(&a, 1.0).unwrap().value, FRAC_PI_2);
        let p = DiscreteMeasure::point_mass(vec![0.0, 1.0]).unwrap();
        assert_eq!(geodesic_energy(&p, 0.7).unwrap().value, 0.0);
        let v = geodesic_energy(&orthonormal_pair(), 2.0).unwrap().value;
        assert!((v - PI * PI / 8.0).abs() < 1e-14);
        assert!(geodesic_energy(&p, 0.0).is_err());
        assert!(geodesic_energy(&p, -1.0).is_err());
    }

    #[test]
    fn euclidean_examples() {
        let a = DiscreteMeasure::antipodal_axis(2).unwrap();
        assert_eq!(euclidean_energy(&a, 2.0).unwrap().value, 2.0);
        let p = DiscreteMeasure::point_mass(vec![1.0, 0.0]).unwrap();
        assert_eq!(euclidean_energy(&p, 1.3).unwrap().value, 0.0);
        let v = euclidean_energy(&orthonormal_pair(), 1.0).unwrap().value;
        assert!((v - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn euclidean_delta_two_is_center_of_mass_identity() {
        let mu = random_measure(4, 9, RngSeed::new(5));
        let e2 = euclidean_energy(&mu, 2.0).unwrap().value;
        let c = mu.center_of_mass();
        assert!((e2 - 2.0 * (1.0 - dot(&c, &c))).abs() < 1e-10);
    }

    #[test]
    fn symmetrized_measure_has_zero_odd_moments() {
        let mu = random_measure(3, 7, RngSeed::new(8)).symmetrized();
        let m = polynomial_energies(mu.as_collection(), 9).unwrap();
        for k in (0..9).step_by(2) {
            assert!(m[k].abs() < 1e-12, "I_{} = {}", k + 1, m[k]);
        }
        assert!((geodesic_energy(&mu, 1.0).unwrap().value - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn uniform_energy_examples() {
        let e = uniform_energy(2, EnergyKind::Euclidean, 1.0, 1_000_000, RngSeed::new(21)).unwrap();
        assert!((e.value - 4.0 / PI).abs() <= 3.0 * e.error_bound, "{e:?}");
        let g = uniform_energy(2, EnergyKind::Geodesic, 1.0, 200_000, RngSeed::new(22)).unwrap();
        assert!((g.value - FRAC_PI_2).abs() <= 3.0 * g.error_bound, "{g:?}");
        for n in [2, 3, 5] {
            let g = uniform_energy(n, EnergyKind::Geodesic, 0.6, 50_000, RngSeed::new(23)).unwrap();
            assert!(g.value <= geodesic_energy_upper_bound(0.6) + 3.0 * g.error_bound);
        }
        assert!(uniform_energy(2, EnergyKind::Geodesic, 1.0, 1, RngSeed::new(0)).is_err());
    }

    #[test]
    fn uniform_energy_is_deterministic() {
        let a = uniform_energy(3, EnergyKind::Geodesic, 0.5, 70_000, RngSeed::new(4)).unwrap();
        let b = uniform_energy(3, EnergyKind::Geodesic, 0.5, 70_000, RngSeed::new(4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn series_energy_examples() {
        let a = DiscreteMeasure::antipodal_axis(3).unwrap();
        let f = series_arccos(DEFAULT_ORDER_FOR_TESTS);
        let tail = tail_bound(&f, 0.0).unwrap();
        let s = series_energy(&a, &f, tail).unwrap();
        assert!((s.value - FRAC_PI_2).abs() <= tail + 1e-9);

        let c = PowerSeries::constant(2.5, 10).unwrap();
        assert_eq!(series_energy(&a, &c, 0.0).unwrap().value, 2.5);

        let h = series_chord_pow(1.0, DEFAULT_ORDER_FOR_TESTS).unwrap();
        let tail = tail_bound(&h, 0.0).unwrap();
        let s = series_energy(&orthonormal_pair(), &h, tail).unwrap();
        let direct = euclidean_energy(&orthonormal_pair(), 1.0).unwrap().value;
        assert!((s.value - direct).abs() <= tail + 1e-9);
    }

    const DEFAULT_ORDER_FOR_TESTS: usize = crate::series::DEFAULT_ORDER;

    #[test]
    fn phase_examples() {
        let cfg = PhaseConfig {
            samples: 100_000,
            ..PhaseConfig::default()
        };
        let rows =
            phase_transition_experiment(EnergyKind::Euclidean, 3, &[1.5, 2.0, 3.0], cfg).unwrap();
        assert_eq!(rows[0].winner, Winner::Uniform);
        assert!((rows[0].antipodal - 2f64.powf(1.5) / 2.0).abs() < 1e-12);
        assert_eq!(rows[1].winner, Winner::Tie);
        assert!((rows[1].antipodal - 2.0).abs() < 1e-12);
        assert_eq!(rows[2].winner, Winner::Antipodal);
        assert_eq!(rows[2].antipodal, 4.0);
        assert!(rows.iter().all(|r| r.winner_dominates));

        let g = phase_transition_experiment(EnergyKind::Geodesic, 4, &[1.0], cfg).unwrap();
        assert_eq!(g[0].winner, Winner::Tie);
        assert!(g[0].symmetric_spread <= TIE_TOL);

        assert!(phase_transition_experiment(EnergyKind::Geodesic, 3, &[4.5], cfg).is_err());
        assert!(phase_transition_experiment(EnergyKind::Geodesic, 3, &[0.0], cfg).is_err());
    }
}
