//! Moments of the uniform distribution on real and complex spheres.
//!
//! Closed forms come from Gaussian integrals: for `g` standard Gaussian in
//! `R^n` and `θ = g/‖g‖`, `E⟨g,v⟩^{2k} = E‖g‖^{2k} · E⟨θ,v⟩^{2k}` with
//! `E‖g‖^{2k} = n(n+2)⋯(n+2k−2)`. The complex case reduces to a real sphere of
//! twice the dimension.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::collection::{Field, Vectors};
use crate::error::{Error, Result};
use crate::tensor::SymmetricTensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereSpec {
    pub dim: usize,
    pub field: Field,
}

impl SphereSpec {
    pub fn real(dim: usize) -> Self {
        Self {
            dim,
            field: Field::Real,
        }
    }

    pub fn complex(dim: usize) -> Self {
        Self {
            dim,
            field: Field::Complex,
        }
    }
}

/// Seed plus substream; equal pairs give equal sample sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream: u64,
}

impl RngSeed {
    pub fn new(seed: u64) -> Self {
        Self { seed, stream: 0 }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        Self { stream, ..self }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// `E⟨θ,v⟩^{2k} = (1·3⋯(2k−1)) / (n(n+2)⋯(n+2k−2))` for `θ` uniform on `S^{n−1}`.
///
/// Evaluated as a product of per-factor ratios so large `k` does not overflow.
///
/// # Panics
/// If `n == 0`.
pub fn spherical_moment(n: usize, k: usize) -> f64 {
    assert!(n >= 1, "sphere dimension must be at least 1");
    (0..k)
        .map(|j| (2 * j + 1) as f64 / (n + 2 * j) as f64)
        .product()
}

/// `E|⟨θ,v⟩|^{2k} = C(n+k−1, k)^{−1}` for `θ` uniform on the unit sphere of `C^n`.
///
/// # Panics
/// If `n == 0`.
pub fn complex_spherical_moment(n: usize, k: usize) -> f64 {
    assert!(n >= 1, "sphere dimension must be at least 1");
    if n + k <= 62 {
        1.0 / binomial_u64(n + k - 1, k) as f64
    } else {
        let b = binomial_big(n + k - 1, k);
        1.0 / b.to_f64().unwrap_or(f64::INFINITY)
    }
}

fn binomial_u64(n: usize, k: usize) -> u64 {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 1..=k as u128 {
        c = c * (n as u128 - k as u128 + i) / i;
    }
    c as u64
}

fn binomial_big(n: usize, k: usize) -> BigUint {
    let k = k.min(n - k);
    let mut c = BigUint::from(1u32);
    for i in 1..=k {
        c = c * BigUint::from(n - k + i) / BigUint::from(i);
    }
    c
}

/// `n(n+2)⋯(n+2h−2) = E‖g‖^{2h}` for `g` standard Gaussian in `R^n`.
pub fn gaussian_norm_moment(n: usize, h: usize) -> f64 {
    (0..h).map(|j| (n + 2 * j) as f64).product()
}

/// Number of perfect matchings of the positions of `index` that only pair
/// equal entries. This is `E[g_{i_1}⋯g_{i_k}]` for a standard Gaussian `g`.
pub fn wick_pairings(index: &[usize]) -> u64 {
    let mut sorted = index.to_vec();
    sorted.sort_unstable();
    let mut memo = HashMap::new();
    pairings_sorted(&sorted, &mut memo)
}

fn pairings_sorted(idx: &[usize], memo: &mut HashMap<Vec<usize>, u64>) -> u64 {
    if idx.is_empty() {
        return 1;
    }
    if idx.len() % 2 == 1 {
        return 0;
    }
    if let Some(&c) = memo.get(idx) {
        return c;
    }
    // Pair position 0 with each equal partner; every choice leaves the same sorted remainder.
    let first = idx[0];
    let partners = idx[1..].iter().take_while(|&&x| x == first).count() as u64;
    let count = if partners == 0 {
        0
    } else {
        partners * pairings_sorted(&idx[2..], memo)
    };
    memo.insert(idx.to_vec(), count);
    count
}

/// `E[θ^{⊗k}]` for `θ` uniform on `S^{n−1}`; zero for odd `k`.
pub fn uniform_sphere_moment_tensor(n: usize, k: usize) -> Result<SymmetricTensor> {
    if k % 2 == 1 {
        return SymmetricTensor::zeros(n, k);
    }
    let denom = gaussian_norm_moment(n, k / 2);
    let mut memo = HashMap::new();
    SymmetricTensor::from_fn(n, k, |idx| pairings_sorted(idx, &mut memo) as f64 / denom)
}

/// Draws i.i.d. uniform points on a sphere by normalizing Gaussian vectors.
#[derive(Debug, Clone)]
pub struct SphereSampler {
    spec: SphereSpec,
    rng: ChaCha8Rng,
}

impl SphereSampler {
    pub fn new(spec: SphereSpec, seed: RngSeed) -> Self {
        Self {
            spec,
            rng: seed.rng(),
        }
    }

    fn gaussian(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    fn gaussian_real(&mut self) -> Vec<f64> {
        (0..self.spec.dim).map(|_| self.gaussian()).collect()
    }

    fn gaussian_complex(&mut self) -> Vec<Complex64> {
        (0..self.spec.dim)
            .map(|_| {
                let re = self.gaussian();
                let im = self.gaussian();
                Complex64::new(re, im)
            })
            .collect()
    }

    pub fn next_real(&mut self) -> Vec<f64> {
        loop {
            let g = self.gaussian_real();
            let r = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            if r > 0.0 {
                return g.into_iter().map(|x| x / r).collect();
            }
        }
    }

    pub fn next_complex(&mut self) -> Vec<Complex64> {
        loop {
            let g = self.gaussian_complex();
            let r = g.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if r > 0.0 {
                return g.into_iter().map(|c| c / r).collect();
            }
        }
    }

    /// `|θ_1|²` for a fresh uniform `θ`, computed as `|g_1|²/‖g‖²`.
    fn first_coordinate_sq(&mut self) -> f64 {
        loop {
            let (first, total) = match self.spec.field {
                Field::Real => {
                    let g = self.gaussian_real();
                    (g[0] * g[0], g.iter().map(|x| x * x).sum::<f64>())
                }
                Field::Complex => {
                    let g = self.gaussian_complex();
                    (g[0].norm_sqr(), g.iter().map(|c| c.norm_sqr()).sum::<f64>())
                }
            };
            if total > 0.0 {
                return first / total;
            }
        }
    }
}

/// `count` i.i.d. uniform points on the sphere described by `spec`.
pub fn sample_sphere(spec: SphereSpec, count: usize, seed: RngSeed) -> Vectors {
    let mut sampler = SphereSampler::new(spec, seed);
    match spec.field {
        Field::Real => Vectors::Real((0..count).map(|_| sampler.next_real()).collect()),
        Field::Complex => Vectors::Complex((0..count).map(|_| sampler.next_complex()).collect()),
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanEstimate {
    pub estimate: f64,
    pub stderr: f64,
}

impl MeanEstimate {
    /// Mean and Bessel-corrected standard error of `values`.
    pub fn from_samples(values: impl IntoIterator<Item = f64>) -> Self {
        // Welford
        let mut count = 0usize;
        let mut mean = 0.0;
        let mut m2 = 0.0;
        for x in values {
            count += 1;
            let d = x - mean;
            mean += d / count as f64;
            m2 += d * (x - mean);
        }
        let var = if count > 1 {
            m2 / (count - 1) as f64
        } else {
            0.0
        };
        Self {
            estimate: mean,
            stderr: (var / count as f64).sqrt(),
        }
    }

    /// `|value − estimate| ≤ sigmas · stderr`.
    pub fn brackets(&self, value: f64, sigmas: f64) -> bool {
        (value - self.estimate).abs() <= sigmas * self.stderr
    }
}

/// Monte Carlo estimate of `E|⟨θ, e_1⟩|^{2k}`.
pub fn monte_carlo_moment(
    spec: SphereSpec,
    k: usize,
    samples: usize,
    seed: RngSeed,
) -> Result<MeanEstimate> {
    if samples < 2 {
        return Err(Error::invalid(
            "monte_carlo_moment needs at least 2 samples",
        ));
    }
    if spec.dim == 0 {
        return Err(Error::invalid("sphere dimension must be at least 1"));
    }
    let mut sampler = SphereSampler::new(spec, seed);
    let exp = i32::try_from(k).map_err(|_| Error::invalid("moment order too large"))?;
    Ok(MeanEstimate::from_samples(
        (0..samples).map(|_| sampler.first_coordinate_sq().powi(exp)),
    ))
}
