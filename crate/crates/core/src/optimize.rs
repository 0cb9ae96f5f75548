//! Minimizing the `2k`-frame potential over `m` unit vectors in `R^n`.
//!
//! Projected gradient descent on the product of spheres: step along the
//! negative tangential gradient, renormalize every vector, halve the step
//! until the potential decreases. Restarts run in parallel on independent
//! substreams and the best result wins (ties go to the lower restart index).

use rayon::prelude::*;
use serde::Serialize;

use crate::collection::{dot, norm, UnitVectorCollection};
use crate::error::{Error, Result};
use crate::sphere::{spherical_moment, RngSeed, SphereSampler, SphereSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizeConfig {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub restarts: usize,
    pub max_iters: usize,
    /// Initial step; every iteration starts from it and halves on non-decrease.
    pub step: f64,
    /// Stop once the projected-gradient norm falls below this.
    pub tol_grad: f64,
    pub seed: RngSeed,
}

impl OptimizeConfig {
    pub fn new(m: usize, n: usize, k: usize) -> Self {
        Self {
            m,
            n,
            k,
            restarts: 32,
            max_iters: 20_000,
            step: 0.1,
            tol_grad: 1e-10,
            seed: RngSeed::new(0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 || self.k == 0 {
            return Err(Error::invalid("m, n and k must be positive"));
        }
        if self.restarts == 0 {
            return Err(Error::invalid("restarts must be at least 1"));
        }
        if !self.step.is_finite()
            || self.step <= 0.0
            || !self.tol_grad.is_finite()
            || self.tol_grad <= 0.0
        {
            return Err(Error::invalid("step and tol_grad must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizeResult {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    /// Canonicalized minimizer, one row per vector.
    pub vectors: Vec<Vec<f64>>,
    pub potential: f64,
    /// `m² · potential`
    pub scaled_potential: f64,
    /// Real-sphere moment bound on `potential`.
    pub bound: f64,
    /// `scaled_potential − m² · bound`
    pub gap: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Restart that produced the result.
    pub restart: usize,
}

impl OptimizeResult {
    pub fn collection(&self) -> Result<UnitVectorCollection> {
        UnitVectorCollection::real(self.vectors.clone())
    }
}

fn potential_raw(x: &[Vec<f64>], k: usize) -> f64 {
    let m = x.len();
    let exp = 2 * k as i32;
    let mut total = m as f64; // diagonal
    for i in 0..m {
        for j in (i + 1)..m {
            total += 2.0 * dot(&x[i], &x[j]).powi(exp);
        }
    }
    total / (m * m) as f64
}

fn gradient_raw(x: &[Vec<f64>], k: usize) -> Vec<Vec<f64>> {
    let m = x.len();
    let scale = 4.0 * k as f64 / (m * m) as f64;
    let exp = 2 * k as i32 - 1;
    x.iter()
        .map(|xi| {
            let mut g = vec![0.0; xi.len()];
            for xj in x {
                let c = scale * dot(xi, xj).powi(exp);
                for (gi, v) in g.iter_mut().zip(xj) {
                    *gi += c * v;
                }
            }
            g
        })
        .collect()
}

fn tangential(x: &[Vec<f64>], g: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    x.iter()
        .zip(g)
        .map(|(xi, mut gi)| {
            let r = dot(xi, &gi);
            for (a, b) in gi.iter_mut().zip(xi) {
                *a -= r * b;
            }
            gi
        })
        .collect()
}

fn frobenius(g: &[Vec<f64>]) -> f64 {
    g.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
}

fn real_vectors<'a>(z: &'a UnitVectorCollection, op: &'static str) -> Result<&'a [Vec<f64>]> {
    z.real_vectors().ok_or(Error::UnsupportedField {
        op,
        field: z.field(),
        hint: "",
    })
}

/// Euclidean gradient of `(1/m²) Σ ⟨x_i, x_j⟩^{2k}` with respect to each `x_i`:
/// `(4k/m²) Σ_j ⟨x_i, x_j⟩^{2k−1} x_j`.
pub fn potential_gradient(z: &UnitVectorCollection, k: usize) -> Result<Vec<Vec<f64>>> {
    Ok(gradient_raw(real_vectors(z, "potential_gradient")?, k))
}

/// Gradient projected onto the tangent space of each sphere.
pub fn tangential_gradient(z: &UnitVectorCollection, k: usize) -> Result<Vec<Vec<f64>>> {
    let x = real_vectors(z, "tangential_gradient")?;
    Ok(tangential(x, gradient_raw(x, k)))
}

struct Run {
    vectors: Vec<Vec<f64>>,
    potential: f64,
    iterations: usize,
    converged: bool,
}

fn descend(mut x: Vec<Vec<f64>>, cfg: &OptimizeConfig) -> Run {
    let mut p = potential_raw(&x, cfg.k);
    for it in 0..cfg.max_iters {
        let g = tangential(&x, gradient_raw(&x, cfg.k));
        if frobenius(&g) < cfg.tol_grad {
            return Run {
                vectors: x,
                potential: p,
                iterations: it,
                converged: true,
            };
        }
        let mut step = cfg.step;
        let accepted = loop {
            let trial: Vec<Vec<f64>> = x
                .iter()
                .zip(&g)
                .map(|(xi, gi)| {
                    let y: Vec<f64> = xi.iter().zip(gi).map(|(a, b)| a - step * b).collect();
                    let r = norm(&y);
                    y.into_iter().map(|v| v / r).collect()
                })
                .collect();
            let q = potential_raw(&trial, cfg.k);
            if q < p {
                break Some((trial, q));
            }
            step *= 0.5;
            if step < 1e-18 {
                break None;
            }
        };
        match accepted {
            Some((trial, q)) => {
                x = trial;
                p = q;
            }
            // No descent available at machine precision.
            None => {
                return Run {
                    vectors: x,
                    potential: p,
                    iterations: it,
                    converged: true,
                }
            }
        }
    }
    Run {
        vectors: x,
        potential: p,
        iterations: cfg.max_iters,
        converged: false,
    }
}

/// Reflects `x_1` onto `e_1`; for `n = 2` also puts `x_2` in the upper half-plane.
pub fn canonicalize(vectors: &mut [Vec<f64>]) {
    let Some(first) = vectors.first() else { return };
    let n = first.len();
    let mut u = first.clone();
    u[0] -= 1.0;
    let uu = dot(&u, &u);
    if uu > 1e-30 {
        for v in vectors.iter_mut() {
            let c = 2.0 * dot(&u, v) / uu;
            for (a, b) in v.iter_mut().zip(&u) {
                *a -= c * b;
            }
        }
    }
    if n == 2 && vectors.len() > 1 && vectors[1][1] < 0.0 {
        for v in vectors.iter_mut() {
            v[1] = -v[1];
        }
    }
    for v in vectors.iter_mut() {
        let r = norm(v);
        v.iter_mut().for_each(|a| *a /= r);
    }
}

fn random_start(cfg: &OptimizeConfig, restart: usize) -> Vec<Vec<f64>> {
    let mut s = SphereSampler::new(
        SphereSpec::real(cfg.n),
        cfg.seed.with_stream(restart as u64),
    );
    (0..cfg.m).map(|_| s.next_real()).collect()
}

/// Best-of-restarts projected gradient descent from uniform random starts.
pub fn minimize_potential(config: &OptimizeConfig) -> Result<OptimizeResult> {
    minimize_with_start(config, None)
}

/// Like [`minimize_potential`], with restart 0 starting from `start`.
pub fn minimize_from(
    config: &OptimizeConfig,
    start: &UnitVectorCollection,
) -> Result<OptimizeResult> {
    let x = real_vectors(start, "minimize_from")?;
    if x.len() != config.m || start.dim() != config.n {
        return Err(Error::invalid(format!(
            "warm start has {} vectors in dimension {}, config expects {}×{}",
            x.len(),
            start.dim(),
            config.m,
            config.n
        )));
    }
    minimize_with_start(config, Some(x.to_vec()))
}

fn minimize_with_start(
    config: &OptimizeConfig,
    start: Option<Vec<Vec<f64>>>,
) -> Result<OptimizeResult> {
    config.validate()?;
    let runs: Vec<Run> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let x0 = match (&start, r) {
                (Some(s), 0) => s.clone(),
                _ => random_start(config, r),
            };
            descend(x0, config)
        })
        .collect();
    let (restart, best) = runs
        .into_iter()
        .enumerate()
        .reduce(|a, b| if b.1.potential < a.1.potential { b } else { a })
        .expect("at least one restart");

    let mut vectors = best.vectors;
    canonicalize(&mut vectors);
    let potential = potential_raw(&vectors, config.k);
    let mm = (config.m * config.m) as f64;
    let bound = spherical_moment(config.n, config.k);
    Ok(OptimizeResult {
        m: config.m,
        n: config.n,
        k: config.k,
        vectors,
        potential,
        scaled_potential: mm * potential,
        bound,
        gap: mm * (potential - bound),
        iterations: best.iterations,
        converged: best.converged,
        restart,
    })
}

/// Grid evaluations allowed in [`brute_force_potential_min`].
pub const BRUTE_FORCE_BUDGET: u128 = 100_000_000;

/// Minimal scaled potential `Σ_{i,j} cos^{2k}(θ_i − θ_j)` of `m ≤ 4` lines in
/// the plane by grid search.
///
/// `θ_1 = 0` by rotation invariance and the remaining angles range over a
/// sorted grid on `[0, π)` with spacing at most `resolution`. The best grid
/// point is then refined by successively finer local grids.
pub fn brute_force_potential_min(m: usize, k: usize, resolution: f64) -> Result<f64> {
    if m == 0 || k == 0 {
        return Err(Error::invalid("m and k must be positive"));
    }
    if m > 4 {
        return Err(Error::Resource(format!(
            "brute force supports m ≤ 4, got {m}"
        )));
    }
    if !(resolution > 0.0 && resolution < 1.0) {
        return Err(Error::invalid("resolution must be in (0, 1)"));
    }
    let free = m - 1;
    if free == 0 {
        return Ok(1.0);
    }
    let pi = std::f64::consts::PI;
    let points = (pi / resolution).ceil() as usize;
    let evals = crate::tensor::multiset_count(points, free);
    if evals > BRUTE_FORCE_BUDGET {
        return Err(Error::Resource(format!(
            "{evals} grid points exceed budget {BRUTE_FORCE_BUDGET}"
        )));
    }
    let h = pi / points as f64;
    let exp = 2 * k as i32;
    let scaled = |angles: &[f64]| -> f64 {
        let mut total = m as f64;
        let mut all = [0.0; 4];
        all[1..=free].copy_from_slice(angles);
        for i in 0..m {
            for j in (i + 1)..m {
                total += 2.0 * (all[i] - all[j]).cos().powi(exp);
            }
        }
        total
    };

    let mut best_val = f64::INFINITY;
    let mut best = vec![0.0; free];
    let mut angles = vec![0.0; free];
    for idx in crate::tensor::MultiIndices::new(points, free) {
        for (a, &i) in angles.iter_mut().zip(&idx) {
            *a = i as f64 * h;
        }
        let v = scaled(&angles);
        if v < best_val {
            best_val = v;
            best.copy_from_slice(&angles);
        }
    }

    // Zoom: 9 points per axis over ±2 cells, then shrink the cell fourfold.
    let mut cell = h;
    while cell > 1e-10 {
        let center = best.clone();
        let mut counter = vec![0usize; free];
        loop {
            for (a, (&c, &o)) in angles.iter_mut().zip(center.iter().zip(&counter)) {
                *a = c + (o as f64 - 4.0) * cell / 2.0;
            }
            let v = scaled(&angles);
            if v < best_val {
                best_val = v;
                best.copy_from_slice(&angles);
            }
            let Some(p) = counter.iter().position(|&c| c < 8) else {
                break;
            };
            counter[p] += 1;
            counter[..p].iter_mut().for_each(|c| *c = 0);
        }
        cell /= 4.0;
    }
    Ok(best_val)
}

#[cfg(test)]
mod tests {
    use super::*;

    // full double sum, diagonal included, so it is differentiable off the sphere
    fn ambient_potential(x: &[Vec<f64>], k: usize) -> f64 {
        let m = x.len() as f64;
        let s: f64 = x
            .iter()
            .flat_map(|a| x.iter().map(move |b| dot(a, b).powi(2 * k as i32)))
            .sum();
        s / (m * m)
    }

    fn finite_difference_gradient(x: &[Vec<f64>], k: usize, h: f64) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; x[0].len()]; x.len()];
        for i in 0..x.len() {
            for c in 0..x[0].len() {
                let mut plus = x.to_vec();
                let mut minus = x.to_vec();
                plus[i][c] += h;
                minus[i][c] -= h;
                out[i][c] =
                    (ambient_potential(&plus, k) - ambient_potential(&minus, k)) / (2.0 * h);
            }
        }
        out
    }

    #[test]
    fn gradient_of_orthonormal_basis() {
        let b = UnitVectorCollection::orthonormal_basis(3).unwrap();
        let g = potential_gradient(&b, 1).unwrap();
        for (i, gi) in g.iter().enumerate() {
            for (c, v) in gi.iter().enumerate() {
                assert_eq!(*v, if c == i { 4.0 / 9.0 } else { 0.0 });
            }
        }
        let t = tangential_gradient(&b, 1).unwrap();
        assert_eq!(frobenius(&t), 0.0);
    }

    #[test]
    fn single_vector_has_zero_tangential_gradient() {
        let z = UnitVectorCollection::real(vec![vec![0.6, 0.8]]).unwrap();
        assert!(frobenius(&tangential_gradient(&z, 2).unwrap()) < 1e-15);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let cfg = OptimizeConfig {
            seed: RngSeed::new(77),
            ..OptimizeConfig::new(5, 2, 3)
        };
        let x = random_start(&cfg, 0);
        let z = UnitVectorCollection::real(x.clone()).unwrap();
        let g = potential_gradient(&z, 3).unwrap();
        let fd = finite_difference_gradient(&x, 3, 1e-5);
        for (a, b) in g.iter().flatten().zip(fd.iter().flatten()) {
            assert!((a - b).abs() <= 1e-6 * (1.0 + b.abs()), "{a} vs {b}");
        }
    }

    #[test]
    fn gradient_rejects_complex() {
        let z = UnitVectorCollection::complex(vec![vec![num_complex::Complex64::new(1.0, 0.0)]])
            .unwrap();
        assert!(potential_gradient(&z, 1).is_err());
    }

    #[test]
    fn tight_frame_reached_when_m_equals_n() {
        for n in 2..5 {
            let r = minimize_potential(&OptimizeConfig {
                restarts: 4,
                ..OptimizeConfig::new(n, n, 1)
            })
            .unwrap();
            assert!((r.scaled_potential - n as f64).abs() < 1e-6, "{r:?}");
            assert!(r.gap.abs() < 1e-6);
            assert!(r.gap >= -1e-8);
        }
    }

    #[test]
    fn orthogonal_pair_minimizes_two_lines() {
        let r = minimize_potential(&OptimizeConfig {
            restarts: 4,
            ..OptimizeConfig::new(2, 2, 2)
        })
        .unwrap();
        assert!((r.scaled_potential - 2.0).abs() < 1e-8);
        assert!((brute_force_potential_min(2, 2, 1e-3).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn canonical_form_for_planar_results() {
        let r = minimize_potential(&OptimizeConfig {
            restarts: 3,
            ..OptimizeConfig::new(5, 2, 2)
        })
        .unwrap();
        assert!((r.vectors[0][0] - 1.0).abs() < 1e-12);
        assert!(r.vectors[0][1].abs() < 1e-12);
        assert!(r.vectors[1][1] >= 0.0);
        for v in &r.vectors {
            assert!((norm(v) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let cfg = OptimizeConfig {
            restarts: 6,
            seed: RngSeed::new(3),
            ..OptimizeConfig::new(6, 3, 2)
        };
        assert_eq!(
            minimize_potential(&cfg).unwrap(),
            minimize_potential(&cfg).unwrap()
        );
    }

    #[test]
    fn warm_start_is_used() {
        let cfg = OptimizeConfig {
            restarts: 1,
            max_iters: 0,
            ..OptimizeConfig::new(2, 2, 1)
        };
        let start = UnitVectorCollection::orthonormal_basis(2).unwrap();
        let r = minimize_from(&cfg, &start).unwrap();
        assert_eq!(r.scaled_potential, 2.0);
        assert!(!r.converged);
        let wrong = UnitVectorCollection::orthonormal_basis(3).unwrap();
        assert!(minimize_from(&cfg, &wrong).is_err());
    }

    #[test]
    fn brute_force_examples() {
        assert!((brute_force_potential_min(2, 1, 1e-3).unwrap() - 2.0).abs() < 1e-9);
        assert!((brute_force_potential_min(3, 1, 1e-3).unwrap() - 4.5).abs() < 1e-9);
        assert!((brute_force_potential_min(2, 3, 1e-2).unwrap() - 2.0).abs() < 1e-9);
        assert_eq!(brute_force_potential_min(1, 2, 1e-2).unwrap(), 1.0);
        assert!(matches!(
            brute_force_potential_min(5, 1, 0.1),
            Err(Error::Resource(_))
        ));
        assert!(matches!(
            brute_force_potential_min(4, 1, 1e-4),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn invalid_config() {
        assert!(minimize_potential(&OptimizeConfig {
            restarts: 0,
            ..OptimizeConfig::new(2, 2, 1)
        })
        .is_err());
        assert!(minimize_potential(&OptimizeConfig {
            step: 0.0,
            ..OptimizeConfig::new(2, 2, 1)
        })
        .is_err());
        assert!(minimize_potential(&OptimizeConfig::new(0, 2, 1)).is_err());
    }
}
