//! Coherence, frame potentials and Welch-type lower bounds.
//!
//! For unit vectors `z_1..z_m` the averaged potential
//! `(1/m²) Σ_{i,j} |⟨z_i,z_j⟩|^{2k}` is the `2k`-th moment of `⟨X, X'⟩` for `X`
//! uniform on the collection, hence bounded below by the same moment for the
//! uniform sphere: `C(n+k−1,k)^{−1}` over `C^n` (Welch) and the larger
//! `(1·3⋯(2k−1))/(n(n+2)⋯(n+2k−2))` over `R^n`.

use serde::Serialize;

use crate::collection::{Field, UnitVectorCollection};
use crate::error::{Error, Result};
use crate::sphere::{complex_spherical_moment, spherical_moment};

/// `c_max = max_{i≠j} |⟨z_i, z_j⟩|`.
pub fn coherence(z: &UnitVectorCollection) -> Result<f64> {
    let m = z.len();
    if m < 2 {
        return Err(Error::invalid("coherence needs at least two vectors"));
    }
    let g = z.gram();
    let mut c: f64 = 0.0;
    for i in 0..m {
        for j in (i + 1)..m {
            c = c.max(g.modulus(i, j));
        }
    }
    Ok(c)
}

/// `Σ_{i,j} |⟨z_i, z_j⟩|^{2k}` including the diagonal.
pub fn potential_sum(z: &UnitVectorCollection, k: usize) -> f64 {
    let m = z.len();
    let g = z.gram();
    let exp = i32::try_from(2 * k).expect("exponent fits in i32");
    let mut total = 0.0;
    for i in 0..m {
        for j in 0..m {
            total += g.modulus(i, j).powi(exp);
        }
    }
    total
}

/// `(1/m²) Σ_{i,j} |⟨z_i, z_j⟩|^{2k}`. Collection weights are ignored.
pub fn frame_potential(z: &UnitVectorCollection, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::invalid(
            "frame potential exponent k must be at least 1",
        ));
    }
    let m = z.len() as f64;
    Ok(potential_sum(z, k) / (m * m))
}

/// Welch's bound `C(n+k−1,k)^{−1}`, valid for either field.
pub fn classical_bound(n: usize, k: usize) -> f64 {
    complex_spherical_moment(n, k)
}

/// Lower bound on the averaged potential appropriate to `field`.
pub fn welch_average_bound(m: usize, n: usize, k: usize, field: Field) -> Result<f64> {
    check_sizes(m, n, k)?;
    Ok(match field {
        Field::Complex => complex_spherical_moment(n, k),
        Field::Real => spherical_moment(n, k),
    })
}

fn check_sizes(m: usize, n: usize, k: usize) -> Result<()> {
    if m == 0 || n == 0 || k == 0 {
        return Err(Error::invalid(format!(
            "m, n, k must be positive (got m={m}, n={n}, k={k})"
        )));
    }
    Ok(())
}

/// Lower bound on `c_max^{2k}` and on `c_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CmaxBound {
    /// Bound on `c_max^{2k}`: `max(0, (m·B − 1)/(m − 1))`.
    pub power: f64,
    /// `power^{1/(2k)}`, the bound on `c_max` itself.
    pub cmax: f64,
    /// `m·B ≤ 1`, so the bound says nothing.
    pub vacuous: bool,
}

/// Separates the diagonal from the averaged bound `B`:
/// `m + m(m−1)·c_max^{2k} ≥ m²·B`.
pub fn welch_cmax_bound(m: usize, n: usize, k: usize, field: Field) -> Result<CmaxBound> {
    if m < 2 {
        return Err(Error::invalid("c_max bound needs m ≥ 2"));
    }
    let b = welch_average_bound(m, n, k, field)?;
    Ok(cmax_from_average(m, k, b))
}

fn cmax_from_average(m: usize, k: usize, average: f64) -> CmaxBound {
    let raw = (m as f64 * average - 1.0) / (m as f64 - 1.0);
    let vacuous = raw <= 0.0;
    let power = raw.max(0.0);
    CmaxBound {
        power,
        cmax: power.powf(1.0 / (2 * k) as f64),
        vacuous,
    }
}

/// Every bound that applies to `m` vectors in dimension `n` at exponent `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundSummary {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub field: Field,
    /// Welch's `C(n+k−1,k)^{−1}`.
    pub classical_bound: f64,
    /// Real-sphere moment bound; only for real collections.
    pub improved_bound: Option<f64>,
    /// `m²` times the bound that applies to `field`.
    pub scaled_bound: f64,
    /// Welch's original `c_max` bound; absent for `m < 2`.
    pub classical_cmax: Option<CmaxBound>,
    /// `c_max` bound derived from the improved average bound.
    pub improved_cmax: Option<CmaxBound>,
}

impl BoundSummary {
    pub fn new(m: usize, n: usize, k: usize, field: Field) -> Result<Self> {
        check_sizes(m, n, k)?;
        let classical_bound = classical_bound(n, k);
        let improved_bound = (field == Field::Real).then(|| spherical_moment(n, k));
        let applicable = improved_bound.unwrap_or(classical_bound);
        let mm = (m * m) as f64;
        let (classical_cmax, improved_cmax) = if m >= 2 {
            (
                Some(cmax_from_average(m, k, classical_bound)),
                improved_bound.map(|b| cmax_from_average(m, k, b)),
            )
        } else {
            (None, None)
        };
        Ok(Self {
            m,
            n,
            k,
            field,
            classical_bound,
            improved_bound,
            scaled_bound: mm * applicable,
            classical_cmax,
            improved_cmax,
        })
    }

    /// Average bound for this field.
    pub fn applicable_bound(&self) -> f64 {
        self.improved_bound.unwrap_or(self.classical_bound)
    }

    /// `c_max` bound for this field.
    pub fn applicable_cmax(&self) -> Option<CmaxBound> {
        self.improved_cmax.or(self.classical_cmax)
    }
}

/// One row per `k = 1..=k_max`.
pub fn bounds_table(m: usize, n: usize, k_max: usize, field: Field) -> Result<Vec<BoundSummary>> {
    if k_max == 0 {
        return Err(Error::invalid("k_max must be at least 1"));
    }
    (1..=k_max)
        .map(|k| BoundSummary::new(m, n, k, field))
        .collect()
}

/// Measured potential and coherence of a collection against its bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    #[serde(flatten)]
    pub bounds: BoundSummary,
    pub potential: f64,
    /// `m² · potential`, the raw double sum.
    pub scaled_potential: f64,
    pub coherence: f64,
    /// `potential − applicable average bound`.
    pub potential_gap: f64,
    /// `coherence^{2k} − applicable c_max^{2k} bound`.
    pub coherence_gap: f64,
}

/// Bound reports for `k = 1..=k_max`.
pub fn evaluate(z: &UnitVectorCollection, k_max: usize) -> Result<Vec<BoundReport>> {
    if k_max == 0 {
        return Err(Error::invalid("k_max must be at least 1"));
    }
    let c = coherence(z)?;
    let m = z.len();
    (1..=k_max)
        .map(|k| {
            let bounds = BoundSummary::new(m, z.dim(), k, z.field())?;
            let scaled_potential = potential_sum(z, k);
            let potential = scaled_potential / (m * m) as f64;
            let cmax_bound = bounds.applicable_cmax().map_or(0.0, |b| b.power);
            Ok(BoundReport {
                potential_gap: potential - bounds.applicable_bound(),
                coherence_gap: c.powi(2 * k as i32) - cmax_bound,
                bounds,
                potential,
                scaled_potential,
                coherence: c,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_matrix() -> UnitVectorCollection {
        let cols = [
            [0.99, 0.08],
            [0.14, 0.99],
            [0.56, 0.83],
            [-0.68, 0.73],
            [0.93, -0.36],
            [-0.86, -0.50],
            // (+0.30, 0.95) breaks the k=1 tight-frame property; the sign is restored here.
            [-0.30, 0.95],
        ];
        UnitVectorCollection::new(
            crate::collection::Vectors::Real(cols.iter().map(|c| c.to_vec()).collect()),
            None,
            crate::collection::Normalization::Renormalize,
        )
        .unwrap()
    }

    #[test]
    fn coherence_examples() {
        assert_eq!(
            coherence(&UnitVectorCollection::orthonormal_basis(3).unwrap()).unwrap(),
            0.0
        );
        let dup = UnitVectorCollection::real(vec![vec![0.6, 0.8], vec![0.6, 0.8]]).unwrap();
        assert!((coherence(&dup).unwrap() - 1.0).abs() < 1e-15);
        let t = 60f64.to_radians();
        let z = UnitVectorCollection::real(vec![vec![1.0, 0.0], vec![t.cos(), t.sin()]]).unwrap();
        assert!((coherence(&z).unwrap() - 0.5).abs() < 1e-15);
        let one = UnitVectorCollection::real(vec![vec![1.0]]).unwrap();
        assert!(coherence(&one).is_err());
    }

    #[test]
    fn frame_potential_examples() {
        let one = UnitVectorCollection::real(vec![vec![0.6, 0.8]]).unwrap();
        assert!((frame_potential(&one, 3).unwrap() - 1.0).abs() < 1e-15);
        for n in 1..6 {
            let b = UnitVectorCollection::orthonormal_basis(n).unwrap();
            assert_eq!(frame_potential(&b, 1).unwrap(), 1.0 / n as f64);
        }
        let scaled = potential_sum(&example_matrix(), 3);
        assert!((scaled - 15.3128).abs() < 5e-3, "{scaled}");
        assert!(frame_potential(&one, 0).is_err());
    }

    #[test]
    fn average_bound_examples() {
        assert_eq!(
            welch_average_bound(7, 2, 3, Field::Real).unwrap() * 49.0,
            15.3125
        );
        assert_eq!(
            welch_average_bound(7, 2, 3, Field::Complex).unwrap() * 49.0,
            12.25
        );
        assert_eq!(welch_average_bound(1, 1, 1, Field::Real).unwrap(), 1.0);
        assert_eq!(welch_average_bound(1, 1, 1, Field::Complex).unwrap(), 1.0);
        assert!(welch_average_bound(0, 1, 1, Field::Real).is_err());
    }

    #[test]
    fn cmax_bound_examples() {
        let b = welch_cmax_bound(7, 2, 1, Field::Complex).unwrap();
        assert!((b.power - 5.0 / 12.0).abs() < 1e-15);
        assert!((b.cmax - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
        assert!(!b.vacuous);

        let v = welch_cmax_bound(2, 3, 1, Field::Complex).unwrap();
        assert_eq!(v.power, 0.0);
        assert!(v.vacuous);

        let r = welch_cmax_bound(7, 2, 3, Field::Real).unwrap();
        assert!((r.power - (7.0 * 0.3125 - 1.0) / 6.0).abs() < 1e-15);
        assert!((r.power - 0.197917).abs() < 1e-6);

        assert!(welch_cmax_bound(1, 2, 1, Field::Real).is_err());
    }

    #[test]
    fn evaluate_tight_frame() {
        for n in 2..5 {
            let b = UnitVectorCollection::orthonormal_basis(n).unwrap();
            let r = &evaluate(&b, 1).unwrap()[0];
            assert_eq!(r.potential, 1.0 / n as f64);
            assert!(r.potential_gap.abs() < 1e-15);
            assert_eq!(r.bounds.classical_bound, r.bounds.improved_bound.unwrap());
        }
    }

    #[test]
    fn evaluate_example_matrix() {
        let reports = evaluate(&example_matrix(), 3).unwrap();
        assert_eq!(reports.len(), 3);
        assert!(
            reports[0].potential_gap.abs() < 1e-3,
            "{}",
            reports[0].potential_gap
        );
        let r2 = &reports[1];
        assert!(r2.potential >= r2.bounds.improved_bound.unwrap());
        assert!(r2.bounds.improved_bound.unwrap() > r2.bounds.classical_bound);
        assert!((reports[2].scaled_potential - 15.3128).abs() < 5e-3);
        assert_eq!(reports[2].bounds.scaled_bound, 15.3125);
    }
}
