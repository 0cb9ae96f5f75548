//! Symmetric tensors and the tensorization identity.
//!
//! A degree-`k` symmetric tensor over `R^n` is stored once per sorted
//! multi-index `i_1 ≤ … ≤ i_k`; every permutation of that index shares the
//! entry. Inner products weight each stored entry by its multinomial
//! multiplicity so that they agree with the full `n^k` Euclidean inner product.
//!
//! The central fact exploited throughout the crate is
//! `⟨u^{⊗k}, v^{⊗k}⟩ = ⟨u, v⟩^k`, so the `k`-th moment of `⟨X, Y⟩` for
//! independent `X`, `Y` equals `⟨M^k_X, M^k_Y⟩`.

use crate::collection::{Gram, UnitVectorCollection};
use crate::error::{Error, Result};
use crate::sphere;

/// Upper limit on stored entries, `C(n+k−1, k)`.
pub const MAX_ENTRIES: u128 = 10_000_000;

/// Number of multisets of size `k` drawn from `n` values, saturating.
pub fn multiset_count(n: usize, k: usize) -> u128 {
    if n == 0 {
        return u128::from(k == 0);
    }
    // C(n+k-1, k) computed incrementally; each partial product is itself a binomial.
    let mut c: u128 = 1;
    for i in 1..=k as u128 {
        c = match c.checked_mul(n as u128 - 1 + i) {
            Some(v) => v / i,
            None => return u128::MAX,
        };
    }
    c
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTensor {
    dim: usize,
    degree: usize,
    entries: Vec<f64>,
}

impl SymmetricTensor {
    pub fn zeros(dim: usize, degree: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("tensor dimension must be at least 1"));
        }
        let count = multiset_count(dim, degree);
        if count > MAX_ENTRIES {
            return Err(Error::Resource(format!(
                "degree {degree} over dimension {dim} needs {count} entries (limit {MAX_ENTRIES})"
            )));
        }
        Ok(Self {
            dim,
            degree,
            entries: vec![0.0; count as usize],
        })
    }

    /// Builds a tensor by evaluating `f` on every sorted multi-index.
    pub fn from_fn(dim: usize, degree: usize, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let mut t = Self::zeros(dim, degree)?;
        for (slot, idx) in t.entries.iter_mut().zip(MultiIndices::new(dim, degree)) {
            *slot = f(&idx);
        }
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of stored (sorted) entries.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry at a multi-index given in any order (0-based).
    pub fn get(&self, index: &[usize]) -> f64 {
        self.entries[self.rank(index)]
    }

    pub fn set(&mut self, index: &[usize], value: f64) {
        let r = self.rank(index);
        self.entries[r] = value;
    }

    /// Value of a degree-0 tensor.
    pub fn scalar(&self) -> Option<f64> {
        (self.degree == 0).then(|| self.entries[0])
    }

    /// `(sorted multi-index, entry)` pairs in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        MultiIndices::new(self.dim, self.degree).zip(self.entries.iter().copied())
    }

    fn rank(&self, index: &[usize]) -> usize {
        assert_eq!(
            index.len(),
            self.degree,
            "multi-index length must equal the degree"
        );
        let mut sorted = index.to_vec();
        sorted.sort_unstable();
        assert!(
            sorted.last().is_none_or(|&i| i < self.dim),
            "multi-index out of range"
        );
        rank_sorted(self.dim, &sorted)
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim || self.degree != other.degree {
            return Err(Error::Shape {
                left_dim: self.dim,
                left_degree: self.degree,
                right_dim: other.dim,
                right_degree: other.degree,
            });
        }
        Ok(())
    }

    /// Full Euclidean inner product over all `n^k` entries.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_shape(other)?;
        let factorials = factorials(self.degree);
        Ok(MultiIndices::new(self.dim, self.degree)
            .zip(self.entries.iter().zip(&other.entries))
            .map(|(idx, (a, b))| multiplicity(&idx, &factorials) * a * b)
            .sum())
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self).expect("same shape")
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self { entries, ..*self })
    }

    fn axpy(&mut self, alpha: f64, other: &Self) {
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += alpha * b;
        }
    }
}

/// Lexicographic enumeration of sorted multi-indices over `0..dim`.
#[derive(Debug, Clone)]
pub struct MultiIndices {
    dim: usize,
    current: Option<Vec<usize>>,
}

impl MultiIndices {
    pub fn new(dim: usize, degree: usize) -> Self {
        let current = (dim > 0 || degree == 0).then(|| vec![0; degree]);
        Self { dim, current }
    }
}

impl Iterator for MultiIndices {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        if let Some(p) = next.iter().rposition(|&i| i + 1 < self.dim) {
            let v = next[p] + 1;
            next[p..].iter_mut().for_each(|x| *x = v);
            self.current = Some(next);
        }
        Some(out)
    }
}

fn rank_sorted(dim: usize, sorted: &[usize]) -> usize {
    let k = sorted.len();
    let mut r: u128 = 0;
    let mut lo = 0;
    for (p, &v) in sorted.iter().enumerate() {
        let rest = k - p - 1;
        for u in lo..v {
            r += multiset_count(dim - u, rest);
        }
        lo = v;
    }
    r as usize
}

fn factorials(k: usize) -> Vec<f64> {
    let mut f = vec![1.0; k + 1];
    for i in 1..=k {
        f[i] = f[i - 1] * i as f64;
    }
    f
}

/// Number of distinct permutations of a sorted multi-index.
fn multiplicity(sorted: &[usize], factorials: &[f64]) -> f64 {
    let mut m = factorials[sorted.len()];
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().take_while(|&&x| x == sorted[i]).count();
        m /= factorials[j];
        i += j;
    }
    m
}

/// `v^{⊗k}`: the entry at `(i_1..i_k)` is `∏ v_{i_j}`.
pub fn power_tensor(v: &[f64], k: usize) -> Result<SymmetricTensor> {
    if v.is_empty() {
        return Err(Error::invalid(
            "cannot take the power tensor of a zero-dimensional vector",
        ));
    }
    SymmetricTensor::from_fn(v.len(), k, |idx| idx.iter().map(|&i| v[i]).product())
}

/// `⟨A, B⟩` over the full `n^k` index space.
pub fn tensor_inner(a: &SymmetricTensor, b: &SymmetricTensor) -> Result<f64> {
    a.inner(b)
}

/// `M^k = Σ w_i z_i^{⊗k}` for a real collection.
pub fn moment_tensor(x: &UnitVectorCollection, k: usize) -> Result<SymmetricTensor> {
    let vectors = x.real_vectors().ok_or(Error::UnsupportedField {
        op: "moment_tensor",
        field: x.field(),
        hint: "; use welch::frame_potential or tensor::polynomial_energy (Gram-side)",
    })?;
    let mut m = SymmetricTensor::zeros(x.dim(), k)?;
    for (v, &w) in vectors.iter().zip(x.weights()) {
        m.axpy(w, &power_tensor(v, k)?);
    }
    Ok(m)
}

/// `I_k = Σ_{i,j} w_i w_j ⟨z_i, z_j⟩^k`, evaluated on the Gram matrix.
///
/// For complex collections the double sum is real because the `(i,j)` and
/// `(j,i)` terms are conjugate; the real part is returned.
pub fn polynomial_energy(x: &UnitVectorCollection, k: usize) -> f64 {
    let exp = i32::try_from(k).expect("degree fits in i32");
    let w = x.weights();
    match x.gram() {
        Gram::Real { m, entries } => {
            let mut total = 0.0;
            for i in 0..m {
                let row: f64 = (0..m).map(|j| w[j] * entries[i * m + j].powi(exp)).sum();
                total += w[i] * row;
            }
            total
        }
        Gram::Complex { m, entries } => {
            let mut total = 0.0;
            for i in 0..m {
                let row: f64 = (0..m).map(|j| w[j] * entries[i * m + j].powi(exp).re).sum();
                total += w[i] * row;
            }
            total
        }
    }
}

/// `[I_1, …, I_max]` for a real collection in one pass over the Gram matrix.
pub fn polynomial_energies(x: &UnitVectorCollection, max_degree: usize) -> Result<Vec<f64>> {
    let Gram::Real { m, entries } = x.gram() else {
        return Err(Error::UnsupportedField {
            op: "polynomial_energies",
            field: x.field(),
            hint: "",
        });
    };
    let w = x.weights();
    let mut out = vec![0.0; max_degree];
    for i in 0..m {
        for j in 0..m {
            let t = entries[i * m + j];
            let ww = w[i] * w[j];
            let mut p = 1.0;
            for slot in out.iter_mut() {
                p *= t;
                *slot += ww * p;
            }
        }
    }
    Ok(out)
}

/// `E^k = M^k_X − M^k_θ` with `θ` uniform on the sphere.
pub fn eccentricity_tensor(x: &UnitVectorCollection, k: usize) -> Result<SymmetricTensor> {
    moment_tensor(x, k)?.sub(&sphere::uniform_sphere_moment_tensor(x.dim(), k)?)
}

/// Squared norm of the eccentricity tensor, with odd degrees flagged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eccentricity {
    pub norm_sq: f64,
    /// Odd degree: the uniform moment tensor vanishes and `norm_sq` is `I_k` itself.
    pub odd_degree: bool,
}

/// `‖E^k_X‖² = I_k(X) − E⟨θ,θ'⟩^k` for a real collection on the unit sphere.
pub fn eccentricity_norm_sq(x: &UnitVectorCollection, k: usize) -> Result<Eccentricity> {
    if x.real_vectors().is_none() {
        return Err(Error::UnsupportedField {
            op: "eccentricity_norm_sq",
            field: x.field(),
            hint: "",
        });
    }
    let energy = polynomial_energy(x, k);
    if k % 2 == 1 {
        return Ok(Eccentricity {
            norm_sq: energy,
            odd_degree: true,
        });
    }
    let mut gap = energy - sphere::spherical_moment(x.dim(), k / 2);
    if (-1e-10..0.0).contains(&gap) {
        gap = 0.0;
    }
    Ok(Eccentricity {
        norm_sq: gap,
        odd_degree: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn multiset_counts() {
        assert_eq!(multiset_count(3, 2), 6);
        assert_eq!(multiset_count(2, 5), 6);
        assert_eq!(multiset_count(5, 0), 1);
        assert_eq!(multiset_count(1, 9), 1);
        assert_eq!(multiset_count(10, 3), 220);
    }

    #[test]
    fn rank_matches_enumeration_order() {
        for n in 1..5 {
            for k in 0..5 {
                let all: Vec<_> = MultiIndices::new(n, k).collect();
                assert_eq!(all.len() as u128, multiset_count(n, k));
                for (i, idx) in all.iter().enumerate() {
                    assert_eq!(rank_sorted(n, idx), i);
                }
            }
        }
    }

    #[test]
    fn multiplicities_sum_to_full_index_space() {
        for n in 1..4 {
            for k in 0..6 {
                let f = factorials(k);
                let total: f64 = MultiIndices::new(n, k).map(|i| multiplicity(&i, &f)).sum();
                assert_eq!(total, (n as f64).powi(k as i32));
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let err = SymmetricTensor::zeros(50, 12).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
        assert_eq!(err.exit_code(), 5);
        assert!(SymmetricTensor::zeros(10, 6).is_ok());
    }

    #[test]
    fn power_tensor_examples() {
        let e1 = power_tensor(&[1.0, 0.0, 0.0], 2).unwrap();
        for (idx, v) in e1.iter() {
            assert_eq!(v, if idx == [0, 0] { 1.0 } else { 0.0 });
        }

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let t = power_tensor(&[s, s], 2).unwrap();
        for (_, v) in t.iter() {
            assert!(close(v, 0.5, 1e-15));
        }

        let t = power_tensor(&[0.6, 0.8], 3).unwrap();
        assert!(close(t.get(&[0, 0, 1]), 0.6 * 0.6 * 0.8, 1e-15));
        assert_eq!(t.get(&[1, 0, 0]), t.get(&[0, 0, 1]));

        assert_eq!(power_tensor(&[0.3, 0.4], 0).unwrap().scalar(), Some(1.0));
        assert!(matches!(power_tensor(&[], 2), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn tensor_inner_examples() {
        let e1 = power_tensor(&[1.0, 0.0], 5).unwrap();
        assert_eq!(tensor_inner(&e1, &e1).unwrap(), 1.0);

        let u = power_tensor(&[0.6, 0.8], 2).unwrap();
        let v = power_tensor(&[0.8, 0.6], 2).unwrap();
        assert!(close(tensor_inner(&u, &v).unwrap(), 0.96f64.powi(2), 1e-14));

        let a = power_tensor(&[1.0, 0.0], 3).unwrap();
        let b = power_tensor(&[0.0, 1.0], 3).unwrap();
        assert_eq!(tensor_inner(&a, &b).unwrap(), 0.0);

        let c = power_tensor(&[1.0, 0.0], 2).unwrap();
        assert!(matches!(tensor_inner(&a, &c), Err(Error::Shape { .. })));
        let d = power_tensor(&[1.0, 0.0, 0.0], 3).unwrap();
        assert!(matches!(tensor_inner(&a, &d), Err(Error::Shape { .. })));
    }

    #[test]
    fn moment_tensor_examples() {
        let basis = UnitVectorCollection::orthonormal_basis(2).unwrap();
        let m = moment_tensor(&basis, 2).unwrap();
        assert_eq!(m.get(&[0, 0]), 0.5);
        assert_eq!(m.get(&[1, 1]), 0.5);
        assert_eq!(m.get(&[0, 1]), 0.0);

        let point = UnitVectorCollection::real(vec![vec![1.0, 0.0]]).unwrap();
        for k in 0..5 {
            assert_eq!(
                moment_tensor(&point, k).unwrap(),
                power_tensor(&[1.0, 0.0], k).unwrap()
            );
        }

        let pair = UnitVectorCollection::real(vec![vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap();
        assert_eq!(moment_tensor(&pair, 1).unwrap().norm_sq(), 0.0);
    }

    #[test]
    fn moment_tensor_rejects_complex() {
        let z = UnitVectorCollection::complex(vec![vec![num_complex::Complex64::new(1.0, 0.0)]])
            .unwrap();
        assert!(matches!(
            moment_tensor(&z, 2),
            Err(Error::UnsupportedField { .. })
        ));
    }

    #[test]
    fn polynomial_energy_examples() {
        let basis = UnitVectorCollection::orthonormal_basis(2).unwrap();
        assert_eq!(polynomial_energy(&basis, 2), 0.5);
        let point = UnitVectorCollection::real(vec![vec![0.6, 0.8]]).unwrap();
        for k in 0..6 {
            assert!(close(polynomial_energy(&point, k), 1.0, 1e-14));
        }
        let pair = UnitVectorCollection::real(vec![vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap();
        assert_eq!(polynomial_energy(&pair, 1), 0.0);
    }

    #[test]
    fn polynomial_energies_agree_with_single_degree() {
        let x = UnitVectorCollection::real(vec![vec![0.6, 0.8], vec![1.0, 0.0], vec![0.0, -1.0]])
            .unwrap();
        let all = polynomial_energies(&x, 7).unwrap();
        for (k, e) in all.iter().enumerate() {
            assert!(close(*e, polynomial_energy(&x, k + 1), 1e-14));
        }
    }

    #[test]
    fn eccentricity_examples() {
        let basis = UnitVectorCollection::orthonormal_basis(2).unwrap();
        assert_eq!(eccentricity_norm_sq(&basis, 2).unwrap().norm_sq, 0.0);

        let point2 = UnitVectorCollection::real(vec![vec![1.0, 0.0]]).unwrap();
        assert!(close(
            eccentricity_norm_sq(&point2, 2).unwrap().norm_sq,
            0.5,
            1e-15
        ));

        let point3 = UnitVectorCollection::real(vec![vec![0.0, 0.0, 1.0]]).unwrap();
        assert!(close(
            eccentricity_norm_sq(&point3, 4).unwrap().norm_sq,
            0.8,
            1e-15
        ));

        // Tensor route agrees with the Gram route.
        let e = eccentricity_tensor(&point3, 4).unwrap();
        assert!(close(e.norm_sq(), 0.8, 1e-12));

        let odd = eccentricity_norm_sq(&point3, 3).unwrap();
        assert!(odd.odd_degree);
        assert!(close(odd.norm_sq, 1.0, 1e-15));
    }
}
