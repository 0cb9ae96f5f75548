//! Moment tensors of a finite point set and the split of `‖M^k‖²` into the
//! uniform part and the eccentricity.

use eccentricity::sphere::uniform_sphere_moment_tensor;
use eccentricity::tensor::{
    eccentricity_norm_sq, eccentricity_tensor, moment_tensor, polynomial_energy, tensor_inner,
};
use eccentricity::UnitVectorCollection;

fn main() -> eccentricity::Result<()> {
    let s = 1.0 / 3f64.sqrt();
    // Four alternate cube vertices: a regular tetrahedron.
    let tetra = UnitVectorCollection::real(vec![
        vec![s, s, s],
        vec![s, -s, -s],
        vec![-s, s, -s],
        vec![-s, -s, s],
    ])?;
    let basis = UnitVectorCollection::orthonormal_basis(3)?;

    for (name, z) in [("tetrahedron", &tetra), ("basis", &basis)] {
        println!("{name}");
        for k in 1..=4 {
            let m = moment_tensor(z, k)?;
            let e = eccentricity_tensor(z, k)?;
            let u = uniform_sphere_moment_tensor(3, k)?;
            println!(
                "  k={k}: entries={:>2}  ‖M‖² = {:.6} (= I_k {:.6})  ‖E‖² = {:.6}  ⟨E,M_U⟩ = {:.1e}",
                m.len(),
                m.norm_sq(),
                polynomial_energy(z, k),
                eccentricity_norm_sq(z, k)?.norm_sq,
                tensor_inner(&e, &u)?
            );
        }
    }
    Ok(())
}
