//! Moment and eccentricity tensors of point sets on spheres, Welch-type
//! bounds on frame potentials, and distance energies of spherical measures.
//!
//! The identity that ties everything together: for independent random
//! vectors `X`, `Y`, `E⟨X,Y⟩^k = ⟨M^k_X, M^k_Y⟩` where `M^k = E[X^{⊗k}]`.
//! Rotationally invariant measures minimize `E⟨X,X'⟩^k`, so the uniform
//! sphere gives lower bounds on frame potentials ([`welch`]) and, through
//! power series with signed coefficients ([`series`]), upper bounds on
//! distance energies ([`energy`]).
//!
//! ```
//! use eccentricity::{welch, Field};
//!
//! let b = welch::welch_average_bound(7, 2, 3, Field::Real).unwrap();
//! assert_eq!(49.0 * b, 15.3125);
//! ```

pub mod cli;
pub mod collection;
pub mod energy;
pub mod error;
pub mod optimize;
pub mod series;
pub mod sphere;
pub mod tensor;
pub mod welch;

pub use collection::{Field, Normalization, UnitVectorCollection, Vectors};
pub use energy::{DiscreteMeasure, EnergyKind, EnergyResult};
pub use error::{Error, Result};
pub use optimize::{OptimizeConfig, OptimizeResult};
pub use series::PowerSeries;
pub use sphere::{RngSeed, SphereSpec};
pub use tensor::SymmetricTensor;
pub use welch::BoundReport;
