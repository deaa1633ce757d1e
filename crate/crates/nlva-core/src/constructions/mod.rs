//! Builders for derived algebras: from an associative algebra with a
//! derivation, tensor products, matrix algebras, cocycle twists and cross
//! products with a group, plus the R-map form of the Jacobi identity.

mod assoc;
mod cross;
mod rmap;
mod tensor;
mod twist;

pub use assoc::{from_assoc_with_derivation, AssocAlgebraData};
pub use cross::{cross_product, FiniteGroup, GroupActionData};
pub use rmap::{check_jacobi_like, RMap, Triple};
pub use tensor::{matrix_algebra, tensor_product};
pub use twist::{cocycle_twist, group_algebra, AbelianGroup, CocycleData, Degree, GradedTag};
