//! Modules over finite-dimensional algebras: axioms, locality transfer,
//! tensor modules and column modules over matrix algebras.

mod checks;
mod module;

pub use checks::{
    check_factor_commutation, check_generation_transfer, check_locality_transfer, check_module,
    check_product_compatibility, module_product, ModuleReport,
};
pub use module::{tensor_module, wn_module, ModuleStructure};
