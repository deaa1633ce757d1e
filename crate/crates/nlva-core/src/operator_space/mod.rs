//! Vertex operators on a finite-dimensional space `W`: compatibility, the
//! reordering operator `T`, residue products and the closure of a generating set.

mod closure;
mod operator;

pub use closure::{
    check_prop_assoc, closure, closure_module, default_n_range, verify_module_structure, ClosureOptions, ClosureResult,
    ClosureStatus, OperatorSpan,
};
pub use operator::{
    find_compat_order, nth_product, nth_product_local, operator_product, product_index_range, truncated_t,
    VertexOperator,
};

#[cfg(test)]
mod tests;
