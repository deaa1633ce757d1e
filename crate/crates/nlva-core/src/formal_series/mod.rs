//! Exact multi-variable formal series on finite windows.
//!
//! Every power `(a + b)^n` is expanded in nonnegative powers of the second
//! summand. Coefficients are stored only inside a window; support bounds record
//! whether anything lies outside it, which decides whether a comparison is
//! exact-complete or only holds on the window.

mod dist;
mod scalar;

pub use dist::{
    binom_expand, delta, delta_term, delta_three_term, window_equal, Bound, DeltaTerm, Distribution, RegionTag,
    Side, SupportDescriptor, VarKind, Window, WindowVerdict, DEFAULT_RADIUS, NEG_INF, POS_INF,
};
pub use scalar::{binomial, factorial, fmt_q, q, qfrac, sign_pow, VectorQ, Q};

#[cfg(test)]
mod tests;
