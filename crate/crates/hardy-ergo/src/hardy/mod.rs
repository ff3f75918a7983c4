//! Hardy germs in log-power normal form.

mod decompose;
mod expr;
mod parse;
pub mod random;

pub use decompose::{decompose_family, is_generator, is_vanishing, vec_is_zero, vec_sub, DecomposedFamily, GenVec};
pub use expr::{compare_growth, key_dd, rat_dd, rat_pow_scalar, Growth, GrowthCmp, HardyExpr, Key};
pub use parse::{parse_expr, parse_general};
