//! The map families as expression trees: evaluation, enclosures and
//! symbolic derivatives.

pub mod expr;
pub mod family;

pub use expr::{param, parse_expr, real, var, MapExpr, Params};
pub use family::{build_family, centered_enclosure, ex2_entire_part, solve_ex2_params, FamilyId, MeromorphicMap};
