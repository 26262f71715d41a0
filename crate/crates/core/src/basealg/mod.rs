//! Exact arithmetic in `F_q`, `F_q[T]` and `F_q(T)`.

pub mod field;
pub mod poly;
pub mod ratfunc;

pub use field::{Field, FieldCtx, FieldElem};
pub use poly::{checked_monic_count, monic_count, monic_poly, monic_polys, MonicPolys, Poly};
pub use ratfunc::RatFunc;
