//! Exact arithmetic for the Carlitz module over `F_q[T]`, `q` odd.
//!
//! The crate computes Bernoulli-Carlitz numbers, Carlitz factorials, the
//! period constant `w = pi~^(q-1)`, Goss zeta values at positive integers, and
//! verifies numerically (to a requested `U`-adic precision, `U^2 = T`) the
//! Euler-Carlitz formula and the function-field analogue of Ramanujan's
//! identity for odd zeta values. A floating-point module checks the classical
//! Euler and Ramanujan formulas.

pub mod basealg;
pub mod carlitz;
pub mod classical;
pub mod error;
pub mod laurent;
pub mod period;
pub mod ramanujan;
pub mod report;
pub mod zeta;

pub use basealg::{Field, FieldCtx, FieldElem, Poly, RatFunc};
pub use error::{Error, Result};
pub use laurent::{Laurent, Valuation};
pub use period::{Method, PeriodValue};
pub use report::VerifyReport;
