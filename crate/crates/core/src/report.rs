//! Outcome of comparing two computed sides of an identity in `k_inf(U)`.

use std::collections::BTreeMap;
use std::time::Duration;

use crate::laurent::{Laurent, Valuation};

/// Sides must be known to at least this many digits to count as nonzero.
pub const MIN_SIDE_DIGITS: i64 = 20;

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub lhs: Laurent,
    pub rhs: Laurent,
    pub residual: Laurent,
    /// Working precision `N`; the target floor is `-N`.
    pub n: i64,
    pub slack: i64,
    pub dmax_used: Option<u32>,
    pub checks: BTreeMap<String, bool>,
    /// Per-term or per-degree figures, in insertion order.
    pub diagnostics: Vec<(String, String)>,
    pub notes: Vec<String>,
    pub elapsed: Duration,
}

impl VerifyReport {
    pub fn compare(lhs: Laurent, rhs: Laurent, n: i64, slack: i64) -> Self {
        let residual = &lhs - &rhs;
        VerifyReport {
            lhs,
            rhs,
            residual,
            n,
            slack,
            dmax_used: None,
            checks: BTreeMap::new(),
            diagnostics: Vec::new(),
            notes: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn residual_valuation(&self) -> Valuation {
        self.residual.valuation()
    }

    pub fn lhs_valuation(&self) -> Valuation {
        self.lhs.valuation()
    }

    pub fn rhs_valuation(&self) -> Valuation {
        self.rhs.valuation()
    }

    pub fn residual_zero(&self) -> bool {
        match self.residual_valuation() {
            Valuation::Infinite => true,
            Valuation::AtLeast(b) => b >= self.n - self.slack,
            Valuation::Exact(_) => false,
        }
    }

    /// Both sides have a known nonzero leading term with enough digits behind it.
    pub fn sides_nonzero(&self) -> bool {
        [&self.lhs, &self.rhs].iter().all(|s| {
            !s.is_exact_zero()
                && !s.is_zero_to_precision()
                && s.significant_digits().is_none_or(|d| d >= MIN_SIDE_DIGITS)
        })
    }

    pub fn check(&mut self, name: &str, ok: bool) {
        self.checks.insert(name.to_string(), ok);
    }

    pub fn diagnostic(&mut self, name: impl Into<String>, value: impl ToString) {
        self.diagnostics.push((name.into(), value.to_string()));
    }

    pub fn pass(&self) -> bool {
        self.residual_zero() && self.sides_nonzero() && self.checks.values().all(|&c| c)
    }
}
