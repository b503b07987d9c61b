//! Traditional and null-hypothesis forms of classical tests.
//!
//! The one-sample t-test, the nested-model F-test and the one-sample
//! proportion test can each be built with a variance estimate taken from
//! the full model or from the model implied by the null hypothesis. For the
//! t and F tests the two statistics are monotone functions of each other,
//! so they reject on exactly the same samples. This crate computes both
//! forms side by side, evaluates their p-values through independent
//! distributional routes, and exposes the residual diagnostics where the
//! two forms give visibly different pictures.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod linmodel;
pub mod montecarlo;
pub mod plot;
pub mod proportion;
pub mod real;
pub mod specfun;
pub mod ttest;

pub use error::{Error, Result};
pub use ttest::Sample;

/// Decision at level `alpha` for a pair of test forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct DecisionPair {
    pub reject_traditional: bool,
    pub reject_null_form: bool,
}

impl DecisionPair {
    pub fn agree(&self) -> bool {
        self.reject_traditional == self.reject_null_form
    }
}
