//! Per-β Novikov series, prefactor kernels, and the duality checks.
//!
//! Both sides of every identity are assembled from the restricted displays
//! independently. The common factors `C_β·J_β` are divided out, and the
//! equality of `C_β` across the two sides is checked as a separate pair.

mod kernel;
mod report;
mod series;
mod verify;

pub use kernel::{convolve, int_binom, kernel_series, psi, Kernel, KernelKind, PsiMode};
pub use report::{CheckRecord, Report, SCHEMA_VERSION};
pub use series::{assemble, change_of_variables, cov_shift, offset_for, CovDirection, PerBetaSeries};
pub use verify::{
    offsets_consistent, theorem_kernel, verify_kernels, verify_proposition, verify_theorem, Case, FixedPointScope, Which,
};

use crate::algebra::EvaluationExhausted;
use crate::hypergeometric::HypergeometricError;
use crate::localization::{LocalizationError, ModelShape};

#[derive(Debug, Clone, thiserror::Error)]
pub enum DualityError {
    #[error("case {case} does not match shape {shape}")]
    CaseMismatch { case: Case, shape: ModelShape },
    #[error("theorem checks need order >= 1, got {order}")]
    TruncationTooSmall { order: usize },
    #[error(transparent)]
    EvaluationExhausted(#[from] EvaluationExhausted),
    #[error(transparent)]
    Factor(#[from] HypergeometricError),
    #[error(transparent)]
    Shape(#[from] LocalizationError),
}
