use serde::{Deserialize, Serialize};

use crate::algebra::Expr;
use crate::hypergeometric::{collapsed_at, HypergeometricError, Model};
use crate::localization::{BetaClass, FixedPoint, ModelShape, Side};

/// One β-component of a restricted I-function, truncated in `q1`, with the
/// common factor `C_β·J_β` removed. `coeffs[a]` multiplies
/// `q1^(offset + a)`.
#[derive(Clone, Debug)]
pub struct PerBetaSeries {
    pub model: Model,
    pub fp: FixedPoint,
    pub beta: BetaClass,
    pub shape: ModelShape,
    pub offset: i64,
    coeffs: Vec<Expr>,
}

impl PerBetaSeries {
    pub fn from_parts(model: Model, fp: FixedPoint, beta: BetaClass, shape: ModelShape, offset: i64, coeffs: Vec<Expr>) -> Self {
        assert!(!coeffs.is_empty(), "a series keeps at least its constant coefficient");
        PerBetaSeries { model, fp, beta, shape, offset, coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `None` past the truncation order: unknown, not zero.
    pub fn coeff(&self, a: usize) -> Option<&Expr> {
        self.coeffs.get(a)
    }

    pub fn coeffs(&self) -> &[Expr] {
        &self.coeffs
    }

    pub fn with_coeffs(&self, coeffs: Vec<Expr>) -> Self {
        PerBetaSeries::from_parts(self.model, self.fp.clone(), self.beta.clone(), self.shape, self.offset, coeffs)
    }
}

/// `q1`-offset of a model's series at `fp`: `+Σ_{i∈fp} β·x_i` on the rank-`r`
/// side and `-Σ_{j∈fp} β·x_j` on the rank-`s` side.
pub fn offset_for(model: Model, fp: &FixedPoint, beta: &BetaClass) -> i64 {
    let sum: i64 = fp.indices().iter().map(|&i| beta.x(i)).sum();
    match model.side() {
        Side::Primal => sum,
        Side::Dual => -sum,
    }
}

pub fn assemble(
    model: Model,
    fp: &FixedPoint,
    beta: &BetaClass,
    order: usize,
    shape: &ModelShape,
) -> Result<PerBetaSeries, HypergeometricError> {
    let beta = beta.clone().for_shape(shape)?;
    FixedPoint::new(fp.side(), fp.indices().to_vec(), shape)?;
    if fp.side() != model.side() {
        return Err(HypergeometricError::SideMismatch { model, expected: model.side(), got: fp.side() });
    }
    let coeffs = (0..=order as i64).map(|a| collapsed_at(model, fp, &beta, a, shape)).collect();
    let offset = offset_for(model, fp, &beta);
    Ok(PerBetaSeries::from_parts(model, fp.clone(), beta, *shape, offset, coeffs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CovDirection {
    /// Applied to the GR_HAT series.
    GrDuality,
    /// Applied to the PAX series.
    Paxpaxy,
}

/// Signed `q1`-shift of the Novikov change of variables.
pub fn cov_shift(direction: CovDirection, beta: &BetaClass) -> i64 {
    match direction {
        CovDirection::GrDuality => beta.sum_x(),
        CovDirection::Paxpaxy => -beta.sum_x(),
    }
}

pub fn change_of_variables(series: &PerBetaSeries, direction: CovDirection) -> PerBetaSeries {
    let mut out = series.clone();
    out.offset += cov_shift(direction, &series.beta);
    out
}
