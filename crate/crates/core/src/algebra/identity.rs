//! Randomized exact identity checking.
//!
//! Point `i` of a run is drawn with attempt index `i * 128 + retry`, retrying
//! while any expression hits a pole. Points are evaluated in parallel and the
//! outcome is keyed by point index, so it does not depend on scheduling.

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::expr::{EvalError, Expr};
use super::point::{random_point, Point};
use super::rat::Rat;
use crate::localization::ModelShape;

/// Retries per point before giving up.
pub const MAX_ATTEMPTS: u64 = 100;

const ATTEMPT_STRIDE: u64 = 128;

#[derive(Debug, Clone, thiserror::Error)]
#[error("point {point_index}: every one of {attempts} sampled points hit a pole (last at `{last_pole}`)")]
pub struct EvaluationExhausted {
    pub point_index: usize,
    pub attempts: u64,
    pub last_pole: String,
}

/// A point at which some identity failed.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub pair: usize,
    pub attempt: u64,
    pub point: Point,
    pub lhs: Rat,
    pub rhs: Rat,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct IdentityOutcome {
    pub points: usize,
    pub pole_retries: u64,
    /// Attempt indices of the points actually used.
    pub attempts: Vec<u64>,
    /// SHA-256 over every evaluated left-hand value, in point order.
    pub digest: String,
    pub failures: Vec<Witness>,
}

impl IdentityOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

enum PointResult {
    Ok { attempt: u64, retries: u64, values: String, failures: Vec<Witness> },
    Exhausted(EvaluationExhausted),
}

fn check_point(pairs: &[(Expr, Expr)], shape: &ModelShape, seed: u64, index: usize) -> PointResult {
    let mut last_pole = String::new();
    for retry in 0..MAX_ATTEMPTS {
        let attempt = index as u64 * ATTEMPT_STRIDE + retry;
        let p = random_point(shape, seed, attempt);
        let mut values = Vec::with_capacity(pairs.len());
        let mut pole = None;
        for (l, r) in pairs {
            match (l.eval(&p), r.eval(&p)) {
                (Ok(a), Ok(b)) => values.push((a, b)),
                (Err(EvalError::DivisionByZero { at }), _) | (_, Err(EvalError::DivisionByZero { at })) => {
                    pole = Some(at);
                    break;
                }
                (Err(e), _) | (_, Err(e)) => panic!("expression outside shape {shape}: {e}"),
            }
        }
        if let Some(at) = pole {
            last_pole = at.to_string();
            continue;
        }
        let rendered: Vec<String> = values.iter().map(|(a, _)| a.to_string()).collect();
        let values_line = format!("{attempt}:{}", rendered.join(","));
        let failures = values
            .into_iter()
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(pair, (lhs, rhs))| Witness { pair, attempt, point: p.clone(), lhs, rhs })
            .collect();
        return PointResult::Ok { attempt, retries: retry, values: values_line, failures };
    }
    PointResult::Exhausted(EvaluationExhausted { point_index: index, attempts: MAX_ATTEMPTS, last_pole })
}

/// Check `lhs == rhs` for every pair at `points` pole-free seeded points.
pub fn check_identities(
    pairs: &[(Expr, Expr)],
    shape: &ModelShape,
    seed: u64,
    points: usize,
) -> Result<IdentityOutcome, EvaluationExhausted> {
    let results: Vec<PointResult> =
        (0..points).into_par_iter().map(|i| check_point(pairs, shape, seed, i)).collect();
    let mut out = IdentityOutcome { points, ..Default::default() };
    let mut hasher = Sha256::new();
    for r in results {
        match r {
            PointResult::Ok { attempt, retries, values, failures } => {
                hasher.update(values.as_bytes());
                hasher.update(b"\n");
                out.pole_retries += retries;
                out.attempts.push(attempt);
                out.failures.extend(failures);
            }
            PointResult::Exhausted(e) => return Err(e),
        }
    }
    out.digest = hasher.finalize().iter().map(|b| format!("{b:02x}")).collect();
    Ok(out)
}

/// Single-identity convenience wrapper.
pub fn check_identity(
    lhs: &Expr,
    rhs: &Expr,
    shape: &ModelShape,
    seed: u64,
    points: usize,
) -> Result<IdentityOutcome, EvaluationExhausted> {
    check_identities(&[(lhs.clone(), rhs.clone())], shape, seed, points)
}
