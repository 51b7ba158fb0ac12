//! Exact rational arithmetic and evaluable rational expressions.
//!
//! Identities are certified by exact evaluation at seeded random points
//! ([`random_point`]); [`expand_small`] offers a symbolic cross-check for
//! tiny shapes.

mod expr;
mod identity;
mod point;
mod poly;
mod rat;

pub use expr::{Atom, EvalError, Expr, LinearForm, Node, ShiftedRoot, Var};
pub use identity::{check_identities, check_identity, EvaluationExhausted, IdentityOutcome, Witness, MAX_ATTEMPTS};
pub use point::{random_point, Point};
pub use poly::{expand_small, DegreeOverflow, Monomial, Poly, PolyPair};
pub use rat::{ParseRatError, Rat};

/// Evaluate `e` at `p`.
pub fn eval(e: &Expr, p: &Point) -> Result<Rat, EvalError> {
    e.eval(p)
}
