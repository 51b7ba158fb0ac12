use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::kernel::{convolve, kernel_series, psi, Kernel, KernelKind, PsiMode};
use super::report::{CheckRecord, Report};
use super::series::{assemble, change_of_variables, CovDirection};
use super::DualityError;
use crate::algebra::{check_identities, Expr, Rat, Var};
use crate::hypergeometric::{c_factor, collapsed, restricted_factor, FactorSpec, Form, Model};
use crate::localization::{complement, fixed_points, BetaClass, DegreeVector, FixedPoint, ModelShape, Side};

/// The three regimes of the duality, by `m - n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Case {
    /// `m >= n + 2`.
    Geq2,
    /// `m = n + 1`.
    Plus1,
    /// `m = n`.
    Equal,
}

impl Case {
    pub fn of(shape: &ModelShape) -> Case {
        match shape.m() - shape.n() {
            0 => Case::Equal,
            1 => Case::Plus1,
            _ => Case::Geq2,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Case::Geq2 => "geq2",
            Case::Plus1 => "plus1",
            Case::Equal => "equal",
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::Geq2 => "GEQ2",
            Case::Plus1 => "PLUS1",
            Case::Equal => "EQUAL",
        })
    }
}

/// Which pair of dual models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Which {
    /// GR against GR_HAT; the theorem is the building block.
    Gr,
    /// PAXY against PAX.
    PaxPaxy,
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Which::Gr => "GR",
            Which::PaxPaxy => "PAXPAXY",
        })
    }
}

/// Fixed points covered by a theorem check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedPointScope {
    Standard,
    All,
}

/// Orientation data per pair. The left side is the series the theorem
/// expresses; the right side is transformed and multiplied by the kernel.
///
/// | pair    | left   | right  | CoV shift on right | kernel sign rank | Ψ              | integer exponent Ψ_β |
/// |---------|--------|--------|--------------------|------------------|----------------|----------------------|
/// | GR      | GR     | GR_HAT | `+Σ_m β·x`         | `s`              | `s + ΣLz − ΣLx` | `Σβ·z − Σβ·x`        |
/// | PAXPAXY | PAXY   | PAX    | `−Σ_m β·x`         | `r`              | `r + ΣLx − ΣLz` | `Σβ·x − Σβ·z`        |
struct Orientation {
    left: Model,
    right: Model,
    cov: CovDirection,
    psi_mode: PsiMode,
    rank: usize,
}

impl Orientation {
    fn of(which: Which, shape: &ModelShape) -> Self {
        match which {
            Which::Gr => Orientation {
                left: Model::Gr,
                right: Model::GrHat,
                cov: CovDirection::GrDuality,
                psi_mode: PsiMode::GrSide,
                rank: shape.s(),
            },
            Which::PaxPaxy => Orientation {
                left: Model::Paxy,
                right: Model::Pax,
                cov: CovDirection::Paxpaxy,
                psi_mode: PsiMode::PaxSide,
                rank: shape.r(),
            },
        }
    }

    fn psi_beta(&self, beta: &BetaClass) -> i64 {
        match self.psi_mode {
            PsiMode::GrSide => beta.sum_z() - beta.sum_x(),
            PsiMode::PaxSide => beta.sum_x() - beta.sum_z(),
        }
    }
}

fn check_case(case: Case, shape: &ModelShape) -> Result<(), DualityError> {
    if Case::of(shape) != case {
        return Err(DualityError::CaseMismatch { case, shape: *shape });
    }
    Ok(())
}

fn sign(rank: usize, a: i64) -> Rat {
    if (rank as i64 * a).rem_euclid(2) == 0 {
        Rat::one()
    } else {
        Rat::from_int(-1)
    }
}

fn statement_prop(which: Which, case: Case) -> String {
    let (l, r) = match which {
        Which::Gr => ("N_{β,a}", "N̂_{β,p}"),
        Which::PaxPaxy => ("N^PAXY_{β,a}", "N^PAX_{β,p}"),
    };
    match case {
        Case::Geq2 => format!("{l} = {}", r.replace('p', "a")),
        Case::Plus1 => format!("{l} = Σ_p (−1)^(rank·(a−p)) z^(p−a)/(a−p)! · {r}"),
        Case::Equal => format!("{l} = Σ_p (−1)^(rank·p) binom(Ψ, p) · {}", r.replace('p', "a−p")),
    }
}

/// Right-hand side of the collapsed identity at `a`, written out directly.
fn proposition_rhs(case: Case, o: &Orientation, right: &[Expr], psi_full: &Expr, a: i64) -> Expr {
    let z = Expr::var(Var::Zgiv);
    match case {
        Case::Geq2 => right[a as usize].clone(),
        Case::Plus1 => Expr::sum((0..=a).map(|p| {
            let c = sign(o.rank, a - p) / Rat::factorial(a - p);
            Expr::product([Expr::constant(c), Expr::pow(z.clone(), (p - a) as i32), right[p as usize].clone()])
        })),
        Case::Equal => Expr::sum((0..=a).map(|p| {
            let ratio = (0..p).map(|h| {
                Expr::quotient(psi_full.clone() - Expr::constant(h), Expr::constant(p - h))
            });
            Expr::product([
                Expr::product(ratio),
                Expr::constant(sign(o.rank, p)),
                right[(a - p) as usize].clone(),
            ])
        })),
    }
}

/// Check the collapsed-coefficient identity for every `a <= a_max` at the
/// standard fixed point.
#[allow(clippy::too_many_arguments)]
pub fn verify_proposition(
    case: Case,
    which: Which,
    shape: &ModelShape,
    beta: &BetaClass,
    a_max: usize,
    seed: u64,
    points: usize,
) -> Result<Report, DualityError> {
    check_case(case, shape)?;
    let beta = beta.clone().for_shape(shape)?;
    let o = Orientation::of(which, shape);
    let left: Vec<Expr> = (0..=a_max as i64).map(|a| collapsed(o.left, &beta, a, shape)).collect();
    let right: Vec<Expr> = (0..=a_max as i64).map(|a| collapsed(o.right, &beta, a, shape)).collect();
    let psi_full = psi(o.psi_mode, o.rank, &beta, shape);
    let mut report = Report::new();
    for a in 0..=a_max as i64 {
        let start = Instant::now();
        let rhs = proposition_rhs(case, &o, &right, &psi_full, a);
        let outcome = check_identities(&[(left[a as usize].clone(), rhs)], shape, seed, points)?;
        report.push(
            CheckRecord::new(format!("prop.{}.{}", which.to_string().to_lowercase(), case.tag()), statement_prop(which, case))
                .with_shape(*shape)
                .with_beta(beta.clone())
                .with_degree(a)
                .with_outcome(&outcome)
                .elapsed(start.elapsed().as_millis() as u64),
        );
    }
    Ok(report)
}

fn theorem_id(which: Which, case: Case) -> String {
    let name = match which {
        Which::Gr => "building_block",
        Which::PaxPaxy => "pax_paxy",
    };
    format!("thm.{name}.{}", case.tag())
}

fn statement_thm(which: Which, case: Case) -> String {
    let (l, r) = match which {
        Which::Gr => ("I_Z", "I_Ẑ"),
        Which::PaxPaxy => ("I_PAXY", "I_PAX"),
    };
    let k = match case {
        Case::Geq2 => String::new(),
        Case::Plus1 => "e^((−1)^rank q1/z) · ".to_string(),
        Case::Equal => "(1+(−1)^rank q1)^Ψ · (1+(−1)^rank q1)^Ψ_β · ".to_string(),
    };
    format!("{l} = {k}{r} after the Novikov change of variables, coefficientwise in q1, with equal common factors")
}

/// The kernel multiplying the right-hand series.
pub fn theorem_kernel(which: Which, case: Case, beta: &BetaClass, shape: &ModelShape, order: usize) -> Kernel {
    let o = Orientation::of(which, shape);
    match case {
        Case::Geq2 => Kernel::identity(order),
        Case::Plus1 => kernel_series(KernelKind::Exp, o.rank, o.psi_mode, beta, shape, order),
        Case::Equal => kernel_series(KernelKind::Binom, o.rank, o.psi_mode, &BetaClass::zero(shape), shape, order)
            .times(&Kernel::integer_binom(o.psi_beta(beta), o.rank, order)),
    }
}

fn zero_factor(model: Model, fp: &FixedPoint, beta: &BetaClass, shape: &ModelShape) -> Result<Expr, DualityError> {
    let spec = FactorSpec {
        model,
        form: Form::Factored,
        fp: fp.clone(),
        beta: beta.clone(),
        degrees: DegreeVector::zeros(shape.rank(model.side())),
    };
    Ok(restricted_factor(&spec, shape)?)
}

/// Check the series-level duality up to `order` at each requested pair of
/// fixed points `(fp, fp^∁)`.
#[allow(clippy::too_many_arguments)]
pub fn verify_theorem(
    which: Which,
    case: Case,
    shape: &ModelShape,
    beta: &BetaClass,
    order: usize,
    seed: u64,
    points: usize,
    scope: FixedPointScope,
) -> Result<Report, DualityError> {
    check_case(case, shape)?;
    if order < 1 {
        return Err(DualityError::TruncationTooSmall { order });
    }
    let beta = beta.clone().for_shape(shape)?;
    let o = Orientation::of(which, shape);
    let primal_fps = match scope {
        FixedPointScope::Standard => vec![FixedPoint::standard(Side::Primal, shape)],
        FixedPointScope::All => fixed_points(Side::Primal, shape),
    };
    let kernel = theorem_kernel(which, case, &beta, shape, order);
    let mut report = Report::new();
    for primal in primal_fps {
        let start = Instant::now();
        let dual = complement(&primal, shape);
        let at = |model: Model| if model.side() == Side::Primal { &primal } else { &dual };
        let left = assemble(o.left, at(o.left), &beta, order, shape)?;
        let right = change_of_variables(&assemble(o.right, at(o.right), &beta, order, shape)?, o.cov);
        let transformed = convolve(kernel.coeffs(), right.coeffs());
        let mut pairs: Vec<(Expr, Expr)> =
            (0..=order).map(|a| (left.coeff(a).unwrap().clone(), transformed[a].clone())).collect();
        let c_side = o.left.c_side();
        pairs.push((zero_factor(o.left, at(o.left), &beta, shape)?, zero_factor(o.right, at(o.right), &beta, shape)?));
        pairs.push((c_factor(c_side, &primal, &beta, shape), zero_factor(o.right, at(o.right), &beta, shape)?));
        let outcome = check_identities(&pairs, shape, seed, points)?;
        let offsets_match = left.offset == right.offset;
        let mut record = CheckRecord::new(theorem_id(which, case), statement_thm(which, case))
            .with_shape(*shape)
            .with_beta(beta.clone())
            .with_fixed_point(primal.to_string())
            .with_degree(order as i64)
            .with_outcome(&outcome);
        if !offsets_match {
            record.pass = false;
            record = record.with_detail(format!("q1 offsets differ: {} vs {}", left.offset, right.offset));
        } else if let Some(w) = &record.witness {
            let what = if w.pair <= order { format!("q1 coefficient {}", w.pair) } else { "common factor".to_string() };
            record = record.with_detail(what);
        }
        report.push(record.elapsed(start.elapsed().as_millis() as u64));
    }
    Ok(report)
}

/// The change-of-variables offset identities as pure integer checks: after
/// the shift, the two sides of each pair sit at the same `q1` exponent.
pub fn offsets_consistent(shape: &ModelShape, beta: &BetaClass) -> bool {
    use super::series::{cov_shift, offset_for};
    fixed_points(Side::Primal, shape).iter().all(|primal| {
        let dual = complement(primal, shape);
        let gr = offset_for(Model::Gr, primal, beta);
        let hat = offset_for(Model::GrHat, &dual, beta) + cov_shift(CovDirection::GrDuality, beta);
        let paxy = offset_for(Model::Paxy, &dual, beta);
        let pax = offset_for(Model::Pax, primal, beta) + cov_shift(CovDirection::Paxpaxy, beta);
        gr == hat && paxy == pax
    })
}

/// Spot checks of the kernels: the `a = 2` EXP coefficient, and truncation
/// of BINOM when `Ψ` specializes to a nonnegative integer.
pub fn verify_kernels(order: usize, seed: u64, points: usize) -> Result<Report, DualityError> {
    let shape = ModelShape::new(2, 2, 1)?;
    let mut report = Report::new();
    let exp = kernel_series(KernelKind::Exp, 1, PsiMode::GrSide, &BetaClass::zero(&shape), &shape, 2);
    let expected = Expr::product([Expr::constant(Rat::new(1, 2)), Expr::pow(Expr::var(Var::Zgiv), -2)]);
    let outcome = check_identities(&[(exp.coeff(2).unwrap().clone(), expected)], &shape, seed, points)?;
    report.push(
        CheckRecord::new("kernel.exp", "the q1^2 coefficient of the rank-1 exponential kernel is z^-2/2")
            .with_shape(shape)
            .with_degree(2)
            .with_outcome(&outcome),
    );
    // Tying z_k to x_k makes Ψ the integer rank + Σβ·z − Σβ·x.
    let tie = |v: Var| match v {
        Var::Zk(k) => Some(Expr::var(Var::X(k))),
        _ => None,
    };
    for bz1 in 0..=2 {
        let beta = BetaClass::new(vec![0, 0], vec![bz1, 0], false)?;
        let k = kernel_series(KernelKind::Binom, 1, PsiMode::GrSide, &beta, &shape, order);
        let n = 1 + bz1;
        let pairs: Vec<(Expr, Expr)> = (0..=order)
            .map(|a| (k.coeff(a).unwrap().substitute(&tie), Kernel::integer_binom(n, 1, order).coeff(a).unwrap().clone()))
            .collect();
        let outcome = check_identities(&pairs, &shape, seed, points)?;
        let truncates = (n as usize + 1..=order).all(|a| Kernel::integer_binom(n, 1, order).coeff(a).unwrap().is_zero_const());
        let mut record =
            CheckRecord::new("kernel.binom_integer", "the binomial kernel with integer exponent is a polynomial in q1")
                .with_shape(shape)
                .with_beta(beta)
                .with_degree(order as i64)
                .with_outcome(&outcome);
        if !truncates {
            record.pass = false;
            record = record.with_detail("coefficients beyond the exponent are nonzero");
        }
        report.push(record);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(m: usize, n: usize, r: usize) -> ModelShape {
        ModelShape::new(m, n, r).unwrap()
    }

    #[test]
    fn case_detection() {
        assert_eq!(Case::of(&shape(3, 1, 1)), Case::Geq2);
        assert_eq!(Case::of(&shape(3, 2, 1)), Case::Plus1);
        assert_eq!(Case::of(&shape(2, 2, 1)), Case::Equal);
        let err = verify_proposition(Case::Equal, Which::Gr, &shape(3, 1, 1), &BetaClass::zero(&shape(3, 1, 1)), 1, 1, 1);
        assert!(matches!(err, Err(DualityError::CaseMismatch { .. })));
    }

    #[test]
    fn gr_geq2_small() {
        let s = shape(3, 1, 1);
        let rep = verify_proposition(Case::Geq2, Which::Gr, &s, &BetaClass::zero(&s), 2, 7, 10).unwrap();
        assert!(rep.passed, "{}", rep.to_text());
        assert_eq!(rep.records.len(), 3);
    }

    #[test]
    fn paxpaxy_equal_small() {
        let s = shape(2, 2, 1);
        let beta = BetaClass::new(vec![1, 0], vec![0, 0], true).unwrap();
        let rep = verify_proposition(Case::Equal, Which::PaxPaxy, &s, &beta, 2, 7, 10).unwrap();
        assert!(rep.passed, "{}", rep.to_text());
    }

    #[test]
    fn wrong_kernel_sign_is_caught() {
        // The PLUS1 identity with the opposite exponential sign must fail.
        let s = shape(3, 2, 1);
        let beta = BetaClass::zero(&s);
        let o = Orientation::of(Which::Gr, &s);
        let flipped = Orientation { rank: o.rank + 1, ..o };
        let left: Vec<Expr> = (0..=1).map(|a| collapsed(Model::Gr, &beta, a, &s)).collect();
        let right: Vec<Expr> = (0..=1).map(|a| collapsed(Model::GrHat, &beta, a, &s)).collect();
        let psi_full = psi(flipped.psi_mode, flipped.rank, &beta, &s);
        let rhs = proposition_rhs(Case::Plus1, &flipped, &right, &psi_full, 1);
        let out = check_identities(&[(left[1].clone(), rhs)], &s, 3, 5).unwrap();
        assert!(!out.passed());
    }

    #[test]
    fn theorem_requires_order() {
        let s = shape(3, 1, 1);
        let err = verify_theorem(Which::Gr, Case::Geq2, &s, &BetaClass::zero(&s), 0, 1, 1, FixedPointScope::Standard);
        assert!(matches!(err, Err(DualityError::TruncationTooSmall { .. })));
    }

    #[test]
    fn theorem_small_all_fixed_points() {
        let s = shape(3, 2, 1);
        let beta = BetaClass::new(vec![1, 0, -1], vec![-1, 0], false).unwrap();
        let rep = verify_theorem(Which::PaxPaxy, Case::Plus1, &s, &beta, 3, 5, 5, FixedPointScope::All).unwrap();
        assert!(rep.passed, "{}", rep.to_text());
        assert_eq!(rep.records.len(), 3);
    }

    #[test]
    fn offsets_integer_identity() {
        let s = shape(3, 2, 1);
        for a in -3..=3 {
            for b in -3..=3 {
                let beta = BetaClass::new(vec![a, b, a - b], vec![b, -a], false).unwrap();
                assert!(offsets_consistent(&s, &beta));
            }
        }
    }
}
