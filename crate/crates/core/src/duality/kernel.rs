use serde::{Deserialize, Serialize};

use crate::algebra::{Expr, LinearForm, Rat, ShiftedRoot, Var};
use crate::localization::{BetaClass, ModelShape};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum KernelKind {
    /// `e^{±q1/z}`.
    Exp,
    /// `(1 + (-1)^rank q1)^Ψ`.
    Binom,
    None,
}

/// Orientation of `Ψ`: `rank + ΣLz - ΣLx` next to the Grassmannian duality,
/// `rank + ΣLx - ΣLz` next to PAX/PAXY.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PsiMode {
    GrSide,
    PaxSide,
}

/// A prefactor series in `q1`, truncated at `order`.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub kind: KernelKind,
    pub sign_rank: usize,
    pub psi: Option<Expr>,
    coeffs: Vec<Expr>,
}

fn sign(rank: usize, a: usize) -> i64 {
    if (rank * a).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `∏_{h<a} (ψ - h)/(a - h)`.
fn gen_binom(psi: &Expr, a: usize) -> Expr {
    let num = (0..a as i64).map(|h| psi.clone() - Expr::constant(h));
    Expr::product([Expr::product(num), Expr::constant(Rat::one() / Rat::factorial(a as i64))])
}

/// Binomial coefficient `C(n, a)` for any integer `n`.
pub fn int_binom(n: i64, a: usize) -> Rat {
    let mut acc = Rat::one();
    for h in 0..a as i64 {
        acc = acc * Rat::from_int(n - h);
    }
    acc / Rat::factorial(a as i64)
}

/// Localized `Ψ` for the given pairings (use [`BetaClass::zero`] for the
/// equivariant part alone).
pub fn psi(mode: PsiMode, rank: usize, beta: &BetaClass, shape: &ModelShape) -> Expr {
    let mut f = LinearForm::constant(rank as i64);
    let (cz, cx) = match mode {
        PsiMode::GrSide => (1, -1),
        PsiMode::PaxSide => (-1, 1),
    };
    for k in 1..=shape.n() {
        f = f.plus_atom(cz, ShiftedRoot { var: Var::Zk(k), shift: beta.z(k) });
    }
    for i in 1..=shape.m() {
        f = f.plus_atom(cx, ShiftedRoot { var: Var::X(i), shift: beta.x(i) });
    }
    Expr::linear(f)
}

pub fn kernel_series(
    kind: KernelKind,
    rank: usize,
    psi_mode: PsiMode,
    beta: &BetaClass,
    shape: &ModelShape,
    order: usize,
) -> Kernel {
    match kind {
        KernelKind::Exp => Kernel::exp(rank, false, order),
        KernelKind::None => Kernel::identity(order),
        KernelKind::Binom => {
            let p = psi(psi_mode, rank, beta, shape);
            let coeffs = (0..=order)
                .map(|a| Expr::product([Expr::constant(sign(rank, a)), gen_binom(&p, a)]))
                .collect();
            Kernel { kind, sign_rank: rank, psi: Some(p), coeffs }
        }
    }
}

impl Kernel {
    pub fn identity(order: usize) -> Self {
        let mut coeffs = vec![Expr::zero(); order + 1];
        coeffs[0] = Expr::one();
        Kernel { kind: KernelKind::None, sign_rank: 0, psi: None, coeffs }
    }

    /// `e^{±(-1)^rank q1/z}`; `negated` selects the minus sign.
    pub fn exp(rank: usize, negated: bool, order: usize) -> Self {
        let coeffs = (0..=order)
            .map(|a| {
                let s = sign(rank, a) * if negated { sign(1, a) } else { 1 };
                Expr::product([
                    Expr::constant(Rat::from_int(s) / Rat::factorial(a as i64)),
                    Expr::pow(Expr::var(Var::Zgiv), -(a as i32)),
                ])
            })
            .collect();
        Kernel { kind: KernelKind::Exp, sign_rank: rank, psi: None, coeffs }
    }

    /// `(1 + (-1)^rank q1)^n` for an integer `n`.
    pub fn integer_binom(n: i64, rank: usize, order: usize) -> Self {
        let coeffs = (0..=order)
            .map(|a| Expr::constant(Rat::from_int(sign(rank, a)) * int_binom(n, a)))
            .collect();
        Kernel { kind: KernelKind::Binom, sign_rank: rank, psi: Some(Expr::constant(n)), coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, a: usize) -> Option<&Expr> {
        self.coeffs.get(a)
    }

    pub fn coeffs(&self) -> &[Expr] {
        &self.coeffs
    }

    /// Product with another kernel, truncated to the smaller order.
    pub fn times(&self, other: &Kernel) -> Kernel {
        let coeffs = convolve(&self.coeffs, &other.coeffs);
        Kernel { kind: self.kind, sign_rank: self.sign_rank, psi: self.psi.clone(), coeffs }
    }
}

/// Cauchy product of two truncated coefficient lists, to the smaller order.
pub fn convolve(a: &[Expr], b: &[Expr]) -> Vec<Expr> {
    let order = a.len().min(b.len());
    (0..order)
        .map(|n| Expr::sum((0..=n).map(|p| Expr::product([a[n - p].clone(), b[p].clone()]))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{check_identity, random_point};

    fn shape() -> ModelShape {
        ModelShape::new(2, 2, 1).unwrap()
    }

    #[test]
    fn binom_low_orders() {
        let s = shape();
        let beta = BetaClass::new(vec![1, 0], vec![0, 0], true).unwrap();
        let k = kernel_series(KernelKind::Binom, 1, PsiMode::GrSide, &beta, &s, 1);
        assert!(k.coeff(0).unwrap().is_one_const());
        let p = random_point(&s, 1, 0);
        let psi_val = k.psi.as_ref().unwrap().eval(&p).unwrap();
        assert_eq!(k.coeff(1).unwrap().eval(&p).unwrap(), -psi_val);
        let k0 = kernel_series(KernelKind::Binom, 2, PsiMode::PaxSide, &beta, &s, 0);
        assert!(k0.coeff(0).unwrap().is_one_const());
    }

    #[test]
    fn exp_second_coefficient() {
        let k = kernel_series(KernelKind::Exp, 1, PsiMode::GrSide, &BetaClass::zero(&shape()), &shape(), 2);
        let expected = Expr::product([Expr::constant(Rat::new(1, 2)), Expr::pow(Expr::var(Var::Zgiv), -2)]);
        let out = check_identity(k.coeff(2).unwrap(), &expected, &shape(), 3, 10).unwrap();
        assert!(out.passed());
        let z = Expr::var(Var::Zgiv);
        let neg = check_identity(k.coeff(1).unwrap(), &(-(Expr::one() / z)), &shape(), 3, 5).unwrap();
        assert!(neg.passed());
    }

    #[test]
    fn exp_kernels_are_inverse() {
        for rank in 1..=3 {
            let k = Kernel::exp(rank, false, 5).times(&Kernel::exp(rank, true, 5));
            let id = Kernel::identity(5);
            for a in 0..=5 {
                let out = check_identity(k.coeff(a).unwrap(), id.coeff(a).unwrap(), &shape(), 4, 5).unwrap();
                assert!(out.passed(), "rank {rank} a {a}");
            }
        }
    }

    #[test]
    fn integer_binom_truncates() {
        for n in 0..5i64 {
            let k = Kernel::integer_binom(n, 1, 8);
            for a in 0..=8usize {
                let c = k.coeff(a).unwrap().as_const().unwrap().clone();
                assert_eq!(c.is_zero(), a as i64 > n, "n={n} a={a}");
            }
        }
        assert_eq!(int_binom(-1, 3), Rat::from_int(-1));
        assert_eq!(int_binom(5, 2), Rat::from_int(10));
    }

    #[test]
    fn binom_with_integer_psi_truncates() {
        // rank + Σ Lz - Σ Lx with x = z pointwise is the integer rank + Σβz - Σβx.
        let s = ModelShape::new(2, 2, 1).unwrap();
        let beta = BetaClass::new(vec![0, 0], vec![1, 0], false).unwrap();
        let k = kernel_series(KernelKind::Binom, 1, PsiMode::GrSide, &beta, &s, 4);
        let tie = |v: Var| match v {
            Var::Zk(k) => Some(Expr::var(Var::X(k))),
            _ => None,
        };
        for a in 0..=4 {
            let c = k.coeff(a).unwrap().substitute(&tie);
            let expected = Kernel::integer_binom(2, 1, 4).coeff(a).unwrap().clone();
            let out = check_identity(&c, &expected, &s, 8, 5).unwrap();
            assert!(out.passed(), "a={a}");
            if a > 2 {
                assert!(expected.is_zero_const());
            }
        }
    }

    #[test]
    fn beta_part_of_binom_splits_off() {
        let s = ModelShape::new(3, 3, 2).unwrap();
        let beta = BetaClass::new(vec![1, -2, 0], vec![2, 0, 1], false).unwrap();
        for (mode, rank, psi_beta) in [
            (PsiMode::GrSide, 1, beta.sum_z() - beta.sum_x()),
            (PsiMode::PaxSide, 2, beta.sum_x() - beta.sum_z()),
        ] {
            let full = kernel_series(KernelKind::Binom, rank, mode, &beta, &s, 4);
            let split = kernel_series(KernelKind::Binom, rank, mode, &BetaClass::zero(&s), &s, 4)
                .times(&Kernel::integer_binom(psi_beta, rank, 4));
            for a in 0..=4 {
                let out = check_identity(full.coeff(a).unwrap(), split.coeff(a).unwrap(), &s, 6, 8).unwrap();
                assert!(out.passed(), "{mode:?} a={a}");
            }
        }
    }
}
