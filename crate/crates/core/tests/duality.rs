use quiverdual::algebra::check_identity;
use quiverdual::duality::{
    assemble, change_of_variables, convolve, theorem_kernel, verify_proposition, verify_theorem, Case,
    CovDirection, FixedPointScope, Kernel, Which,
};
use quiverdual::hypergeometric::Model;
use quiverdual::localization::{BetaClass, FixedPoint, ModelShape, Side};

fn sample_betas(shape: &ModelShape) -> Vec<BetaClass> {
    let m = shape.m() as i64;
    let n = shape.n() as i64;
    vec![
        BetaClass::zero(shape),
        BetaClass::new((0..m).map(|i| i % 2).collect(), vec![0; n as usize], true).unwrap(),
        BetaClass::new((0..m).map(|i| 1 - i).collect(), (0..n).map(|k| k - 1).collect(), false).unwrap(),
        BetaClass::new(vec![2; m as usize], (0..n).map(|k| -k).collect(), true).unwrap(),
    ]
}

#[test]
fn propositions_hold_in_all_cases() {
    for (m, n) in [(3, 1), (4, 2), (3, 2), (2, 2), (3, 3)] {
        for r in 1..m {
            let shape = ModelShape::new(m, n, r).unwrap();
            for beta in sample_betas(&shape) {
                for which in [Which::Gr, Which::PaxPaxy] {
                    let rep = verify_proposition(Case::of(&shape), which, &shape, &beta, 2, 7, 6).unwrap();
                    assert!(rep.passed, "{}", rep.to_text());
                }
            }
        }
    }
}

#[test]
fn theorems_hold_at_every_fixed_point() {
    for (m, n) in [(3, 1), (3, 2), (2, 2), (3, 3)] {
        for r in 1..m {
            let shape = ModelShape::new(m, n, r).unwrap();
            for beta in sample_betas(&shape) {
                for which in [Which::Gr, Which::PaxPaxy] {
                    let rep = verify_theorem(which, Case::of(&shape), &shape, &beta, 3, 11, 4, FixedPointScope::All)
                        .unwrap();
                    assert!(rep.passed, "{}", rep.to_text());
                }
            }
        }
    }
}

#[test]
fn proposition_and_theorem_agree_on_zero_beta_geq2() {
    // With β = 0 and m >= n+2 the two series coincide termwise.
    let shape = ModelShape::new(4, 1, 2).unwrap();
    let beta = BetaClass::zero(&shape);
    let gr = assemble(Model::Gr, &FixedPoint::standard(Side::Primal, &shape), &beta, 3, &shape).unwrap();
    let hat = assemble(Model::GrHat, &FixedPoint::standard(Side::Dual, &shape), &beta, 3, &shape).unwrap();
    let hat = change_of_variables(&hat, CovDirection::GrDuality);
    assert_eq!(gr.offset, hat.offset);
    for a in 0..=3 {
        let out = check_identity(gr.coeff(a).unwrap(), hat.coeff(a).unwrap(), &shape, 2, 8).unwrap();
        assert!(out.passed());
    }
}

#[test]
fn dropping_the_integer_binomial_breaks_the_equal_case() {
    // Pins the EQUAL-case bookkeeping: the β-dependent integer factor is
    // needed exactly once.
    let shape = ModelShape::new(2, 2, 1).unwrap();
    let beta = BetaClass::new(vec![1, 0], vec![-1, 0], true).unwrap();
    let primal = FixedPoint::standard(Side::Primal, &shape);
    let dual = FixedPoint::standard(Side::Dual, &shape);
    let left = assemble(Model::Gr, &primal, &beta, 2, &shape).unwrap();
    let right = change_of_variables(&assemble(Model::GrHat, &dual, &beta, 2, &shape).unwrap(), CovDirection::GrDuality);
    let good = theorem_kernel(Which::Gr, Case::Equal, &beta, &shape, 2);
    let psi_beta = beta.sum_z() - beta.sum_x();
    let doubled = good.times(&Kernel::integer_binom(psi_beta, shape.s(), 2));
    let check = |k: &Kernel| {
        let rhs = convolve(k.coeffs(), right.coeffs());
        (0..=2).all(|a| {
            check_identity(left.coeff(a).unwrap(), &rhs[a], &shape, 5, 4).unwrap().passed()
        })
    };
    assert!(check(&good));
    assert!(!check(&doubled));
    let without = theorem_kernel(Which::Gr, Case::Equal, &BetaClass::zero(&shape), &shape, 2);
    assert!(!check(&without));
}
