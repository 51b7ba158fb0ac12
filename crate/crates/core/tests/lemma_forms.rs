use quiverdual::algebra::{check_identity, Expr, Var};
use quiverdual::hypergeometric::{
    c_factor, composition_term, factored_degrees, restricted_factor, FactorSpec, Form, Model,
};
use quiverdual::localization::{
    complement, fixed_points, permute_to_standard, BetaClass, DegreeVector, FixedPoint, ModelShape, Side,
};

fn shapes(max_m: usize) -> Vec<ModelShape> {
    let mut out = Vec::new();
    for m in 2..=max_m {
        for n in 1..=m {
            for r in 1..m {
                out.push(ModelShape::new(m, n, r).unwrap());
            }
        }
    }
    out
}

fn betas(shape: &ModelShape) -> Vec<BetaClass> {
    let m = shape.m() as i64;
    let bx: Vec<i64> = (0..m).map(|i| (i % 3) - 1).collect();
    let bz: Vec<i64> = (0..shape.n() as i64).map(|k| -(k % 2) - 1).collect();
    let rev: Vec<i64> = bx.iter().rev().map(|v| v + 1).collect();
    vec![
        BetaClass::zero(shape),
        BetaClass::new(bx.clone(), bz.clone(), true).unwrap(),
        BetaClass::new(rev, vec![2; shape.n()], false).unwrap(),
    ]
}

fn spec(model: Model, form: Form, fp: &FixedPoint, beta: &BetaClass, d: Vec<i64>) -> FactorSpec {
    FactorSpec { model, form, fp: fp.clone(), beta: beta.clone(), degrees: DegreeVector(d) }
}

fn degree_samples(len: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![0; len], vec![1; len], vec![-1; len]];
    out.push((0..len as i64).map(|j| 2 - j).collect());
    out.push((0..len as i64).map(|j| j - 1).collect());
    out
}

#[test]
fn direct_equals_factored_at_every_fixed_point() {
    for shape in shapes(3) {
        for beta in betas(&shape) {
            for model in Model::ALL {
                for fp in fixed_points(model.side(), &shape) {
                    for d in degree_samples(shape.rank(model.side())) {
                        let direct = spec(model, Form::Direct, &fp, &beta, d.clone());
                        let a = factored_degrees(model, &fp, &beta, &direct.degrees, &shape);
                        let factored = spec(model, Form::Factored, &fp, &beta, a.0.clone());
                        let lhs = restricted_factor(&direct, &shape).unwrap();
                        let rhs = restricted_factor(&factored, &shape).unwrap();
                        let out = check_identity(&lhs, &rhs, &shape, 17, 6).unwrap();
                        assert!(out.passed(), "{model} {shape} {beta} fp={fp} d={d:?} a={a:?}");
                        if a.0.iter().any(|&v| v < 0) {
                            assert!(rhs.is_zero_const());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn direct_is_covariant_under_standard_permutation() {
    for shape in shapes(4).into_iter().filter(|s| s.m() >= 3) {
        let beta = betas(&shape).remove(2);
        for model in Model::ALL {
            for fp in fixed_points(model.side(), &shape) {
                let sigma = permute_to_standard(&fp, &shape);
                let inv = sigma.inverse();
                let beta_std = beta.permuted(&sigma);
                let d: Vec<i64> = (0..shape.rank(model.side()) as i64).map(|j| 1 - j).collect();
                let at_fp = restricted_factor(&spec(model, Form::Direct, &fp, &beta, d.clone()), &shape).unwrap();
                let std = FixedPoint::standard(model.side(), &shape);
                let at_std = restricted_factor(&spec(model, Form::Direct, &std, &beta_std, d), &shape).unwrap();
                let relabelled = at_std.substitute(&|v| match v {
                    Var::X(j) => Some(Expr::var(Var::X(inv.apply(j)))),
                    _ => None,
                });
                let out = check_identity(&at_fp, &relabelled, &shape, 23, 10).unwrap();
                assert!(out.passed(), "{model} {shape} fp={fp}");
            }
        }
    }
}

#[test]
fn factored_form_splits_off_common_factor() {
    for shape in shapes(3) {
        for beta in betas(&shape) {
            for model in Model::ALL {
                let rank = shape.rank(model.side());
                for fp in fixed_points(model.side(), &shape) {
                    for a in [vec![0; rank], vec![1; rank], (0..rank as i64).collect::<Vec<_>>()] {
                        let total: i64 = a.iter().sum();
                        let factored =
                            restricted_factor(&spec(model, Form::Factored, &fp, &beta, a.clone()), &shape).unwrap();
                        let zpow = ((shape.n() as i64 - shape.m() as i64) * total) as i32;
                        let split = Expr::product([
                            c_factor(model.c_side(), &fp, &beta, &shape),
                            Expr::pow(Expr::var(Var::Zgiv), zpow),
                            composition_term(model, &fp, &beta, &a, &shape),
                        ]);
                        let out = check_identity(&factored, &split, &shape, 29, 6).unwrap();
                        assert!(out.passed(), "{model} {shape} {beta} fp={fp} a={a:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn common_factor_agrees_across_dual_fixed_points() {
    for shape in shapes(4) {
        for beta in betas(&shape) {
            for fp in fixed_points(Side::Primal, &shape) {
                let dual = complement(&fp, &shape);
                for (a, b) in [(Model::Gr, Model::GrHat), (Model::Pax, Model::Paxy)] {
                    let lhs = restricted_factor(
                        &spec(a, Form::Factored, &fp, &beta, vec![0; shape.r()]),
                        &shape,
                    )
                    .unwrap();
                    let rhs = restricted_factor(
                        &spec(b, Form::Factored, &dual, &beta, vec![0; shape.s()]),
                        &shape,
                    )
                    .unwrap();
                    let out = check_identity(&lhs, &rhs, &shape, 31, 5).unwrap();
                    assert!(out.passed(), "{a}/{b} {shape} {beta} fp={fp}");
                }
            }
        }
    }
}
