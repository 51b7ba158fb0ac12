use proptest::prelude::*;

use quiverdual::algebra::{check_identity, expand_small, random_point, Expr, LinearForm, Rat, ShiftedRoot, Var};
use quiverdual::determinantal::{canonical_degree, codim, cy_classify, dim, BaseKind, DetConfig};
use quiverdual::duality::int_binom;
use quiverdual::hypergeometric::{compositions, poch_ratio, rising, Affine};
use quiverdual::localization::{complement, fixed_points, permute_to_standard, BetaClass, FixedPoint, ModelShape, Side};
use quiverdual::quiver::{build_gn_extension, build_pax, mutate, Quiver};

fn shape_strategy() -> impl Strategy<Value = ModelShape> {
    (2usize..=5).prop_flat_map(|m| (Just(m), 1..=m, 1..m)).prop_map(|(m, n, r)| ModelShape::new(m, n, r).unwrap())
}

/// A linear form in x_1, x_2, z_1 and a shifted root, over the shape (2, 1, 1).
fn linear_strategy() -> impl Strategy<Value = Expr> {
    (-3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3, -2i64..=2).prop_map(|(a, b, c, k, shift)| {
        Expr::linear(
            LinearForm::constant(k)
                .plus_atom(a, Var::X(1))
                .plus_atom(b, Var::X(2))
                .plus_atom(c, ShiftedRoot { var: Var::Zk(1), shift }),
        )
    })
}

fn small_shape() -> ModelShape {
    ModelShape::new(2, 1, 1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_is_a_ring_map(a in linear_strategy(), b in linear_strategy(), seed in 0u64..1000) {
        let p = random_point(&small_shape(), seed, 0);
        let (va, vb) = (a.eval(&p).unwrap(), b.eval(&p).unwrap());
        prop_assert_eq!((a.clone() + b.clone()).eval(&p).unwrap(), va.clone() + vb.clone());
        prop_assert_eq!((a.clone() - b.clone()).eval(&p).unwrap(), va.clone() - vb.clone());
        prop_assert_eq!((a.clone() * b.clone()).eval(&p).unwrap(), va.clone() * vb.clone());
        if !vb.is_zero() {
            prop_assert_eq!((a / b).eval(&p).unwrap(), va / vb);
        }
    }

    #[test]
    fn expansion_agrees_with_sampling(a in linear_strategy(), b in linear_strategy(), c in linear_strategy()) {
        let lhs = (a.clone() + b.clone()) * (a.clone() - b.clone()) / c.clone();
        let rhs = (a.clone() * a.clone() - b.clone() * b.clone()) / c.clone();
        let wrong = (a.clone() * a.clone() + b.clone() * b.clone()) / c.clone();
        let shape = small_shape();
        if let (Ok(l), Ok(r), Ok(w)) = (expand_small(&lhs, 8), expand_small(&rhs, 8), expand_small(&wrong, 8)) {
            prop_assert!(l.same_function(&r));
            let sampled = check_identity(&lhs, &wrong, &shape, 1, 6).map(|o| o.passed());
            if let Ok(passed) = sampled {
                prop_assert_eq!(passed, l.same_function(&w));
            }
        }
    }

    #[test]
    fn rising_steps_by_one_factor(k in -3i64..=3, c in -4i64..=4, step in 1i64..=2) {
        let f = Affine::new(LinearForm::var(Var::X(1)).plus_const(k), LinearForm::var(Var::Zgiv).scale(&Rat::from_int(step)));
        let next = rising(&f, c + 1);
        let expected = rising(&f, c) * Expr::linear(f.at(c + 1));
        let shape = small_shape();
        prop_assert!(check_identity(&next, &expected, &shape, 2, 3).unwrap().passed());
        let inverse = rising(&f, c) * poch_ratio(&f, c);
        prop_assert!(check_identity(&inverse, &Expr::one(), &shape, 2, 3).unwrap().passed());
    }

    #[test]
    fn compositions_are_complete(a in 0i64..=6, parts in 1usize..=4, lb in -1i64..=1) {
        let all = compositions(a, parts, lb);
        for d in &all {
            prop_assert_eq!(d.total(), a);
            prop_assert!(d.entries().iter().all(|&v| v >= lb));
        }
        // Stars and bars after shifting every part by lb.
        let free = a - parts as i64 * lb;
        let expected = if free < 0 { 0 } else { int_binom(free + parts as i64 - 1, parts - 1).to_i64().unwrap() };
        prop_assert_eq!(all.len() as i64, expected);
    }

    #[test]
    fn pascal_rule_for_any_integer(n in -20i64..=20, a in 0usize..=6) {
        prop_assert_eq!(int_binom(n, a) + int_binom(n, a + 1), int_binom(n + 1, a + 1));
    }

    #[test]
    fn complement_is_an_involution(shape in shape_strategy()) {
        for fp in fixed_points(Side::Primal, &shape) {
            let dual = complement(&fp, &shape);
            prop_assert_eq!(dual.side(), Side::Dual);
            prop_assert_eq!(dual.indices().len() + fp.indices().len(), shape.m());
            prop_assert_eq!(complement(&dual, &shape), fp);
        }
    }

    #[test]
    fn standard_permutation_lands_on_the_standard_point(shape in shape_strategy()) {
        for side in [Side::Primal, Side::Dual] {
            let std = FixedPoint::standard(side, &shape);
            for fp in fixed_points(side, &shape) {
                let sigma = permute_to_standard(&fp, &shape);
                let mut moved: Vec<usize> = fp.indices().iter().map(|&i| sigma.apply(i)).collect();
                moved.sort();
                prop_assert_eq!(moved.as_slice(), std.indices());
                prop_assert!(sigma.inverse().inverse() == sigma);
            }
        }
    }

    #[test]
    fn permuting_beta_is_reversible(shape in shape_strategy(), seed in 0i64..100) {
        let bx: Vec<i64> = (0..shape.m() as i64).map(|i| (seed * 7 + i * 3) % 5 - 2).collect();
        let beta = BetaClass::new(bx, vec![0; shape.n()], false).unwrap();
        for fp in fixed_points(Side::Primal, &shape) {
            let sigma = permute_to_standard(&fp, &shape);
            prop_assert_eq!(beta.permuted(&sigma).permuted(&sigma.inverse()), beta.clone());
            prop_assert_eq!(beta.permuted(&sigma).sum_x(), beta.sum_x());
        }
    }

    #[test]
    fn double_mutation_restores_rank(m in 2usize..=8, n in 1usize..=8, r in 1usize..=7) {
        prop_assume!(n <= m && r < m);
        let once = mutate(&build_pax(m, n, r).unwrap(), "gauge").unwrap();
        prop_assert_eq!(once.new_gauge_rank, m - r);
        let twice = mutate(&once.quiver, "gauge").unwrap();
        prop_assert_eq!(twice.new_gauge_rank, r);
    }

    #[test]
    fn extended_quiver_rank_rule(m in 1usize..=6, n in 1usize..=6, r in 1usize..=5) {
        let q = build_gn_extension(m, n, r).unwrap();
        prop_assert_eq!(Quiver::from_json(&q.to_json()).unwrap(), q.clone());
        let res = mutate(&q, "gr");
        if m.max(n) > r {
            prop_assert_eq!(res.unwrap().new_gauge_rank, m.max(n) - r);
        } else {
            prop_assert!(res.is_err());
        }
    }

    #[test]
    fn calabi_yau_triples_satisfy_both_conditions(max_m in 5usize..=9, max_n in 5usize..=40) {
        for (s, m, big_n) in cy_classify(max_m, max_n) {
            prop_assert_eq!(canonical_degree(s, m, big_n), 0);
            let cfg = DetConfig::new(m, m, s, BaseKind::Proj(big_n)).unwrap();
            prop_assert_eq!(dim(&cfg), Some(3));
            prop_assert_eq!(dim(&cfg).unwrap() + codim(&cfg) as i64, big_n as i64);
        }
    }
}
