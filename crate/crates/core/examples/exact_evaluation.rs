//! Build a rational expression, evaluate it exactly, and test an identity
//! at random points.

use quiverdual::algebra::{check_identity, expand_small, random_point, Expr, Var};
use quiverdual::localization::ModelShape;

fn main() {
    let shape = ModelShape::new(2, 1, 1).unwrap();
    let x1 = Expr::var(Var::X(1));
    let x2 = Expr::var(Var::X(2));
    // z_1/z + 2
    let l = Expr::shifted(Var::Zk(1), 2);

    let lhs = (x1.clone() * x1.clone() - x2.clone() * x2.clone()) / l.clone();
    let rhs = (x1.clone() + x2.clone()) * (x1 - x2) / l;

    let p = random_point(&shape, 42, 0);
    println!("point: {:?}", p.entries());
    println!("lhs = {}", lhs.eval(&p).unwrap());

    let outcome = check_identity(&lhs, &rhs, &shape, 42, 20).unwrap();
    println!("identity holds at {} points: {} (digest {})", outcome.points, outcome.passed(), outcome.digest);

    let expanded = expand_small(&lhs, 4).unwrap();
    println!("cleared form: ({}) / ({})", expanded.numerator, expanded.denominator);
}
