//! Restrict each hypergeometric factor to a non-standard fixed point in its
//! direct and factored forms and check that they agree.

use quiverdual::algebra::check_identity;
use quiverdual::hypergeometric::{factored_degrees, restricted_factor, FactorSpec, Form, Model};
use quiverdual::localization::{fixed_points, BetaClass, DegreeVector, ModelShape};

fn main() {
    let shape = ModelShape::new(4, 2, 2).unwrap();
    let beta = BetaClass::new(vec![1, 0, 2, -1], vec![-1, -1], true).unwrap();
    for model in Model::ALL {
        let fp = fixed_points(model.side(), &shape).pop().unwrap();
        let d = DegreeVector(vec![2, 1]);
        let a = factored_degrees(model, &fp, &beta, &d, &shape);
        let direct = FactorSpec { model, form: Form::Direct, fp: fp.clone(), beta: beta.clone(), degrees: d.clone() };
        let factored = FactorSpec { model, form: Form::Factored, fp: fp.clone(), beta: beta.clone(), degrees: a.clone() };
        let lhs = restricted_factor(&direct, &shape).unwrap();
        let rhs = restricted_factor(&factored, &shape).unwrap();
        let out = check_identity(&lhs, &rhs, &shape, 1, 20).unwrap();
        println!("{:7} fp={fp} d={:?} a={:?}: {}", model.to_string(), d.entries(), a.entries(), if out.passed() { "agree" } else { "DIFFER" });
    }
}
