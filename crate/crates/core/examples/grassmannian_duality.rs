//! The Grassmannian-bundle duality in all three regimes, as collapsed
//! coefficients and as truncated series at every fixed point.

use quiverdual::duality::{verify_proposition, verify_theorem, Case, FixedPointScope, Which};
use quiverdual::localization::{BetaClass, ModelShape};

fn main() {
    for (m, n, r) in [(4, 1, 2), (3, 2, 1), (3, 3, 2)] {
        let shape = ModelShape::new(m, n, r).unwrap();
        let case = Case::of(&shape);
        let beta = BetaClass::new(vec![1; m], vec![0; n], true).unwrap();
        let prop = verify_proposition(case, Which::Gr, &shape, &beta, 3, 7, 10).unwrap();
        let thm = verify_theorem(Which::Gr, case, &shape, &beta, 3, 7, 10, FixedPointScope::All).unwrap();
        print!("{case} {shape}\n{}{}", prop.to_text(), thm.to_text());
    }
}
