//! PAX against PAXY: the q1-series, the change of variables, and the
//! prefactor kernel for a square map.

use quiverdual::algebra::check_identity;
use quiverdual::duality::{assemble, change_of_variables, convolve, theorem_kernel, Case, CovDirection, Which};
use quiverdual::hypergeometric::Model;
use quiverdual::localization::{complement, BetaClass, FixedPoint, ModelShape, Side};

fn main() {
    let shape = ModelShape::new(3, 3, 1).unwrap();
    let beta = BetaClass::new(vec![1, 2, 0], vec![0, -1, 0], true).unwrap();
    let order = 3;
    let primal = FixedPoint::new(Side::Primal, vec![2], &shape).unwrap();
    let dual = complement(&primal, &shape);

    let paxy = assemble(Model::Paxy, &dual, &beta, order, &shape).unwrap();
    let pax = change_of_variables(&assemble(Model::Pax, &primal, &beta, order, &shape).unwrap(), CovDirection::Paxpaxy);
    println!("q1 offsets: PAXY {}  PAX after change of variables {}", paxy.offset, pax.offset);

    let kernel = theorem_kernel(Which::PaxPaxy, Case::Equal, &beta, &shape, order);
    let rhs = convolve(kernel.coeffs(), pax.coeffs());
    for (a, r) in rhs.iter().enumerate() {
        let out = check_identity(paxy.coeff(a).unwrap(), r, &shape, 3, 10).unwrap();
        println!("q1^{a}: {}", if out.passed() { "equal" } else { "DIFFERENT" });
    }
}
