//! Torus fixed points of both sides for one shape, with their frames and
//! the permutation taking each to the standard point.

use quiverdual::localization::{complement, fixed_points, permute_to_standard, ModelShape, Side};

fn main() {
    let shape = ModelShape::new(4, 2, 2).unwrap();
    println!("shape {shape}, dual rank s = {}", shape.s());
    for fp in fixed_points(Side::Primal, &shape) {
        let dual = complement(&fp, &shape);
        let sigma = permute_to_standard(&fp, &shape);
        println!(
            "primal {fp}  dual {dual}  frame {:?}  to standard {:?}",
            fp.frame(&shape),
            sigma.images()
        );
    }
}
