//! Mutate the PAX quiver at its gauge node and print both quivers as DOT.

use quiverdual::quiver::{build_pax, build_paxy, cycles, mutate, quiver_equal};

fn main() {
    let pax = build_pax(5, 4, 3).unwrap();
    print!("{}", pax.to_dot());
    let res = mutate(&pax, "gauge").unwrap();
    println!(
        "N_in = {}, N_out = {}, new rank {}; added {:?}, reversed {:?}",
        res.n_in, res.n_out, res.new_gauge_rank, res.added_edges, res.reversed_edges
    );
    print!("{}", res.quiver.to_dot());
    println!("cycles: {:?}", cycles(&res.quiver, 3));
    println!("equals PAXY(5, 4, 2): {}", quiver_equal(&res.quiver, &build_paxy(5, 4, 2).unwrap()));
}
