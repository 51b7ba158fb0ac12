//! Calabi–Yau determinantal threefolds in projective space, and the
//! scenario preset for the rank-2 locus of a 4 × 4 map on P^7.

use quiverdual::determinantal::{codim, cy_classify, dim, scenario_preset, BaseKind, DetConfig, Scenario};

fn main() {
    for (s, m, big_n) in cy_classify(8, 30) {
        let cfg = DetConfig::new(m, m, s, BaseKind::Proj(big_n)).unwrap();
        println!("s={s} m=n={m} on P^{big_n}: codim {}, dim {}", codim(&cfg), dim(&cfg).unwrap());
    }
    let (shape, betas) = scenario_preset(&Scenario::Gn3fold).unwrap();
    println!("GN_3FOLD shape {shape}");
    for b in betas {
        println!("  {b}");
    }
}
