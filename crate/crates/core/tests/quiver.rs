use quiverdual::algebra::Rat;
use quiverdual::quiver::{
    build_basic, build_gn_extension, build_pax, build_paxy, cycles, mutate, quiver_equal, superpotential_signature,
    Quiver, QuiverError,
};

fn data(name: &str) -> String {
    std::fs::read_to_string(format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn mutation_matches_paxy_exhaustively() {
    for m in 2..=6 {
        for n in 1..=m {
            for r in 1..m {
                let res = mutate(&build_pax(m, n, r).unwrap(), "gauge").unwrap();
                let paxy = build_paxy(m, n, m - r).unwrap();
                assert!(quiver_equal(&res.quiver, &paxy), "m={m} n={n} r={r}");
                assert_eq!(res.reversed_edges, vec!["X".to_string(), "P".to_string()]);
                assert!(res.deleted_pairs.is_empty());
            }
        }
    }
}

#[test]
fn mutated_superpotential_terms() {
    let res = mutate(&build_pax(5, 4, 3).unwrap(), "gauge").unwrap();
    let w = superpotential_signature(&res.quiver);
    let edge = |s: &str, d: &str, f: bool| (s.to_string(), d.to_string(), f);
    assert_eq!(
        w,
        vec![
            (Rat::one(), vec![edge("E", "F", true), edge("F", "E", false)]),
            (Rat::from_int(-1), vec![edge("E", "gauge", false), edge("gauge", "F", false), edge("F", "E", false)]),
        ]
    );
    assert_eq!(res.added_cycles.len(), 1);
}

#[test]
fn data_file_round_trips() {
    let text = data("pax_5_4_3.json");
    let q = Quiver::from_json(&text).unwrap();
    assert_eq!(q, build_pax(5, 4, 3).unwrap());
    assert_eq!(q.to_json().trim_end(), text.trim_end());
}

#[test]
fn second_mutation_removes_the_composite_two_cycle() {
    // The new composite E → F cancels against F → E, and every
    // superpotential term used one of the two.
    let once = mutate(&build_pax(5, 4, 3).unwrap(), "gauge").unwrap();
    let twice = mutate(&once.quiver, "gauge").unwrap();
    assert_eq!(twice.new_gauge_rank, 3);
    assert_eq!(twice.deleted_pairs.len(), 1);
    assert!(!twice.warnings.is_empty());
    assert!(twice.quiver.superpotential().is_empty());
    assert_eq!(twice.quiver.frozen_edges().len(), 1);
    let back = build_pax(5, 4, 3).unwrap();
    assert_eq!(twice.quiver.edges().len(), back.edges().len());
}

#[test]
fn basic_quiver_gains_an_edge() {
    for (m, n, r) in [(3, 1, 1), (5, 2, 3), (4, 4, 2)] {
        let res = mutate(&build_basic(m, n, r).unwrap(), "gauge").unwrap();
        assert_eq!(res.new_gauge_rank, m - r);
        let e = res.quiver.edge(&res.added_edges[0]).unwrap();
        assert_eq!((e.src.as_str(), e.dst.as_str()), ("F", "E"));
        assert_eq!(cycles(&res.quiver, 3).len(), 1);
    }
}

#[test]
fn extended_quiver_mutation() {
    let q = build_gn_extension(3, 5, 2).unwrap();
    assert_eq!(cycles(&q, 3).len(), 8);
    let res = mutate(&q, "gr").unwrap();
    assert_eq!((res.n_in, res.n_out, res.new_gauge_rank), (3, 5, 3));
    assert_eq!(res.added_edges.len(), 5);
    assert!(matches!(mutate(&q, "F4"), Err(QuiverError::NotGaugeNode(_))));
    assert!(matches!(mutate(&build_gn_extension(2, 2, 2).unwrap(), "gr"), Err(QuiverError::NonPositiveRank { .. })));
}
