use agm_core::graph::{build_csr, generate_rmat};
use agm_core::verify::{bellman_ford_reference, dijkstra_reference, verify_fixed_point};
use agm_core::{RmatParams, INFINITY};

#[test]
fn references_agree_on_rmat() {
    for seed in 0..10 {
        let g = generate_rmat(&RmatParams::rmat1(10, 16, seed)).unwrap();
        for src in [0, 1, 17] {
            let d = dijkstra_reference(&g, src).unwrap();
            assert_eq!(bellman_ford_reference(&g, src).unwrap(), d, "seed {seed} source {src}");
            assert!(verify_fixed_point(&g, &d, src).unwrap().passed());
        }
    }
}

#[test]
fn references_agree_with_zero_weights_and_multi_edges() {
    let g = build_csr(
        &[(0, 1, 0), (1, 0, 0), (1, 2, 3), (1, 2, 1), (2, 3, 0), (3, 1, 7), (4, 4, 1)],
        5,
    )
    .unwrap();
    let d = dijkstra_reference(&g, 0).unwrap();
    assert_eq!(d, vec![0, 0, 1, 1, INFINITY]);
    assert_eq!(bellman_ford_reference(&g, 0).unwrap(), d);
    assert!(verify_fixed_point(&g, &d, 0).unwrap().passed());
}

/// Hand-checked 6-vertex instance.
#[test]
fn frozen_small_instance() {
    // 0 -1-> 1 -1-> 2 -1-> 3, 0 -5-> 3, 0 -2-> 4, 4 -2-> 3, 5 isolated
    let g = build_csr(&[(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 5), (0, 4, 2), (4, 3, 2)], 6).unwrap();
    assert_eq!(dijkstra_reference(&g, 0).unwrap(), vec![0, 1, 2, 3, 2, INFINITY]);
    assert_eq!(dijkstra_reference(&g, 4).unwrap(), vec![INFINITY, INFINITY, INFINITY, 2, 0, INFINITY]);
}

#[test]
fn fixed_point_flags_deflated_entry() {
    let g = build_csr(&[(0, 1, 4)], 2).unwrap();
    let r = verify_fixed_point(&g, &[0, 1], 0).unwrap();
    assert_eq!(r.violations.len(), 1);
    assert_eq!(r.violations[0].expected, 4);
}
