use exclusivity::graph::{alon_r2, complete, cycle, edgeless, intersection_family, io, random_graph};
use exclusivity::{brute_force_alpha, max_independent_set, Graph, SubsetFamilySpec};
use proptest::prelude::*;
use std::time::Duration;

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn constructors_produce_valid_graphs() {
    let mut graphs = vec![alon_r2()];
    for n in 1..8 {
        graphs.push(complete(n).unwrap());
        graphs.push(edgeless(n).unwrap());
    }
    for n in 3..12 {
        graphs.push(cycle(n).unwrap());
    }
    for q in 2..=6 {
        for s in 1..q {
            graphs.push(intersection_family(SubsetFamilySpec::new(q, s).unwrap()).unwrap());
        }
    }
    for g in &graphs {
        assert!(g.check_invariants());
        assert!((0..g.n()).all(|v| !g.has_edge(v, v)));
    }
}

#[test]
fn subset_family_is_regular_with_the_counted_degree() {
    for q in 2..=7 {
        for s in 1..q {
            let g = intersection_family(SubsetFamilySpec::new(q, s).unwrap()).unwrap();
            assert_eq!(g.n(), binomial(2 * q, q));
            let d = binomial(q, s) * binomial(q, q - s);
            assert!((0..g.n()).all(|v| g.degree(v) == d), "G({q},{s})");
            assert_eq!(g.edge_count(), g.n() * d / 2);
        }
    }
}

#[test]
fn alon_graph_is_61_regular_with_alpha_two() {
    let g = alon_r2();
    assert_eq!((g.n(), g.edge_count()), (64, 64 * 61 / 2));
    assert!((0..64).all(|v| g.degree(v) == 61));
    let r = max_independent_set(&g, Duration::from_secs(60));
    assert!(r.exact);
    assert_eq!(r.lower_bound, 2);
}

#[test]
fn dimacs_round_trip_of_the_family() {
    let g = intersection_family(SubsetFamilySpec::new(4, 2).unwrap()).unwrap();
    assert_eq!(io::read_dimacs(&io::write_dimacs(&g)).unwrap(), g);
    assert_eq!(io::read_json(&io::write_json(&g)).unwrap(), g);
}

proptest! {
    #[test]
    fn complement_is_an_involution(n in 1usize..150, p in 0.0f64..=1.0, seed: u64) {
        let g = random_graph(n, p, seed).unwrap();
        let c = g.complement();
        prop_assert!(c.check_invariants());
        prop_assert_eq!(c.edge_count() + g.edge_count(), n * (n - 1) / 2);
        prop_assert_eq!(c.complement(), g);
    }

    #[test]
    fn alpha_is_clique_number_of_complement(n in 1usize..14, p in 0.0f64..=1.0, seed: u64) {
        let g = random_graph(n, p, seed).unwrap();
        let c = g.complement();
        // largest clique of the complement by subset enumeration
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            if set.len() > best && set.iter().all(|&u| set.iter().all(|&v| u == v || c.has_edge(u, v))) {
                best = set.len();
            }
        }
        prop_assert_eq!(brute_force_alpha(&g).unwrap(), best);
        let r = max_independent_set(&g, Duration::from_secs(60));
        prop_assert_eq!(r.lower_bound, best);
        prop_assert!(g.is_independent(&r.witness_set));
    }

    #[test]
    fn json_reader_never_panics(s in "\\PC{0,120}") {
        let _ = io::read_json(&s);
        let _ = io::read_auto(&s);
    }
}

#[test]
fn graph_new_rejects_garbage() {
    assert!(Graph::new(0, &[]).is_err());
    assert!(Graph::new(3, &[(0, 3)]).is_err());
    assert!(Graph::new(3, &[(1, 1)]).is_err());
}
