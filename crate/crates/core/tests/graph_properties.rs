use proptest::prelude::*;
use pstwalk_core::graph::{
    circulant, complement, complete, cycle, hypercube, join, unweighted_path,
};
use pstwalk_core::{Graph, Matrix};

fn unweighted(n: usize, bits: &[bool]) -> Graph {
    let mut a = Matrix::zeros(n, n);
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            if bits[k] {
                a[(u, v)] = 1.0;
                a[(v, u)] = 1.0;
            }
            k += 1;
        }
    }
    Graph::from_matrix(a).unwrap()
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |b| unweighted(n, &b))
    })
}

proptest! {
    #[test]
    fn complement_is_an_involution(g in arb_graph(12)) {
        let back = complement(&complement(&g).unwrap()).unwrap();
        prop_assert_eq!(back.adjacency(), g.adjacency());
    }

    #[test]
    fn complement_edges_partition_the_pairs(g in arb_graph(12)) {
        let c = complement(&g).unwrap();
        for u in 0..g.n() {
            for v in 0..g.n() {
                let both = g.weight(u, v) + c.weight(u, v);
                prop_assert_eq!(both, if u == v { 0.0 } else { 1.0 });
            }
        }
    }

    #[test]
    fn distances_form_a_metric(g in arb_graph(12)) {
        let d = g.distance_matrix();
        for u in 0..g.n() {
            prop_assert_eq!(d.get(u, u), Some(0));
            for v in 0..g.n() {
                prop_assert_eq!(d.get(u, v), d.get(v, u));
                if g.weight(u, v) != 0.0 {
                    prop_assert_eq!(d.get(u, v), Some(1));
                }
                for w in 0..g.n() {
                    if let (Some(a), Some(b), Some(c)) = (d.get(u, v), d.get(v, w), d.get(u, w)) {
                        prop_assert!(c <= a + b);
                    }
                }
            }
        }
        prop_assert_eq!(g.is_connected(), d.diameter().is_some());
    }

    #[test]
    fn circulants_commute(n in 3usize..20, s1 in prop::collection::vec(1usize..10, 1..4), s2 in prop::collection::vec(1usize..10, 1..4)) {
        let s1: Vec<usize> = s1.into_iter().filter(|&s| s <= n / 2).collect();
        let s2: Vec<usize> = s2.into_iter().filter(|&s| s <= n / 2).collect();
        prop_assume!(!s1.is_empty() && !s2.is_empty());
        let (a, b) = (circulant(n, &s1).unwrap(), circulant(n, &s2).unwrap());
        prop_assert!(a.adjacency().commutator_residual(b.adjacency()) < 1e-12);
        prop_assert!(a.is_regular().is_some());
    }

    #[test]
    fn join_degree_law(g in arb_graph(8), h in arb_graph(8)) {
        let j = join(&g, &h);
        let (dg, dh, dj) = (g.degrees(), h.degrees(), j.degrees());
        for (u, d) in dg.iter().enumerate() {
            prop_assert_eq!(dj[u], d + h.n() as f64);
        }
        for (v, d) in dh.iter().enumerate() {
            prop_assert_eq!(dj[g.n() + v], d + g.n() as f64);
        }
    }

    #[test]
    fn permutation_round_trip(g in arb_graph(10), seed in any::<u64>()) {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let mut inverse = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inverse[p] = i;
        }
        let back = g.permuted(&perm).unwrap().permuted(&inverse).unwrap();
        prop_assert_eq!(back.adjacency(), g.adjacency());
    }
}

#[test]
fn hypercube_distance_is_hamming() {
    let q = hypercube(5).unwrap();
    let d = q.distance_matrix();
    for u in 0..32usize {
        for v in 0..32usize {
            assert_eq!(d.get(u, v), Some((u ^ v).count_ones() as usize));
        }
    }
}

#[test]
fn named_families() {
    assert_eq!(complete(5).unwrap().is_regular(), Some(4.0));
    assert_eq!(cycle(7).unwrap().distance_matrix().diameter(), Some(3));
    assert_eq!(
        unweighted_path(6).unwrap().distance_matrix().diameter(),
        Some(5)
    );
    assert!(circulant(15, &[1, 2, 4]).unwrap().is_regular() == Some(6.0));
    assert!(circulant(15, &[1, 2, 4, 7]).unwrap().is_regular() == Some(8.0));
    assert!(cycle(2).is_err());
}
