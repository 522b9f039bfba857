use proptest::prelude::*;
use pstwalk_core::graph::{complete, cycle, hypercube, unweighted_path};
use pstwalk_core::products::{cartesian, weak};
use pstwalk_core::spectral::{eigendecompose, evolve, fidelity, spectrum, TransferKernel};
use pstwalk_core::{Amplitude, Graph, Matrix, VertexId};

fn weighted(n: usize, w: &[f64]) -> Graph {
    let mut a = Matrix::zeros(n, n);
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            a[(u, v)] = w[k];
            a[(v, u)] = w[k];
            k += 1;
        }
    }
    Graph::from_matrix(a).unwrap()
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let weight = prop_oneof![3 => Just(0.0), 2 => Just(1.0), 1 => 0.1f64..3.0];
        prop::collection::vec(weight, n * (n - 1) / 2).prop_map(move |w| weighted(n, &w))
    })
}

fn sorted(mut x: Vec<f64>) -> Vec<f64> {
    x.sort_by(f64::total_cmp);
    x
}

fn close(a: Vec<f64>, b: Vec<f64>, tol: f64) -> bool {
    a.len() == b.len()
        && sorted(a)
            .iter()
            .zip(sorted(b).iter())
            .all(|(x, y)| (x - y).abs() <= tol)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evolution_is_unitary(g in arb_graph(12), t in 0.0f64..30.0) {
        let d = eigendecompose(&g).unwrap();
        let cols: Vec<Vec<Amplitude>> = (0..g.n()).map(|s| evolve(&d, t, VertexId(s)).unwrap()).collect();
        for i in 0..g.n() {
            for j in 0..g.n() {
                let dot: Amplitude = cols[i].iter().zip(&cols[j]).map(|(x, y)| x.conj() * y).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((dot - want).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn group_property(g in arb_graph(10), s in 0.0f64..5.0, t in 0.0f64..5.0) {
        let d = eigendecompose(&g).unwrap();
        let state = evolve(&d, s, VertexId(0)).unwrap();
        let twice = d.propagate(t, &state);
        let once = evolve(&d, s + t, VertexId(0)).unwrap();
        for (x, y) in twice.iter().zip(&once) {
            prop_assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn scaling_law(g in arb_graph(10), c in 0.2f64..4.0, t in 0.0f64..5.0) {
        let (b, last) = (VertexId(0), VertexId(g.n() - 1));
        let scaled = eigendecompose(&g.scaled(c).unwrap()).unwrap();
        let plain = eigendecompose(&g).unwrap();
        let x = fidelity(&scaled, b, last, t).unwrap();
        let y = fidelity(&plain, b, last, c * t).unwrap();
        prop_assert!((x - y).norm() < 1e-9);
    }

    #[test]
    fn fidelity_is_symmetric_in_endpoints(g in arb_graph(10), t in 0.0f64..10.0) {
        let d = eigendecompose(&g).unwrap();
        let (a, b) = (VertexId(0), VertexId(g.n() - 1));
        prop_assert!((fidelity(&d, a, b, t).unwrap() - fidelity(&d, b, a, t).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn decomposition_reconstructs(g in arb_graph(16)) {
        let d = eigendecompose(&g).unwrap();
        let scale = 1.0 + g.adjacency().max_abs();
        prop_assert!(d.reconstruction_residual(g.adjacency()) < 1e-11 * scale * g.n() as f64);
        prop_assert!(d.orthonormality_residual() < 1e-12 * g.n() as f64);
        let trace: f64 = d.eigenvalues().iter().sum();
        prop_assert!(trace.abs() < 1e-10 * scale * g.n() as f64);
        let sq: f64 = d.eigenvalues().iter().map(|x| x * x).sum();
        let frob: f64 = g.adjacency().as_slice().iter().map(|x| x * x).sum();
        prop_assert!((sq - frob).abs() < 1e-9 * (1.0 + frob));
    }

    #[test]
    fn product_spectra(g in arb_graph(6), h in arb_graph(6)) {
        let (sg, sh) = (spectrum(&g).unwrap(), spectrum(&h).unwrap());
        let sums = sg.iter().flat_map(|x| sh.iter().map(move |y| x + y)).collect();
        let prods = sg.iter().flat_map(|x| sh.iter().map(move |y| x * y)).collect();
        prop_assert!(close(spectrum(&cartesian(&g, &h)).unwrap(), sums, 1e-9));
        prop_assert!(close(spectrum(&weak(&g, &h)).unwrap(), prods, 1e-9));
    }

    #[test]
    fn kernel_matches_direct_fidelity(g in arb_graph(10), t in 0.0f64..10.0) {
        let d = eigendecompose(&g).unwrap();
        let (a, b) = (VertexId(0), VertexId(1));
        let k = TransferKernel::new(&d, a, b).unwrap();
        prop_assert!((k.amplitude(t) - fidelity(&d, a, b, t).unwrap()).norm() < 1e-12);
    }
}

#[test]
fn known_spectra() {
    let close_to = |g: &Graph, want: &[f64]| close(spectrum(g).unwrap(), want.to_vec(), 1e-10);
    assert!(close_to(&complete(4).unwrap(), &[3.0, -1.0, -1.0, -1.0]));
    assert!(close_to(&cycle(4).unwrap(), &[2.0, 0.0, 0.0, -2.0]));
    assert!(close_to(
        &hypercube(3).unwrap(),
        &[3.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -3.0]
    ));
    let s2 = 2f64.sqrt();
    assert!(close_to(&unweighted_path(3).unwrap(), &[s2, 0.0, -s2]));
}

#[test]
fn antipodal_transfer_on_small_graphs() {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let p2 = eigendecompose(&unweighted_path(2).unwrap()).unwrap();
    assert!(
        (fidelity(&p2, VertexId(0), VertexId(1), half_pi)
            .unwrap()
            .norm()
            - 1.0)
            .abs()
            < 1e-12
    );
    let p3 = eigendecompose(&unweighted_path(3).unwrap()).unwrap();
    let t = std::f64::consts::PI / 2f64.sqrt();
    assert!((fidelity(&p3, VertexId(0), VertexId(2), t).unwrap().norm() - 1.0).abs() < 1e-12);
    let q3 = eigendecompose(&hypercube(3).unwrap()).unwrap();
    assert!(
        (fidelity(&q3, VertexId(0), VertexId(7), half_pi)
            .unwrap()
            .norm()
            - 1.0)
            .abs()
            < 1e-12
    );
}
