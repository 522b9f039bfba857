//! Graph products and the product-based PST sufficiency conditions.
//!
//! Product vertex `(g, h)` sits at index `g·|V_H| + h`, so every adjacency
//! formula below is a literal Kronecker expression.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::graph::{complete, Graph};
use crate::matrix::Matrix;
use crate::pst::{PiMultiple, RationalClass};
use crate::spectral::{eigendecompose, eigenvalue_clusters, Amplitude, EigenDecomposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductKind {
    /// `A_G ⊗ I + I ⊗ A_H`
    Cartesian,
    /// `A_G ⊗ A_H`
    Weak,
    /// `A_G ⊗ J + I ⊗ A_H`
    Lexicographic,
    /// `A_G ⊗ A_C + I ⊗ A_H`
    GeneralizedLexicographic,
}

fn product_labels(g: &Graph, h: &Graph) -> Option<Vec<String>> {
    let (gl, hl) = (g.labels()?, h.labels()?);
    Some(
        gl.iter()
            .flat_map(|a| hl.iter().map(move |b| format!("({a},{b})")))
            .collect(),
    )
}

fn assemble(adj: Matrix, g: &Graph, h: &Graph) -> Graph {
    let graph =
        Graph::from_matrix(adj).expect("Kronecker sums of symmetric matrices are symmetric");
    match product_labels(g, h) {
        Some(labels) => graph
            .with_labels(labels)
            .expect("label count matches product size"),
        None => graph,
    }
}

pub fn cartesian(g: &Graph, h: &Graph) -> Graph {
    let a = g.adjacency().kron(&Matrix::identity(h.n()));
    let b = Matrix::identity(g.n()).kron(h.adjacency());
    assemble(a.add(&b), g, h)
}

pub fn weak(g: &Graph, h: &Graph) -> Graph {
    assemble(g.adjacency().kron(h.adjacency()), g, h)
}

pub fn lexicographic(g: &Graph, h: &Graph) -> Graph {
    let a = g.adjacency().kron(&Matrix::ones(h.n(), h.n()));
    let b = Matrix::identity(g.n()).kron(h.adjacency());
    assemble(a.add(&b), g, h)
}

/// `G_C[H]`. Construction only needs `|V_C| = |V_H|`; commutation of `A_C`
/// and `A_H` matters for the analysis helpers, not here.
pub fn generalized_lexicographic(g: &Graph, c: &Graph, h: &Graph) -> Result<Graph> {
    if c.n() != h.n() {
        return Err(Error::InvalidArgument(format!(
            "connection graph has {} vertices but H has {}",
            c.n(),
            h.n()
        )));
    }
    let a = g.adjacency().kron(c.adjacency());
    let b = Matrix::identity(g.n()).kron(h.adjacency());
    Ok(assemble(a.add(&b), g, h))
}

pub fn product(
    kind: ProductKind,
    g: &Graph,
    h: &Graph,
    connection: Option<&Graph>,
) -> Result<Graph> {
    match (kind, connection) {
        (ProductKind::Cartesian, None) => Ok(cartesian(g, h)),
        (ProductKind::Weak, None) => Ok(weak(g, h)),
        (ProductKind::Lexicographic, None) => Ok(lexicographic(g, h)),
        (ProductKind::GeneralizedLexicographic, Some(c)) => generalized_lexicographic(g, c, h),
        (ProductKind::GeneralizedLexicographic, None) => Err(Error::InvalidArgument(
            "generalized lexicographic product needs a connection graph".into(),
        )),
        (_, Some(_)) => Err(Error::InvalidArgument(
            "only the generalized lexicographic product takes a connection".into(),
        )),
    }
}

/// A ratio examined by a sufficiency condition, with its parity class when it
/// reconstructs as a rational.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioCheck {
    pub name: String,
    pub value: f64,
    pub class: Option<RationalClass>,
}

/// Outcome of a closed-form PST sufficiency check.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub holds: bool,
    /// The checked quantities, e.g. `t·λ/π` for every eigenvalue.
    pub witness: Vec<f64>,
    pub ratios: Vec<RatioCheck>,
    /// Implied PST time when the condition holds.
    pub time: Option<PiMultiple>,
    /// Auxiliary flag (the integer form of the lexicographic condition).
    pub secondary: Option<bool>,
    pub detail: String,
}

impl ConditionReport {
    pub(crate) fn new(holds: bool, witness: Vec<f64>, detail: String) -> Self {
        Self {
            holds,
            witness,
            ratios: Vec::new(),
            time: None,
            secondary: None,
            detail,
        }
    }
}

/// `x ∈ period·ℤ` within `1e-9·(1+|x|)`.
pub fn is_multiple_of(x: f64, period: f64) -> bool {
    let k = (x / period).round();
    (x - k * period).abs() <= 1e-9 * (1.0 + x.abs())
}

/// True when `A[j,k]` depends only on `(k − j) mod n`, compared exactly.
pub fn is_circulant(g: &Graph) -> bool {
    let n = g.n();
    let a = g.adjacency();
    (0..n).all(|j| (0..n).all(|k| a[(j, k)].to_bits() == a[(0, (k + n - j) % n)].to_bits()))
}

/// Weak-product sufficiency: `t_G·Spec(G) ⊆ ℤπ` and `H` circulant with odd
/// eigenvalues.
pub fn check_weak_pst_condition(g: &Graph, t_g: f64, h: &Graph) -> Result<ConditionReport> {
    let sg = eigendecompose(g)?;
    let sh = eigendecompose(h)?;
    let witness: Vec<f64> = sg.eigenvalues().iter().map(|l| t_g * l / PI).collect();
    let first = sg.eigenvalues().iter().all(|l| is_multiple_of(t_g * l, PI));
    let circulant = is_circulant(h);
    let odd = sh.eigenvalues().iter().all(|m| {
        let r = m.round();
        (m - r).abs() <= 1e-8 && (r as i64).rem_euclid(2) == 1
    });
    let mut failures = Vec::new();
    if !first {
        failures.push("t_G·Spec(G) ⊄ ℤπ");
    }
    if !circulant {
        failures.push("H is not circulant");
    }
    if !odd {
        failures.push("H has an eigenvalue that is not an odd integer");
    }
    let holds = failures.is_empty();
    let detail = if holds {
        format!(
            "t_G·Spec(G)/π = {witness:?} are integers; H circulant with odd spectrum {:?}",
            sh.eigenvalues()
        )
    } else {
        failures.join("; ")
    };
    let mut report = ConditionReport::new(holds, witness, detail);
    if holds {
        report.time = Some(PiMultiple::over(1, PI / t_g));
    }
    Ok(report)
}

fn commutes_with(a: &Graph, b: &Graph) -> (bool, f64) {
    let res = a.adjacency().commutator_residual(b.adjacency());
    let scale = (1.0 + a.adjacency().max_abs()) * (1.0 + b.adjacency().max_abs()) * a.n() as f64;
    (res <= 1e-10 * scale, res)
}

/// `G_{K_m}[H]` with a common PST time `t`: `H` commutes with `K_m` and
/// `t·m·Spec(G) ⊆ 2ℤπ`.
pub fn check_lexico_clique_condition(g: &Graph, h: &Graph, t: f64) -> Result<ConditionReport> {
    let m = h.n();
    let km = complete(m)?;
    let (commute, residual) = commutes_with(h, &km);
    let sg = eigendecompose(g)?;
    let witness: Vec<f64> = sg
        .eigenvalues()
        .iter()
        .map(|l| t * m as f64 * l / PI)
        .collect();
    let even = sg
        .eigenvalues()
        .iter()
        .all(|l| is_multiple_of(t * m as f64 * l, 2.0 * PI));
    let holds = commute && even;
    let detail = match (commute, even) {
        (true, true) => format!("H commutes with K_{m}; t·{m}·Spec(G)/π = {witness:?} are even"),
        (false, _) => format!("H does not commute with K_{m} (residual {residual:e})"),
        (true, false) => format!("t·{m}·Spec(G)/π = {witness:?} not all even integers"),
    };
    let mut report = ConditionReport::new(holds, witness, detail);
    if holds {
        report.time = Some(PiMultiple::over(1, PI / t));
    }
    Ok(report)
}

/// Standard lexicographic `G[H]`: `H` regular with PST at `t_H` (asserted by
/// the caller) and `t_H·|V_H|·Spec(G) ⊆ 2ℤπ`.
///
/// `secondary` carries the integer form `k_H·|V_H|·Spec(G) ⊆ 4ℤ`, reported only
/// when `G` is integral and `t_H = (π/2)·k_H` (the size-scaled time convention).
pub fn check_std_lexico_condition(g: &Graph, h: &Graph, t_h: f64) -> Result<ConditionReport> {
    let m = h.n() as f64;
    let regular = h.is_regular();
    let sg = eigendecompose(g)?;
    let witness: Vec<f64> = sg.eigenvalues().iter().map(|l| t_h * m * l / PI).collect();
    let even = sg
        .eigenvalues()
        .iter()
        .all(|l| is_multiple_of(t_h * m * l, 2.0 * PI));
    let holds = regular.is_some() && even;
    let detail = match (regular, even) {
        (Some(k), true) => format!("H is {k}-regular; t_H·|V_H|·Spec(G)/π = {witness:?} are even"),
        (None, _) => String::from("H is not regular"),
        (Some(_), false) => format!("t_H·|V_H|·Spec(G)/π = {witness:?} not all even integers"),
    };
    let mut report = ConditionReport::new(holds, witness, detail);
    let integral = sg
        .eigenvalues()
        .iter()
        .all(|l| (l - l.round()).abs() <= 1e-8);
    if let Some(k) = regular {
        if integral && (t_h - PI / 2.0 * k).abs() <= 1e-9 * (1.0 + t_h) {
            report.secondary = Some(sg.eigenvalues().iter().all(|l| {
                let v = (k * m * l.round()).round() as i64;
                v.rem_euclid(4) == 0
            }));
        }
    }
    if holds {
        report.time = Some(PiMultiple::over(1, PI / t_h));
    }
    Ok(report)
}

/// Weak-product amplitude from the factor spectra:
/// `Σ_k <g2|u_k><u_k|g1> Σ_l <h2|v_l><v_l|h1> e^{-itλ_kμ_l}`.
pub fn weak_product_fidelity(
    dg: &EigenDecomposition,
    dh: &EigenDecomposition,
    from: (usize, usize),
    to: (usize, usize),
    t: f64,
) -> Amplitude {
    let (u, v) = (dg.eigenvectors(), dh.eigenvectors());
    let mut total = Complex64::new(0.0, 0.0);
    for (k, &lambda) in dg.eigenvalues().iter().enumerate() {
        let wg = u[(to.0, k)] * u[(from.0, k)];
        let inner: Complex64 = dh
            .eigenvalues()
            .iter()
            .enumerate()
            .map(|(l, &mu)| Complex64::from_polar(v[(to.1, l)] * v[(from.1, l)], -t * lambda * mu))
            .sum();
        total += inner * wg;
    }
    total
}

/// Simultaneous eigenbasis of two commuting symmetric matrices.
#[derive(Debug, Clone)]
pub struct CommonEigenbasis {
    /// Eigenvalues of `H` per column.
    pub h_values: Vec<f64>,
    /// Eigenvalues of `C` per column.
    pub c_values: Vec<f64>,
    pub vectors: Matrix,
}

/// Diagonalizes `H`, then `C` restricted to each eigenspace of `H`.
pub fn common_eigenbasis(h: &Graph, c: &Graph) -> Result<CommonEigenbasis> {
    if h.n() != c.n() {
        return Err(Error::InvalidArgument(
            "H and C must have the same order".into(),
        ));
    }
    let (commute, residual) = commutes_with(h, c);
    if !commute {
        return Err(Error::NonCommuting { residual });
    }
    let n = h.n();
    let dh = eigendecompose(h)?;
    let tol = 1e-8 * dh.eigenvalues().iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let clusters = eigenvalue_clusters(&dh, tol)?;
    let v = dh.eigenvectors();
    let mut vectors = Matrix::zeros(n, n);
    let (mut h_values, mut c_values) = (Vec::with_capacity(n), Vec::with_capacity(n));
    let mut col = 0;
    for cluster in clusters {
        let r = cluster.len();
        let basis = Matrix::from_fn(n, r, |i, j| v[(i, cluster[j])]);
        let restricted = basis.transpose().matmul(c.adjacency()).matmul(&basis);
        let restricted =
            Matrix::from_fn(r, r, |i, j| 0.5 * (restricted[(i, j)] + restricted[(j, i)]));
        let inner = EigenDecomposition::of_symmetric(&restricted)?;
        let rotated = basis.matmul(inner.eigenvectors());
        let mu = cluster.iter().map(|&k| dh.eigenvalues()[k]).sum::<f64>() / r as f64;
        for j in 0..r {
            for i in 0..n {
                vectors[(i, col)] = rotated[(i, j)];
            }
            h_values.push(mu);
            c_values.push(inner.eigenvalues()[j]);
            col += 1;
        }
    }
    Ok(CommonEigenbasis {
        h_values,
        c_values,
        vectors,
    })
}

/// `{λ_k·γ_l + μ_l}` for `G_C[H]`, sorted descending.
pub fn generalized_lexico_spectrum(g: &Graph, c: &Graph, h: &Graph) -> Result<Vec<f64>> {
    let dg = eigendecompose(g)?;
    let basis = common_eigenbasis(h, c)?;
    let mut out: Vec<f64> = dg
        .eigenvalues()
        .iter()
        .flat_map(|&lambda| {
            basis
                .h_values
                .iter()
                .zip(&basis.c_values)
                .map(move |(mu, gamma)| lambda * gamma + mu)
        })
        .collect();
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// Amplitude on `G_C[H]` from the factor spectra:
/// `Σ_{k,l} <g2|u_k><u_k|g1> <h2|v_l><v_l|h1> e^{-it(λ_kγ_l + μ_l)}`.
pub fn generalized_lexico_fidelity(
    dg: &EigenDecomposition,
    basis: &CommonEigenbasis,
    from: (usize, usize),
    to: (usize, usize),
    t: f64,
) -> Amplitude {
    let (u, v) = (dg.eigenvectors(), &basis.vectors);
    let mut total = Complex64::new(0.0, 0.0);
    for (k, &lambda) in dg.eigenvalues().iter().enumerate() {
        let wg = u[(to.0, k)] * u[(from.0, k)];
        for l in 0..basis.h_values.len() {
            let wh = v[(to.1, l)] * v[(from.1, l)];
            let phase = lambda * basis.c_values[l] + basis.h_values[l];
            total += Complex64::from_polar(wg * wh, -t * phase);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{circulant, complete, cycle, empty, hypercube, unweighted_path};
    use crate::spectral::spectrum;
    use alloc::vec;
    use core::f64::consts::{FRAC_PI_2, SQRT_2};

    #[test]
    fn cartesian_examples() {
        assert_eq!(
            cartesian(&complete(2).unwrap(), &complete(2).unwrap()),
            cycle(4).unwrap().permuted(&[0, 1, 3, 2]).unwrap()
        );
        assert_eq!(
            cartesian(&complete(2).unwrap(), &hypercube(2).unwrap()),
            hypercube(3).unwrap()
        );
        let p3 = unweighted_path(3).unwrap();
        let s = spectrum(&cartesian(&p3, &p3)).unwrap();
        let base = spectrum(&p3).unwrap();
        let mut sums: Vec<f64> = base
            .iter()
            .flat_map(|a| base.iter().map(move |b| a + b))
            .collect();
        sums.sort_by(|a, b| b.total_cmp(a));
        assert!(s.iter().zip(&sums).all(|(x, y)| (x - y).abs() < 1e-10));
    }

    #[test]
    fn weak_examples() {
        let k2 = complete(2).unwrap();
        let w = weak(&k2, &k2);
        assert!(!w.is_connected());
        assert_eq!(w.degrees(), vec![1.0; 4]);
        assert_eq!(w.weight(0, 3), 1.0);
        assert_eq!(w.weight(1, 2), 1.0);
        let k2k4 = weak(&k2, &complete(4).unwrap());
        assert_eq!(k2k4.n(), 8);
        assert_eq!(k2k4.is_regular(), Some(3.0));
    }

    #[test]
    fn lexicographic_examples() {
        let k2 = complete(2).unwrap();
        assert_eq!(
            lexicographic(&k2, &empty(2).unwrap()),
            cycle(4).unwrap().permuted(&[0, 2, 1, 3]).unwrap()
        );
        let g = cycle(5).unwrap();
        let h = unweighted_path(3).unwrap();
        let id = Graph::from_matrix(Matrix::identity(3)).unwrap();
        assert_eq!(
            generalized_lexicographic(&g, &id, &h).unwrap(),
            cartesian(&g, &h)
        );
        let j = Graph::from_matrix(Matrix::ones(3, 3)).unwrap();
        assert_eq!(
            generalized_lexicographic(&g, &j, &h).unwrap(),
            lexicographic(&g, &h)
        );
        assert!(generalized_lexicographic(&g, &complete(2).unwrap(), &h).is_err());
    }

    #[test]
    fn weak_condition_examples() {
        let q2 = hypercube(2).unwrap();
        let k4 = complete(4).unwrap();
        let r = check_weak_pst_condition(&q2, FRAC_PI_2, &k4).unwrap();
        assert!(r.holds, "{}", r.detail);
        let r = check_weak_pst_condition(&complete(2).unwrap(), FRAC_PI_2, &k4).unwrap();
        assert!(!r.holds);
        assert!(r.detail.contains("ℤπ"));
        let r = check_weak_pst_condition(&unweighted_path(3).unwrap(), PI / SQRT_2, &k4).unwrap();
        assert!(r.holds, "{}", r.detail);
        // K3 has even eigenvalue 2.
        assert!(
            !check_weak_pst_condition(&q2, FRAC_PI_2, &complete(3).unwrap())
                .unwrap()
                .holds
        );
    }

    #[test]
    fn lexico_condition_examples() {
        let (k2, q1, q2) = (
            complete(2).unwrap(),
            hypercube(1).unwrap(),
            hypercube(2).unwrap(),
        );
        assert!(
            check_lexico_clique_condition(&q2, &q2, FRAC_PI_2)
                .unwrap()
                .holds
        );
        assert!(
            check_lexico_clique_condition(&k2, &q2, FRAC_PI_2)
                .unwrap()
                .holds
        );
        assert!(
            !check_lexico_clique_condition(&k2, &k2, FRAC_PI_2)
                .unwrap()
                .holds
        );
        assert!(
            check_std_lexico_condition(&k2, &q2, FRAC_PI_2)
                .unwrap()
                .holds
        );
        assert!(
            !check_std_lexico_condition(&k2, &q1, FRAC_PI_2)
                .unwrap()
                .holds
        );
        for g in [
            cycle(4).unwrap(),
            hypercube(3).unwrap(),
            complete(5).unwrap(),
        ] {
            for d in 2..=4 {
                assert!(
                    check_std_lexico_condition(&g, &hypercube(d).unwrap(), FRAC_PI_2)
                        .unwrap()
                        .holds
                );
            }
        }
        // Size-scaled time: Q2 is 2-regular, t_H = π.
        let r = check_std_lexico_condition(&k2, &q2, PI).unwrap();
        assert_eq!(r.secondary, Some(true));
        assert_eq!(
            check_std_lexico_condition(&k2, &q2, FRAC_PI_2)
                .unwrap()
                .secondary,
            None
        );
    }

    #[test]
    fn factor_formulas_match_assembled_products() {
        let g = unweighted_path(3).unwrap();
        let h = complete(4).unwrap();
        let dg = eigendecompose(&g).unwrap();
        let dh = eigendecompose(&h).unwrap();
        let w = eigendecompose(&weak(&g, &h)).unwrap();
        for i in 0..50 {
            let t = 0.13 * i as f64;
            let direct = crate::spectral::fidelity(&w, 1.into(), 8.into(), t).unwrap();
            let factored = weak_product_fidelity(&dg, &dh, (0, 1), (2, 0), t);
            assert!((direct - factored).norm() <= 1e-9);
        }
        let q2 = hypercube(2).unwrap();
        let basis = common_eigenbasis(&q2, &complete(4).unwrap()).unwrap();
        let dq = eigendecompose(&q2).unwrap();
        let prod =
            eigendecompose(&generalized_lexicographic(&q2, &complete(4).unwrap(), &q2).unwrap())
                .unwrap();
        for i in 0..50 {
            let t = 0.11 * i as f64;
            let direct = crate::spectral::fidelity(&prod, 0.into(), 15.into(), t).unwrap();
            let factored = generalized_lexico_fidelity(&dq, &basis, (0, 0), (3, 3), t);
            assert!((direct - factored).norm() <= 1e-9);
        }
    }

    #[test]
    fn non_commuting_connection() {
        let h = unweighted_path(3).unwrap();
        let c = complete(3).unwrap();
        assert!(matches!(
            common_eigenbasis(&h, &c),
            Err(Error::NonCommuting { .. })
        ));
    }

    #[test]
    fn circulant_detection() {
        assert!(is_circulant(&complete(4).unwrap()));
        assert!(is_circulant(&circulant(15, &[1, 2, 4]).unwrap()));
        assert!(!is_circulant(&unweighted_path(3).unwrap()));
    }
}
