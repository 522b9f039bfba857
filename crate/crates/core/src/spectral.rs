//! Symmetric eigendecomposition and walk evolution `e^{-itA}`.
//!
//! The eigensolver is the cyclic Jacobi method: it is unconditionally stable
//! for real symmetric matrices, yields orthonormal eigenvectors to working
//! precision and is fast enough for the few-hundred-vertex graphs handled here.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::matrix::Matrix;

/// Complex amplitude `<b|e^{-itA}|a>`.
pub type Amplitude = Complex64;

/// Eigenvalues sorted descending with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: Matrix,
}

impl EigenDecomposition {
    /// Decomposes a real symmetric matrix.
    pub fn of_symmetric(a: &Matrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::InvalidArgument(
                "eigendecomposition needs a square matrix".into(),
            ));
        }
        let (vals, vecs) = jacobi(a)?;
        let mut order: Vec<usize> = (0..vals.len()).collect();
        order.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]));
        let n = vals.len();
        let eigenvalues = order.iter().map(|&i| vals[i]).collect();
        let mut eigenvectors = Matrix::from_fn(n, n, |r, c| vecs[(r, order[c])]);
        // Deterministic sign: the largest-magnitude entry of each column is positive.
        for c in 0..n {
            let mut best = 0;
            for r in 0..n {
                if eigenvectors[(r, c)].abs() > eigenvectors[(best, c)].abs() + 1e-12 {
                    best = r;
                }
            }
            if eigenvectors[(best, c)] < 0.0 {
                for r in 0..n {
                    eigenvectors[(r, c)] = -eigenvectors[(r, c)];
                }
            }
        }
        Ok(Self {
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn source_dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Column `k` pairs with `eigenvalues()[k]`.
    pub fn eigenvectors(&self) -> &Matrix {
        &self.eigenvectors
    }

    /// `max |A - VΛVᵀ|`.
    pub fn reconstruction_residual(&self, a: &Matrix) -> f64 {
        let n = self.source_dim();
        let mut rec = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                rec[(i, j)] = (0..n)
                    .map(|k| {
                        self.eigenvectors[(i, k)] * self.eigenvalues[k] * self.eigenvectors[(j, k)]
                    })
                    .sum();
            }
        }
        rec.max_abs_diff(a)
    }

    /// `max |VᵀV - I|`.
    pub fn orthonormality_residual(&self) -> f64 {
        let v = &self.eigenvectors;
        v.transpose()
            .matmul(v)
            .max_abs_diff(&Matrix::identity(self.source_dim()))
    }

    /// Applies `e^{-itA}` to an arbitrary complex state.
    pub fn propagate(&self, t: f64, state: &[Complex64]) -> Vec<Complex64> {
        let n = self.source_dim();
        assert_eq!(state.len(), n, "state dimension mismatch");
        let v = &self.eigenvectors;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for k in 0..n {
            let overlap: Complex64 = (0..n).map(|r| state[r] * v[(r, k)]).sum();
            if overlap == Complex64::new(0.0, 0.0) {
                continue;
            }
            let coeff = Complex64::from_polar(1.0, -t * self.eigenvalues[k]) * overlap;
            for r in 0..n {
                out[r] += coeff * v[(r, k)];
            }
        }
        out
    }
}

/// Cyclic Jacobi rotations; returns unsorted eigenvalues and eigenvector columns.
fn jacobi(a: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let n = a.rows();
    let mut m = a.clone();
    let mut v = Matrix::identity(n);
    let scale = a.max_abs();
    if n <= 1 || scale == 0.0 {
        return Ok(((0..n).map(|i| m[(i, i)]).collect(), v));
    }
    let cap = 100 * n * n;
    let mut rotations = 0usize;
    loop {
        let off: f64 = (0..n)
            .map(|p| ((p + 1)..n).map(|q| m[(p, q)] * m[(p, q)]).sum::<f64>())
            .sum();
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                if rotations >= cap {
                    return Err(Error::NumericFailure(format!(
                        "Jacobi did not converge within {cap} rotations"
                    )));
                }
                rotations += 1;
                rotated = true;
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    Ok(((0..n).map(|i| m[(i, i)]).collect(), v))
}

pub fn eigendecompose(g: &Graph) -> Result<EigenDecomposition> {
    EigenDecomposition::of_symmetric(g.adjacency())
}

/// Eigenvalues of `A_G`, sorted descending.
pub fn spectrum(g: &Graph) -> Result<Vec<f64>> {
    Ok(eigendecompose(g)?.eigenvalues)
}

pub fn is_integral(g: &Graph, tol: f64) -> Result<bool> {
    Ok(spectrum(g)?.iter().all(|x| (x - x.round()).abs() <= tol))
}

/// State `e^{-itA}|src>`.
pub fn evolve(decomp: &EigenDecomposition, t: f64, src: VertexId) -> Result<Vec<Complex64>> {
    let n = decomp.source_dim();
    let a = src.check(n)?;
    let v = &decomp.eigenvectors;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let coeff = Complex64::from_polar(v[(a, k)], -t * decomp.eigenvalues[k]);
        for r in 0..n {
            out[r] += coeff * v[(r, k)];
        }
    }
    Ok(out)
}

/// `<b|e^{-itA}|a>`.
pub fn fidelity(
    decomp: &EigenDecomposition,
    a: VertexId,
    b: VertexId,
    t: f64,
) -> Result<Amplitude> {
    let n = decomp.source_dim();
    let (a, b) = (a.check(n)?, b.check(n)?);
    Ok(TransferKernel::from_indices(decomp, a, b).amplitude(t))
}

/// The transfer amplitude between two fixed vertices as a sum of phases,
/// `F(t) = Σ_k w_k e^{-itλ_k}` with `w_k = <b|u_k><u_k|a>`.
///
/// Precomputing the weights makes dense time scans cost O(n) per point.
#[derive(Debug, Clone)]
pub struct TransferKernel {
    terms: Vec<(f64, f64)>,
}

impl TransferKernel {
    pub fn new(decomp: &EigenDecomposition, a: VertexId, b: VertexId) -> Result<Self> {
        let n = decomp.source_dim();
        Ok(Self::from_indices(decomp, a.check(n)?, b.check(n)?))
    }

    fn from_indices(decomp: &EigenDecomposition, a: usize, b: usize) -> Self {
        let v = &decomp.eigenvectors;
        let terms = decomp
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(k, &lambda)| (lambda, v[(a, k)] * v[(b, k)]))
            .collect();
        Self { terms }
    }

    /// Builds a kernel from explicit `(eigenvalue, weight)` pairs.
    pub fn from_terms(terms: Vec<(f64, f64)>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn amplitude(&self, t: f64) -> Amplitude {
        self.terms
            .iter()
            .map(|&(l, w)| Complex64::from_polar(w, -t * l))
            .sum()
    }

    /// `dF/dt`.
    pub fn derivative(&self, t: f64) -> Amplitude {
        self.terms
            .iter()
            .map(|&(l, w)| Complex64::new(0.0, -l) * Complex64::from_polar(w, -t * l))
            .sum()
    }

    /// `d|F|²/dt = 2 Re(conj(F) F')`.
    pub fn magnitude_sq_slope(&self, t: f64) -> f64 {
        2.0 * (self.amplitude(t).conj() * self.derivative(t)).re
    }
}

/// One eigenspace: representative eigenvalue, member indices and projector.
#[derive(Debug, Clone)]
pub struct ProjectorGroup {
    pub eigenvalue: f64,
    pub indices: Vec<usize>,
    pub projector: Matrix,
}

impl ProjectorGroup {
    pub fn rank(&self) -> usize {
        self.indices.len()
    }
}

/// Eigenspace projectors `E_j` obtained by clustering nearly equal eigenvalues.
#[derive(Debug, Clone)]
pub struct SpectralProjectors {
    pub groups: Vec<ProjectorGroup>,
    pub tolerance: f64,
}

/// Default grouping tolerance `1e-8 · max(1, max|λ|)`.
pub fn default_group_tol(decomp: &EigenDecomposition) -> f64 {
    let top = decomp
        .eigenvalues
        .iter()
        .fold(1.0f64, |m, x| m.max(x.abs()));
    1e-8 * top
}

/// Eigenvalue clusters by single linkage (consecutive gaps ≤ `group_tol`).
pub fn eigenvalue_clusters(decomp: &EigenDecomposition, group_tol: f64) -> Result<Vec<Vec<usize>>> {
    if group_tol.is_nan() || group_tol <= 0.0 {
        return Err(Error::InvalidArgument(
            "grouping tolerance must be positive".into(),
        ));
    }
    let vals = &decomp.eigenvalues;
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (k, &x) in vals.iter().enumerate() {
        match clusters.last_mut() {
            Some(c) if vals[*c.last().unwrap()] - x <= group_tol => c.push(k),
            _ => clusters.push(vec![k]),
        }
    }
    for c in &clusters {
        let diameter = vals[c[0]] - vals[*c.last().unwrap()];
        if diameter > 10.0 * group_tol {
            return Err(Error::AmbiguousDegeneracy {
                eigenvalue: vals[c[0]],
                diameter,
            });
        }
    }
    Ok(clusters)
}

pub fn spectral_projectors(
    decomp: &EigenDecomposition,
    group_tol: f64,
) -> Result<SpectralProjectors> {
    let n = decomp.source_dim();
    let v = &decomp.eigenvectors;
    let groups = eigenvalue_clusters(decomp, group_tol)?
        .into_iter()
        .map(|indices| {
            let eigenvalue =
                indices.iter().map(|&k| decomp.eigenvalues[k]).sum::<f64>() / indices.len() as f64;
            let projector = Matrix::from_fn(n, n, |r, c| {
                indices.iter().map(|&k| v[(r, k)] * v[(c, k)]).sum()
            });
            ProjectorGroup {
                eigenvalue,
                indices,
                projector,
            }
        })
        .collect();
    Ok(SpectralProjectors {
        groups,
        tolerance: group_tol,
    })
}

/// Top eigenvalue and its positive unit eigenvector for a connected
/// nonnegative graph.
pub fn perron_vector(g: &Graph) -> Result<(f64, Vec<f64>)> {
    if g.adjacency().as_slice().iter().any(|&w| w < 0.0) {
        return Err(Error::InvalidArgument(
            "Perron vector needs nonnegative weights".into(),
        ));
    }
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let d = eigendecompose(g)?;
    if d.source_dim() > 1 {
        let gap = d.eigenvalues[0] - d.eigenvalues[1];
        if gap <= 1e-10 {
            return Err(Error::NotSimple { gap });
        }
    }
    let mut x = d.eigenvectors.column(0);
    if x.iter().sum::<f64>() < 0.0 {
        x.iter_mut().for_each(|e| *e = -*e);
    }
    if x.iter().any(|&e| e <= 0.0) {
        return Err(Error::NumericFailure(
            "Perron vector has a non-positive entry".into(),
        ));
    }
    Ok((d.eigenvalues[0], x))
}
