//! Equitable partitions and the symmetrized quotient `B[j,k] = √(d_jk·d_kj)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::matrix::Matrix;
use crate::spectral::{eigendecompose, fidelity};

/// Ordered cells with constant cell-to-cell degrees `d[j][k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquitablePartition {
    cells: Vec<Vec<usize>>,
    degrees: Matrix,
}

impl EquitablePartition {
    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// `d[j][k]`: neighbors (or summed weight) in cell `k` of any vertex of cell `j`.
    pub fn degrees(&self) -> &Matrix {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    /// Cell index of every vertex.
    pub fn cell_map(&self) -> Vec<usize> {
        let n = self.cells.iter().map(Vec::len).sum();
        let mut map = vec![0; n];
        for (j, cell) in self.cells.iter().enumerate() {
            for &v in cell {
                map[v] = j;
            }
        }
        map
    }
}

fn tolerance(g: &Graph) -> f64 {
    1e-10 * (1.0 + g.adjacency().max_abs())
}

fn validate_cells(n: usize, cells: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut map = vec![usize::MAX; n];
    for (j, cell) in cells.iter().enumerate() {
        if cell.is_empty() {
            return Err(Error::InvalidArgument(format!("cell {j} is empty")));
        }
        for &v in cell {
            if v >= n {
                return Err(Error::VertexOutOfRange { index: v, n });
            }
            if map[v] != usize::MAX {
                return Err(Error::InvalidArgument(format!(
                    "vertex {v} appears in more than one cell"
                )));
            }
            map[v] = j;
        }
    }
    if let Some(v) = map.iter().position(|&c| c == usize::MAX) {
        return Err(Error::InvalidArgument(format!(
            "vertex {v} is not in any cell"
        )));
    }
    Ok(map)
}

fn weight_profile(g: &Graph, u: usize, map: &[usize], m: usize) -> Vec<f64> {
    let mut s = vec![0.0; m];
    for (v, w) in g.adjacency().row(u).iter().enumerate() {
        s[map[v]] += w;
    }
    s
}

/// The degree matrix of `cells` when the partition is equitable.
pub fn is_equitable(g: &Graph, cells: &[Vec<usize>]) -> Result<Option<EquitablePartition>> {
    let map = validate_cells(g.n(), cells)?;
    let m = cells.len();
    let tol = tolerance(g);
    let mut degrees = Matrix::zeros(m, m);
    for (j, cell) in cells.iter().enumerate() {
        let first = weight_profile(g, cell[0], &map, m);
        for &u in &cell[1..] {
            let p = weight_profile(g, u, &map, m);
            if p.iter().zip(&first).any(|(x, y)| (x - y).abs() > tol) {
                return Ok(None);
            }
        }
        for (k, d) in first.into_iter().enumerate() {
            degrees[(j, k)] = d;
        }
    }
    Ok(Some(EquitablePartition {
        cells: cells.to_vec(),
        degrees,
    }))
}

/// Cells `V_j = {x : d(x, a) = j}` if equitable; with `require_antipode`, the
/// last cell must also be a single vertex.
pub fn distance_partition(
    g: &Graph,
    a: VertexId,
    require_antipode: bool,
) -> Result<Option<EquitablePartition>> {
    let a = a.check(g.n())?;
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let dist = g.distances_from(a);
    let depth = dist
        .iter()
        .map(|d| d.expect("connected"))
        .max()
        .unwrap_or(0);
    let mut cells = vec![Vec::new(); depth + 1];
    for (v, d) in dist.iter().enumerate() {
        cells[d.expect("connected")].push(v);
    }
    if require_antipode && cells[depth].len() != 1 {
        return Ok(None);
    }
    is_equitable(g, &cells)
}

/// Splits cells by their weight profiles into the current cells until stable.
/// Output cells are ordered by their smallest vertex.
pub fn coarsest_equitable_refinement(
    g: &Graph,
    initial: &[Vec<usize>],
) -> Result<EquitablePartition> {
    validate_cells(g.n(), initial)?;
    let tol = tolerance(g);
    let mut cells: Vec<Vec<usize>> = initial.to_vec();
    loop {
        let map = validate_cells(g.n(), &cells)?;
        let m = cells.len();
        let mut next: Vec<Vec<usize>> = Vec::new();
        for cell in &cells {
            let mut groups: Vec<(Vec<f64>, Vec<usize>)> = Vec::new();
            for &u in cell {
                let p = weight_profile(g, u, &map, m);
                match groups
                    .iter_mut()
                    .find(|(rep, _)| rep.iter().zip(&p).all(|(x, y)| (x - y).abs() <= tol))
                {
                    Some((_, members)) => members.push(u),
                    None => groups.push((p, vec![u])),
                }
            }
            next.extend(groups.into_iter().map(|(_, members)| members));
        }
        let done = next.len() == cells.len();
        cells = next;
        if done {
            break;
        }
    }
    for cell in &mut cells {
        cell.sort_unstable();
    }
    cells.sort_by_key(|c| c[0]);
    Ok(is_equitable(g, &cells)?.expect("stable refinement is equitable"))
}

/// Weighted graph on the cells together with the vertex → cell map.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientGraph {
    pub graph: Graph,
    pub cell_map: Vec<usize>,
}

/// `B[j,k] = sign(d_jk)·√(d_jk·d_kj)` off the diagonal, `B[j,j] = d_jj`.
pub fn quotient_symmetrized(g: &Graph, partition: &EquitablePartition) -> Result<QuotientGraph> {
    if is_equitable(g, partition.cells())?.is_none() {
        return Err(Error::NotEquitable(
            "partition is not equitable for this graph".into(),
        ));
    }
    let d = partition.degrees();
    let m = partition.len();
    let b = Matrix::from_fn(m, m, |j, k| {
        if j == k {
            d[(j, j)]
        } else {
            let (x, y) = (d[(j, k)], d[(k, j)]);
            if x == 0.0 || y == 0.0 {
                0.0
            } else {
                x.signum() * (x * y).sqrt()
            }
        }
    });
    let b = Matrix::from_fn(m, m, |j, k| if j <= k { b[(j, k)] } else { b[(k, j)] });
    Ok(QuotientGraph {
        graph: Graph::from_matrix(b)?,
        cell_map: partition.cell_map(),
    })
}

/// Characteristic matrix with each column scaled to unit norm.
pub fn normalized_characteristic(partition: &EquitablePartition) -> Matrix {
    let map = partition.cell_map();
    let sizes = partition.sizes();
    Matrix::from_fn(map.len(), partition.len(), |v, j| {
        if map[v] == j {
            1.0 / (sizes[j] as f64).sqrt()
        } else {
            0.0
        }
    })
}

/// `max |A·Q − Q·B|`.
pub fn intertwining_residual(
    g: &Graph,
    partition: &EquitablePartition,
    quotient: &QuotientGraph,
) -> f64 {
    let q = normalized_characteristic(partition);
    g.adjacency()
        .matmul(&q)
        .max_abs_diff(&q.matmul(quotient.graph.adjacency()))
}

/// Result of comparing walk amplitudes on a graph and its quotient.
#[derive(Debug, Clone, PartialEq)]
pub struct CollapseCheck {
    pub partition: EquitablePartition,
    pub quotient: QuotientGraph,
    /// `max_t | |F_G(t)| − |F_{G/π}(t)| |`
    pub max_deviation: f64,
}

/// Uses the distance partition from `a`, which must be equitable with `b` as
/// its sole antipode.
pub fn collapse_fidelity_check(
    g: &Graph,
    a: VertexId,
    b: VertexId,
    t_grid: &[f64],
) -> Result<CollapseCheck> {
    let partition = distance_partition(g, a, true)?.ok_or_else(|| {
        Error::NotEquitable(format!(
            "distance partition from {} is not equitable with an antipode",
            a.index()
        ))
    })?;
    let last = partition.cells().last().expect("nonempty");
    if last != &vec![b.check(g.n())?] {
        return Err(Error::InvalidArgument(format!(
            "vertex {} is not the antipode of {} (antipode is {})",
            b.index(),
            a.index(),
            last[0]
        )));
    }
    collapse_fidelity_check_with(g, partition, a, b, t_grid)
}

/// As [`collapse_fidelity_check`] for an arbitrary equitable partition in
/// which `a` and `b` are singleton cells.
pub fn collapse_fidelity_check_with(
    g: &Graph,
    partition: EquitablePartition,
    a: VertexId,
    b: VertexId,
    t_grid: &[f64],
) -> Result<CollapseCheck> {
    let (ai, bi) = (a.check(g.n())?, b.check(g.n())?);
    let map = partition.cell_map();
    let (ca, cb) = (map[ai], map[bi]);
    if partition.cells()[ca].len() != 1 || partition.cells()[cb].len() != 1 {
        return Err(Error::InvalidArgument(
            "source and target must be singleton cells".into(),
        ));
    }
    let quotient = quotient_symmetrized(g, &partition)?;
    let full = eigendecompose(g)?;
    let small = eigendecompose(&quotient.graph)?;
    let mut max_deviation = 0.0f64;
    for &t in t_grid {
        let x = fidelity(&full, a, b, t)?.norm();
        let y = fidelity(&small, ca.into(), cb.into(), t)?.norm();
        max_deviation = max_deviation.max((x - y).abs());
    }
    Ok(CollapseCheck {
        partition,
        quotient,
        max_deviation,
    })
}

/// Writes a symmetric 4-vertex path quotient as `c·P4(γ; κ)`, returning
/// `(c, γ, κ)` with `c` the outer edge weight. A walk on `c·H` at time `t`
/// equals a walk on `H` at time `c·t`.
pub fn normalize_to_p4(q: &Graph) -> Result<(f64, f64, f64)> {
    if q.n() != 4 {
        return Err(Error::InvalidArgument(format!(
            "expected 4 cells, got {}",
            q.n()
        )));
    }
    let w = |i, j| q.weight(i, j);
    let tol = 1e-10 * (1.0 + q.adjacency().max_abs());
    let c = w(0, 1);
    let shape_ok = c != 0.0
        && (w(2, 3) - c).abs() <= tol
        && w(1, 2) != 0.0
        && [(0, 2), (0, 3), (1, 3), (0, 0), (3, 3)]
            .iter()
            .all(|&(i, j)| w(i, j).abs() <= tol)
        && (w(1, 1) - w(2, 2)).abs() <= tol;
    if !shape_ok {
        return Err(Error::InvalidArgument(
            "quotient is not a symmetric weighted P4".into(),
        ));
    }
    Ok((c, w(1, 2) / c, w(1, 1) / c))
}
