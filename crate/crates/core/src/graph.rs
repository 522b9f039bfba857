//! Weighted undirected graphs with optional self-loops.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// A vertex index into a specific graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }

    pub(crate) fn check(self, n: usize) -> Result<usize> {
        if self.0 < n {
            Ok(self.0)
        } else {
            Err(Error::VertexOutOfRange { index: self.0, n })
        }
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(i)
    }
}

/// Real symmetric weighted adjacency matrix. Diagonal entries are loop weights.
///
/// Graphs are immutable once built; every constructor guarantees exact
/// (bitwise) symmetry of the adjacency matrix.
#[derive(Debug, Clone)]
pub struct Graph {
    adj: Matrix,
    labels: Option<Vec<String>>,
}

impl PartialEq for Graph {
    /// Graphs compare by adjacency matrix only; labels are presentation.
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj
    }
}

impl Graph {
    /// Wraps a symmetric matrix. Rejects empty, non-square, non-finite or
    /// asymmetric input.
    pub fn from_matrix(adj: Matrix) -> Result<Self> {
        if !adj.is_square() {
            return Err(Error::InvalidArgument(
                "adjacency matrix must be square".into(),
            ));
        }
        if adj.rows() == 0 {
            return Err(Error::InvalidSize("graph needs at least one vertex"));
        }
        if adj.as_slice().iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(
                "adjacency entries must be finite".into(),
            ));
        }
        if !adj.is_symmetric_exact() {
            return Err(Error::InvalidArgument(
                "adjacency matrix must be exactly symmetric".into(),
            ));
        }
        Ok(Self { adj, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::InvalidArgument(format!(
                "expected {} labels, got {}",
                self.n(),
                labels.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.adj.rows()
    }

    pub fn adjacency(&self) -> &Matrix {
        &self.adj
    }

    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.adj[(u, v)]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[v].as_str())
    }

    /// Looks a vertex up by label, falling back to a decimal index.
    pub fn find_vertex(&self, name: &str) -> Option<VertexId> {
        if let Some(labels) = &self.labels {
            if let Some(i) = labels.iter().position(|l| l == name) {
                return Some(VertexId(i));
            }
        }
        name.parse::<usize>()
            .ok()
            .filter(|&i| i < self.n())
            .map(VertexId)
    }

    pub fn vertex(&self, i: usize) -> Result<VertexId> {
        VertexId(i).check(self.n()).map(VertexId)
    }

    /// Multiplies every weight (loops included) by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::InvalidArgument("scale must be finite".into()));
        }
        Ok(Self {
            adj: self.adj.scale(c),
            labels: self.labels.clone(),
        })
    }

    /// Relabels so that new vertex `i` is old vertex `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        let mut seen = alloc::vec![false; n];
        if perm.len() != n
            || perm
                .iter()
                .any(|&p| p >= n || core::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidArgument(
                "not a permutation of the vertex set".into(),
            ));
        }
        let adj = Matrix::from_fn(n, n, |i, j| self.adj[(perm[i], perm[j])]);
        let labels = self
            .labels
            .as_ref()
            .map(|l| perm.iter().map(|&p| l[p].clone()).collect());
        Ok(Self { adj, labels })
    }

    pub fn has_loops(&self) -> bool {
        (0..self.n()).any(|i| self.adj[(i, i)] != 0.0)
    }

    /// True when every entry is 0 or 1.
    pub fn is_unweighted(&self) -> bool {
        self.adj.as_slice().iter().all(|&w| w == 0.0 || w == 1.0)
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&v| v != u && self.adj[(u, v)] != 0.0)
    }

    /// Row sums (loops counted once).
    pub fn degrees(&self) -> Vec<f64> {
        (0..self.n())
            .map(|u| self.adj.row(u).iter().sum())
            .collect()
    }

    /// Common row sum if the graph is regular.
    pub fn is_regular(&self) -> Option<f64> {
        let d = self.degrees();
        let first = d[0];
        let tol = 1e-12 * (1.0 + first.abs());
        d.iter().all(|x| (x - first).abs() <= tol).then_some(first)
    }

    pub fn is_connected(&self) -> bool {
        let dist = bfs(self, 0);
        dist.iter().all(Option::is_some)
    }

    pub fn distance_matrix(&self) -> DistanceMatrix {
        let n = self.n();
        let mut hops = Vec::with_capacity(n * n);
        for u in 0..n {
            hops.extend(bfs(self, u));
        }
        DistanceMatrix { n, hops }
    }

    /// Hop distances from `src`; `None` for unreachable vertices.
    pub fn distances_from(&self, src: usize) -> Vec<Option<usize>> {
        bfs(self, src)
    }
}

fn bfs(g: &Graph, src: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    dist[src] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap_or(0);
        for v in g.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Shortest hop counts; loops are ignored and `None` marks disconnected pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    hops: Vec<Option<usize>>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> Option<usize> {
        self.hops[u * self.n + v]
    }

    pub fn diameter(&self) -> Option<usize> {
        self.hops.iter().try_fold(0, |m, d| d.map(|d| m.max(d)))
    }
}

/// `K_n`.
pub fn complete(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidSize("K_n needs n >= 1"));
    }
    Graph::from_matrix(Matrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { 1.0 }))
}

/// `K̄_n`: n isolated vertices.
pub fn empty(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidSize("empty graph needs n >= 1"));
    }
    Graph::from_matrix(Matrix::zeros(n, n))
}

/// Weighted path on `loops.len()` vertices with `weights[i]` between i and i+1.
pub fn path(weights: &[f64], loops: &[f64]) -> Result<Graph> {
    let m = loops.len();
    if m == 0 {
        return Err(Error::InvalidSize("path needs at least one vertex"));
    }
    if weights.len() + 1 != m {
        return Err(Error::InvalidArgument(format!(
            "path on {m} vertices needs {} edge weights, got {}",
            m - 1,
            weights.len()
        )));
    }
    let mut adj = Matrix::zeros(m, m);
    for (i, &w) in weights.iter().enumerate() {
        adj[(i, i + 1)] = w;
        adj[(i + 1, i)] = w;
    }
    for (i, &l) in loops.iter().enumerate() {
        adj[(i, i)] = l;
    }
    Graph::from_matrix(adj)
}

/// Unweighted `P_n`.
pub fn unweighted_path(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidSize("P_n needs n >= 1"));
    }
    path(&vec![1.0; n - 1], &vec![0.0; n])
}

/// `C_n = Circ(n, {1})`, n >= 3.
pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidSize("C_n needs n >= 3"));
    }
    circulant(n, &[1])
}

/// `Circ(n, S)` with the connection set closed under negation mod n.
pub fn circulant(n: usize, connection: &[usize]) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidSize("circulant needs n >= 1"));
    }
    let mut row = vec![0.0; n];
    for &s in connection {
        if s == 0 {
            return Err(Error::SelfLoopRejected);
        }
        if s >= n {
            return Err(Error::InvalidArgument(format!(
                "connection {s} not below n = {n}"
            )));
        }
        row[s] = 1.0;
        row[n - s] = 1.0;
    }
    Graph::from_matrix(Matrix::from_fn(n, n, |j, k| row[(k + n - j) % n]))
}

/// Hypercube `Q_d` labelled by d-bit strings, most significant bit first, so
/// that `Q_d` coincides with `cartesian(K_2, Q_{d-1})` under product ordering.
pub fn hypercube(d: usize) -> Result<Graph> {
    if d == 0 {
        return Err(Error::InvalidSize("Q_d needs d >= 1"));
    }
    if d > 16 {
        return Err(Error::InvalidArgument(
            "hypercube dimension above 16 is not supported".into(),
        ));
    }
    let n = 1usize << d;
    let adj = Matrix::from_fn(
        n,
        n,
        |i, j| if (i ^ j).count_ones() == 1 { 1.0 } else { 0.0 },
    );
    let labels = (0..n).map(|i| format!("{i:0d$b}")).collect();
    Graph::from_matrix(adj)?.with_labels(labels)
}

/// Complement of an unweighted loop-free graph.
pub fn complement(g: &Graph) -> Result<Graph> {
    if !g.is_unweighted() || g.has_loops() {
        return Err(Error::Unsupported(
            "complement needs an unweighted loop-free graph".into(),
        ));
    }
    let n = g.n();
    let adj = Matrix::from_fn(n, n, |i, j| {
        if i != j && g.weight(i, j) == 0.0 {
            1.0
        } else {
            0.0
        }
    });
    Ok(Graph {
        adj,
        labels: g.labels.clone(),
    })
}

/// Join `G + H`: disjoint union plus every edge between the two sides.
/// Vertices of `G` come first.
pub fn join(g: &Graph, h: &Graph) -> Graph {
    let (n, m) = (g.n(), h.n());
    let mut adj = Matrix::zeros(n + m, n + m);
    adj.set_block(0, 0, g.adjacency());
    adj.set_block(n, n, h.adjacency());
    adj.set_block(0, n, &Matrix::ones(n, m));
    adj.set_block(n, 0, &Matrix::ones(m, n));
    let labels = match (&g.labels, &h.labels) {
        (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
        _ => None,
    };
    Graph { adj, labels }
}

/// Disjoint union with no connecting edges; `G` first.
pub fn disjoint_union(g: &Graph, h: &Graph) -> Graph {
    let (n, m) = (g.n(), h.n());
    let mut adj = Matrix::zeros(n + m, n + m);
    adj.set_block(0, 0, g.adjacency());
    adj.set_block(n, n, h.adjacency());
    Graph { adj, labels: None }
}
