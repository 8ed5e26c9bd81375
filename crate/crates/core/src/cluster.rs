//! Clusters induced by polymer vectors, their spanning subgraphs and
//! rooted spanning trees.
//!
//! A vector ξ of polymers induces a graph on the index set {0..n}: vertices
//! i ≠ j are joined iff ξ_i ≈ ξ_j. Loops never materialise; equal labels are
//! joined because the relation is reflexive. The vector is a cluster when
//! the induced graph is connected. Vertex 0 is the root throughout.

use crate::error::{Error, Result};
use crate::system::{PolymerId, PolymerSystem};

/// Hard ceiling on cluster size so vertex sets fit in a `u64` mask.
pub const MAX_VERTICES: usize = 64;

/// Default cap on the edge count for 2^|E| enumerations (16.7M masks).
pub const DEFAULT_EDGE_CAP: usize = 24;

/// Subset of a cluster's edge list, as a bitmask over edge indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet(pub u32);

impl EdgeSet {
    pub const EMPTY: EdgeSet = EdgeSet(0);

    pub fn contains(self, edge: usize) -> bool {
        self.0 >> edge & 1 == 1
    }

    pub fn insert(&mut self, edge: usize) {
        self.0 |= 1 << edge;
    }

    pub fn remove(&mut self, edge: usize) {
        self.0 &= !(1 << edge);
    }

    pub fn union(self, other: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 | other.0)
    }

    pub fn minus(self, other: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: EdgeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }
}

/// A polymer vector together with its induced graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    labels: Vec<PolymerId>,
    /// Induced edges (i, j) with i < j, in lexicographic order.
    edges: Vec<(usize, usize)>,
    /// Vertex adjacency as bitmasks over vertex indices.
    adj: Vec<u64>,
    connected: bool,
}

impl Cluster {
    /// Induces the cluster graph of `labels` over `sys`.
    pub fn induce(sys: &PolymerSystem, labels: &[PolymerId]) -> Result<Cluster> {
        if labels.is_empty() {
            return Err(Error::EmptyVector);
        }
        if labels.len() > MAX_VERTICES {
            return Err(Error::TooLarge {
                size: labels.len(),
                cap: MAX_VERTICES,
            });
        }
        for &l in labels {
            if l >= sys.len() {
                return Err(Error::UnknownPolymer(format!("#{l}")));
            }
        }
        let n = labels.len();
        let mut edges = Vec::new();
        let mut adj = vec![0u64; n];
        for i in 0..n {
            for j in (i + 1)..n {
                if sys.incompatible(labels[i], labels[j]) {
                    edges.push((i, j));
                    adj[i] |= 1 << j;
                    adj[j] |= 1 << i;
                }
            }
        }
        let connected = connected_on(&adj, n, !0u64 >> (64 - n));
        Ok(Cluster {
            labels: labels.to_vec(),
            edges,
            adj,
            connected,
        })
    }

    pub fn induce_names<S: AsRef<str>>(sys: &PolymerSystem, names: &[S]) -> Result<Cluster> {
        let labels: Result<Vec<_>> = names.iter().map(|s| sys.id(s.as_ref())).collect();
        Cluster::induce(sys, &labels?)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[PolymerId] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> PolymerId {
        self.labels[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_cluster(&self) -> bool {
        self.connected
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.adj[i] >> j & 1 == 1
    }

    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        let key = (i.min(j), i.max(j));
        self.edges.binary_search(&key).ok()
    }

    /// Distinct labels occurring in the vector (the support of ξ).
    pub fn support(&self) -> Vec<PolymerId> {
        let mut s = self.labels.clone();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn full_edge_set(&self) -> EdgeSet {
        EdgeSet(if self.edges.len() == 32 {
            !0u32
        } else {
            (1u32 << self.edges.len()) - 1
        })
    }

    /// Vertex adjacency masks restricted to the edges in `es`.
    pub fn adjacency_of(&self, es: EdgeSet) -> Vec<u64> {
        let mut adj = vec![0u64; self.len()];
        for (idx, &(i, j)) in self.edges.iter().enumerate() {
            if es.contains(idx) {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
        adj
    }

    /// Is (V, es) connected on the full vertex set?
    pub fn spans_connected(&self, es: EdgeSet) -> bool {
        let adj = self.adjacency_of(es);
        connected_on(&adj, self.len(), !0u64 >> (64 - self.len()))
    }
}

/// Connectivity of `within` (a vertex mask) under `adj`, starting from its
/// lowest vertex. `n` is the total vertex count.
pub(crate) fn connected_on(adj: &[u64], n: usize, within: u64) -> bool {
    debug_assert!(n <= 64);
    if within == 0 {
        return true;
    }
    let start = within.trailing_zeros() as u64;
    let mut seen = 1u64 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0u64;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[v] & within & !seen;
        }
        seen |= next;
        frontier = next;
    }
    seen & within == within
}

/// A spanning subgraph of a cluster: all vertices, a subset of the edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpanningSubgraph<'a> {
    pub cluster: &'a Cluster,
    pub edges: EdgeSet,
}

impl<'a> SpanningSubgraph<'a> {
    pub fn new(cluster: &'a Cluster, edges: EdgeSet) -> Self {
        SpanningSubgraph { cluster, edges }
    }

    pub fn full(cluster: &'a Cluster) -> Self {
        SpanningSubgraph {
            cluster,
            edges: cluster.full_edge_set(),
        }
    }

    pub fn is_connected(&self) -> bool {
        self.cluster.spans_connected(self.edges)
    }
}

/// A spanning tree of a cluster, rooted at vertex 0, stored as parent
/// pointers (`parent[0]` is unused).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootedTree {
    parent: Vec<usize>,
}

impl RootedTree {
    /// Builds a tree from parent pointers, checking that it is acyclic,
    /// spanning, rooted at 0, and uses only cluster edges.
    pub fn new(cluster: &Cluster, parent: Vec<usize>) -> Result<RootedTree> {
        if parent.len() != cluster.len() {
            return Err(Error::NotSpanningTree);
        }
        for v in 1..parent.len() {
            let p = parent[v];
            if p >= parent.len() || !cluster.has_edge(v, p) {
                return Err(Error::NotSpanningTree);
            }
        }
        let t = RootedTree { parent };
        // Root-reachability of every vertex rules out cycles.
        for v in 1..t.parent.len() {
            let mut cur = v;
            let mut steps = 0;
            while cur != 0 {
                cur = t.parent[cur];
                steps += 1;
                if steps > t.parent.len() {
                    return Err(Error::NotSpanningTree);
                }
            }
        }
        Ok(t)
    }

    /// Reconstructs the rooted tree from an edge set of size n-1.
    pub fn from_edge_set(cluster: &Cluster, es: EdgeSet) -> Result<RootedTree> {
        let n = cluster.len();
        if es.len() != n - 1 || !cluster.spans_connected(es) {
            return Err(Error::NotSpanningTree);
        }
        let adj = cluster.adjacency_of(es);
        let mut parent = vec![0usize; n];
        let mut seen = 1u64;
        let mut stack = vec![0usize];
        while let Some(v) = stack.pop() {
            let mut m = adj[v] & !seen;
            while m != 0 {
                let w = m.trailing_zeros() as usize;
                m &= m - 1;
                parent[w] = v;
                seen |= 1 << w;
                stack.push(w);
            }
        }
        Ok(RootedTree { parent })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        (v != 0).then(|| self.parent[v])
    }

    /// Depth of every vertex (root at 0).
    pub fn depths(&self) -> Vec<usize> {
        let n = self.parent.len();
        let mut depth = vec![usize::MAX; n];
        depth[0] = 0;
        for v in 1..n {
            // Walk up until a known depth, then unwind.
            let mut path = vec![v];
            let mut cur = v;
            while depth[cur] == usize::MAX {
                cur = self.parent[cur];
                path.push(cur);
            }
            let mut d = depth[cur];
            for &w in path.iter().rev().skip(1) {
                d += 1;
                depth[w] = d;
            }
        }
        depth
    }

    /// Children lists in vertex order.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.parent.len()];
        for v in 1..self.parent.len() {
            ch[self.parent[v]].push(v);
        }
        ch
    }

    /// Vertices of the path root → v, inclusive.
    pub fn root_path(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while cur != 0 {
            cur = self.parent[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }

    pub fn edge_set(&self, cluster: &Cluster) -> EdgeSet {
        let mut es = EdgeSet::EMPTY;
        for v in 1..self.parent.len() {
            let idx = cluster
                .edge_index(v, self.parent[v])
                .expect("tree edge must be a cluster edge");
            es.insert(idx);
        }
        es
    }
}
