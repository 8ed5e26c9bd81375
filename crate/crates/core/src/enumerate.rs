//! Enumeration primitives over a cluster: connected spanning subgraphs,
//! spanning trees, and the matrix-tree determinant used as an independent
//! count oracle.

use crate::cluster::{Cluster, EdgeSet, RootedTree, DEFAULT_EDGE_CAP};
use crate::error::{Error, Result};

/// Yields every edge set that spans the cluster connectedly, in ascending
/// mask order. Guarded by `cap` on the edge count (2^|E| masks).
pub fn connected_spanning_subgraphs(
    cluster: &Cluster,
    cap: usize,
) -> Result<impl Iterator<Item = EdgeSet> + '_> {
    let m = cluster.edge_count();
    if m > cap || m > 31 {
        return Err(Error::TooLarge {
            size: m,
            cap: cap.min(31),
        });
    }
    if !cluster.is_cluster() {
        return Err(Error::Disconnected);
    }
    let total: u32 = if m == 0 { 1 } else { 1u32 << m };
    Ok((0..total)
        .map(EdgeSet)
        .filter(move |&es| cluster.spans_connected(es)))
}

/// Σ over connected spanning subgraphs of (−1)^{|E(H)|}, in exact integer
/// arithmetic. This is the Ursell value for clusters with ≥ 2 vertices.
pub fn signed_connected_sum(cluster: &Cluster, cap: usize) -> Result<i64> {
    let mut sum = 0i64;
    for es in connected_spanning_subgraphs(cluster, cap)? {
        sum += if es.len() % 2 == 0 { 1 } else { -1 };
    }
    Ok(sum)
}

/// Yields every spanning tree of the cluster exactly once, rooted at 0, in
/// ascending edge-mask order.
pub fn spanning_trees(cluster: &Cluster) -> Result<Vec<RootedTree>> {
    if !cluster.is_cluster() {
        return Err(Error::Disconnected);
    }
    let n = cluster.len();
    if n == 1 {
        return Ok(vec![RootedTree::from_edge_set(cluster, EdgeSet::EMPTY)?]);
    }
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(n - 1);
    // DFS over increasing edge indices; prune on cycle creation via
    // union-find over the chosen edges.
    fn rec(
        cluster: &Cluster,
        start: usize,
        chosen: &mut Vec<usize>,
        uf: &mut Vec<usize>,
        need: usize,
        out: &mut Vec<RootedTree>,
    ) {
        if chosen.len() == need {
            let mut es = EdgeSet::EMPTY;
            for &e in chosen.iter() {
                es.insert(e);
            }
            out.push(RootedTree::from_edge_set(cluster, es).expect("acyclic spanning set"));
            return;
        }
        let m = cluster.edge_count();
        let remaining = need - chosen.len();
        for e in start..m {
            if m - e < remaining {
                break;
            }
            let (i, j) = cluster.edges()[e];
            let (ri, rj) = (find(uf, i), find(uf, j));
            if ri == rj {
                continue;
            }
            let saved = uf.clone();
            uf[ri] = rj;
            chosen.push(e);
            rec(cluster, e + 1, chosen, uf, need, out);
            chosen.pop();
            *uf = saved;
        }
    }
    fn find(uf: &mut [usize], mut v: usize) -> usize {
        while uf[v] != v {
            uf[v] = uf[uf[v]];
            v = uf[v];
        }
        v
    }
    let mut uf: Vec<usize> = (0..n).collect();
    rec(cluster, 0, &mut chosen, &mut uf, n - 1, &mut out);
    Ok(out)
}

/// Number of spanning trees by the matrix-tree theorem: determinant of the
/// Laplacian with row/column 0 deleted, in fraction-free integer arithmetic.
pub fn matrix_tree_count(cluster: &Cluster) -> u64 {
    let n = cluster.len();
    if n <= 1 {
        return 1;
    }
    let mut lap = vec![vec![0i128; n]; n];
    for &(i, j) in cluster.edges() {
        lap[i][j] -= 1;
        lap[j][i] -= 1;
        lap[i][i] += 1;
        lap[j][j] += 1;
    }
    // Bareiss elimination on the (n-1)x(n-1) minor.
    let k = n - 1;
    let mut a = vec![vec![0i128; k]; k];
    for r in 0..k {
        for c in 0..k {
            a[r][c] = lap[r + 1][c + 1];
        }
    }
    let mut prev = 1i128;
    for p in 0..k {
        if a[p][p] == 0 {
            let Some(swap) = (p + 1..k).find(|&r| a[r][p] != 0) else {
                return 0;
            };
            a.swap(p, swap);
            // A row swap flips the determinant sign; counts are positive so
            // we track parity via negating one row.
            for entry in a[p].iter_mut() {
                *entry = -*entry;
            }
        }
        for r in p + 1..k {
            for c in p + 1..k {
                a[r][c] = (a[r][c] * a[p][p] - a[r][p] * a[p][c]) / prev;
            }
            a[r][p] = 0;
        }
        prev = a[p][p];
    }
    a[k - 1][k - 1].unsigned_abs() as u64
}

/// Convenience: pairs the enumerated subgraph count with an independent
/// recount that walks the masks in descending order.
pub fn recount_connected_spanning(cluster: &Cluster, cap: usize) -> Result<(usize, usize)> {
    let forward = connected_spanning_subgraphs(cluster, cap)?.count();
    let m = cluster.edge_count();
    let total: u32 = if m == 0 { 1 } else { 1u32 << m };
    let backward = (0..total)
        .rev()
        .map(EdgeSet)
        .filter(|&es| cluster.spans_connected(es))
        .count();
    Ok((forward, backward))
}

pub fn default_cap() -> usize {
    DEFAULT_EDGE_CAP
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{example_system, triangle_cluster};

    #[test]
    fn two_vertex_cluster_has_one_subgraph() {
        let sys = example_system();
        let c = Cluster::induce_names(&sys, &["a", "b"]).unwrap();
        let subs: Vec<_> = connected_spanning_subgraphs(&c, DEFAULT_EDGE_CAP)
            .unwrap()
            .collect();
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].len(), 1);
    }

    #[test]
    fn triangle_has_four_connected_spanning_subgraphs() {
        let c = triangle_cluster();
        let subs: Vec<_> = connected_spanning_subgraphs(&c, DEFAULT_EDGE_CAP)
            .unwrap()
            .collect();
        // Brute-force oracle: three 2-edge paths plus the full triangle.
        assert_eq!(subs.len(), 4);
    }

    #[test]
    fn path_on_three_vertices_needs_both_edges() {
        let sys = example_system();
        let c = Cluster::induce_names(&sys, &["a", "b", "c"]).unwrap();
        assert_eq!(c.edge_count(), 2);
        let subs: Vec<_> = connected_spanning_subgraphs(&c, DEFAULT_EDGE_CAP)
            .unwrap()
            .collect();
        assert_eq!(subs.len(), 1);
        let trees = spanning_trees(&c).unwrap();
        assert_eq!(trees.len(), 1);
    }

    #[test]
    fn triangle_has_three_spanning_trees() {
        let c = triangle_cluster();
        let trees = spanning_trees(&c).unwrap();
        assert_eq!(trees.len(), 3);
        assert_eq!(matrix_tree_count(&c), 3);
    }

    #[test]
    fn four_cycle_has_four_spanning_trees() {
        // Distinct labels w-x-y-z in a cycle.
        let sys = crate::system::PolymerSystem::new(
            &["w", "x", "y", "z"],
            &[("w", "x"), ("x", "y"), ("y", "z"), ("z", "w")],
            true,
        )
        .unwrap();
        let c = Cluster::induce_names(&sys, &["w", "x", "y", "z"]).unwrap();
        assert_eq!(c.edge_count(), 4);
        assert_eq!(spanning_trees(&c).unwrap().len(), 4);
        assert_eq!(matrix_tree_count(&c), 4);
    }

    #[test]
    fn edge_cap_enforced() {
        let c = triangle_cluster();
        assert!(matches!(
            connected_spanning_subgraphs(&c, 2).err(),
            Some(Error::TooLarge { .. })
        ));
    }
}
