//! Tree edge-complement partitions: classify every non-tree edge of a
//! cluster as admissible (its presence does not change the explored tree)
//! or conflicting (its presence always does).
//!
//! The flood-fill scheme uses only levels and the vertex order. The
//! returning and synthetic schemes refine levels into equivalence classes
//! of root paths under the per-step classification (same/different labels,
//! or the behaviour vector), and then case-split on the position of the
//! shallower endpoint's class relative to the deeper endpoint's class path.

use crate::cluster::{Cluster, EdgeSet, RootedTree};
use crate::error::{Error, Result};

/// Partition of the non-tree edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgePartition {
    pub admissible: EdgeSet,
    pub conflicting: EdgeSet,
}

impl EdgePartition {
    pub fn check_exact_cover(&self, cluster: &Cluster, tree: &RootedTree) -> Result<()> {
        let tree_edges = tree.edge_set(cluster);
        let rest = cluster.full_edge_set().minus(tree_edges);
        let disjoint = self.admissible.0 & self.conflicting.0 == 0;
        if !disjoint || self.admissible.union(self.conflicting) != rest {
            let e = rest
                .minus(self.admissible.union(self.conflicting))
                .iter()
                .next()
                .unwrap_or(0);
            let (i, j) = cluster.edges().get(e).copied().unwrap_or((0, 0));
            return Err(Error::UnclassifiedEdge(i, j));
        }
        Ok(())
    }
}

/// Level-based partition for the flood-fill scheme: a non-tree edge
/// between levels k <= l conflicts when l >= k+2, or when l = k+1 and the
/// shallow endpoint precedes the deep endpoint's parent; it is admissible
/// when the levels agree, or when l = k+1 and the shallow endpoint follows
/// the parent.
pub(crate) fn penrose_partition(cluster: &Cluster, tree: &RootedTree) -> Result<EdgePartition> {
    let depth = tree.depths();
    let tree_edges = tree.edge_set(cluster);
    let mut adm = EdgeSet::EMPTY;
    let mut conf = EdgeSet::EMPTY;
    for (idx, &(a, b)) in cluster.edges().iter().enumerate() {
        if tree_edges.contains(idx) {
            continue;
        }
        let (i, j) = if depth[a] >= depth[b] { (a, b) } else { (b, a) };
        let (l, k) = (depth[i], depth[j]);
        if l == k {
            adm.insert(idx);
        } else if l == k + 1 {
            let p = tree.parent(i).expect("deep endpoint is not the root");
            if j < p {
                conf.insert(idx);
            } else {
                adm.insert(idx);
            }
        } else {
            conf.insert(idx);
        }
    }
    Ok(EdgePartition {
        admissible: adm,
        conflicting: conf,
    })
}

/// Root-path equivalence classes under a per-vertex step classification.
struct ClassInfo {
    /// Class id per vertex (root has class 0).
    class: Vec<usize>,
    /// Parent class per class (class 0 is its own parent).
    class_parent: Vec<usize>,
    /// Step classification of each class (true = returning-like);
    /// meaningless for the root class.
    class_is_ret: Vec<bool>,
}

impl ClassInfo {
    /// Is `anc` an ancestor of `c` in the class tree (inclusive)?
    fn is_ancestor(&self, anc: usize, mut c: usize) -> bool {
        loop {
            if c == anc {
                return true;
            }
            if c == 0 {
                return false;
            }
            c = self.class_parent[c];
        }
    }

    /// The child of `anc` on the path from `anc` down to `c`; requires
    /// `anc` to be a strict ancestor of `c`.
    fn child_towards(&self, anc: usize, mut c: usize) -> usize {
        loop {
            let p = self.class_parent[c];
            if p == anc {
                return c;
            }
            c = p;
        }
    }
}

fn build_classes(
    cluster: &Cluster,
    tree: &RootedTree,
    step_is_ret: &dyn Fn(&Cluster, usize, usize) -> bool,
) -> ClassInfo {
    let n = cluster.len();
    let depth = tree.depths();
    // Process vertices by increasing depth; intern (parent_class, step) pairs.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| depth[v]);
    let mut class = vec![0usize; n];
    let mut class_parent = vec![0usize];
    let mut class_is_ret = vec![false];
    let mut intern: std::collections::HashMap<(usize, bool), usize> =
        std::collections::HashMap::new();
    for &v in &order {
        if v == 0 {
            continue;
        }
        let p = tree.parent(v).unwrap();
        let s = step_is_ret(cluster, v, p);
        let key = (class[p], s);
        let id = *intern.entry(key).or_insert_with(|| {
            class_parent.push(class[p]);
            class_is_ret.push(s);
            class_parent.len() - 1
        });
        class[v] = id;
    }
    ClassInfo {
        class,
        class_parent,
        class_is_ret,
    }
}

/// Class-based partition shared by the returning scheme and its synthetic
/// generalisation. `step_is_ret(cluster, child, parent)` classifies a step;
/// the returning scheme uses "labels differ", the synthetic scheme uses
/// "labels differ and the behaviour vector says R".
pub(crate) fn class_partition(
    cluster: &Cluster,
    tree: &RootedTree,
    step_is_ret: &dyn Fn(&Cluster, usize, usize) -> bool,
) -> Result<EdgePartition> {
    let depth = tree.depths();
    let info = build_classes(cluster, tree, step_is_ret);
    let tree_edges = tree.edge_set(cluster);
    let mut adm = EdgeSet::EMPTY;
    let mut conf = EdgeSet::EMPTY;
    for (idx, &(a, b)) in cluster.edges().iter().enumerate() {
        if tree_edges.contains(idx) {
            continue;
        }
        let (i, j) = if depth[a] >= depth[b] { (a, b) } else { (b, a) };
        let ci = info.class[i];
        let cj = info.class[j];
        let p = tree.parent(i).expect("deep endpoint is not the root");
        let admissible = if cj == ci {
            // Same equivalence class: removable as a cousin edge.
            true
        } else if cj == info.class[p] {
            // Uncle edge: the shallow endpoint lives in the parent's class.
            let edge_ret = step_is_ret(cluster, i, j);
            let vertex_ret = info.class_is_ret[ci];
            match (edge_ret, vertex_ret) {
                (true, true) | (false, false) => j > p,
                (true, false) => false,
                (false, true) => true,
            }
        } else if info.is_ancestor(cj, info.class[p]) {
            // Deep edge: the shallow endpoint's class is a strict ancestor
            // of the parent's class.
            let edge_ret = step_is_ret(cluster, i, j);
            if edge_ret {
                false
            } else {
                let c = info.child_towards(cj, info.class[p]);
                info.class_is_ret[c]
            }
        } else {
            // Off the class path entirely.
            false
        };
        if admissible {
            adm.insert(idx);
        } else {
            conf.insert(idx);
        }
    }
    Ok(EdgePartition {
        admissible: adm,
        conflicting: conf,
    })
}
