//! Partition schemes of the connected-spanning-subgraph complex of a
//! cluster: the static level scheme, its flood-fill reformulation, the
//! returning scheme and the synthetic interpolation, together with the
//! verification machinery for the partition axiom, the tree-graph identity
//! and the structural properties of singleton trees.

mod explore;
mod partition;

pub use explore::{ExplorationTrace, TraceStep};
pub use partition::EdgePartition;

use std::collections::BTreeMap;
use std::collections::HashSet;

use rand::Rng;

use crate::cluster::{Cluster, EdgeSet, RootedTree, SpanningSubgraph};
use crate::enumerate::{connected_spanning_subgraphs, signed_connected_sum, spanning_trees};
use crate::error::{Error, Result};
use crate::system::{PolymerId, PolymerSystem};

/// Greedy (G) or returning (R) behaviour of a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Behaviour {
    G,
    R,
}

/// A total assignment of behaviours over ordered incompatible pairs
/// (child label, parent label). Pairs with equal labels are implicitly
/// greedy; pairs never queried may stay unset only if the scheme never
/// touches them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BehaviourVector {
    choice: BTreeMap<(PolymerId, PolymerId), Behaviour>,
}

impl BehaviourVector {
    pub fn all_g(sys: &PolymerSystem) -> Self {
        Self::uniform(sys, Behaviour::G)
    }

    pub fn all_r(sys: &PolymerSystem) -> Self {
        Self::uniform(sys, Behaviour::R)
    }

    fn uniform(sys: &PolymerSystem, b: Behaviour) -> Self {
        let mut choice = BTreeMap::new();
        for pair in sys.escape_pairs() {
            choice.insert((pair.gamma, pair.eps), b);
        }
        BehaviourVector { choice }
    }

    /// Per-polymer assignment lifted to pairs: the pair (child, parent)
    /// takes the child's behaviour.
    pub fn from_polymer_choice(sys: &PolymerSystem, of: impl Fn(PolymerId) -> Behaviour) -> Self {
        let mut choice = BTreeMap::new();
        for pair in sys.escape_pairs() {
            choice.insert((pair.gamma, pair.eps), of(pair.gamma));
        }
        BehaviourVector { choice }
    }

    pub fn random(sys: &PolymerSystem, rng: &mut impl Rng) -> Self {
        let mut choice = BTreeMap::new();
        for pair in sys.escape_pairs() {
            let b = if rng.gen_bool(0.5) {
                Behaviour::G
            } else {
                Behaviour::R
            };
            choice.insert((pair.gamma, pair.eps), b);
        }
        BehaviourVector { choice }
    }

    pub fn set(&mut self, child: PolymerId, parent: PolymerId, b: Behaviour) {
        self.choice.insert((child, parent), b);
    }

    pub fn get(&self, child: PolymerId, parent: PolymerId) -> Behaviour {
        if child == parent {
            return Behaviour::G;
        }
        self.choice
            .get(&(child, parent))
            .copied()
            .unwrap_or(Behaviour::G)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&(PolymerId, PolymerId), &Behaviour)> {
        self.choice.iter()
    }
}

/// The implemented partition schemes.
#[derive(Debug, Clone, PartialEq)]
pub enum SchemeKind {
    /// Static formulation: levels in H decide selection and removal.
    PenroseStatic,
    /// Flood-fill exploration; equivalent to the static scheme.
    Greedy,
    /// Exploration preferring differently-labelled vertices.
    Returning,
    /// Interpolation between greedy and returning, driven per pair.
    Synthetic(BehaviourVector),
}

impl SchemeKind {
    /// Is the boundary edge (child candidate, boundary vertex) a
    /// returning-type step?
    fn step_is_ret(&self) -> impl Fn(&Cluster, usize, usize) -> bool + '_ {
        move |cluster: &Cluster, child: usize, parent: usize| match self {
            SchemeKind::PenroseStatic | SchemeKind::Greedy => false,
            SchemeKind::Returning => cluster.label(child) != cluster.label(parent),
            SchemeKind::Synthetic(g) => {
                let (lc, lp) = (cluster.label(child), cluster.label(parent));
                lc != lp && g.get(lc, lp) == Behaviour::R
            }
        }
    }
}

/// Runs the scheme's exploration on a connected spanning subgraph,
/// returning the selected spanning tree and the iteration trace.
///
/// Exploration restricted to spanning trees is the identity.
pub fn explore(kind: &SchemeKind, h: &SpanningSubgraph<'_>) -> Result<(RootedTree, ExplorationTrace)> {
    let cluster = h.cluster;
    match kind {
        SchemeKind::PenroseStatic => {
            let tree = explore::explore_penrose_static(cluster, h.edges)?;
            // The flood-fill loop realises the same scheme; reuse its trace.
            let is_ret = kind.step_is_ret();
            let (loop_tree, trace) = explore::explore_loop(cluster, h.edges, &is_ret)?;
            debug_assert_eq!(tree, loop_tree);
            Ok((tree, trace))
        }
        _ => {
            let is_ret = kind.step_is_ret();
            explore::explore_loop(cluster, h.edges, &is_ret)
        }
    }
}

/// Partitions the non-tree edges of the cluster into admissible and
/// conflicting sets for the given scheme.
pub fn edge_partition(kind: &SchemeKind, cluster: &Cluster, tree: &RootedTree) -> Result<EdgePartition> {
    if tree.len() != cluster.len() {
        return Err(Error::NotSpanningTree);
    }
    let part = match kind {
        SchemeKind::PenroseStatic | SchemeKind::Greedy => {
            partition::penrose_partition(cluster, tree)?
        }
        SchemeKind::Returning | SchemeKind::Synthetic(_) => {
            let is_ret = kind.step_is_ret();
            partition::class_partition(cluster, tree, &is_ret)?
        }
    };
    part.check_exact_cover(cluster, tree)?;
    Ok(part)
}

/// S(T) = (V, E(T) ⊎ admissible(T)), the top of the interval of T.
pub fn scheme_map(kind: &SchemeKind, cluster: &Cluster, tree: &RootedTree) -> Result<EdgeSet> {
    let part = edge_partition(kind, cluster, tree)?;
    Ok(tree.edge_set(cluster).union(part.admissible))
}

/// Singleton trees: spanning trees fixed by the scheme map (no admissible
/// non-tree edges).
pub fn singleton_trees(kind: &SchemeKind, cluster: &Cluster) -> Result<Vec<RootedTree>> {
    let mut out = Vec::new();
    for tree in spanning_trees(cluster)? {
        let part = edge_partition(kind, cluster, &tree)?;
        if part.admissible.is_empty() {
            out.push(tree);
        }
    }
    Ok(out)
}

/// Σ_H (−1)^{|E(H)|} over connected spanning subgraphs, minus
/// (−1)^{|V|−1}·#singleton trees. Zero for every partition scheme.
pub fn penrose_identity_residual(kind: &SchemeKind, cluster: &Cluster, cap: usize) -> Result<i64> {
    let lhs = if cluster.len() == 1 {
        1
    } else {
        signed_connected_sum(cluster, cap)?
    };
    let count = singleton_trees(kind, cluster)?.len() as i64;
    let sign = if (cluster.len() - 1).is_multiple_of(2) { 1 } else { -1 };
    Ok(lhs - sign * count)
}

/// Outcome of the partition-axiom verification on one cluster.
#[derive(Debug, Clone)]
pub struct SchemeReport {
    pub tree_count: usize,
    pub subgraph_count: usize,
    pub interval_size_sum: usize,
    pub failures: Vec<String>,
}

impl SchemeReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Verifies the partition axiom on a cluster: the intervals [T, S(T)] are
/// pairwise disjoint, cover the connected spanning subgraphs exactly, the
/// exploration maps each subgraph to its interval's tree, single admissible
/// additions are invisible to the exploration and single conflicting
/// additions never are.
pub fn verify_partition_scheme(kind: &SchemeKind, cluster: &Cluster, cap: usize) -> Result<SchemeReport> {
    let trees = spanning_trees(cluster)?;
    let mut failures = Vec::new();
    let mut interval_size_sum = 0usize;
    let mut by_tree: BTreeMap<EdgeSet, (EdgeSet, EdgeSet)> = BTreeMap::new();

    for tree in &trees {
        let t_edges = tree.edge_set(cluster);
        let part = edge_partition(kind, cluster, tree)?;
        interval_size_sum += 1usize << part.admissible.len();
        let top = t_edges.union(part.admissible);
        by_tree.insert(t_edges, (top, part.conflicting));

        // Exploration fixes trees.
        let (t2, trace) = explore(kind, &SpanningSubgraph::new(cluster, t_edges))?;
        if t2.edge_set(cluster) != t_edges {
            failures.push(format!("tree {:?} not fixed by exploration", t_edges));
        }
        if let Err(e) = trace.check_invariants(cluster) {
            failures.push(format!("trace invariants on tree {:?}: {e}", t_edges));
        }
        // Single admissible additions keep the tree; single conflicting
        // additions change it (checked from the tree itself and from the
        // interval top).
        for e in part.admissible.iter() {
            let mut es = t_edges;
            es.insert(e);
            let (t3, _) = explore(kind, &SpanningSubgraph::new(cluster, es))?;
            if t3.edge_set(cluster) != t_edges {
                failures.push(format!(
                    "admissible edge {e} changes the tree {:?}",
                    t_edges
                ));
            }
        }
        for e in part.conflicting.iter() {
            for base in [t_edges, top] {
                let mut es = base;
                es.insert(e);
                let (t3, _) = explore(kind, &SpanningSubgraph::new(cluster, es))?;
                if t3.edge_set(cluster) == t_edges {
                    failures.push(format!(
                        "conflicting edge {e} kept the tree {:?}",
                        t_edges
                    ));
                }
            }
        }
    }

    // Coverage: every connected spanning subgraph lies in exactly the
    // interval of its explored tree.
    let mut subgraph_count = 0usize;
    let mut seen: HashSet<EdgeSet> = HashSet::new();
    for h in connected_spanning_subgraphs(cluster, cap)? {
        subgraph_count += 1;
        let (t, trace) = explore(kind, &SpanningSubgraph::new(cluster, h))?;
        if let Err(e) = trace.check_invariants(cluster) {
            failures.push(format!("trace invariants on {:?}: {e}", h));
        }
        let t_edges = t.edge_set(cluster);
        let Some(&(top, _)) = by_tree.get(&t_edges) else {
            failures.push(format!("explored tree of {:?} not in tree list", h));
            continue;
        };
        if !t_edges.is_subset_of(h) || !h.is_subset_of(top) {
            failures.push(format!("subgraph {:?} outside its interval", h));
        }
        if !seen.insert(h) {
            failures.push(format!("subgraph {:?} seen twice", h));
        }
    }
    if interval_size_sum != subgraph_count {
        failures.push(format!(
            "interval sizes sum to {interval_size_sum}, expected {subgraph_count}"
        ));
    }

    Ok(SchemeReport {
        tree_count: trees.len(),
        subgraph_count,
        interval_size_sum,
        failures,
    })
}

/// Structural checks on every singleton tree of the scheme.
///
/// Flood-fill: per-level and per-children label compatibility and
/// distinctness. Returning: per-class compatibility, children compatibility
/// off the parent label, the no-return property of returning steps and the
/// lazy self-avoiding-walk property of root-path labels.
pub fn singleton_properties_check(
    kind: &SchemeKind,
    sys: &PolymerSystem,
    cluster: &Cluster,
) -> Result<Vec<String>> {
    match kind {
        SchemeKind::Greedy | SchemeKind::PenroseStatic => {}
        SchemeKind::Returning => {}
        SchemeKind::Synthetic(_) => return Err(Error::WrongKind),
    }
    let mut failures = Vec::new();
    for tree in singleton_trees(kind, cluster)? {
        let depth = tree.depths();
        let children = tree.children();
        match kind {
            SchemeKind::Greedy | SchemeKind::PenroseStatic => {
                // Levels carry pairwise-compatible, distinct labels.
                let max_depth = depth.iter().copied().max().unwrap_or(0);
                for d in 0..=max_depth {
                    let level: Vec<usize> =
                        (0..cluster.len()).filter(|&v| depth[v] == d).collect();
                    for (ai, &a) in level.iter().enumerate() {
                        for &b in &level[ai + 1..] {
                            if sys.incompatible(cluster.label(a), cluster.label(b)) {
                                failures.push(format!(
                                    "level {d} carries incompatible labels at {a},{b}"
                                ));
                            }
                        }
                    }
                }
                for (v, ch) in children.iter().enumerate() {
                    let mut support: Vec<PolymerId> =
                        ch.iter().map(|&c| cluster.label(c)).collect();
                    support.sort_unstable();
                    support.dedup();
                    if support.len() != ch.len() {
                        failures.push(format!("vertex {v} has children sharing a label"));
                    }
                    for &c in ch {
                        if !sys.incompatible(cluster.label(c), cluster.label(v)) {
                            failures.push(format!("child {c} compatible with its parent {v}"));
                        }
                    }
                }
            }
            SchemeKind::Returning => {
                // Children: distinct labels, and off the parent label they
                // form a compatible subset of the parent's incompatibles.
                for (v, ch) in children.iter().enumerate() {
                    let mut support: Vec<PolymerId> =
                        ch.iter().map(|&c| cluster.label(c)).collect();
                    support.sort_unstable();
                    support.dedup();
                    if support.len() != ch.len() {
                        failures.push(format!("vertex {v} has children sharing a label"));
                    }
                    let off: Vec<PolymerId> = support
                        .iter()
                        .copied()
                        .filter(|&l| l != cluster.label(v))
                        .collect();
                    for (ai, &a) in off.iter().enumerate() {
                        for &b in &off[ai + 1..] {
                            if sys.incompatible(a, b) {
                                failures.push(format!(
                                    "children of {v} carry incompatible labels off the parent"
                                ));
                            }
                        }
                    }
                }
                // Classes carry pairwise-compatible labels.
                let class = root_path_classes(cluster, &tree);
                let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
                for (v, &c) in class.iter().enumerate() {
                    by_class.entry(c).or_default().push(v);
                }
                for (c, members) in by_class {
                    for (ai, &a) in members.iter().enumerate() {
                        for &b in &members[ai + 1..] {
                            if sys.incompatible(cluster.label(a), cluster.label(b)) {
                                failures.push(format!(
                                    "class {c} carries incompatible labels at {a},{b}"
                                ));
                            }
                        }
                    }
                }
                // No-return property and lazy self-avoiding root paths.
                for v in 1..cluster.len() {
                    let p = tree.parent(v).unwrap();
                    if cluster.label(v) != cluster.label(p) {
                        let path = tree.root_path(p);
                        if path.iter().any(|&w| cluster.label(w) == cluster.label(v)) {
                            failures.push(format!("returning step at {v} reuses a label"));
                        }
                    }
                    if !is_lazy_self_avoiding(cluster, &tree.root_path(v)) {
                        failures.push(format!("root path of {v} is not lazy self-avoiding"));
                    }
                }
            }
            SchemeKind::Synthetic(_) => unreachable!(),
        }
    }
    Ok(failures)
}

/// Root-path classes under the same/different step classification.
fn root_path_classes(cluster: &Cluster, tree: &RootedTree) -> Vec<usize> {
    let n = cluster.len();
    let depth = tree.depths();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| depth[v]);
    let mut class = vec![0usize; n];
    let mut intern: BTreeMap<(usize, bool), usize> = BTreeMap::new();
    let mut next = 1usize;
    for &v in &order {
        if v == 0 {
            continue;
        }
        let p = tree.parent(v).unwrap();
        let s = cluster.label(v) != cluster.label(p);
        let id = *intern.entry((class[p], s)).or_insert_with(|| {
            let id = next;
            next += 1;
            id
        });
        class[v] = id;
    }
    class
}

/// Do the labels along the vertex path form a lazy self-avoiding walk
/// (repeats allowed only in consecutive runs)?
fn is_lazy_self_avoiding(cluster: &Cluster, path: &[usize]) -> bool {
    let mut seen: Vec<PolymerId> = Vec::new();
    for &v in path {
        let l = cluster.label(v);
        if seen.last() == Some(&l) {
            continue;
        }
        if seen.contains(&l) {
            return false;
        }
        seen.push(l);
    }
    true
}
