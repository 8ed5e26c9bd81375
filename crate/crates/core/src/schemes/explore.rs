//! Root-outward exploration of a connected spanning subgraph.
//!
//! One loop drives all three explorative schemes. Per iteration the
//! unexplored part is split into connected components; inside each
//! component the candidate vertices next to the boundary are classified by
//! their boundary edges. A component containing a returning-classified
//! vertex advances only those vertices and defers the rest; otherwise the
//! whole candidate set advances (flood-fill). Parent edges are chosen by
//! the minimum admissible boundary vertex; every other decided edge is
//! removed. The surviving edges form the selected spanning tree.

use crate::cluster::{Cluster, EdgeSet, RootedTree};
use crate::error::{Error, Result};

/// Edge classification hook: does the boundary edge (candidate `i`,
/// boundary `j`) behave "returning"? Greedy: never. Returning: labels
/// differ. Synthetic: labels differ and the behaviour vector says R.
pub(crate) type EdgeIsRet<'a> = &'a dyn Fn(&Cluster, usize, usize) -> bool;

/// Per-iteration record of the exploration state (masks over vertices,
/// edge sets over the cluster's edge list).
#[derive(Debug, Clone)]
pub struct TraceStep {
    /// Explored tree vertices at the start of the iteration (T_k).
    pub explored: u64,
    /// Unexplored vertices (U_k).
    pub unexplored: u64,
    /// Neighbours of the tree inside the unexplored part (P_k).
    pub potential: u64,
    /// Tree vertices adjacent to the unexplored part (B_k).
    pub boundary: u64,
    /// Vertices selected this iteration (S_k).
    pub selected: u64,
    /// Candidates deferred this iteration (I_k).
    pub ignored: u64,
    /// Edges of the current subgraph at the start of the iteration (H_k).
    pub h_edges: EdgeSet,
    /// Edges removed during the iteration.
    pub removed: EdgeSet,
    /// Parent edges selected this iteration, as (vertex, parent).
    pub parents: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct ExplorationTrace {
    /// Edge set of the input subgraph H.
    pub input_edges: EdgeSet,
    pub steps: Vec<TraceStep>,
    /// Edge set surviving after the last iteration (the tree).
    pub final_edges: EdgeSet,
}

pub(crate) fn explore_loop(
    cluster: &Cluster,
    h: EdgeSet,
    edge_is_ret: EdgeIsRet<'_>,
) -> Result<(RootedTree, ExplorationTrace)> {
    let n = cluster.len();
    if !cluster.spans_connected(h) {
        return Err(Error::Disconnected);
    }
    let all: u64 = !0u64 >> (64 - n);
    let mut cur = h;
    let mut explored: u64 = 1;
    let mut parent = vec![0usize; n];
    let mut steps = Vec::new();

    while explored != all {
        let adj = cluster.adjacency_of(cur);
        let u_mask = all & !explored;
        let mut p_mask = 0u64;
        let mut b_mask = 0u64;
        {
            let mut m = u_mask;
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                if adj[v] & explored != 0 {
                    p_mask |= 1 << v;
                }
            }
            let mut m = explored;
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                if adj[v] & u_mask != 0 {
                    b_mask |= 1 << v;
                }
            }
        }
        if p_mask == 0 {
            return Err(Error::Disconnected);
        }

        let mut selected_all = 0u64;
        let mut ignored_all = 0u64;
        let mut removed = EdgeSet::EMPTY;
        let mut parents_step = Vec::new();

        // Components of H_k restricted to the unexplored part, visited in
        // order of least vertex.
        let mut todo = u_mask;
        while todo != 0 {
            let start = todo.trailing_zeros() as usize;
            let mut comp = 1u64 << start;
            let mut frontier = comp;
            while frontier != 0 {
                let mut next = 0u64;
                let mut f = frontier;
                while f != 0 {
                    let v = f.trailing_zeros() as usize;
                    f &= f - 1;
                    next |= adj[v] & u_mask & !comp;
                }
                comp |= next;
                frontier = next;
            }
            todo &= !comp;

            let cand = comp & p_mask;
            if cand == 0 {
                continue;
            }
            // Classify candidates by their boundary edges in H_k.
            let mut ret_vertices = 0u64;
            let mut m = cand;
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                let mut bs = adj[v] & b_mask;
                while bs != 0 {
                    let j = bs.trailing_zeros() as usize;
                    bs &= bs - 1;
                    if edge_is_ret(cluster, v, j) {
                        ret_vertices |= 1 << v;
                        break;
                    }
                }
            }
            let comp_is_ret = ret_vertices != 0;
            let selected_c = if comp_is_ret { ret_vertices } else { cand };
            let ignored_c = cand & !selected_c;

            // Deferred candidates lose their boundary edges.
            let mut m = ignored_c;
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                let mut bs = adj[v] & b_mask;
                while bs != 0 {
                    let j = bs.trailing_zeros() as usize;
                    bs &= bs - 1;
                    removed.insert(cluster.edge_index(v, j).unwrap());
                }
            }
            // Parent selection and uncle removal.
            let mut m = selected_c;
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                let mut best: Option<usize> = None;
                let mut bs = adj[v] & b_mask;
                while bs != 0 {
                    let j = bs.trailing_zeros() as usize;
                    bs &= bs - 1;
                    if !comp_is_ret || edge_is_ret(cluster, v, j) {
                        best = Some(best.map_or(j, |b| b.min(j)));
                    }
                }
                let p = best.expect("selected vertex has an eligible boundary edge");
                parent[v] = p;
                parents_step.push((v, p));
                let mut bs = adj[v] & b_mask;
                while bs != 0 {
                    let j = bs.trailing_zeros() as usize;
                    bs &= bs - 1;
                    if j != p {
                        removed.insert(cluster.edge_index(v, j).unwrap());
                    }
                }
            }
            // Cousins: edges among the vertices selected this iteration.
            let mut m = selected_c;
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                let mut ws = adj[v] & selected_c;
                while ws != 0 {
                    let w = ws.trailing_zeros() as usize;
                    ws &= ws - 1;
                    if w > v {
                        removed.insert(cluster.edge_index(v, w).unwrap());
                    }
                }
            }
            selected_all |= selected_c;
            ignored_all |= ignored_c;
        }

        steps.push(TraceStep {
            explored,
            unexplored: u_mask,
            potential: p_mask,
            boundary: b_mask,
            selected: selected_all,
            ignored: ignored_all,
            h_edges: cur,
            removed,
            parents: parents_step,
        });
        cur = cur.minus(removed);
        explored |= selected_all;
    }

    let tree = RootedTree::new(cluster, parent).expect("exploration yields a spanning tree");
    debug_assert_eq!(tree.edge_set(cluster), cur);
    let trace = ExplorationTrace {
        input_edges: h,
        steps,
        final_edges: cur,
    };
    Ok((tree, trace))
}

/// The static formulation: distances from the root in H decide everything.
/// For each non-root vertex, the parent is its minimum neighbour one level
/// closer to the root.
pub(crate) fn explore_penrose_static(cluster: &Cluster, h: EdgeSet) -> Result<RootedTree> {
    let n = cluster.len();
    if !cluster.spans_connected(h) {
        return Err(Error::Disconnected);
    }
    let adj = cluster.adjacency_of(h);
    let mut dist = vec![usize::MAX; n];
    dist[0] = 0;
    let mut frontier = 1u64;
    let mut level = 0usize;
    let mut seen = 1u64;
    while frontier != 0 {
        level += 1;
        let mut next = 0u64;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[v] & !seen;
        }
        let mut m = next;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            dist[v] = level;
        }
        seen |= next;
        frontier = next;
    }
    let mut parent = vec![0usize; n];
    for v in 1..n {
        let mut best: Option<usize> = None;
        let mut m = adj[v];
        while m != 0 {
            let j = m.trailing_zeros() as usize;
            m &= m - 1;
            if dist[j] + 1 == dist[v] {
                best = Some(best.map_or(j, |b| b.min(j)));
            }
        }
        parent[v] = best.ok_or(Error::Disconnected)?;
    }
    RootedTree::new(cluster, parent)
}

impl ExplorationTrace {
    /// Checks the exploration invariants on every recorded iteration.
    /// Returns a description of the first violation, if any.
    pub fn check_invariants(&self, cluster: &Cluster) -> std::result::Result<(), String> {
        let n = cluster.len();
        let mut prev_selected: Option<u64> = None;
        for (k, step) in self.steps.iter().enumerate() {
            let next_edges = step.h_edges.minus(step.removed);
            // Monotone decreasing subgraphs.
            if !next_edges.is_subset_of(step.h_edges) {
                return Err(format!("step {k}: H_(k+1) not a subgraph of H_k"));
            }
            // H_k is spanning-connected.
            if !cluster.spans_connected(step.h_edges) {
                return Err(format!("step {k}: H_k disconnected"));
            }
            // H_k restricted to T_k is a tree.
            let t_edges: Vec<usize> = step
                .h_edges
                .iter()
                .filter(|&e| {
                    let (a, b) = cluster.edges()[e];
                    step.explored >> a & 1 == 1 && step.explored >> b & 1 == 1
                })
                .collect();
            if t_edges.len() + 1 != step.explored.count_ones() as usize {
                return Err(format!("step {k}: H_k|T_k is not a tree"));
            }
            // Stable tree part: no removed edge lies inside T_k.
            for e in step.removed.iter() {
                let (a, b) = cluster.edges()[e];
                if step.explored >> a & 1 == 1 && step.explored >> b & 1 == 1 {
                    return Err(format!("step {k}: removal inside the explored tree"));
                }
            }
            // Unexplored part untouched so far: H_k|U_k = H|U_k.
            for e in self.input_edges.iter() {
                let (a, b) = cluster.edges()[e];
                let in_u = step.unexplored >> a & 1 == 1 && step.unexplored >> b & 1 == 1;
                if in_u && step.h_edges.contains(e) != self.input_edges.contains(e) {
                    return Err(format!("step {k}: unexplored part was modified"));
                }
                let u_b = (step.unexplored >> a & 1 == 1 && step.boundary >> b & 1 == 1)
                    || (step.unexplored >> b & 1 == 1 && step.boundary >> a & 1 == 1);
                if (in_u || u_b) && step.h_edges.contains(e) != self.input_edges.contains(e) {
                    return Err(format!("step {k}: affected-edge invariant broken"));
                }
            }
            // Root-distance: selected vertices sit at distance k+1 in H_k,
            // and in H_(k+1) they are exactly the distance-(k+1) layer.
            let dist = distances(cluster, step.h_edges, n);
            let mut m = step.selected;
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                if dist[v] != k + 1 {
                    return Err(format!(
                        "step {k}: selected vertex {v} at H_k-distance {} != {}",
                        dist[v],
                        k + 1
                    ));
                }
            }
            let dist_next = distances(cluster, next_edges, n);
            let layer: u64 = (0..n)
                .filter(|&v| dist_next[v] == k + 1)
                .fold(0u64, |acc, v| acc | 1 << v);
            if layer != step.selected {
                return Err(format!(
                    "step {k}: H_(k+1) distance-(k+1) layer differs from S_k"
                ));
            }
            // Boundary sits inside the previous selection.
            if let Some(prev) = prev_selected {
                if step.boundary & !prev != 0 {
                    return Err(format!("step {k}: boundary outside previous selection"));
                }
            } else if step.boundary != 1 {
                return Err("step 0: boundary must be the root".into());
            }
            // Selected and ignored partition the candidates.
            if step.selected & step.ignored != 0
                || (step.selected | step.ignored) != step.potential
            {
                return Err(format!("step {k}: S_k and I_k do not partition P_k"));
            }
            if step.selected == 0 {
                return Err(format!("step {k}: nothing selected"));
            }
            prev_selected = Some(step.selected);
        }
        if let Some(last) = self.steps.last() {
            let final_h = last.h_edges.minus(last.removed);
            if final_h != self.final_edges {
                return Err("final edge set inconsistent with the last step".into());
            }
        }
        Ok(())
    }
}

fn distances(cluster: &Cluster, es: EdgeSet, n: usize) -> Vec<usize> {
    let adj = cluster.adjacency_of(es);
    let mut dist = vec![usize::MAX; n];
    dist[0] = 0;
    let mut frontier = 1u64;
    let mut seen = 1u64;
    let mut level = 0;
    while frontier != 0 {
        level += 1;
        let mut next = 0u64;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[v] & !seen;
        }
        let mut m = next;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            dist[v] = level;
        }
        seen |= next;
        frontier = next;
    }
    dist
}
