//! Finite lattice patches: honeycomb (brick-wall construction), line
//! graphs, cycles and truncated regular trees, together with the two
//! closed-form interior neighbourhoods used for the homogeneous-lattice
//! optimum table.

use crate::error::Result;
use crate::system::{PolymerId, PolymerSystem};

/// Honeycomb patch on a `rows` x `cols` brick-wall grid: every vertex has
/// its horizontal neighbours, plus a vertical edge when the coordinate
/// parity matches. Interior vertices are 3-regular.
pub fn hexagonal_patch(rows: usize, cols: usize) -> Result<PolymerSystem> {
    assert!(rows >= 2 && cols >= 2);
    let name = |i: usize, j: usize| format!("h{i}_{j}");
    let mut names = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            names.push(name(i, j));
        }
    }
    let mut pairs = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            if j + 1 < cols {
                pairs.push((name(i, j), name(i, j + 1)));
            }
            if i + 1 < rows && (i + j) % 2 == 0 {
                pairs.push((name(i, j), name(i + 1, j)));
            }
        }
    }
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let pair_refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    PolymerSystem::new(&name_refs, &pair_refs, true)
}

/// Line graph of a system: one polymer per incompatibility edge, two of
/// them incompatible iff the edges share an endpoint.
pub fn line_graph(sys: &PolymerSystem) -> Result<PolymerSystem> {
    let mut edges: Vec<(PolymerId, PolymerId)> = Vec::new();
    for a in 0..sys.len() {
        for &b in sys.neighbours(a) {
            if a < b {
                edges.push((a, b));
            }
        }
    }
    let names: Vec<String> = edges
        .iter()
        .map(|&(a, b)| format!("{}~{}", sys.name(a), sys.name(b)))
        .collect();
    let mut pairs = Vec::new();
    for (i, &(a, b)) in edges.iter().enumerate() {
        for (j, &(c, d)) in edges.iter().enumerate().skip(i + 1) {
            if a == c || a == d || b == c || b == d {
                pairs.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let pair_refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    PolymerSystem::new(&name_refs, &pair_refs, true)
}

/// Cycle on `n` polymers.
pub fn cycle(n: usize) -> Result<PolymerSystem> {
    assert!(n >= 3);
    let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    let pairs: Vec<(String, String)> = (0..n)
        .map(|i| (names[i].clone(), names[(i + 1) % n].clone()))
        .collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let pair_refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    PolymerSystem::new(&name_refs, &pair_refs, true)
}

/// D-regular tree truncated at the given depth: the root has `degree`
/// children, every other internal vertex `degree - 1`.
pub fn regular_tree_patch(degree: usize, depth: usize) -> Result<PolymerSystem> {
    assert!(degree >= 2);
    let mut names = vec!["t0".to_string()];
    let mut pairs = Vec::new();
    let mut frontier = vec![0usize];
    let mut next_id = 1usize;
    for d in 0..depth {
        let mut next = Vec::new();
        for &v in &frontier {
            let kids = if d == 0 { degree } else { degree - 1 };
            for _ in 0..kids {
                names.push(format!("t{next_id}"));
                pairs.push((names[v].clone(), format!("t{next_id}")));
                next.push(next_id);
                next_id += 1;
            }
        }
        frontier = next;
    }
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let pair_refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    PolymerSystem::new(&name_refs, &pair_refs, true)
}

/// Polymers of full interior degree.
pub fn interior_vertices(sys: &PolymerSystem, degree: usize) -> Vec<PolymerId> {
    (0..sys.len())
        .filter(|&v| sys.neighbours(v).len() == degree)
        .collect()
}

/// Interior neighbourhood of the honeycomb lattice: the centre plus three
/// pairwise-compatible neighbours. Returns (system, centre).
pub fn hex_interior_neighbourhood() -> (PolymerSystem, PolymerId) {
    let sys = PolymerSystem::new(
        &["g", "n1", "n2", "n3"],
        &[("g", "n1"), ("g", "n2"), ("g", "n3")],
        true,
    )
    .unwrap();
    let g = sys.id("g").unwrap();
    (sys, g)
}

/// Interior neighbourhood of the honeycomb line graph: the centre plus two
/// incompatible pairs (one per endpoint of the underlying edge).
pub fn line_interior_neighbourhood() -> (PolymerSystem, PolymerId) {
    let sys = PolymerSystem::new(
        &["g", "a1", "a2", "b1", "b2"],
        &[
            ("g", "a1"),
            ("g", "a2"),
            ("g", "b1"),
            ("g", "b2"),
            ("a1", "a2"),
            ("b1", "b2"),
        ],
        true,
    )
    .unwrap();
    let g = sys.id("g").unwrap();
    (sys, g)
}
