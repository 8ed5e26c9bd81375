//! Tree operators: the depth-one operator over star weights, its depth-k
//! generalisation over rooted tree shapes, and the multiplexed operators
//! indexed by escape pairs.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::oracle::FugacityVector;
use crate::system::{EscapePair, PolymerSystem};

/// Star weights for the depth-one operator: `weight(root_label, children)`
/// receives the children labels as a sorted multiset and must be symmetric
/// under permutations (the slice order carries no information).
pub struct StarWeights<'a> {
    pub weight: &'a dyn Fn(usize, &[usize]) -> f64,
    /// Multisets are enumerated up to this many children; a non-zero
    /// weight at the cap reports `TruncationExceeded`.
    pub max_children: usize,
}

/// [T(μ)]_l = ρ_l · Σ over children multisets m of
/// weight(l, m) · Π_x μ_x^{m_x} / m_x!.
pub fn depth_one_tree_operator(
    labels: usize,
    w: &StarWeights<'_>,
    rho: &[f64],
    mu: &[f64],
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; labels];
    let mut children: Vec<usize> = Vec::new();
    for (l, slot) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        enumerate_multisets(labels, w.max_children, &mut children, 0, &mut |m| {
            let c = (w.weight)(l, m);
            if c != 0.0 {
                if m.len() == w.max_children {
                    return Err(Error::TruncationExceeded(w.max_children));
                }
                acc += c * multiset_weight(m, mu);
            }
            Ok(())
        })?;
        *slot = rho[l] * acc;
    }
    Ok(out)
}

fn multiset_weight(m: &[usize], mu: &[f64]) -> f64 {
    let mut weight = 1.0;
    let mut run = 0usize;
    for (i, &x) in m.iter().enumerate() {
        run = if i > 0 && m[i - 1] == x { run + 1 } else { 1 };
        weight *= mu[x] / run as f64;
    }
    weight
}

fn enumerate_multisets(
    labels: usize,
    max_len: usize,
    prefix: &mut Vec<usize>,
    from: usize,
    visit: &mut impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    visit(prefix)?;
    if prefix.len() == max_len {
        return Ok(());
    }
    for x in from..labels {
        prefix.push(x);
        enumerate_multisets(labels, max_len, prefix, x, visit)?;
        prefix.pop();
    }
    Ok(())
}

/// A rooted tree shape in canonical form: children sorted by their own
/// canonical encoding. Vertices are addressed in preorder.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TreeShape {
    pub children: Vec<TreeShape>,
}

impl TreeShape {
    pub fn leaf() -> Self {
        TreeShape {
            children: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.children.iter().map(|c| c.vertex_count()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        self.children
            .iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Number of rooted automorphisms: the product over children-groups of
    /// equal shapes of (group size)! times the children's own counts.
    pub fn automorphisms(&self) -> u64 {
        let mut count = 1u64;
        let mut i = 0;
        while i < self.children.len() {
            let mut j = i;
            while j < self.children.len() && self.children[j] == self.children[i] {
                j += 1;
            }
            let group = (j - i) as u64;
            count *= (1..=group).product::<u64>();
            for c in &self.children[i..j] {
                count *= c.automorphisms();
            }
            i = j;
        }
        count
    }

    /// Depth of each vertex in preorder.
    pub fn preorder_depths(&self) -> Vec<usize> {
        let mut out = Vec::new();
        fn rec(t: &TreeShape, d: usize, out: &mut Vec<usize>) {
            out.push(d);
            for c in &t.children {
                rec(c, d + 1, out);
            }
        }
        rec(self, 0, &mut out);
        out
    }
}

/// All canonical tree shapes with at most `max_vertices` vertices and depth
/// at most `max_depth`.
pub fn tree_shapes(max_vertices: usize, max_depth: usize) -> Vec<TreeShape> {
    fn shapes_sized(v: usize, d: usize, memo: &mut BTreeMap<(usize, usize), Vec<TreeShape>>) -> Vec<TreeShape> {
        if let Some(s) = memo.get(&(v, d)) {
            return s.clone();
        }
        let mut out = Vec::new();
        if v == 1 {
            out.push(TreeShape::leaf());
        } else if d > 0 {
            // Split v-1 vertices into a nondecreasing multiset of subtrees.
            let subs: Vec<TreeShape> = (1..v)
                .flat_map(|sv| shapes_sized(sv, d - 1, memo))
                .collect();
            let mut sorted = subs;
            sorted.sort();
            fn extend(
                sorted: &[TreeShape],
                from: usize,
                left: usize,
                stack: &mut Vec<TreeShape>,
                out: &mut Vec<TreeShape>,
            ) {
                if left == 0 {
                    out.push(TreeShape {
                        children: stack.clone(),
                    });
                    return;
                }
                for (i, s) in sorted.iter().enumerate().skip(from) {
                    let sv = s.vertex_count();
                    if sv > left {
                        continue;
                    }
                    stack.push(s.clone());
                    extend(sorted, i, left - sv, stack, out);
                    stack.pop();
                }
            }
            let mut stack = Vec::new();
            extend(&sorted, 0, v - 1, &mut stack, &mut out);
        }
        memo.insert((v, d), out.clone());
        out
    }
    let mut memo = BTreeMap::new();
    let mut all = Vec::new();
    for v in 1..=max_vertices {
        all.extend(shapes_sized(v, max_depth, &mut memo));
    }
    all
}

/// Weights over rooted tree shapes for the depth-k operator; labels arrive
/// in preorder and the weight must be invariant under rooted automorphisms.
pub struct TreeWeights<'a> {
    pub weight: &'a dyn Fn(&TreeShape, &[usize]) -> f64,
    pub max_vertices: usize,
}

/// [T_ρ(μ)]_l sums over tree shapes of depth ≤ k and labelings rooted at
/// l: vertices at depth < k carry ρ, vertices at depth k carry μ, each
/// shape weighted by c / |aut|.
pub fn depth_k_tree_operator(
    k: usize,
    labels: usize,
    w: &TreeWeights<'_>,
    rho: &[f64],
    mu: &[f64],
) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::OutOfRange("depth must be >= 1".into()));
    }
    let shapes = tree_shapes(w.max_vertices, k);
    let mut out = vec![0.0; labels];
    for (l, slot) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for shape in &shapes {
            let v = shape.vertex_count();
            let depths = shape.preorder_depths();
            let aut = shape.automorphisms() as f64;
            // All labelings with the root fixed to l.
            let mut assignment = vec![0usize; v];
            assignment[0] = l;
            let mut full = false;
            if v == 1 {
                let c = (w.weight)(shape, &assignment);
                acc += c / aut * rho[l];
                continue;
            }
            // Odometer over labels^(v-1).
            let mut idx = vec![0usize; v];
            loop {
                assignment[1..v].copy_from_slice(&idx[1..v]);
                let c = (w.weight)(shape, &assignment);
                if c != 0.0 {
                    if v == w.max_vertices {
                        full = true;
                    }
                    let mut term = c / aut;
                    for p in 0..v {
                        term *= if depths[p] < k {
                            rho[assignment[p]]
                        } else {
                            mu[assignment[p]]
                        };
                    }
                    acc += term;
                }
                // Advance the odometer.
                let mut p = 1;
                loop {
                    if p == v {
                        break;
                    }
                    idx[p] += 1;
                    if idx[p] < labels {
                        break;
                    }
                    idx[p] = 0;
                    p += 1;
                }
                if p == v {
                    break;
                }
            }
            if full {
                return Err(Error::TruncationExceeded(w.max_vertices));
            }
        }
        *slot = acc;
    }
    Ok(out)
}

/// Values indexed by escape pairs.
pub type PairValues = BTreeMap<EscapePair, f64>;

pub fn multiplexed_zero(sys: &PolymerSystem) -> PairValues {
    sys.escape_pairs().into_iter().map(|p| (p, 0.0)).collect()
}

/// Multiplexing injection: pair (γ, ε) takes the value at γ.
pub fn multiplex(sys: &PolymerSystem, mu: &FugacityVector) -> PairValues {
    sys.escape_pairs()
        .into_iter()
        .map(|p| (p, mu.get(p.gamma)))
        .collect()
}

/// Which multiplexed operator to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiplexKind {
    Returning,
    Reduced,
}

/// One application of the multiplexed tree operator: at pair (γ, ε) the
/// value is ρ_γ (1 + u_{(γ,ε)}) times the generating function of
/// compatible children sets in Γ*≠(γ)\{ε} with weights u_{(ξ,γ)}; the
/// reduced variant relaxes the compatibility to a plain product.
pub fn multiplexed_operator(
    kind: MultiplexKind,
    sys: &PolymerSystem,
    rho: &FugacityVector,
    u: &PairValues,
) -> Result<PairValues> {
    let mut out = PairValues::new();
    for pair in sys.escape_pairs() {
        let (gamma, eps) = (pair.gamma, pair.eps);
        let own = *u
            .get(&pair)
            .ok_or_else(|| Error::UnknownPair(sys.name(gamma).into(), sys.name(eps).into()))?;
        let others: Vec<usize> = sys
            .incompatible_others(gamma)
            .members()
            .iter()
            .copied()
            .filter(|&x| x != eps)
            .collect();
        let weight_of = |xi: usize| -> Result<f64> {
            u.get(&EscapePair { gamma: xi, eps: gamma }).copied().ok_or_else(|| {
                Error::UnknownPair(sys.name(xi).into(), sys.name(gamma).into())
            })
        };
        let gen = match kind {
            MultiplexKind::Returning => {
                compatible_set_sum(sys, &others, &weight_of)?
            }
            MultiplexKind::Reduced => {
                let mut p = 1.0;
                for &xi in &others {
                    p *= 1.0 + weight_of(xi)?;
                }
                p
            }
        };
        out.insert(pair, rho.get(gamma) * (1.0 + own) * gen);
    }
    Ok(out)
}

/// Σ over compatible subsets of `members` of the product of weights.
fn compatible_set_sum(
    sys: &PolymerSystem,
    members: &[usize],
    weight_of: &dyn Fn(usize) -> Result<f64>,
) -> Result<f64> {
    fn rec(
        sys: &PolymerSystem,
        members: &[usize],
        weight_of: &dyn Fn(usize) -> Result<f64>,
        chosen: &mut Vec<usize>,
        from: usize,
    ) -> Result<f64> {
        let mut total = if chosen.is_empty() {
            1.0
        } else {
            let mut p = 1.0;
            for &x in chosen.iter() {
                p *= weight_of(x)?;
            }
            p
        };
        for i in from..members.len() {
            let x = members[i];
            if chosen.iter().any(|&y| sys.incompatible(x, y)) {
                continue;
            }
            chosen.push(x);
            total += rec(sys, members, weight_of, chosen, i + 1)?;
            chosen.pop();
        }
        Ok(total)
    }
    let mut chosen = Vec::new();
    rec(sys, members, weight_of, &mut chosen, 0)
}
