//! Polymer systems and finite sub-volumes.
//!
//! A polymer system is a finite set of named polymers with a symmetric,
//! reflexive incompatibility relation. We view it as a simple graph plus a
//! loop at every vertex; loops are implicit (reflexivity is an axiom) and
//! never stored. The declaration order of the polymers is the total order
//! used by every tie-break in the scheme algorithms.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a polymer in its system's declaration order.
pub type PolymerId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolymerSystem {
    names: Vec<String>,
    index: HashMap<String, PolymerId>,
    /// Adjacency matrix of the loop-free incompatibility graph.
    incompat: Vec<Vec<bool>>,
    /// Sorted neighbour lists (excluding the implicit loop).
    neighbours: Vec<Vec<PolymerId>>,
}

/// JSON graph input: `{"polymers": [...], "incompatible": [["a","b"], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemSpec {
    pub polymers: Vec<String>,
    #[serde(default)]
    pub incompatible: Vec<(String, String)>,
}

impl PolymerSystem {
    /// Builds a validated system from names and incompatible pairs.
    ///
    /// Loops are implied, symmetry is enforced by closure. When
    /// `require_connected` is set the loop-free graph must be connected
    /// (the standing assumption for every convergence statement).
    pub fn new<S: AsRef<str>>(
        polymers: &[S],
        pairs: &[(S, S)],
        require_connected: bool,
    ) -> Result<Self> {
        let mut names = Vec::with_capacity(polymers.len());
        let mut index = HashMap::new();
        for p in polymers {
            let name = p.as_ref().to_string();
            if index.insert(name.clone(), names.len()).is_some() {
                return Err(Error::DuplicatePolymer(name));
            }
            names.push(name);
        }
        let n = names.len();
        let mut incompat = vec![vec![false; n]; n];
        for (a, b) in pairs {
            let ia = *index
                .get(a.as_ref())
                .ok_or_else(|| Error::UnknownPolymerInPair(a.as_ref().to_string()))?;
            let ib = *index
                .get(b.as_ref())
                .ok_or_else(|| Error::UnknownPolymerInPair(b.as_ref().to_string()))?;
            if ia != ib {
                incompat[ia][ib] = true;
                incompat[ib][ia] = true;
            }
        }
        let neighbours = (0..n)
            .map(|i| (0..n).filter(|&j| incompat[i][j]).collect())
            .collect();
        let sys = PolymerSystem {
            names,
            index,
            incompat,
            neighbours,
        };
        if require_connected && !sys.is_connected() {
            return Err(Error::DisconnectedSystem);
        }
        Ok(sys)
    }

    pub fn from_spec(spec: &SystemSpec, require_connected: bool) -> Result<Self> {
        let pairs: Vec<(&str, &str)> = spec
            .incompatible
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        let polymers: Vec<&str> = spec.polymers.iter().map(|s| s.as_str()).collect();
        PolymerSystem::new(&polymers, &pairs, require_connected)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, id: PolymerId) -> &str {
        &self.names[id]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Result<PolymerId> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownPolymer(name.to_string()))
    }

    /// `a ≈ b`: reflexive on equal ids, otherwise the declared relation.
    pub fn incompatible(&self, a: PolymerId, b: PolymerId) -> bool {
        a == b || self.incompat[a][b]
    }

    /// Neighbours of `id` in the loop-free graph, sorted.
    pub fn neighbours(&self, id: PolymerId) -> &[PolymerId] {
        &self.neighbours[id]
    }

    /// Γ*(γ): polymers incompatible with γ, including γ itself.
    pub fn incompatible_set(&self, gamma: PolymerId) -> Volume {
        let mut members = self.neighbours[gamma].clone();
        members.push(gamma);
        members.sort_unstable();
        Volume { members }
    }

    /// Γ*≠(γ) = Γ*(γ) \ {γ}.
    pub fn incompatible_others(&self, gamma: PolymerId) -> Volume {
        Volume {
            members: self.neighbours[gamma].clone(),
        }
    }

    /// The full polymer set as a volume.
    pub fn full_volume(&self) -> Volume {
        Volume {
            members: (0..self.len()).collect(),
        }
    }

    pub fn volume_of_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Volume> {
        let mut members = Vec::with_capacity(names.len());
        for n in names {
            members.push(self.id(n.as_ref())?);
        }
        members.sort_unstable();
        members.dedup();
        Ok(Volume { members })
    }

    /// All ordered escape pairs (γ, ε) with ε ∈ Γ*≠(γ).
    pub fn escape_pairs(&self) -> Vec<EscapePair> {
        let mut out = Vec::new();
        for gamma in 0..self.len() {
            for &eps in self.neighbours(gamma) {
                out.push(EscapePair { gamma, eps });
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let n = self.len();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.neighbours[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }
}

/// A finite sub-volume Λ: a subset of the system's polymers.
///
/// Members are kept sorted in the system order, so iteration is
/// deterministic everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Volume {
    members: Vec<PolymerId>,
}

impl Volume {
    pub fn new(mut members: Vec<PolymerId>) -> Self {
        members.sort_unstable();
        members.dedup();
        Volume { members }
    }

    pub fn empty() -> Self {
        Volume {
            members: Vec::new(),
        }
    }

    pub fn members(&self) -> &[PolymerId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, id: PolymerId) -> bool {
        self.members.binary_search(&id).is_ok()
    }

    pub fn is_subset_of(&self, other: &Volume) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    pub fn minus(&self, other: &Volume) -> Volume {
        Volume {
            members: self
                .members
                .iter()
                .copied()
                .filter(|&m| !other.contains(m))
                .collect(),
        }
    }

    pub fn without(&self, id: PolymerId) -> Volume {
        Volume {
            members: self
                .members
                .iter()
                .copied()
                .filter(|&m| m != id)
                .collect(),
        }
    }

    pub fn union(&self, other: &Volume) -> Volume {
        let mut members = self.members.clone();
        members.extend_from_slice(&other.members);
        Volume::new(members)
    }

    pub fn intersect(&self, other: &Volume) -> Volume {
        Volume {
            members: self
                .members
                .iter()
                .copied()
                .filter(|&m| other.contains(m))
                .collect(),
        }
    }
}

/// An escape pair (γ, ε): a polymer together with a designated incompatible,
/// different polymer excluded from the volume.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EscapePair {
    pub gamma: PolymerId,
    pub eps: PolymerId,
}
