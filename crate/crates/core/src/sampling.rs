//! Seeded random polymer systems, clusters and fugacities for the
//! verification sweeps, plus a few fixed fixtures shared by tests and docs.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::cluster::Cluster;
use crate::system::{PolymerId, PolymerSystem};

/// The five-polymer example system with edges a-b, b-c, a-d, b-e, c-e.
pub fn example_system() -> PolymerSystem {
    PolymerSystem::new(
        &["a", "b", "c", "d", "e"],
        &[("a", "b"), ("b", "c"), ("a", "d"), ("b", "e"), ("c", "e")],
        true,
    )
    .unwrap()
}

/// Triangle cluster with three distinct pairwise-incompatible labels.
pub fn triangle_cluster() -> Cluster {
    let sys = PolymerSystem::new(
        &["x", "y", "z"],
        &[("x", "y"), ("y", "z"), ("x", "z")],
        true,
    )
    .unwrap();
    Cluster::induce(&sys, &[0, 1, 2]).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random connected system on `n` polymers named p0..p{n-1}: a random
/// spanning tree plus each remaining pair with probability `extra`.
pub fn random_system(rng: &mut ChaCha8Rng, n: usize, extra: f64) -> PolymerSystem {
    assert!(n >= 1);
    let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut pairs: Vec<(String, String)> = Vec::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        pairs.push((names[u].clone(), names[v].clone()));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(extra) {
                pairs.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    let refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    PolymerSystem::new(&name_refs, &refs, true).unwrap()
}

/// A random label vector of the given length whose induced graph is
/// connected (resampled until it is; a length-1 vector always qualifies).
pub fn random_cluster(rng: &mut ChaCha8Rng, sys: &PolymerSystem, len: usize) -> Cluster {
    assert!(len >= 1);
    loop {
        let labels: Vec<PolymerId> = (0..len).map(|_| rng.gen_range(0..sys.len())).collect();
        let c = Cluster::induce(sys, &labels).unwrap();
        if c.is_cluster() {
            return c;
        }
    }
}

/// Per-polymer values drawn uniformly from `[lo, hi]`.
pub fn random_fugacity(rng: &mut ChaCha8Rng, sys: &PolymerSystem, lo: f64, hi: f64) -> Vec<f64> {
    (0..sys.len()).map(|_| rng.gen_range(lo..=hi)).collect()
}
