//! Exact machinery for abstract polymer systems: partition-function
//! quantities by brute-force enumeration, explorative partition schemes of
//! cluster spanning-subgraph complexes, and the family of sufficient
//! conditions for uniform boundedness (SCUBs) with their tree-operator
//! underpinnings.

pub mod cluster;
pub mod enumerate;
pub mod error;
pub mod lattice;
pub mod oracle;
pub mod sampling;
pub mod schemes;
pub mod scub;
pub mod system;

pub use cluster::{Cluster, EdgeSet, RootedTree, SpanningSubgraph};
pub use error::{Error, Result};
pub use oracle::FugacityVector;
pub use system::{EscapePair, PolymerId, PolymerSystem, Volume};
