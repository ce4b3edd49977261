//! Information dynamics toolkit: entropy accounting, synergy decomposition,
//! anticipatory logistic maps, and network position analysis.
//!
//! The crate is organized around five building blocks:
//!
//! * [`prob`]: dense discrete joint distributions, Shannon entropy in bits,
//!   maximum-entropy baselines, and the redundancy ratio.
//! * [`lattice`]: joint entropies for every non-empty variable subset,
//!   multivariate mutual information with alternating signs, total
//!   correlation, and the mutual-redundancy decomposition into a negative
//!   (historical constraint) term and an interaction term.
//! * [`maps`]: three logistic-map variants (recursive, incursive,
//!   hyper-incursive), steady states, period detection, and deterministic
//!   bifurcation scans.
//! * [`network`]: geodesic distances, positional similarity of adjacency
//!   profiles, and a transitive/cyclic/other triad census.
//! * [`tabular`]: CSV ingestion, numeric binning, and contingency tables
//!   that feed [`prob::JointDistribution::from_counts`].
//!
//! All entropy-like quantities are carried in bits (base-2 logarithms).
//! Every random element is seeded explicitly, so identical inputs produce
//! byte-identical outputs.

pub mod lattice;
pub mod maps;
pub mod network;
pub mod numfmt;
pub mod prob;
pub mod tabular;

pub use lattice::{EntropyLattice, PhiBalance, Subset, SynergyReport};
pub use maps::{BifurcationScan, BranchPolicy, MapKind, MapSpec, ScanConfig, Trajectory};
pub use network::{Graph, PositionMatrix, SimilarityMeasure, TriadCensus};
pub use prob::{EntropyValue, JointDistribution};
pub use tabular::{BinMethod, BinningSpec, ContingencyTable, DataTable, MissingPolicy};
