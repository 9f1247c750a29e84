//! Component-size based strength measurement for undirected networks.
//!
//! The crate measures how "strong" a graph is from its connected component
//! size distribution (CCSD) and a per-size weight vector, compares that
//! measure against the component-count, largest-component and fragmentation
//! baselines, fits weight vectors to averaged human estimates by least
//! squares, and finds the node removals that weaken a network the most.
//!
//! Everything here is pure computation over in-memory values. File formats,
//! threading and the command-line driver live in the `netstrength` crate.
#![no_std]
#![deny(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod datasets;
pub mod dismantle;
mod dsu;
pub mod error;
pub mod eval;
pub mod graph;
pub mod metrics;
pub mod weight_fit;

pub use dismantle::{
    best_removal, best_removal_baseline, DismantleQuery, DismantleResult, Objective, SearchBudget,
};
pub use error::Error;
pub use graph::{
    ccsd, components, remove_nodes, Ccsd, ComponentDecomposition, Graph, GraphBuilder,
};
pub use metrics::{
    cole1, cole2, gfp_score, normalize, sigma, ExtensionPolicy, MetricId, StrengthValue,
    WeightVector,
};
pub use weight_fit::{build_system, default_weights, fit_weights, DesignMatrix, FitResult};

pub type Result<T, E = Error> = core::result::Result<T, E>;
