//! Edge-type combinatorics for directed graphs: feasibility, structure matrices,
//! exact enumeration, maximum-entropy random graphs, type-class probabilities and
//! rate-distortion bounds for local-structure distortion.

pub mod error;
pub mod graph;
pub mod types;
pub mod enumerate;
pub mod maxent;
pub mod probability;
pub mod rd;
pub mod verify;
pub mod cli;

pub use error::{Error, Result};
pub use graph::{density, DegreePair, DiGraph, Distortion};
pub use types::{
    components_from_structure, gale_ryser_feasible, invariant_positions, normalize,
    reduce_by_invariants, restriction_necessary, structure_matrix, ComponentPartition, EdgeType,
    InvariantMasks, StructureMatrix,
};
