//! Twin-width experimentation: trigraph contractions, sequence verification,
//! exact twin-width on small graphs, neighbourhood complexity, and the
//! lower-bound construction with its explicit contraction sequence.

pub mod cli;
pub mod complexity;
pub mod contraction;
pub mod exact;
pub mod io;
pub mod lb;
pub mod trigraph;

pub use complexity::{
    distinct_x_neighbourhoods, nu_upper_bound, shatter_function, NeighbourhoodProfile, TwinPairSet, VertexSet,
};
pub use contraction::{
    greedy_sequence, partition_at_step, replay_and_verify, ContractionSequence, Partition, PartitionTrace,
    SequenceReport, Step,
};
pub use exact::{exact_tww, ExactResult};
pub use lb::{build_lb_graph, build_lb_sequence, verify_lb, LbGraph, LbParameters, LbReport};
pub use trigraph::{EdgeKind, KindFilter, Trigraph, TrigraphError, VertexId};
