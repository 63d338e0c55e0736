//! Partial Steiner triple systems and the ordering of their points so that
//! no proper segment is a disjoint union of blocks.

pub mod format;
pub mod generators;
pub mod packing;
pub mod sequence;
pub mod sequencer;
pub mod system;

pub use sequence::{
    inadmissible_segments, is_admissible, partition_into_blocks, PartitionWitness, Segment,
    Sequence,
};
pub use sequencer::{construct, decide, Decision, Outcome};
pub use system::{Block, PointSet, TripleSystem, MAX_ORDER};
