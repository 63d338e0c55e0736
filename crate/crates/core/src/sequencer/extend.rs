use super::construct::{verify, Method};
use super::SequencerError;
use crate::packing::max_disjoint_blocks;
use crate::sequence::first_inadmissible;
use crate::system::{PointSet, TripleSystem};

/// Extends an admissible arrangement of a 12-point residual (three disjoint
/// blocks and three other points) by the remaining points in index order.
///
/// With no four disjoint blocks in the system, no segment reaching past the
/// residual can partition, since such a partition would need a fourth block.
pub fn extend(
    system: &TripleSystem,
    residual_points: &[usize],
    residual_sequence: &[usize],
) -> Result<crate::sequence::Sequence, SequencerError> {
    let n = system.order();
    if n < 13 {
        return Err(SequencerError::Precondition(format!(
            "extension needs order at least 13, got {n}"
        )));
    }
    let residual: PointSet = residual_points.iter().copied().collect();
    if residual_points.len() != 12
        || residual.len() != 12
        || residual_points.iter().any(|&p| p >= n)
    {
        return Err(SequencerError::Precondition(
            "residual must be 12 distinct points of the system".into(),
        ));
    }
    let arranged: PointSet = residual_sequence.iter().copied().collect();
    if residual_sequence.len() != 12 || arranged != residual {
        return Err(SequencerError::Precondition(
            "residual sequence must arrange exactly the residual points".into(),
        ));
    }
    let nu = max_disjoint_blocks(system, None).nu;
    if nu != 3 {
        return Err(SequencerError::Precondition(format!(
            "extension needs exactly three disjoint blocks, found {nu}"
        )));
    }
    if let Some(segment) = first_inadmissible(residual_sequence, 12, system) {
        return Err(SequencerError::ResidualNotAdmissible(segment));
    }
    let mut entries = residual_sequence.to_vec();
    entries.extend(system.points().difference(residual).iter());
    verify(system, entries, Method::Extension)
}
