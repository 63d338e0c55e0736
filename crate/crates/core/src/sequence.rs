//! Sequences of points and their admissibility.
//!
//! A sequence is admissible when no proper segment (consecutive run that is
//! neither empty nor the whole sequence) is a disjoint union of blocks.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::system::{Block, PointSet, TripleSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequenceError {
    #[error("sequence has {len} entries but the system has {order} points")]
    WrongLength { len: usize, order: usize },
    #[error("point {0} is out of range")]
    PointOutOfRange(usize),
    #[error("point {0} appears more than once")]
    RepeatedPoint(usize),
}

/// A permutation of all points of a system.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sequence(Vec<usize>);

impl Sequence {
    /// Checks that `entries` is a permutation of `0..order`.
    pub fn new(entries: Vec<usize>, order: usize) -> Result<Self, SequenceError> {
        if entries.len() != order {
            return Err(SequenceError::WrongLength {
                len: entries.len(),
                order,
            });
        }
        let mut seen = vec![false; order];
        for &p in &entries {
            if p >= order {
                return Err(SequenceError::PointOutOfRange(p));
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(SequenceError::RepeatedPoint(p));
            }
        }
        Ok(Sequence(entries))
    }

    pub fn identity(order: usize) -> Self {
        Sequence((0..order).collect())
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Sequence {
        Sequence(self.0.iter().rev().copied().collect())
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }

    pub fn labels<'a>(&self, system: &'a TripleSystem) -> Vec<&'a str> {
        self.0.iter().map(|&p| system.label(p)).collect()
    }

    pub fn segment_points(&self, segment: Segment) -> PointSet {
        PointSet::from_points(self.0[segment.start..segment.end()].iter().copied())
    }
}

/// Consecutive entries `start..start + len` of a sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Segment {
    pub start: usize,
    pub len: usize,
}

impl Segment {
    pub fn end(&self) -> usize {
        self.start + self.len
    }

    /// Proper means neither empty nor the whole sequence.
    pub fn is_proper(&self, n: usize) -> bool {
        self.len > 0 && self.len < n
    }
}

/// Vertex-disjoint blocks whose union is a given point set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionWitness {
    pub parts: Vec<Block>,
}

impl PartitionWitness {
    pub fn points(&self) -> PointSet {
        self.parts
            .iter()
            .fold(PointSet::EMPTY, |acc, b| acc.union(b.mask()))
    }

    /// True when the parts are pairwise disjoint blocks of `system` covering
    /// exactly `set`.
    pub fn certifies(&self, system: &TripleSystem, set: PointSet) -> bool {
        let mut covered = PointSet::EMPTY;
        for part in &self.parts {
            let [x, y, z] = part.points();
            if !system.is_block(x, y, z) || !covered.is_disjoint(part.mask()) {
                return false;
            }
            covered = covered.union(part.mask());
        }
        covered == set
    }
}

/// Finds a partition of `set` into blocks, branching on the least uncovered
/// point and trying its blocks in canonical order.
pub fn partition_into_blocks(set: PointSet, system: &TripleSystem) -> Option<PartitionWitness> {
    if !set.len().is_multiple_of(3) {
        return None;
    }
    let mut parts = Vec::with_capacity(set.len() / 3);
    if find_partition(set, system, &mut parts) {
        let witness = PartitionWitness {
            parts: parts.into_iter().map(|id| system.block(id)).collect(),
        };
        debug_assert!(witness.certifies(system, set));
        Some(witness)
    } else {
        None
    }
}

fn find_partition(set: PointSet, system: &TripleSystem, parts: &mut Vec<usize>) -> bool {
    let Some(p) = set.first() else {
        return true;
    };
    for id in system.blocks_through(p) {
        let m = system.block_masks()[id];
        if m.is_subset(set) {
            parts.push(id);
            if find_partition(set.difference(m), system, parts) {
                return true;
            }
            parts.pop();
        }
    }
    false
}

/// Every partition of `set` into blocks, in the search order of
/// [`partition_into_blocks`].
pub fn all_partitions(set: PointSet, system: &TripleSystem) -> Vec<PartitionWitness> {
    let mut out = Vec::new();
    if set.len().is_multiple_of(3) {
        collect_partitions(set, system, &mut Vec::new(), &mut out);
    }
    out
}

fn collect_partitions(
    set: PointSet,
    system: &TripleSystem,
    parts: &mut Vec<Block>,
    out: &mut Vec<PartitionWitness>,
) {
    let Some(p) = set.first() else {
        out.push(PartitionWitness {
            parts: parts.clone(),
        });
        return;
    };
    for id in system.blocks_through(p) {
        let m = system.block_masks()[id];
        if m.is_subset(set) {
            parts.push(system.block(id));
            collect_partitions(set.difference(m), system, parts, out);
            parts.pop();
        }
    }
}

fn check(seq: &Sequence, system: &TripleSystem) -> Result<(), SequenceError> {
    if seq.len() != system.order() {
        return Err(SequenceError::WrongLength {
            len: seq.len(),
            order: system.order(),
        });
    }
    Ok(())
}

/// Every proper segment of `seq` that is a disjoint union of blocks, with one
/// witness each. Lengths `3, 6, ...` below `n` are scanned, shortest first.
pub fn inadmissible_segments(
    seq: &Sequence,
    system: &TripleSystem,
) -> Result<Vec<(Segment, PartitionWitness)>, SequenceError> {
    check(seq, system)?;
    let n = seq.len();
    let mut out = Vec::new();
    for len in (3..n).step_by(3) {
        for start in 0..=n - len {
            let segment = Segment { start, len };
            if let Some(w) = partition_into_blocks(seq.segment_points(segment), system) {
                out.push((segment, w));
            }
        }
    }
    Ok(out)
}

/// Whether no proper segment of `seq` is a disjoint union of blocks.
pub fn is_admissible(seq: &Sequence, system: &TripleSystem) -> Result<bool, SequenceError> {
    check(seq, system)?;
    Ok(first_inadmissible(seq.entries(), seq.len(), system).is_none())
}

/// First segment of `entries` with length a multiple of 3 below `limit` that
/// partitions into blocks. `entries` may be a partial arrangement.
pub(crate) fn first_inadmissible(
    entries: &[usize],
    limit: usize,
    system: &TripleSystem,
) -> Option<Segment> {
    let mut prefix = Vec::with_capacity(entries.len() + 1);
    let mut acc = 0u128;
    prefix.push(0u128);
    for &p in entries {
        acc |= 1u128 << p;
        prefix.push(acc);
    }
    let n = entries.len();
    for len in (3..limit.min(n + 1)).step_by(3) {
        for start in 0..=n - len {
            let set = PointSet(prefix[start + len] ^ prefix[start]);
            if system.has_partition(set) {
                return Some(Segment { start, len });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_blocks() -> TripleSystem {
        TripleSystem::new(9, &[[0, 1, 2], [3, 4, 5], [6, 7, 8]]).unwrap()
    }

    #[test]
    fn six_set_partition() {
        let t = TripleSystem::new(6, &[[0, 1, 2], [3, 4, 5]]).unwrap();
        let w = partition_into_blocks(t.points(), &t).unwrap();
        assert_eq!(w.parts, vec![t.block(0), t.block(1)]);
        assert!(partition_into_blocks(PointSet::from_points([0, 1, 2, 3]), &t).is_none());
        assert!(partition_into_blocks(PointSet::from_points([0, 1, 2, 3, 4]), &t).is_none());
    }

    #[test]
    fn segment_of_a_lone_block() {
        let t = TripleSystem::new(4, &[[0, 1, 2]]).unwrap();
        let seq = Sequence::identity(4);
        let bad = inadmissible_segments(&seq, &t).unwrap();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].0, Segment { start: 0, len: 3 });
        assert_eq!(bad[0].1.parts, vec![t.block(0)]);
        assert!(!is_admissible(&seq, &t).unwrap());
    }

    #[test]
    fn whole_sequence_is_not_proper() {
        let t = TripleSystem::new(3, &[[0, 1, 2]]).unwrap();
        assert!(is_admissible(&Sequence::identity(3), &t).unwrap());
        assert!(Segment { start: 0, len: 3 }.is_proper(4));
        assert!(!Segment { start: 0, len: 3 }.is_proper(3));
        assert!(!Segment { start: 1, len: 0 }.is_proper(3));
    }

    #[test]
    fn order_nine_interleaving() {
        // 1,2,4,3,5,7,6,8,9 over blocks {1,2,3},{4,5,6},{7,8,9}
        let t = three_blocks();
        let seq = Sequence::new(vec![0, 1, 3, 2, 4, 6, 5, 7, 8], 9).unwrap();
        assert!(inadmissible_segments(&seq, &t).unwrap().is_empty());
        assert!(is_admissible(&seq, &t).unwrap());

        let with_357 = TripleSystem::new(9, &[[0, 1, 2], [3, 4, 5], [6, 7, 8], [2, 4, 6]]).unwrap();
        assert!(!is_admissible(&seq, &with_357).unwrap());
    }

    #[test]
    fn sequence_validation() {
        assert_eq!(
            Sequence::new(vec![0, 1], 3),
            Err(SequenceError::WrongLength { len: 2, order: 3 })
        );
        assert_eq!(
            Sequence::new(vec![0, 0, 1], 3),
            Err(SequenceError::RepeatedPoint(0))
        );
        assert_eq!(
            Sequence::new(vec![0, 3, 1], 3),
            Err(SequenceError::PointOutOfRange(3))
        );
        let t = three_blocks();
        assert!(is_admissible(&Sequence::identity(4), &t).is_err());
    }

    #[test]
    fn enumerates_every_partition() {
        // K_{3,3}-style: 9-set {0..8} with parts across
        let t = TripleSystem::new(
            9,
            &[
                [0, 1, 2],
                [3, 4, 5],
                [6, 7, 8],
                [0, 3, 6],
                [1, 4, 7],
                [2, 5, 8],
            ],
        )
        .unwrap();
        let all = all_partitions(t.points(), &t);
        assert_eq!(all.len(), 2);
        for w in &all {
            assert!(w.certifies(&t, t.points()));
        }
    }
}
