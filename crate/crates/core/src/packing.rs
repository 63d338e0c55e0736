//! Vertex-disjoint block structure: maximum packings, bad and good sets, and
//! the perfect matchings that 9-set partitions induce between two disjoint
//! blocks.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sequence::{partition_into_blocks, PartitionWitness};
use crate::system::{Block, PointSet, TripleSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PackingError {
    #[error("bad sets need order at least 9, got {0}")]
    OrderTooSmall(usize),
    #[error("set has {got} points, expected n - 9 = {expected}")]
    WrongCardinality { got: usize, expected: usize },
    #[error("point {0} is out of range")]
    PointOutOfRange(usize),
    #[error("part {0:?} is one of the two blocks, so no matching is induced")]
    PartContainsWholeBlock(Block),
    #[error("invalid matching input: {0}")]
    InvalidMatchingInput(String),
}

/// A maximum family of pairwise disjoint blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingResult {
    pub nu: usize,
    pub witness: Vec<Block>,
    pub nodes_explored: u64,
    /// False when the node budget ran out; `nu` is then only a lower bound.
    pub exact: bool,
}

struct Packer<'a> {
    masks: &'a [PointSet],
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl Packer<'_> {
    fn search(&mut self, from: usize, used: PointSet) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let Some(next) = (from..self.masks.len()).find(|&j| self.masks[j].is_disjoint(used)) else {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            return;
        };
        let reachable = self.masks[next..]
            .iter()
            .filter(|m| m.is_disjoint(used))
            .fold(PointSet::EMPTY, |acc, m| acc.union(*m));
        if self.current.len() + reachable.len() / 3 <= self.best.len() {
            return;
        }
        self.current.push(next);
        self.search(next + 1, used.union(self.masks[next]));
        self.current.pop();
        self.search(next + 1, used);
    }
}

/// Maximum number of pairwise disjoint blocks, by include/exclude branching
/// over the canonical block order with a reachable-points/3 bound.
pub fn max_disjoint_blocks(system: &TripleSystem, budget: Option<u64>) -> PackingResult {
    let mut packer = Packer {
        masks: system.block_masks(),
        best: Vec::new(),
        current: Vec::new(),
        nodes: 0,
        budget: budget.unwrap_or(u64::MAX),
        exhausted: false,
    };
    packer.search(0, PointSet::EMPTY);
    PackingResult {
        nu: packer.best.len(),
        witness: packer.best.iter().map(|&id| system.block(id)).collect(),
        nodes_explored: packer.nodes,
        exact: !packer.exhausted,
    }
}

/// A bad set together with three disjoint blocks covering its complement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadSet {
    pub points: Vec<usize>,
    pub realization: [Block; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadSetReport {
    pub m_size: usize,
    pub bad_sets: Vec<BadSet>,
}

impl BadSetReport {
    /// For order 10 these are the bad points.
    pub fn points(&self) -> impl Iterator<Item = &[usize]> {
        self.bad_sets.iter().map(|b| b.points.as_slice())
    }
}

/// All sets `M` with `|M| = n - 9` whose complement is three disjoint blocks,
/// found by running over disjoint block triples. Sorted by `M`; each carries
/// the first realization in canonical order.
pub fn bad_sets(system: &TripleSystem) -> Result<BadSetReport, PackingError> {
    let n = system.order();
    if n < 9 {
        return Err(PackingError::OrderTooSmall(n));
    }
    let masks = system.block_masks();
    let all = system.points();
    let mut found: Vec<(PointSet, [Block; 3])> = Vec::new();
    for i in 0..masks.len() {
        for j in i + 1..masks.len() {
            if !masks[i].is_disjoint(masks[j]) {
                continue;
            }
            let ij = masks[i].union(masks[j]);
            for (k, &mk) in masks.iter().enumerate().skip(j + 1) {
                if mk.is_disjoint(ij) {
                    let m = all.difference(ij.union(mk));
                    found.push((m, [system.block(i), system.block(j), system.block(k)]));
                }
            }
        }
    }
    // stable sort keeps the canonical-first realization at the front of each run
    found.sort_by_key(|(m, _)| m.to_vec());
    found.dedup_by_key(|(m, _)| *m);
    Ok(BadSetReport {
        m_size: n - 9,
        bad_sets: found
            .into_iter()
            .map(|(m, realization)| BadSet {
                points: m.to_vec(),
                realization,
            })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodSetAnswer {
    pub good: bool,
    pub realization: Option<[Block; 3]>,
}

/// Whether the complement of `m` (with `|m| = n - 9`) has no partition into
/// three blocks. A bad answer carries one partition.
pub fn is_good_set(system: &TripleSystem, m: &[usize]) -> Result<GoodSetAnswer, PackingError> {
    let n = system.order();
    if let Some(&p) = m.iter().find(|&&p| p >= n) {
        return Err(PackingError::PointOutOfRange(p));
    }
    let set = PointSet::from_points(m.iter().copied());
    let expected = n.saturating_sub(9);
    if n < 9 || set.len() != expected || m.len() != expected {
        return Err(PackingError::WrongCardinality {
            got: m.len(),
            expected,
        });
    }
    Ok(
        match partition_into_blocks(system.points().difference(set), system) {
            Some(w) => GoodSetAnswer {
                good: false,
                realization: Some([w.parts[0], w.parts[1], w.parts[2]]),
            },
            None => GoodSetAnswer {
                good: true,
                realization: None,
            },
        },
    )
}

/// The perfect matching between two disjoint blocks `A1`, `A2` induced by a
/// partition of a 9-set containing both. Edge `i` is `(A1 point, A2 point)`
/// and `labels[i]` is the third point of the part containing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedMatching {
    pub edges: [(usize, usize); 3],
    pub labels: [usize; 3],
}

impl InducedMatching {
    pub fn shares_edge_with(&self, other: &InducedMatching) -> bool {
        self.edges.iter().any(|e| other.edges.contains(e))
    }

    pub fn label_of(&self, edge: (usize, usize)) -> Option<usize> {
        self.edges
            .iter()
            .position(|&e| e == edge)
            .map(|i| self.labels[i])
    }
}

pub fn induced_matching(
    partition: &PartitionWitness,
    a1: Block,
    a2: Block,
) -> Result<InducedMatching, PackingError> {
    let bad = |m: &str| Err(PackingError::InvalidMatchingInput(m.to_string()));
    if !a1.mask().is_disjoint(a2.mask()) {
        return bad("blocks are not disjoint");
    }
    if partition.parts.len() != 3 {
        return bad("partition must have three parts");
    }
    let nine = partition.points();
    if nine.len() != 9 {
        return bad("parts must be disjoint and cover nine points");
    }
    if !a1.mask().union(a2.mask()).is_subset(nine) {
        return bad("both blocks must lie in the partitioned set");
    }
    let mut edges = [(0, 0); 3];
    let mut labels = [0; 3];
    for (i, part) in partition.parts.iter().enumerate() {
        if *part == a1 || *part == a2 {
            return Err(PackingError::PartContainsWholeBlock(*part));
        }
        let pts = part.points();
        let u: Vec<usize> = pts.iter().copied().filter(|&p| a1.contains(p)).collect();
        let v: Vec<usize> = pts.iter().copied().filter(|&p| a2.contains(p)).collect();
        let ([u], [v]) = (u.as_slice(), v.as_slice()) else {
            return bad("a part does not meet each block in one point");
        };
        edges[i] = (*u, *v);
        labels[i] = pts
            .iter()
            .copied()
            .find(|&p| p != *u && p != *v)
            .expect("third point");
    }
    Ok(InducedMatching { edges, labels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cyclic_system, friendship, CyclicBase};

    #[test]
    fn two_disjoint_blocks() {
        let t = TripleSystem::new(6, &[[0, 1, 2], [3, 4, 5]]).unwrap();
        let r = max_disjoint_blocks(&t, None);
        assert_eq!(r.nu, 2);
        assert_eq!(r.witness, t.blocks());
        assert!(r.exact);
    }

    #[test]
    fn friendship_packs_one() {
        assert_eq!(max_disjoint_blocks(&friendship(4).unwrap(), None).nu, 1);
        let empty = TripleSystem::new(4, &[]).unwrap();
        assert_eq!(max_disjoint_blocks(&empty, None).nu, 0);
    }

    #[test]
    fn sts13_packs_four() {
        let t = cyclic_system(&CyclicBase::sts13()).unwrap();
        let r = max_disjoint_blocks(&t, None);
        assert_eq!(r.nu, 4);
        let union = r
            .witness
            .iter()
            .fold(PointSet::EMPTY, |a, b| a.union(b.mask()));
        assert_eq!(union.len(), 12);
    }

    #[test]
    fn budget_marks_inexact() {
        let t = cyclic_system(&CyclicBase::sts13()).unwrap();
        let r = max_disjoint_blocks(&t, Some(3));
        assert!(!r.exact);
        assert!(r.nu <= 4);
    }

    fn labelled_12() -> TripleSystem {
        // [1,2,3],[4,5,6],[7,8,9] and isolated a,b,c
        let labels = ["1", "2", "3", "4", "5", "6", "7", "8", "9", "a", "b", "c"]
            .map(String::from)
            .to_vec();
        TripleSystem::with_labels(labels, &[[0, 1, 2], [3, 4, 5], [6, 7, 8]]).unwrap()
    }

    #[test]
    fn bad_set_of_three_blocks() {
        let t = labelled_12();
        let r = bad_sets(&t).unwrap();
        assert_eq!(r.m_size, 3);
        assert_eq!(r.bad_sets.len(), 1);
        assert_eq!(r.bad_sets[0].points, vec![9, 10, 11]);

        let nine = TripleSystem::new(9, &[[0, 1, 2], [3, 4, 5], [6, 7, 8]]).unwrap();
        let r = bad_sets(&nine).unwrap();
        assert_eq!(r.bad_sets.len(), 1);
        assert!(r.bad_sets[0].points.is_empty());

        assert_eq!(
            bad_sets(&TripleSystem::new(8, &[]).unwrap()),
            Err(PackingError::OrderTooSmall(8))
        );
    }

    #[test]
    fn good_sets() {
        let t = labelled_12();
        let bad = is_good_set(&t, &[9, 10, 11]).unwrap();
        assert!(!bad.good);
        assert_eq!(
            bad.realization.unwrap(),
            [t.block(0), t.block(1), t.block(2)]
        );
        assert!(is_good_set(&t, &[0, 10, 11]).unwrap().good);
        assert_eq!(
            is_good_set(&t, &[0, 10]),
            Err(PackingError::WrongCardinality {
                got: 2,
                expected: 3
            })
        );
        assert!(is_good_set(&t, &[0, 0, 1]).is_err());
    }

    #[test]
    fn matching_from_partition() {
        // points 1..9 -> 0..8, b -> 9
        let b = |x, y, z| Block::new(x, y, z).unwrap();
        let part = PartitionWitness {
            parts: vec![b(0, 4, 7), b(1, 5, 8), b(3, 6, 9)],
        };
        let m = induced_matching(&part, b(3, 4, 5), b(6, 7, 8)).unwrap();
        assert_eq!(m.edges, [(4, 7), (5, 8), (3, 6)]);
        assert_eq!(m.labels, [0, 1, 9]);
        assert_eq!(m.label_of((3, 6)), Some(9));

        let whole = PartitionWitness {
            parts: vec![b(3, 4, 5), b(0, 1, 2), b(6, 7, 8)],
        };
        assert_eq!(
            induced_matching(&whole, b(3, 4, 5), b(6, 7, 8)),
            Err(PackingError::PartContainsWholeBlock(b(3, 4, 5)))
        );
    }
}
