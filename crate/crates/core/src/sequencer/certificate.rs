use serde::{Deserialize, Serialize};

use super::SequencerError;
use crate::generators::{cyclic_system, CyclicBase};
use crate::sequence::{PartitionWitness, Sequence};
use crate::system::{Block, PointSet, TripleSystem};

/// Four disjoint blocks of the cyclic STS(13) missing the point 11.
const BASE_PACKING: [[usize; 3]; 4] = [[0, 2, 7], [1, 3, 8], [5, 6, 9], [4, 10, 12]];
const BASE_MISSING: usize = 11;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub vertex: usize,
    /// Rotation `x -> x + exponent (mod 13)` applied to the base packing.
    pub exponent: usize,
    pub blocks: [Block; 4],
}

/// For every point of the cyclic STS(13), four disjoint blocks covering all
/// other points. Whatever point a sequence ends (or starts) with, the other
/// twelve form a proper segment that partitions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sts13Certificate {
    pub entries: Vec<CertificateEntry>,
}

impl Sts13Certificate {
    pub fn system() -> TripleSystem {
        cyclic_system(&CyclicBase::sts13()).expect("valid cyclic base")
    }

    pub fn entry(&self, vertex: usize) -> Option<&CertificateEntry> {
        self.entries.iter().find(|e| e.vertex == vertex)
    }

    /// Partitions of the first twelve and last twelve points of `seq`.
    pub fn end_partitions(&self, seq: &Sequence) -> Option<(PartitionWitness, PartitionWitness)> {
        let e = seq.entries();
        if e.len() != 13 {
            return None;
        }
        let part = |v: usize| {
            self.entry(v).map(|x| PartitionWitness {
                parts: x.blocks.to_vec(),
            })
        };
        Some((part(e[12])?, part(e[0])?))
    }
}

/// Rebuilds the cyclic STS(13) and checks, for each point `i`, that the base
/// packing rotated by `i - 11` consists of blocks of the system that are
/// pairwise disjoint and cover every point but `i`.
pub fn verify_sts13_certificate() -> Result<Sts13Certificate, SequencerError> {
    let base = CyclicBase::sts13();
    let system = Sts13Certificate::system();
    let m = base.modulus;
    let mut entries = Vec::with_capacity(m);
    for vertex in 0..m {
        let exponent = (vertex + m - BASE_MISSING) % m;
        let mut blocks = Vec::with_capacity(4);
        let mut covered = PointSet::EMPTY;
        for raw in BASE_PACKING {
            let [x, y, z] = base.rotate(raw, exponent);
            if !system.is_block(x, y, z) {
                return Err(SequencerError::CertificateFailure(format!(
                    "[{x},{y},{z}] is not a block (vertex {vertex})"
                )));
            }
            let b = Block::new(x, y, z).expect("distinct points");
            if !covered.is_disjoint(b.mask()) {
                return Err(SequencerError::CertificateFailure(format!(
                    "blocks for vertex {vertex} overlap"
                )));
            }
            covered = covered.union(b.mask());
            blocks.push(b);
        }
        if covered != system.points().difference(PointSet::singleton(vertex)) {
            return Err(SequencerError::CertificateFailure(format!(
                "blocks for vertex {vertex} do not cover the other points"
            )));
        }
        entries.push(CertificateEntry {
            vertex,
            exponent,
            blocks: [blocks[0], blocks[1], blocks[2], blocks[3]],
        });
    }
    Ok(Sts13Certificate { entries })
}
