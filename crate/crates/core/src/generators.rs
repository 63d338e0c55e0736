//! Named systems, random corpora, and the Johnson–Schönheim block bound.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::system::{Block, SystemError, TripleSystem, MAX_ORDER};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("modulus must be at least 3, got {0}")]
    ModulusTooSmall(usize),
    #[error("base block {0:?} does not have three distinct residues")]
    InvalidBase([usize; 3]),
    #[error("developed blocks {first:?} and {second:?} share a pair")]
    DevelopmentCollision {
        first: [usize; 3],
        second: [usize; 3],
    },
    #[error("every friendship graph in a chain needs at least 2 triangles, got {0}")]
    SizeTooSmall(usize),
    #[error("need at least one triangle")]
    Empty,
    #[error("{requested} blocks requested but order {order} admits at most {bound}")]
    ExceedsBound {
        requested: usize,
        order: usize,
        bound: usize,
    },
    #[error(transparent)]
    System(#[from] SystemError),
}

/// Base blocks over Z_n, developed under x ↦ x + 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicBase {
    pub modulus: usize,
    pub base_blocks: Vec<[usize; 3]>,
}

impl CyclicBase {
    /// Bases {0,1,4} and {0,2,7} over Z_13.
    pub fn sts13() -> Self {
        CyclicBase {
            modulus: 13,
            base_blocks: vec![[0, 1, 4], [0, 2, 7]],
        }
    }

    /// Rotation x ↦ x + shift (mod n) applied to a block.
    pub fn rotate(&self, block: [usize; 3], shift: usize) -> [usize; 3] {
        block.map(|x| (x + shift) % self.modulus)
    }
}

/// Develops every base block through all rotations. Blocks in short orbits
/// are kept once.
pub fn cyclic_system(base: &CyclicBase) -> Result<TripleSystem, GeneratorError> {
    let n = base.modulus;
    if n < 3 {
        return Err(GeneratorError::ModulusTooSmall(n));
    }
    if n > MAX_ORDER {
        return Err(SystemError::OrderTooLarge(n).into());
    }
    let mut blocks: Vec<Block> = Vec::new();
    for &raw in &base.base_blocks {
        let reduced = raw.map(|x| x % n);
        if Block::new(reduced[0], reduced[1], reduced[2]).is_none() {
            return Err(GeneratorError::InvalidBase(raw));
        }
        for shift in 0..n {
            let [a, b, c] = base.rotate(reduced, shift);
            blocks.push(Block::new(a, b, c).expect("rotation keeps residues distinct"));
        }
    }
    blocks.sort_unstable();
    blocks.dedup();
    let raw: Vec<[usize; 3]> = blocks.iter().map(Block::points).collect();
    TripleSystem::new(n, &raw).map_err(|e| match e {
        SystemError::PairInTwoBlocks(c) => GeneratorError::DevelopmentCollision {
            first: c.first.map(|s| s.parse().unwrap_or(0)),
            second: c.second.map(|s| s.parse().unwrap_or(0)),
        },
        other => other.into(),
    })
}

/// `m` triangles sharing the hub `h`; the other points are `x1 .. x2m`.
pub fn friendship(m: usize) -> Result<TripleSystem, GeneratorError> {
    if m == 0 {
        return Err(GeneratorError::Empty);
    }
    let mut labels = vec!["h".to_string()];
    labels.extend((1..=2 * m).map(|i| format!("x{i}")));
    let raw: Vec<[usize; 3]> = (0..m).map(|i| [0, 2 * i + 1, 2 * i + 2]).collect();
    Ok(TripleSystem::with_labels(labels, &raw)?)
}

/// Friendship graphs `G_1 .. G_k` with `sizes[i]` triangles, consecutive ones
/// glued at a degree-2 point. `G_i` meets `G_{i-1}` through its first
/// triangle and `G_{i+1}` through its last, so every graph uses two
/// different triangles.
///
/// Labels: hubs `h1..hk`, glued points `s1..s(k-1)`, other points `gI.J`.
pub fn friendship_chain(sizes: &[usize]) -> Result<TripleSystem, GeneratorError> {
    if sizes.is_empty() {
        return Err(GeneratorError::Empty);
    }
    let k = sizes.len();
    if let Some(&bad) = sizes.iter().find(|&&s| s == 0 || (k >= 2 && s < 2)) {
        return Err(if bad == 0 {
            GeneratorError::Empty
        } else {
            GeneratorError::SizeTooSmall(bad)
        });
    }

    let mut labels: Vec<String> = Vec::new();
    let add = |labels: &mut Vec<String>, l: String| {
        labels.push(l);
        labels.len() - 1
    };
    let mut raw = Vec::new();
    let mut incoming: Option<usize> = None;
    for (i, &m) in sizes.iter().enumerate() {
        let g = i + 1;
        let hub = add(&mut labels, format!("h{g}"));
        let mut fresh = 0;
        let mut next_label = |labels: &mut Vec<String>| {
            fresh += 1;
            add(labels, format!("g{g}.{fresh}"))
        };
        for t in 0..m {
            let first = match (t, incoming) {
                (0, Some(s)) => s,
                _ => next_label(&mut labels),
            };
            let second = if t == m - 1 && g < k {
                add(&mut labels, format!("s{g}"))
            } else {
                next_label(&mut labels)
            };
            raw.push([hub, first, second]);
            if t == m - 1 && g < k {
                incoming = Some(second);
            }
        }
    }
    Ok(TripleSystem::with_labels(labels, &raw)?)
}

/// Maximum number of blocks of a partial triple system on `n` points.
pub fn johnson_schonheim(n: usize) -> usize {
    if n < 3 {
        return 0;
    }
    let base = n * ((n - 1) / 2) / 3;
    if n % 6 == 5 {
        base - 1
    } else {
        base
    }
}

/// Result of [`random_system`]; `achieved < requested` means the greedy
/// insertion saturated first.
#[derive(Debug, Clone)]
pub struct RandomSystem {
    pub system: TripleSystem,
    pub requested: usize,
    pub achieved: usize,
}

impl RandomSystem {
    pub fn is_short(&self) -> bool {
        self.achieved < self.requested
    }
}

/// Seeded greedy system: all triples in a seeded random order, each kept if
/// it shares no pair with an earlier kept triple, until `target_blocks`.
pub fn random_system(
    n: usize,
    target_blocks: usize,
    seed: u64,
) -> Result<RandomSystem, GeneratorError> {
    if n > MAX_ORDER {
        return Err(SystemError::OrderTooLarge(n).into());
    }
    let bound = johnson_schonheim(n);
    if target_blocks > bound {
        return Err(GeneratorError::ExceedsBound {
            requested: target_blocks,
            order: n,
            bound,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triples = all_triples(n);
    triples.shuffle(&mut rng);
    let mut used = vec![false; n * n];
    let mut raw = Vec::with_capacity(target_blocks);
    for [a, b, c] in triples {
        if raw.len() == target_blocks {
            break;
        }
        if used[a * n + b] || used[a * n + c] || used[b * n + c] {
            continue;
        }
        used[a * n + b] = true;
        used[a * n + c] = true;
        used[b * n + c] = true;
        raw.push([a, b, c]);
    }
    let achieved = raw.len();
    Ok(RandomSystem {
        system: TripleSystem::new(n, &raw)?,
        requested: target_blocks,
        achieved,
    })
}

pub(crate) fn all_triples(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// A copy of `system` with `extra` isolated points appended, labelled
/// `z1, z2, ...` (skipping labels already in use).
pub fn pad_with_isolated(
    system: &TripleSystem,
    extra: usize,
) -> Result<TripleSystem, GeneratorError> {
    let mut labels = system.labels().to_vec();
    let mut k = 1;
    while labels.len() < system.order() + extra {
        let l = format!("z{k}");
        k += 1;
        if system.index_of(&l).is_none() {
            labels.push(l);
        }
    }
    let raw: Vec<[usize; 3]> = system.blocks().iter().map(Block::points).collect();
    Ok(TripleSystem::with_labels(labels, &raw)?)
}
