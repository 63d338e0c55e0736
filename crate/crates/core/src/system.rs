//! Validated partial Steiner triple systems.
//!
//! Points are dense indices `0..n` with an attached label table. Blocks are
//! stored sorted, in lexicographic order, and every unordered pair of points
//! lies in at most one block.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported order. Point sets are packed into a `u128`.
pub const MAX_ORDER: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SystemError {
    #[error("order {0} exceeds the supported maximum of {MAX_ORDER}")]
    OrderTooLarge(usize),
    #[error("point {point} is out of range for order {order}")]
    PointOutOfRange { point: usize, order: usize },
    #[error("block {0:?} repeats a point")]
    RepeatedPointInBlock([String; 3]),
    #[error(
        "pair {{{}, {}}} lies in blocks {:?} and {:?}",
        .0.pair[0], .0.pair[1], .0.first, .0.second
    )]
    PairInTwoBlocks(Box<PairConflict>),
    #[error("block {0:?} appears twice")]
    DuplicateBlock([String; 3]),
    #[error("unknown point label `{0}`")]
    UnknownLabel(String),
    #[error("point label `{0}` declared twice")]
    DuplicateLabel(String),
    #[error("{labels} labels declared for a system of order {order}")]
    TooManyLabels { labels: usize, order: usize },
}

/// Two blocks sharing a pair, by label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairConflict {
    pub pair: [String; 2],
    pub first: [String; 3],
    pub second: [String; 3],
}

/// A set of points of a system, as a bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PointSet(pub u128);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    /// All points of a system of order `n`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_ORDER);
        if n == MAX_ORDER {
            PointSet(u128::MAX)
        } else {
            PointSet((1u128 << n) - 1)
        }
    }

    pub fn singleton(p: usize) -> Self {
        PointSet(1u128 << p)
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(points: I) -> Self {
        PointSet(points.into_iter().fold(0u128, |m, p| m | (1u128 << p)))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, p: usize) -> bool {
        p < MAX_ORDER && self.0 >> p & 1 == 1
    }

    pub fn insert(&mut self, p: usize) {
        self.0 |= 1u128 << p;
    }

    pub fn remove(&mut self, p: usize) {
        self.0 &= !(1u128 << p);
    }

    pub fn union(self, other: PointSet) -> PointSet {
        PointSet(self.0 | other.0)
    }

    pub fn intersection(self, other: PointSet) -> PointSet {
        PointSet(self.0 & other.0)
    }

    pub fn difference(self, other: PointSet) -> PointSet {
        PointSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: PointSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Least point of the set.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let p = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(p)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for PointSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        PointSet::from_points(iter)
    }
}

/// Three distinct points in ascending order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Block([usize; 3]);

impl Block {
    /// Builds a block from three distinct points, sorting them.
    pub fn new(a: usize, b: usize, c: usize) -> Option<Block> {
        let mut pts = [a, b, c];
        pts.sort_unstable();
        (pts[0] != pts[1] && pts[1] != pts[2]).then_some(Block(pts))
    }

    pub fn points(&self) -> [usize; 3] {
        self.0
    }

    pub fn mask(&self) -> PointSet {
        PointSet::from_points(self.0)
    }

    pub fn contains(&self, p: usize) -> bool {
        self.0.contains(&p)
    }

    /// The point of the block other than `x` and `y`, if both are in it.
    pub fn third(&self, x: usize, y: usize) -> Option<usize> {
        if x == y || !self.contains(x) || !self.contains(y) {
            return None;
        }
        self.0.iter().copied().find(|&p| p != x && p != y)
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.0[0], self.0[1], self.0[2])
    }
}

const NO_BLOCK: u32 = u32::MAX;

/// A partial Steiner triple system: `n` points and a family of blocks that
/// pairwise share at most one point. Points outside every block are allowed.
///
/// Immutable after construction.
#[derive(Clone)]
pub struct TripleSystem {
    labels: Vec<String>,
    label_index: HashMap<String, usize>,
    blocks: Vec<Block>,
    masks: Vec<PointSet>,
    pair_index: Vec<u32>,
    point_blocks: Vec<Vec<u32>>,
}

impl TripleSystem {
    /// Validates a system over indices `0..n`, labelled by their decimal index.
    pub fn new(n: usize, raw_blocks: &[[usize; 3]]) -> Result<Self, SystemError> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::with_labels(labels, raw_blocks)
    }

    /// Validates a system whose point `i` carries `labels[i]`.
    pub fn with_labels(
        labels: Vec<String>,
        raw_blocks: &[[usize; 3]],
    ) -> Result<Self, SystemError> {
        let n = labels.len();
        if n > MAX_ORDER {
            return Err(SystemError::OrderTooLarge(n));
        }
        let mut label_index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if label_index.insert(l.clone(), i).is_some() {
                return Err(SystemError::DuplicateLabel(l.clone()));
            }
        }
        let lab = |pts: [usize; 3]| pts.map(|p| labels[p].clone());

        let mut blocks = Vec::with_capacity(raw_blocks.len());
        for raw in raw_blocks {
            if let Some(&point) = raw.iter().find(|&&p| p >= n) {
                return Err(SystemError::PointOutOfRange { point, order: n });
            }
            let block = Block::new(raw[0], raw[1], raw[2])
                .ok_or_else(|| SystemError::RepeatedPointInBlock(lab(*raw)))?;
            blocks.push(block);
        }
        blocks.sort_unstable();
        if let Some(w) = blocks.windows(2).find(|w| w[0] == w[1]) {
            return Err(SystemError::DuplicateBlock(lab(w[0].points())));
        }

        let mut pair_index = vec![NO_BLOCK; n * n];
        let mut point_blocks = vec![Vec::new(); n];
        for (id, block) in blocks.iter().enumerate() {
            let [x, y, z] = block.points();
            for (u, v) in [(x, y), (x, z), (y, z)] {
                let slot = pair_index[u * n + v];
                if slot != NO_BLOCK {
                    return Err(SystemError::PairInTwoBlocks(Box::new(PairConflict {
                        pair: [labels[u].clone(), labels[v].clone()],
                        first: lab(blocks[slot as usize].points()),
                        second: lab(block.points()),
                    })));
                }
                pair_index[u * n + v] = id as u32;
                pair_index[v * n + u] = id as u32;
            }
            for p in block.points() {
                point_blocks[p].push(id as u32);
            }
        }
        let masks = blocks.iter().map(Block::mask).collect();
        Ok(TripleSystem {
            labels,
            label_index,
            blocks,
            masks,
            pair_index,
            point_blocks,
        })
    }

    /// Validates a system given by labelled blocks. The first `points` labels
    /// are taken in the given order; labels first seen in blocks follow in
    /// natural order; unnamed isolated points are filled in up to `order`.
    pub fn from_labelled(
        order: usize,
        points: &[String],
        raw_blocks: &[[String; 3]],
    ) -> Result<Self, SystemError> {
        let mut labels: Vec<String> = Vec::with_capacity(order);
        let mut seen = HashMap::new();
        for l in points {
            if seen.insert(l.clone(), labels.len()).is_some() {
                return Err(SystemError::DuplicateLabel(l.clone()));
            }
            labels.push(l.clone());
        }
        let mut fresh: Vec<&String> = raw_blocks
            .iter()
            .flatten()
            .filter(|l| !seen.contains_key(*l))
            .collect();
        fresh.sort_by(|a, b| natural_cmp(a, b));
        fresh.dedup();
        for l in fresh {
            seen.insert(l.clone(), labels.len());
            labels.push(l.clone());
        }
        if labels.len() > order {
            return Err(SystemError::TooManyLabels {
                labels: labels.len(),
                order,
            });
        }
        let mut k = 1;
        while labels.len() < order {
            let candidate = format!("iso{k}");
            k += 1;
            if !seen.contains_key(&candidate) {
                seen.insert(candidate.clone(), labels.len());
                labels.push(candidate);
            }
        }
        let indexed: Vec<[usize; 3]> = raw_blocks
            .iter()
            .map(|b| b.clone().map(|l| seen[&l]))
            .collect();
        Self::with_labels(labels, &indexed)
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, id: usize) -> Block {
        self.blocks[id]
    }

    pub fn block_masks(&self) -> &[PointSet] {
        &self.masks
    }

    pub fn points(&self) -> PointSet {
        PointSet::full(self.order())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, p: usize) -> &str {
        &self.labels[p]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.label_index.get(label).copied()
    }

    pub fn labels_of(&self, points: &[usize]) -> Vec<String> {
        points.iter().map(|&p| self.labels[p].clone()).collect()
    }

    /// Resolves labels to point indices.
    pub fn resolve(&self, labels: &[String]) -> Result<Vec<usize>, SystemError> {
        labels
            .iter()
            .map(|l| {
                self.index_of(l)
                    .ok_or_else(|| SystemError::UnknownLabel(l.clone()))
            })
            .collect()
    }

    /// The block containing both `u` and `v`.
    pub fn block_of_pair(&self, u: usize, v: usize) -> Option<Block> {
        if u == v {
            return None;
        }
        let id = self.pair_index[u * self.order() + v];
        (id != NO_BLOCK).then(|| self.blocks[id as usize])
    }

    /// The third point of the block through `u` and `v`.
    pub fn third_point(&self, u: usize, v: usize) -> Option<usize> {
        self.block_of_pair(u, v).and_then(|b| b.third(u, v))
    }

    pub fn is_block(&self, a: usize, b: usize, c: usize) -> bool {
        self.third_point(a, b) == Some(c)
    }

    /// Ids of the blocks through `p`, in canonical order.
    pub fn blocks_through(&self, p: usize) -> impl Iterator<Item = usize> + '_ {
        self.point_blocks[p].iter().map(|&id| id as usize)
    }

    pub fn degree(&self, p: usize) -> usize {
        self.point_blocks[p].len()
    }

    /// Whether `set` is a disjoint union of blocks. The empty set is.
    pub fn has_partition(&self, set: PointSet) -> bool {
        if !set.len().is_multiple_of(3) {
            return false;
        }
        self.has_partition_rec(set.0)
    }

    fn has_partition_rec(&self, set: u128) -> bool {
        if set == 0 {
            return true;
        }
        let p = set.trailing_zeros() as usize;
        self.point_blocks[p].iter().any(|&id| {
            let m = self.masks[id as usize].0;
            m & !set == 0 && self.has_partition_rec(set & !m)
        })
    }

    /// The sub-system on `points` (in the given order), keeping labels and
    /// the blocks that lie entirely inside.
    pub fn induced(&self, points: &[usize]) -> TripleSystem {
        let mut local = vec![usize::MAX; self.order()];
        for (i, &p) in points.iter().enumerate() {
            local[p] = i;
        }
        let inside = PointSet::from_points(points.iter().copied());
        let raw: Vec<[usize; 3]> = self
            .blocks
            .iter()
            .filter(|b| b.mask().is_subset(inside))
            .map(|b| b.points().map(|p| local[p]))
            .collect();
        let labels = points.iter().map(|&p| self.labels[p].clone()).collect();
        TripleSystem::with_labels(labels, &raw).expect("sub-system of a valid system is valid")
    }
}

impl fmt::Debug for TripleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TripleSystem")
            .field("order", &self.order())
            .field("blocks", &self.blocks)
            .finish()
    }
}

impl PartialEq for TripleSystem {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.blocks == other.blocks
    }
}

impl Eq for TripleSystem {}

/// Orders labels with embedded digit runs compared numerically, so that
/// `2 < 10` and `x2 < x10`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut a, mut b) = (a.as_bytes(), b.as_bytes());
    loop {
        match (a.first(), b.first()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let da = a.iter().take_while(|c| c.is_ascii_digit()).count();
                let db = b.iter().take_while(|c| c.is_ascii_digit()).count();
                let (na, nb) = (trim_zeros(&a[..da]), trim_zeros(&b[..db]));
                let ord = na
                    .len()
                    .cmp(&nb.len())
                    .then_with(|| na.cmp(nb))
                    .then(da.cmp(&db));
                if ord != Ordering::Equal {
                    return ord;
                }
                a = &a[da..];
                b = &b[db..];
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(y);
                }
                a = &a[1..];
                b = &b[1..];
            }
        }
    }
}

fn trim_zeros(s: &[u8]) -> &[u8] {
    let k = s.iter().take_while(|&&c| c == b'0').count();
    &s[k..]
}
