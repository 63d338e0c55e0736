//! Construction for large orders: the points `U` of a maximum packing are
//! spread out with runs of other points `V` between them, and short segments
//! that happen to be blocks are repaired by exchanging `V` points.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::construct::{verify, Method};
use super::SequencerError;
use crate::packing::max_disjoint_blocks;
use crate::sequence::Sequence;
use crate::system::{PointSet, TripleSystem};

/// Number of `V` orderings tried: the canonical one, then seeds `1..`.
pub const INTERLEAVE_RETRIES: usize = 100;

/// Points inserted between consecutive `U` points when there are enough.
const GAP: usize = 5;

/// Admissible sequence for a system whose maximum packing has `k` blocks and
/// whose order is at least `15k - 5`.
///
/// A segment of length `3m` can only partition if it holds `m` points of `U`,
/// since a block inside `V` would be a `(k+1)`-th disjoint block. Gaps of five
/// rule that out for `m > 1`. There are `12k - 5` points of `V` at the least
/// order, fewer than the `15k - 5` that full gaps need, so gaps shrink to
/// `|V| / (3k - 1)` (at least three) with the remainder spread over the first
/// gaps, and every inadmissible segment is left to the repair.
pub fn interleave_large(system: &TripleSystem, k: usize) -> Result<Sequence, SequencerError> {
    let n = system.order();
    if k == 0 || n + 5 < 15 * k {
        return Err(SequencerError::Precondition(format!(
            "interleaving needs k >= 1 and order at least 15k-5 = {}, got k = {k}, order {n}",
            (15 * k).saturating_sub(5)
        )));
    }
    let packing = max_disjoint_blocks(system, None);
    if packing.nu != k {
        return Err(SequencerError::Precondition(format!(
            "system has {} disjoint blocks, not {k}",
            packing.nu
        )));
    }
    let u: Vec<usize> = packing.witness.iter().flat_map(|b| b.points()).collect();
    let u_mask: PointSet = u.iter().copied().collect();
    let v_canonical = system.points().difference(u_mask).to_vec();
    let gaps = gap_sizes(v_canonical.len(), 3 * k - 1);

    for attempt in 0..INTERLEAVE_RETRIES {
        let mut v = v_canonical.clone();
        if attempt > 0 {
            v.shuffle(&mut ChaCha8Rng::seed_from_u64(attempt as u64));
        }
        let entries = layout(&u, &v, &gaps);
        if let Some(entries) = repair(system, entries, &u_mask) {
            return verify(system, entries, Method::Interleave);
        }
    }
    Err(SequencerError::RepairFailed {
        attempts: INTERLEAVE_RETRIES,
    })
}

fn gap_sizes(v: usize, gaps: usize) -> Vec<usize> {
    let base = (v / gaps).min(GAP);
    let mut extra = if base < GAP { v - base * gaps } else { 0 };
    (0..gaps)
        .map(|_| {
            if extra > 0 {
                extra -= 1;
                base + 1
            } else {
                base
            }
        })
        .collect()
}

fn layout(u: &[usize], v: &[usize], gaps: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(u.len() + v.len());
    let mut rest = v.iter().copied();
    for (i, &p) in u.iter().enumerate() {
        out.push(p);
        if let Some(&g) = gaps.get(i) {
            out.extend(rest.by_ref().take(g));
        }
    }
    out.extend(rest);
    out
}

/// Inadmissible proper segments and the first of them.
fn defects(system: &TripleSystem, entries: &[usize]) -> (usize, Option<(usize, usize)>) {
    let n = entries.len();
    let mut cum = vec![0u128; n + 1];
    for (i, &p) in entries.iter().enumerate() {
        cum[i + 1] = cum[i] | 1u128 << p;
    }
    let mut count = 0;
    let mut first = None;
    for len in (3..n).step_by(3) {
        for start in 0..=n - len {
            if system.has_partition(PointSet(cum[start + len] ^ cum[start])) {
                count += 1;
                if first.is_none() {
                    first = Some((start, len));
                }
            }
        }
    }
    (count, first)
}

/// Greedy local search: while some segment partitions, exchange a `V` point
/// inside the first such segment with a `V` point outside it, choosing the
/// exchange that leaves the fewest inadmissible segments. Gives up when every
/// such exchange revisits an earlier arrangement or after `20n` steps.
fn repair(system: &TripleSystem, mut entries: Vec<usize>, u: &PointSet) -> Option<Vec<usize>> {
    let n = entries.len();
    let v_slots: Vec<usize> = (0..n).filter(|&i| !u.contains(entries[i])).collect();
    let mut seen = HashSet::new();
    seen.insert(entries.clone());
    for _ in 0..20 * n {
        let (_, first) = defects(system, &entries);
        let Some((start, len)) = first else {
            return Some(entries);
        };
        let mut best: Option<(usize, usize, usize)> = None;
        for &i in v_slots.iter().filter(|&&i| i >= start && i < start + len) {
            for &j in v_slots.iter().filter(|&&j| j < start || j >= start + len) {
                entries.swap(i, j);
                if !seen.contains(&entries) {
                    let (c, _) = defects(system, &entries);
                    if best.is_none_or(|(b, _, _)| c < b) {
                        best = Some((c, i, j));
                    }
                }
                entries.swap(i, j);
            }
        }
        let (_, i, j) = best?;
        entries.swap(i, j);
        seen.insert(entries.clone());
    }
    None
}
