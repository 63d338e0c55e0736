//! Direct constructions of admissible sequences, dispatched on the maximum
//! number of pairwise disjoint blocks.
//!
//! Each recipe fixes a labelling of a few disjoint blocks (digits) and extra
//! points (letters) and writes a short template, with any further points
//! appended in index order. When the recipe's labelling rules do not yield an
//! admissible sequence the other labellings of the same template are tried in
//! a fixed order; `Construction::attempts` records how many were checked.

use serde::{Deserialize, Serialize};

use super::labels::{
    admissible, all_labelings, first_admissible, permutations, permutations3, template, Labels,
};
use super::search::{decide, Outcome};
use super::template::pi_template_instantiate;
use super::{extend, interleave_large, SequencerError, DEFAULT_BUDGET};
use crate::packing::max_disjoint_blocks;
use crate::sequence::{first_inadmissible, Sequence};
use crate::system::{Block, PointSet, TripleSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    /// No blocks at all.
    Trivial,
    /// Every two blocks meet.
    IntersectingBlocks,
    TwoDisjointBlocks,
    ThreeBlocksOrder9,
    ThreeBlocksOrder10,
    ThreeBlocksOrder11,
    /// The order-12 template search.
    Template12,
    /// Order-12 residual solved by template, remaining points appended.
    Extension,
    /// Spread-out placement of a maximum packing for large orders.
    Interleave,
    /// Exact search.
    Search,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Construction {
    pub sequence: Sequence,
    pub method: Method,
    /// Maximum number of pairwise disjoint blocks.
    pub nu: usize,
    /// Labellings checked before one was admissible (1 when the recipe's own
    /// labelling worked).
    pub attempts: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructOptions {
    /// Node budget for the search fallback.
    pub fallback_budget: u64,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            fallback_budget: DEFAULT_BUDGET,
        }
    }
}

pub fn construct(system: &TripleSystem) -> Result<Sequence, SequencerError> {
    construct_with(system, &ConstructOptions::default()).map(|c| c.sequence)
}

/// Builds an admissible sequence, re-verifying it before returning.
pub fn construct_with(
    system: &TripleSystem,
    opts: &ConstructOptions,
) -> Result<Construction, SequencerError> {
    let n = system.order();
    let packing = max_disjoint_blocks(system, None);
    let nu = packing.nu;
    let w = &packing.witness;
    let (entries, method, attempts) = match nu {
        0 => ((0..n).collect(), Method::Trivial, 1),
        1 => (intersecting(system), Method::IntersectingBlocks, 1),
        2 => {
            let (seq, attempts) = two_disjoint(system, [w[0], w[1]])?;
            (seq, Method::TwoDisjointBlocks, attempts)
        }
        3 => {
            let d = [w[0], w[1], w[2]];
            match n {
                9 => {
                    let (seq, a) = order9(system, d)?;
                    (seq, Method::ThreeBlocksOrder9, a)
                }
                10 => {
                    let (seq, a) = order10(system, d)?;
                    (seq, Method::ThreeBlocksOrder10, a)
                }
                11 => {
                    let (seq, a) = order11(system, d)?;
                    (seq, Method::ThreeBlocksOrder11, a)
                }
                12 => (
                    pi_template_instantiate(system, d)?.sequence(),
                    Method::Template12,
                    1,
                ),
                _ => (extended(system, d)?, Method::Extension, 1),
            }
        }
        k if n >= 15 * k - 5 => (
            interleave_large(system, k)?.into_inner(),
            Method::Interleave,
            1,
        ),
        _ => {
            let decision = decide(system, opts.fallback_budget);
            match decision.outcome {
                Outcome::Sequenceable(s) => (s.into_inner(), Method::Search, 1),
                Outcome::NotSequenceable(c) => {
                    return Err(SequencerError::NotSequenceableSystem {
                        nodes: c.nodes_explored,
                    })
                }
                Outcome::Unknown => {
                    return Err(SequencerError::BudgetExhausted {
                        nodes: decision.budget_spent,
                    })
                }
            }
        }
    };
    let sequence = verify(system, entries, method)?;
    Ok(Construction {
        sequence,
        method,
        nu,
        attempts,
    })
}

pub(crate) fn verify(
    system: &TripleSystem,
    entries: Vec<usize>,
    method: Method,
) -> Result<Sequence, SequencerError> {
    let n = system.order();
    if let Some(segment) = first_inadmissible(&entries, n, system) {
        return Err(SequencerError::VerificationFailed { method, segment });
    }
    Ok(Sequence::new(entries, n)?)
}

fn sorted(b: Block) -> [usize; 3] {
    b.points()
}

fn others(system: &TripleSystem, used: PointSet) -> Vec<usize> {
    system.points().difference(used).to_vec()
}

/// Any two blocks meet. With one block `[1,2,3]`: `1,2,a,3`. With a second
/// block `[1,a,b]`: `1,2,a,b,3` on five points, else `1,c,2,3,a,b`.
fn intersecting(system: &TripleSystem) -> Vec<usize> {
    let n = system.order();
    let blocks = system.blocks();
    let b1 = blocks[0];
    let rest = |used: &[usize]| {
        let mask = PointSet::from_points(used.iter().copied());
        let mut out = used.to_vec();
        out.extend(others(system, mask));
        out
    };
    if blocks.len() == 1 {
        let [p1, p2, p3] = sorted(b1);
        return match others(system, b1.mask()).first() {
            None => vec![p1, p2, p3],
            Some(&a) => rest(&[p1, p2, a, p3]),
        };
    }
    let second = blocks[1];
    let one = b1
        .mask()
        .intersection(second.mask())
        .first()
        .expect("blocks meet");
    let [two, three] = pair_without(b1, one);
    let [a, b] = pair_without(second, one);
    if n == 5 {
        return vec![one, two, a, b, three];
    }
    let c = others(system, b1.mask().union(second.mask()))[0];
    rest(&[one, c, two, three, a, b])
}

fn pair_without(b: Block, x: usize) -> [usize; 2] {
    let v: Vec<usize> = b.points().into_iter().filter(|&p| p != x).collect();
    [v[0], v[1]]
}

/// Labellings of two blocks (either role order) and of `letters`.
fn two_block_labelings(d: [Block; 2], letters: &[usize]) -> impl Iterator<Item = Labels> + '_ {
    [[d[0], d[1]], [d[1], d[0]]]
        .into_iter()
        .flat_map(move |[x, y]| {
            permutations3(x.points()).into_iter().flat_map(move |px| {
                permutations3(y.points()).into_iter().flat_map(move |py| {
                    permutations(letters)
                        .into_iter()
                        .map(move |ls| Labels::new(&[px, py], &ls))
                })
            })
        })
}

/// Two disjoint blocks `[1,2,3]`, `[4,5,6]` and at most two of them disjoint.
fn two_disjoint(
    system: &TripleSystem,
    d: [Block; 2],
) -> Result<(Vec<usize>, usize), SequencerError> {
    let n = system.order();
    let used = d[0].mask().union(d[1].mask());
    let rest = others(system, used);
    let blk = |x, y, z| system.is_block(x, y, z);
    let (pattern, letters): (&str, Vec<usize>) = match n {
        6 => ("1 2 4 5 3 6", vec![]),
        7 => ("1 2 4 a 5 3 6", rest.clone()),
        8 => ("1 2 4 3 a 5 6 b", rest.clone()),
        _ => ("1 2 4 3 5 a 6 b c", rest[..3].to_vec()),
    };
    let slots = template(pattern);
    // the labelling rules, as predicates on a candidate labelling
    let rule = |lab: &Labels| -> bool {
        match n {
            6 => true,
            // extra blocks through a pair i with i+3
            7 => {
                let a = lab.l('a');
                (1..=3).all(|i| (4..=6).all(|j| j == i + 3 || !blk(lab.d(i), lab.d(j), a)))
            }
            8 => {
                let (a, b) = (lab.l('a'), lab.l('b'));
                let ab_ok = system.third_point(a, b).is_none_or(|x| x == lab.d(1));
                let a3_ok = system
                    .third_point(lab.d(3), a)
                    .is_none_or(|x| x == lab.d(6));
                ab_ok && a3_ok
            }
            _ => {
                let pts = [lab.l('a'), lab.l('b'), lab.l('c')];
                let pairs = [(pts[0], pts[1]), (pts[0], pts[2]), (pts[1], pts[2])];
                let tips_ok = pairs
                    .iter()
                    .all(|&(u, v)| !blk(lab.d(5), u, v) && !blk(lab.d(6), u, v));
                tips_ok && !blk(lab.d(3), lab.d(5), pts[0]) && !blk(lab.d(3), pts[0], pts[1])
            }
        }
    };
    let ruled = two_block_labelings(d, &letters).filter(|l| rule(l));
    if let Some((seq, i)) = first_admissible(ruled, &slots, system) {
        return Ok((seq, i + 1));
    }
    let tried = two_block_labelings(d, &letters).filter(|l| rule(l)).count();
    first_admissible(two_block_labelings(d, &letters), &slots, system)
        .map(|(seq, i)| (seq, tried + i + 1))
        .ok_or(SequencerError::VerificationFailed {
            method: Method::TwoDisjointBlocks,
            segment: first_inadmissible(
                &Labels::new(&[sorted(d[0]), sorted(d[1])], &letters).render(&slots, n),
                n,
                system,
            )
            .expect("no admissible labelling"),
        })
}

/// Falls back to every labelling of `pattern` once the recipe's own labelling
/// fails.
fn settle(
    system: &TripleSystem,
    d: [Block; 3],
    letters: &[usize],
    pattern: &str,
    primary: Labels,
    method: Method,
) -> Result<(Vec<usize>, usize), SequencerError> {
    let slots = template(pattern);
    let n = system.order();
    let first = primary.render(&slots, n);
    if admissible(&first, system) {
        return Ok((first, 1));
    }
    let segment = first_inadmissible(&first, n, system).expect("inadmissible");
    first_admissible(all_labelings(&d, letters), &slots, system)
        .map(|(seq, i)| (seq, i + 2))
        .ok_or(SequencerError::VerificationFailed { method, segment })
}

/// Order 9: `1,2,4,3,5,7,6,8,9`, exchanging labels 2 and 3 when `[3,5,7]` is
/// a block.
fn order9(system: &TripleSystem, d: [Block; 3]) -> Result<(Vec<usize>, usize), SequencerError> {
    let mut lab = Labels::new(&d.map(sorted), &[]);
    if system.is_block(lab.d(3), lab.d(5), lab.d(7)) {
        lab.swap(2, 3);
    }
    settle(
        system,
        d,
        &[],
        "1 2 4 3 5 7 6 8 9",
        lab,
        Method::ThreeBlocksOrder9,
    )
}

/// Order 10 with extra point `a`: `1,4,5,7,6,8,3,9,a,2`, where 1 and 2 are
/// good points, `[9,x,a]` is no block for `x` in the first block, and none
/// of `[3,6,8]`, `[3,6,9]`, `[3,6,a]`, `[2,6,9]` is a block.
fn order10(system: &TripleSystem, d: [Block; 3]) -> Result<(Vec<usize>, usize), SequencerError> {
    let all = system.points();
    let a = others(system, d[0].mask().union(d[1].mask()).union(d[2].mask()))[0];
    let good = |p: usize| !system.has_partition(all.difference(PointSet::singleton(p)));
    let good_count = |b: &Block| b.points().iter().filter(|&&p| good(p)).count();

    let i3 = (0..3).find(|&i| good_count(&d[i]) < 2).unwrap_or(2);
    let b3 = d[i3];
    let nine = b3.points()[0];
    let x = system.third_point(nine, a);
    let remaining: Vec<usize> = (0..3).filter(|&i| i != i3).collect();
    let i1 = remaining
        .iter()
        .copied()
        .find(|&i| x.is_none_or(|x| !d[i].contains(x)))
        .unwrap_or(remaining[0]);
    let i2 = remaining
        .into_iter()
        .find(|&i| i != i1)
        .expect("three blocks");

    let mut b1 = sorted(d[i1]);
    if let Some(bad) = b1.iter().position(|&p| !good(p)) {
        b1.swap(bad, 2);
        let (lo, hi) = (b1[0].min(b1[1]), b1[0].max(b1[1]));
        b1[0] = lo;
        b1[1] = hi;
    }
    let three = b1[2];
    let b2_pts = sorted(d[i2]);
    let b3_rest = pair_without(b3, nine);
    let mut choice = None;
    'six: for &six in &b2_pts {
        let t = system.third_point(three, six);
        if t == Some(nine) || t == Some(a) {
            continue;
        }
        for eight in [b3_rest[0], b3_rest[1]] {
            if t != Some(eight) {
                choice = Some((six, eight));
                break 'six;
            }
        }
    }
    let (six, eight) = choice.unwrap_or((b2_pts[2], b3_rest[1]));
    let [four, five] = pair_without(d[i2], six);
    let seven = if b3_rest[0] == eight {
        b3_rest[1]
    } else {
        b3_rest[0]
    };
    let mut lab = Labels::new(&[b1, [four, five, six], [seven, eight, nine]], &[a]);
    if system.is_block(lab.d(2), lab.d(6), lab.d(9)) {
        lab.swap(1, 2);
    }
    settle(
        system,
        d,
        &[a],
        "1 4 5 7 6 8 3 9 a 2",
        lab,
        Method::ThreeBlocksOrder10,
    )
}

/// Order 11 with extra points `a, b`: `b,1,2,4,3,5,7,6,8,a,9`, where 9 is
/// good after deleting either extra point and 1, 2 are good after deleting
/// `b`; then labels are exchanged to clear `3,5,7,6,8,a`.
fn order11(system: &TripleSystem, d: [Block; 3]) -> Result<(Vec<usize>, usize), SequencerError> {
    let all = system.points();
    let l = others(system, d[0].mask().union(d[1].mask()).union(d[2].mask()));
    let (a, b) = (l[0], l[1]);
    let good_without =
        |x: usize, p: usize| !system.has_partition(all.difference(PointSet::from_points([x, p])));

    let nine_pos = d
        .iter()
        .enumerate()
        .flat_map(|(i, blk)| blk.points().into_iter().map(move |p| (i, p)))
        .find(|&(_, p)| good_without(a, p) && good_without(b, p));
    let (i3, nine) = nine_pos.unwrap_or((2, d[2].points()[0]));
    let remaining: Vec<usize> = (0..3).filter(|&i| i != i3).collect();
    let good_b = |i: usize| -> Vec<usize> {
        d[i].points()
            .into_iter()
            .filter(|&p| good_without(b, p))
            .collect()
    };
    let i1 = remaining
        .iter()
        .copied()
        .find(|&i| good_b(i).len() >= 2)
        .unwrap_or(remaining[0]);
    let i2 = remaining
        .into_iter()
        .find(|&i| i != i1)
        .expect("three blocks");

    let gb = good_b(i1);
    let b1 = if gb.len() >= 2 {
        let third = pair_without(d[i1], gb[0])
            .into_iter()
            .find(|&p| p != gb[1])
            .expect("third point");
        [gb[0], gb[1], third]
    } else {
        sorted(d[i1])
    };
    let [seven, eight] = pair_without(d[i3], nine);
    let mut lab = Labels::new(&[b1, sorted(d[i2]), [seven, eight, nine]], &[a, b]);

    let six_set = |lab: &Labels| {
        PointSet::from_points([3, 5, 7, 6, 8].map(|k| lab.d(k)).into_iter().chain([a]))
    };
    if system.has_partition(six_set(&lab)) {
        lab.swap(4, 5);
    }
    if system.is_block(lab.d(3), lab.d(5), lab.d(7)) {
        if !system.is_block(lab.d(5), lab.d(8), a) {
            lab.swap(5, 6);
        } else {
            lab.swap(7, 8);
        }
    } else if system.is_block(lab.d(6), lab.d(8), a) {
        if !system.is_block(lab.d(3), lab.d(6), lab.d(7)) {
            lab.swap(5, 6);
        } else {
            lab.swap(7, 8);
        }
    }
    settle(
        system,
        d,
        &[a, b],
        "b 1 2 4 3 5 7 6 8 a 9",
        lab,
        Method::ThreeBlocksOrder11,
    )
}

/// Order at least 13: the template on the three blocks plus the first three
/// other points, then everything else.
fn extended(system: &TripleSystem, d: [Block; 3]) -> Result<Vec<usize>, SequencerError> {
    let blocks_mask = d[0].mask().union(d[1].mask()).union(d[2].mask());
    let mut residual = blocks_mask.to_vec();
    residual.extend(others(system, blocks_mask).into_iter().take(3));
    residual.sort_unstable();
    let sub = system.induced(&residual);
    let local = |b: Block| {
        let [x, y, z] = b
            .points()
            .map(|p| residual.iter().position(|&q| q == p).expect("in residual"));
        Block::new(x, y, z).expect("distinct")
    };
    let labeling = pi_template_instantiate(&sub, d.map(local))?;
    let residual_sequence: Vec<usize> = labeling
        .sequence()
        .into_iter()
        .map(|i| residual[i])
        .collect();
    Ok(extend(system, &residual, &residual_sequence)?.into_inner())
}
