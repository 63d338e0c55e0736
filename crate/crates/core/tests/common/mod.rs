//! Seeded test corpora and brute-force helpers shared by the integration
//! tests.
#![allow(dead_code)]

use psts::generators::{friendship_chain, johnson_schonheim, pad_with_isolated, random_system};
use psts::packing::max_disjoint_blocks;
use psts::{PointSet, TripleSystem};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct Entry {
    pub name: String,
    pub system: TripleSystem,
}

fn triples(n: usize) -> Vec<[usize; 3]> {
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

/// Random system of order `n` with at most `max_nu` disjoint blocks. Starts
/// from `min(max_nu, n/3)` disjoint blocks on shuffled points, then adds
/// shuffled triples that share no pair with earlier blocks and keep the
/// packing number within the bound, up to a random number of blocks.
pub fn nu_bounded(n: usize, max_nu: usize, seed: u64) -> TripleSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<usize> = (0..n).collect();
    pts.shuffle(&mut rng);
    let mut blocks: Vec<[usize; 3]> = pts
        .chunks_exact(3)
        .take(max_nu.min(n / 3))
        .map(|c| {
            let mut b = [c[0], c[1], c[2]];
            b.sort_unstable();
            b
        })
        .collect();
    let target = rng.gen_range(blocks.len()..=johnson_schonheim(n).max(blocks.len()));
    let mut used = vec![false; n * n];
    let mark = |used: &mut Vec<bool>, b: &[usize; 3]| {
        for (x, y) in [(b[0], b[1]), (b[0], b[2]), (b[1], b[2])] {
            used[x * n + y] = true;
        }
    };
    for b in &blocks {
        mark(&mut used, b);
    }
    let mut all = triples(n);
    all.shuffle(&mut rng);
    for t in all {
        if blocks.len() >= target {
            break;
        }
        if used[t[0] * n + t[1]] || used[t[0] * n + t[2]] || used[t[1] * n + t[2]] {
            continue;
        }
        // t plus max_nu disjoint blocks avoiding it would break the bound
        let mask = PointSet::from_points(t);
        let avoiding: Vec<[usize; 3]> = blocks
            .iter()
            .filter(|b| PointSet::from_points(**b).is_disjoint(mask))
            .copied()
            .collect();
        if avoiding.len() >= max_nu {
            let sub = TripleSystem::new(n, &avoiding).unwrap();
            if max_disjoint_blocks(&sub, None).nu >= max_nu {
                continue;
            }
        }
        mark(&mut used, &t);
        blocks.push(t);
    }
    TripleSystem::new(n, &blocks).unwrap()
}

/// Friendship chains with one to three graphs, padded with isolated points
/// to every order in `orders` they fit.
pub fn chains(orders: std::ops::RangeInclusive<usize>) -> Vec<Entry> {
    let shapes: [&[usize]; 9] = [
        &[2],
        &[3],
        &[4],
        &[5],
        &[2, 2],
        &[2, 3],
        &[3, 3],
        &[2, 2, 2],
        &[2, 3, 2],
    ];
    let mut out = Vec::new();
    for sizes in shapes {
        let chain = friendship_chain(sizes).unwrap();
        for n in orders.clone() {
            if n >= chain.order() {
                out.push(Entry {
                    name: format!("chain{sizes:?}+{}", n - chain.order()),
                    system: pad_with_isolated(&chain, n - chain.order()).unwrap(),
                });
            }
        }
    }
    out
}

/// Seeded mixture of packing-bounded random systems, friendship chains and
/// order-12 three-block residuals, all with at most three disjoint blocks.
pub fn corpus(orders: std::ops::RangeInclusive<usize>, per_order: usize, seed: u64) -> Vec<Entry> {
    let mut out = Vec::new();
    for n in orders.clone() {
        for i in 0..per_order {
            let max_nu = 1 + i % 3;
            let s = seed ^ (n as u64) << 32 ^ i as u64;
            out.push(Entry {
                name: format!("random n={n} nu<={max_nu} seed={s}"),
                system: nu_bounded(n, max_nu, s),
            });
        }
    }
    out.extend(chains(orders.clone()));
    if orders.contains(&12) {
        out.extend(residuals(per_order, seed.wrapping_add(1)));
    }
    out
}

/// Order-12 systems with exactly three disjoint blocks.
pub fn residuals(count: usize, seed: u64) -> Vec<Entry> {
    (0..count as u64)
        .map(|i| Entry {
            name: format!("residual seed={}", seed + i),
            system: nu_bounded(12, 3, seed + i),
        })
        .collect()
}

/// Unrestricted random partial systems of order `n`.
pub fn unrestricted(n: usize, count: usize, seed: u64) -> Vec<TripleSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let target = rng.gen_range(0..=johnson_schonheim(n));
            random_system(n, target, rng.gen()).unwrap().system
        })
        .collect()
}

/// All `k`-subsets of `items`.
pub fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = subsets(&items[1..], k - 1);
    for s in &mut out {
        s.insert(0, items[0]);
    }
    out.extend(subsets(&items[1..], k));
    out
}

/// Number of ways to write `set` as a disjoint union of blocks, by trying
/// every subset of blocks.
pub fn brute_partitions(system: &TripleSystem, set: &[usize]) -> usize {
    let target = PointSet::from_points(set.iter().copied());
    let inside: Vec<PointSet> = system
        .blocks()
        .iter()
        .map(|b| b.mask())
        .filter(|m| m.is_subset(target))
        .collect();
    let k = set.len() / 3;
    if !set.len().is_multiple_of(3) {
        return 0;
    }
    let ids: Vec<usize> = (0..inside.len()).collect();
    subsets(&ids, k)
        .into_iter()
        .filter(|s| {
            s.iter()
                .fold(PointSet::EMPTY, |acc, &i| acc.union(inside[i]))
                == target
        })
        .count()
}

/// Violations of: the 2-block partition is unique, no third block lies in
/// the set, and swapping any point for an outside one destroys every
/// partition.
pub fn six_set_violations(t: &TripleSystem) -> Vec<String> {
    let pts: Vec<usize> = (0..t.order()).collect();
    let mut out = Vec::new();
    for a in subsets(&pts, 6) {
        let parts = brute_partitions(t, &a);
        if parts == 0 {
            continue;
        }
        if parts != 1 {
            out.push(format!("{a:?}: {parts} partitions"));
        }
        let inside = t
            .blocks()
            .iter()
            .filter(|b| b.points().iter().all(|p| a.contains(p)))
            .count();
        if inside != 2 {
            out.push(format!("{a:?}: {inside} blocks inside"));
        }
        for i in 0..6 {
            for q in pts.iter().filter(|q| !a.contains(q)) {
                let mut b = a.clone();
                b[i] = *q;
                if brute_partitions(t, &b) > 0 {
                    out.push(format!("{a:?}: replacing {} by {q} still partitions", a[i]));
                }
            }
        }
    }
    out
}
