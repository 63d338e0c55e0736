use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::DEFAULT_BUDGET;
use crate::sequence::{is_admissible, Sequence};
use crate::system::{PointSet, TripleSystem};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCertificate {
    pub nodes_explored: u64,
    pub exhausted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Sequenceable(Sequence),
    NotSequenceable(SearchCertificate),
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub outcome: Outcome,
    pub budget_spent: u64,
}

impl Decision {
    pub fn witness(&self) -> Option<&Sequence> {
        match &self.outcome {
            Outcome::Sequenceable(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_sequenceable(&self) -> bool {
        matches!(self.outcome, Outcome::Sequenceable(_))
    }

    pub fn is_not_sequenceable(&self) -> bool {
        matches!(self.outcome, Outcome::NotSequenceable(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecideOptions {
    /// Node limit; a node is one point appended to a prefix.
    pub budget: u64,
    /// Worker threads sharing the first-point branches. 1 is sequential.
    pub workers: usize,
    /// Also reject a prefix when the points still to be placed (a suffix
    /// segment of every completion) partition into blocks.
    pub complement_pruning: bool,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            budget: DEFAULT_BUDGET,
            workers: 1,
            complement_pruning: true,
        }
    }
}

/// Exact decision with the given node budget, sequential.
pub fn decide(system: &TripleSystem, budget: u64) -> Decision {
    decide_with(
        system,
        &DecideOptions {
            budget,
            ..DecideOptions::default()
        },
    )
}

const FLUSH: u64 = 4096;

struct Shared {
    nodes: AtomicU64,
    stop: AtomicBool,
    budget_hit: AtomicBool,
}

enum Step {
    Done,
    Found,
    Stopped,
}

struct Dfs<'a> {
    system: &'a TripleSystem,
    n: usize,
    full: u128,
    complement: bool,
    budget: u64,
    shared: &'a Shared,
    base: u64,
    local: u64,
    prefix: Vec<usize>,
    cum: Vec<u128>,
    /// Count full sequences instead of stopping at the first.
    counting: bool,
    count: u64,
}

impl<'a> Dfs<'a> {
    fn new(
        system: &'a TripleSystem,
        opts: &DecideOptions,
        shared: &'a Shared,
        counting: bool,
    ) -> Self {
        let n = system.order();
        let mut cum = Vec::with_capacity(n + 1);
        cum.push(0);
        Dfs {
            system,
            n,
            full: system.points().0,
            complement: opts.complement_pruning,
            budget: opts.budget,
            shared,
            base: 0,
            local: 0,
            prefix: Vec::with_capacity(n),
            cum,
            counting,
            count: 0,
        }
    }

    fn flush(&mut self) -> bool {
        self.base = self.shared.nodes.fetch_add(self.local, Ordering::Relaxed) + self.local;
        self.local = 0;
        !self.shared.stop.load(Ordering::Relaxed)
    }

    /// Appends `p`; false if some new segment partitions into blocks.
    fn push(&mut self, p: usize) -> bool {
        let acc = self.cum[self.prefix.len()] | 1u128 << p;
        self.prefix.push(p);
        self.cum.push(acc);
        let len = self.prefix.len();
        for seg in (3..=len).step_by(3) {
            if seg >= self.n {
                break;
            }
            if self
                .system
                .has_partition(PointSet(acc ^ self.cum[len - seg]))
            {
                return false;
            }
        }
        let rest = self.n - len;
        !(self.complement
            && rest > 0
            && rest.is_multiple_of(3)
            && self.system.has_partition(PointSet(self.full & !acc)))
    }

    fn pop(&mut self) {
        self.prefix.pop();
        self.cum.pop();
    }

    fn visit(&mut self, p: usize) -> Step {
        self.local += 1;
        if self.base + self.local > self.budget {
            self.shared.budget_hit.store(true, Ordering::Relaxed);
            self.shared.stop.store(true, Ordering::Relaxed);
            return Step::Stopped;
        }
        if self.local >= FLUSH && !self.flush() {
            return Step::Stopped;
        }
        let step = if !self.push(p) {
            Step::Done
        } else if self.prefix.len() == self.n {
            if self.counting {
                self.count += 1;
                Step::Done
            } else {
                return Step::Found;
            }
        } else {
            self.descend()
        };
        // a found witness stays in `prefix`
        if !matches!(step, Step::Found) {
            self.pop();
        }
        step
    }

    fn descend(&mut self) -> Step {
        let used = self.cum[self.prefix.len()];
        for q in 0..self.n {
            if used >> q & 1 == 0 {
                match self.visit(q) {
                    Step::Done => {}
                    other => return other,
                }
            }
        }
        Step::Done
    }
}

struct BranchResults {
    found: Vec<(usize, Vec<usize>)>,
    count: u64,
}

fn run(system: &TripleSystem, opts: &DecideOptions, counting: bool) -> (BranchResults, u64, bool) {
    let n = system.order();
    let shared = Shared {
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        budget_hit: AtomicBool::new(false),
    };
    let next = AtomicUsize::new(0);
    let results = Mutex::new(BranchResults {
        found: Vec::new(),
        count: 0,
    });
    let worker = || {
        let mut dfs = Dfs::new(system, opts, &shared, counting);
        loop {
            if shared.stop.load(Ordering::Relaxed) {
                break;
            }
            let b = next.fetch_add(1, Ordering::Relaxed);
            if b >= n {
                break;
            }
            match dfs.visit(b) {
                Step::Found => {
                    results.lock().unwrap().found.push((b, dfs.prefix.clone()));
                    shared.stop.store(true, Ordering::Relaxed);
                    break;
                }
                Step::Stopped => break,
                Step::Done => {}
            }
        }
        dfs.flush();
        results.lock().unwrap().count += dfs.count;
    };
    let workers = opts.workers.max(1).min(n.max(1));
    if workers == 1 {
        worker();
    } else {
        std::thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(worker);
            }
        });
    }
    let nodes = shared.nodes.load(Ordering::Relaxed);
    let hit = shared.budget_hit.load(Ordering::Relaxed);
    (results.into_inner().unwrap(), nodes, hit)
}

/// Depth-first search over prefixes, extending by unused points in index
/// order. After each append every proper segment ending at the new point with
/// length `3, 6, ...` is tested for a block partition.
pub fn decide_with(system: &TripleSystem, opts: &DecideOptions) -> Decision {
    let n = system.order();
    if n == 0 {
        return Decision {
            outcome: Outcome::Sequenceable(Sequence::identity(0)),
            budget_spent: 0,
        };
    }
    let (mut results, nodes, budget_hit) = run(system, opts, false);
    results.found.sort_by_key(|(b, _)| *b);
    let outcome = if let Some((_, entries)) = results.found.into_iter().next() {
        let seq = Sequence::new(entries, n).expect("search builds permutations");
        assert!(
            is_admissible(&seq, system).expect("length matches"),
            "search returned an inadmissible witness"
        );
        Outcome::Sequenceable(seq)
    } else if budget_hit {
        Outcome::Unknown
    } else {
        Outcome::NotSequenceable(SearchCertificate {
            nodes_explored: nodes,
            exhausted: true,
        })
    };
    Decision {
        outcome,
        budget_spent: nodes,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    /// Number of admissible sequences seen.
    pub admissible: u64,
    pub nodes_explored: u64,
    /// True when the whole search tree was traversed within budget.
    pub complete: bool,
}

/// Traverses the whole search tree and counts admissible sequences.
pub fn enumerate_admissible(system: &TripleSystem, opts: &DecideOptions) -> Enumeration {
    if system.order() == 0 {
        return Enumeration {
            admissible: 1,
            nodes_explored: 0,
            complete: true,
        };
    }
    let (results, nodes, budget_hit) = run(system, opts, true);
    Enumeration {
        admissible: results.count,
        nodes_explored: nodes,
        complete: !budget_hit,
    }
}
