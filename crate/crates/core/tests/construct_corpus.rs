mod common;

use std::collections::BTreeMap;

use psts::is_admissible;
use psts::packing::max_disjoint_blocks;
use psts::sequencer::{construct_with, ConstructOptions, Method};

#[test]
fn construct_covers_the_corpus() {
    let corpus = common::corpus(5..=20, 40, 7);
    let mut tally: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for e in &corpus {
        assert!(max_disjoint_blocks(&e.system, None).nu <= 3, "{}", e.name);
        let c = construct_with(&e.system, &ConstructOptions::default())
            .unwrap_or_else(|err| panic!("{}: {err}", e.name));
        assert!(is_admissible(&c.sequence, &e.system).unwrap(), "{}", e.name);
        assert_ne!(c.method, Method::Search, "{}", e.name);
        let slot = tally
            .entry(format!("{:?} n={}", c.method, e.system.order()))
            .or_default();
        slot.0 += 1;
        if c.attempts > 1 {
            slot.1 += 1;
        }
    }
    for (k, (total, fallback)) in &tally {
        eprintln!("{k}: {total} systems, {fallback} needed another labelling");
    }
}
