mod common;

use psts::is_admissible;
use psts::packing::max_disjoint_blocks;
use psts::sequencer::interleave_large;

/// Dense systems at the smallest allowed order, where the gaps are short
/// and repairs are needed.
#[test]
fn dense_systems_at_the_threshold() {
    for k in 1..=3 {
        let n = 15 * k - 5;
        for seed in 0..20 {
            let t = common::nu_bounded(n, k, seed);
            assert_eq!(max_disjoint_blocks(&t, None).nu, k);
            let s = interleave_large(&t, k).unwrap_or_else(|e| panic!("k={k} seed={seed}: {e}"));
            assert!(is_admissible(&s, &t).unwrap());
        }
    }
}
