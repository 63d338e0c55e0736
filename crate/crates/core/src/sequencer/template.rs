use serde::{Deserialize, Serialize};

use super::labels::{admissible, all_labelings, template, Labels};
use super::SequencerError;
use crate::system::{Block, PointSet, TripleSystem};

/// Positional pattern over three disjoint blocks and three extra points.
pub const PI_TEMPLATE: &str = "1 2 4 3 5 7 6 8 a 9 b c";

/// Roles for an order-12 system: `blocks[i]` holds the points labelled
/// `3i+1, 3i+2, 3i+3` and `extras` the points labelled `a, b, c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labeling {
    pub blocks: [[usize; 3]; 3],
    pub extras: [usize; 3],
}

impl Labeling {
    fn labels(&self) -> Labels {
        Labels::new(&self.blocks, &self.extras)
    }

    /// The template sequence `1,2,4,3,5,7,6,8,a,9,b,c` under this labelling.
    pub fn sequence(&self) -> Vec<usize> {
        let lab = self.labels();
        template(PI_TEMPLATE)
            .iter()
            .map(|&s| lab.point(s))
            .collect()
    }
}

/// Searches the 3! role assignments, 6^3 in-block orders and 3! extra-point
/// orders (7776 labellings) for the first whose template sequence is
/// admissible.
pub fn pi_template_instantiate(
    system: &TripleSystem,
    disjoint: [Block; 3],
) -> Result<Labeling, SequencerError> {
    if system.order() != 12 {
        return Err(SequencerError::Precondition(format!(
            "template needs order 12, got {}",
            system.order()
        )));
    }
    let mut covered = PointSet::EMPTY;
    for b in &disjoint {
        let [x, y, z] = b.points();
        if !system.is_block(x, y, z) {
            return Err(SequencerError::Precondition(format!(
                "{b:?} is not a block"
            )));
        }
        if !covered.is_disjoint(b.mask()) {
            return Err(SequencerError::Precondition(
                "blocks are not pairwise disjoint".into(),
            ));
        }
        covered = covered.union(b.mask());
    }
    let extras = system.points().difference(covered).to_vec();
    let slots = template(PI_TEMPLATE);
    for lab in all_labelings(&disjoint, &extras) {
        let seq = lab.render(&slots, 12);
        if admissible(&seq, system) {
            return Ok(Labeling {
                blocks: [lab.block(0), lab.block(1), lab.block(2)],
                extras: [lab.letters[0], lab.letters[1], lab.letters[2]],
            });
        }
    }
    Err(SequencerError::NoAdmissibleLabeling)
}

/// Three disjoint blocks of an order-12 system with exactly three, if any.
#[cfg(test)]
pub(crate) fn three_disjoint(system: &TripleSystem) -> Option<[Block; 3]> {
    let packing = crate::packing::max_disjoint_blocks(system, None);
    (packing.nu == 3).then(|| [packing.witness[0], packing.witness[1], packing.witness[2]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::{is_admissible, Sequence};

    fn sys(raw: &[[usize; 3]]) -> TripleSystem {
        TripleSystem::new(12, raw).unwrap()
    }

    #[test]
    fn bare_blocks_take_the_first_labelling() {
        let t = sys(&[[0, 1, 2], [3, 4, 5], [6, 7, 8]]);
        let d = three_disjoint(&t).unwrap();
        let lab = pi_template_instantiate(&t, d).unwrap();
        assert_eq!(lab.blocks, [[0, 1, 2], [3, 4, 5], [6, 7, 8]]);
        assert_eq!(lab.extras, [9, 10, 11]);
        assert_eq!(lab.sequence(), vec![0, 1, 3, 2, 4, 6, 5, 7, 9, 8, 10, 11]);
    }

    #[test]
    fn dense_configuration_is_solved() {
        // 1..9 -> 0..8, a,b,c -> 9,10,11; blocks [4,7,b],[5,9,b],[1,5,8],[1,6,7],[2,6,9],[3,4,8]
        let t = sys(&[
            [0, 1, 2],
            [3, 4, 5],
            [6, 7, 8],
            [3, 6, 10],
            [4, 8, 10],
            [0, 4, 7],
            [0, 5, 6],
            [1, 5, 8],
            [2, 3, 7],
        ]);
        let d = three_disjoint(&t).unwrap();
        let lab = pi_template_instantiate(&t, d).unwrap();
        let seq = Sequence::new(lab.sequence(), 12).unwrap();
        assert!(is_admissible(&seq, &t).unwrap());
    }

    #[test]
    fn four_disjoint_blocks_still_fit() {
        // the extras form a fourth block, but 9,b,c is not one
        let t = sys(&[[0, 1, 2], [3, 4, 5], [6, 7, 8], [9, 10, 11]]);
        let d = [t.block(0), t.block(1), t.block(2)];
        let lab = pi_template_instantiate(&t, d).unwrap();
        assert!(is_admissible(&Sequence::new(lab.sequence(), 12).unwrap(), &t).unwrap());
    }

    #[test]
    fn preconditions() {
        let t = TripleSystem::new(9, &[[0, 1, 2], [3, 4, 5], [6, 7, 8]]).unwrap();
        let d = [t.block(0), t.block(1), t.block(2)];
        assert!(matches!(
            pi_template_instantiate(&t, d),
            Err(SequencerError::Precondition(_))
        ));
        let t = sys(&[[0, 1, 2], [2, 4, 5], [6, 7, 8]]);
        let d = [t.block(0), t.block(1), t.block(2)];
        assert!(matches!(
            pi_template_instantiate(&t, d),
            Err(SequencerError::Precondition(_))
        ));
    }
}
