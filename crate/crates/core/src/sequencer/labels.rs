//! Digit/letter labellings of disjoint blocks and extra points, and the
//! sequence templates written over them.

use crate::sequence::first_inadmissible;
use crate::system::{Block, TripleSystem};

use super::Slot;

/// Digits `1..=3k` name the points of `k` disjoint blocks (block `i` gets
/// `3i-2, 3i-1, 3i`); letters `a, b, ...` name extra points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Labels {
    pub digits: Vec<usize>,
    pub letters: Vec<usize>,
}

impl Labels {
    pub fn new(blocks: &[[usize; 3]], letters: &[usize]) -> Self {
        Labels {
            digits: blocks.iter().flatten().copied().collect(),
            letters: letters.to_vec(),
        }
    }

    /// Point labelled by digit `d` (1-based).
    pub fn d(&self, d: usize) -> usize {
        self.digits[d - 1]
    }

    /// Point labelled by letter `c`.
    pub fn l(&self, c: char) -> usize {
        self.letters[(c as u8 - b'a') as usize]
    }

    pub fn swap(&mut self, x: usize, y: usize) {
        self.digits.swap(x - 1, y - 1);
    }

    pub fn block(&self, i: usize) -> [usize; 3] {
        [
            self.digits[3 * i],
            self.digits[3 * i + 1],
            self.digits[3 * i + 2],
        ]
    }

    pub fn point(&self, slot: Slot) -> usize {
        match slot {
            Slot::Digit(d) => self.d(d as usize),
            Slot::Letter(l) => self.letters[l as usize],
        }
    }

    /// The template's points, followed by every other point of the system in
    /// index order.
    pub fn render(&self, template: &[Slot], order: usize) -> Vec<usize> {
        let mut out: Vec<usize> = template.iter().map(|&s| self.point(s)).collect();
        let mut taken = vec![false; order];
        for &p in &out {
            taken[p] = true;
        }
        out.extend((0..order).filter(|&p| !taken[p]));
        out
    }
}

/// Parses a template such as `"1 2 4 3 5 a 6 b c"`.
pub(crate) fn template(pattern: &str) -> Vec<Slot> {
    pattern
        .split_whitespace()
        .map(|t| {
            let c = t.as_bytes()[0];
            if c.is_ascii_digit() {
                Slot::Digit(c - b'0')
            } else {
                Slot::Letter(c - b'a')
            }
        })
        .collect()
}

pub(crate) fn admissible(entries: &[usize], system: &TripleSystem) -> bool {
    first_inadmissible(entries, entries.len(), system).is_none()
}

pub(crate) fn permutations3(x: [usize; 3]) -> [[usize; 3]; 6] {
    let [a, b, c] = x;
    [
        [a, b, c],
        [a, c, b],
        [b, a, c],
        [b, c, a],
        [c, a, b],
        [c, b, a],
    ]
}

/// All orderings of `items`, lexicographic in position.
pub(crate) fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Every labelling of `blocks` (any role order, any order inside each block)
/// and of `letters` (any order), in a fixed order.
pub(crate) fn all_labelings(blocks: &[Block], letters: &[usize]) -> Vec<Labels> {
    let ids: Vec<usize> = (0..blocks.len()).collect();
    let letter_orders = permutations(letters);
    let mut out = Vec::new();
    for roles in permutations(&ids) {
        let mut partial: Vec<Vec<[usize; 3]>> = vec![Vec::new()];
        for &r in &roles {
            partial = partial
                .into_iter()
                .flat_map(|p| {
                    permutations3(blocks[r].points())
                        .into_iter()
                        .map(move |perm| {
                            let mut q = p.clone();
                            q.push(perm);
                            q
                        })
                })
                .collect();
        }
        for p in &partial {
            for ls in &letter_orders {
                out.push(Labels::new(p, ls));
            }
        }
    }
    out
}

/// First labelling (in the order given) whose rendering of `template` is
/// admissible, with its position.
pub(crate) fn first_admissible<I>(
    candidates: I,
    template: &[Slot],
    system: &TripleSystem,
) -> Option<(Vec<usize>, usize)>
where
    I: IntoIterator<Item = Labels>,
{
    candidates.into_iter().enumerate().find_map(|(i, lab)| {
        let seq = lab.render(template, system.order());
        admissible(&seq, system).then_some((seq, i))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_appends_the_rest() {
        let lab = Labels::new(&[[4, 5, 6], [0, 1, 2]], &[9, 3]);
        assert_eq!(lab.d(4), 0);
        assert_eq!(lab.l('b'), 3);
        let t = template("1 4 a 2");
        assert_eq!(lab.render(&t, 10), vec![4, 0, 9, 5, 1, 2, 3, 6, 7, 8]);
    }

    #[test]
    fn labelling_counts() {
        assert_eq!(permutations(&[1, 2, 3, 4]).len(), 24);
        let b = |x, y, z| Block::new(x, y, z).unwrap();
        let all = all_labelings(&[b(0, 1, 2), b(3, 4, 5), b(6, 7, 8)], &[9, 10, 11]);
        assert_eq!(all.len(), 7776);
        assert_eq!(
            all[0],
            Labels::new(&[[0, 1, 2], [3, 4, 5], [6, 7, 8]], &[9, 10, 11])
        );
    }
}
