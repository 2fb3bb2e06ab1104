//! Exact minimum hitting sets for teaching-set computation.
//!
//! Elements are domain instances, sets are the difference sets between the
//! concept being taught and each rival. `cover[e]` is the bit row of sets
//! hit by element `e`.

use crate::bits;

pub(crate) struct HittingSet {
    elements: usize,
    sets: usize,
    /// Per set, its elements as a bit row over `0..elements`.
    members: Vec<Vec<u64>>,
    /// Per element, the sets it hits as a bit row over `0..sets`.
    cover: Vec<Vec<u64>>,
}

impl HittingSet {
    /// `members[s]` lists the elements of set `s`; all sets must be nonempty.
    pub(crate) fn new(elements: usize, members: Vec<Vec<u64>>) -> Self {
        let sets = members.len();
        let mut cover = vec![vec![0u64; bits::words_for(sets)]; elements];
        for (s, row) in members.iter().enumerate() {
            debug_assert!(!bits::is_empty(row), "difference sets are never empty");
            for e in bits::ones(row) {
                bits::set(&mut cover[e], s);
            }
        }
        HittingSet { elements, sets, members, cover }
    }

    /// Lexicographically smallest minimum hitting set, or `None` if every
    /// hitting set has more than `cap` elements.
    pub(crate) fn minimum(&self, cap: usize) -> Option<Vec<usize>> {
        let all_sets = bits::full(self.sets);
        let all_elems = bits::full(self.elements);
        let greedy = self.greedy(&all_sets);
        let lower = self.lower_bound(&all_sets, &all_elems)?;
        let mut size = None;
        for s in lower..greedy.len().min(cap + 1) {
            if self.feasible(&all_sets, s, all_elems.clone()) {
                size = Some(s);
                break;
            }
        }
        let size = match size {
            Some(s) => s,
            None if greedy.len() <= cap => greedy.len(),
            None => return None,
        };
        Some(self.lex_smallest(size))
    }

    fn greedy(&self, uncovered: &[u64]) -> Vec<usize> {
        let mut left = uncovered.to_vec();
        let mut picked = Vec::new();
        while !bits::is_empty(&left) {
            let (best, _) = (0..self.elements)
                .map(|e| (e, and_count(&self.cover[e], &left)))
                .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
            and_not_assign(&mut left, &self.cover[best]);
            picked.push(best);
        }
        picked.sort_unstable();
        picked
    }

    /// Max of the coverage bound and a greedy disjoint-set packing, or `None`
    /// if some uncovered set has no allowed element.
    fn lower_bound(&self, uncovered: &[u64], allowed: &[u64]) -> Option<usize> {
        let remaining = bits::count(uncovered);
        if remaining == 0 {
            return Some(0);
        }
        let best_cover = bits::ones(allowed).map(|e| and_count(&self.cover[e], uncovered)).max()?;
        if best_cover == 0 {
            return None;
        }
        let coverage = remaining.div_ceil(best_cover);

        let mut used = vec![0u64; allowed.len()];
        let mut packing = 0;
        for s in bits::ones(uncovered) {
            let row = &self.members[s];
            if row.iter().zip(allowed).all(|(r, a)| r & a == 0) {
                return None;
            }
            if row.iter().zip(allowed).zip(&used).all(|((r, a), u)| r & a & u == 0) {
                packing += 1;
                used.iter_mut().zip(row).zip(allowed).for_each(|((u, r), a)| *u |= r & a);
            }
        }
        Some(coverage.max(packing))
    }

    /// Whether the uncovered sets can be hit with at most `budget` elements
    /// drawn from `allowed`.
    fn feasible(&self, uncovered: &[u64], budget: usize, mut allowed: Vec<u64>) -> bool {
        if bits::is_empty(uncovered) {
            return true;
        }
        match self.lower_bound(uncovered, &allowed) {
            Some(lb) if lb <= budget => {}
            _ => return false,
        }
        // Branch on the uncovered set with the fewest allowed elements.
        let (branch_set, _) = bits::ones(uncovered)
            .map(|s| (s, and_count(&self.members[s], &allowed)))
            .min_by_key(|&(_, c)| c)
            .expect("nonempty");
        let candidates: Vec<usize> = bits::ones(&self.members[branch_set])
            .filter(|&e| bits::get(&allowed, e))
            .collect();
        for e in candidates {
            let mut next = uncovered.to_vec();
            and_not_assign(&mut next, &self.cover[e]);
            if self.feasible(&next, budget - 1, allowed.clone()) {
                return true;
            }
            // Later branches may assume `e` is not used.
            bits::clear(&mut allowed, e);
        }
        false
    }

    fn lex_smallest(&self, size: usize) -> Vec<usize> {
        let mut chosen = Vec::with_capacity(size);
        let mut uncovered = bits::full(self.sets);
        let mut start = 0;
        while !bits::is_empty(&uncovered) {
            let left = size - chosen.len() - 1;
            let e = (start..self.elements)
                .find(|&e| {
                    let mut next = uncovered.clone();
                    and_not_assign(&mut next, &self.cover[e]);
                    let mut allowed = bits::full(self.elements);
                    (0..=e).for_each(|i| bits::clear(&mut allowed, i));
                    self.feasible(&next, left, allowed)
                })
                .expect("a hitting set of this size exists");
            and_not_assign(&mut uncovered, &self.cover[e]);
            chosen.push(e);
            start = e + 1;
        }
        chosen
    }
}

#[inline]
fn and_count(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

#[inline]
fn and_not_assign(a: &mut [u64], b: &[u64]) {
    a.iter_mut().zip(b).for_each(|(x, y)| *x &= !y);
}
