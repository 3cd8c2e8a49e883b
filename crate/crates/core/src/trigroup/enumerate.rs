use super::word::{Gen, GroupWord};
use super::GroupPresentation;

/// Exponents allowed for one generator, in enumeration order.
pub fn exponent_range(order: Option<u32>, max_abs_exp: u32) -> Vec<i64> {
    match order {
        Some(o) => (1..=(o.saturating_sub(1)).min(max_abs_exp) as i64).collect(),
        None => (1..=max_abs_exp as i64).flat_map(|e| [e, -e]).collect(),
    }
}

/// Streams cyclically reduced words t^a1.s^b1…t^ak.s^bk (2 ≤ 2k ≤ max_blocks),
/// one per class under cyclic rotation: a word is emitted iff its sequence of
/// (a_i, b_i) pairs is lexicographically minimal among its rotations.
/// Words are ordered by block count, then lexicographically in exponent order.
pub struct WordEnumerator {
    t_exps: Vec<i64>,
    s_exps: Vec<i64>,
    max_pairs: usize,
    pairs: usize,
    idx: Vec<usize>,
    fresh: bool,
}

impl WordEnumerator {
    pub fn new(g: &GroupPresentation, max_blocks: usize, max_abs_exp: u32) -> Self {
        assert!(max_blocks >= 1, "max_blocks must be positive");
        Self::from_ranges(
            exponent_range(g.order_t, max_abs_exp),
            exponent_range(g.order_s, max_abs_exp),
            max_blocks,
        )
    }

    pub fn from_ranges(t_exps: Vec<i64>, s_exps: Vec<i64>, max_blocks: usize) -> Self {
        WordEnumerator {
            t_exps,
            s_exps,
            max_pairs: max_blocks / 2,
            pairs: 1,
            idx: vec![0],
            fresh: true,
        }
    }

    pub fn t_exponents(&self) -> &[i64] {
        &self.t_exps
    }

    pub fn s_exponents(&self) -> &[i64] {
        &self.s_exps
    }

    fn alphabet(&self) -> usize {
        self.t_exps.len() * self.s_exps.len()
    }

    fn is_necklace(idx: &[usize]) -> bool {
        let n = idx.len();
        (1..n).all(|r| {
            for i in 0..n {
                let a = idx[i];
                let b = idx[(i + r) % n];
                if a != b {
                    return a < b;
                }
            }
            true
        })
    }

    fn advance(&mut self) -> bool {
        let k = self.alphabet();
        let mut i = self.idx.len();
        while i > 0 {
            i -= 1;
            self.idx[i] += 1;
            if self.idx[i] < k {
                return true;
            }
            self.idx[i] = 0;
        }
        self.pairs += 1;
        if self.pairs > self.max_pairs {
            return false;
        }
        self.idx = vec![0; self.pairs];
        true
    }

    /// Index tuple of the current word: pair p encodes (t_exps[p / |S|], s_exps[p % |S|]).
    pub fn next_indices(&mut self) -> Option<&[usize]> {
        if self.max_pairs == 0 || self.alphabet() == 0 {
            return None;
        }
        loop {
            if self.fresh {
                self.fresh = false;
            } else if !self.advance() {
                self.max_pairs = 0;
                return None;
            }
            if Self::is_necklace(&self.idx) {
                return Some(&self.idx);
            }
        }
    }

    pub fn word_of(&self, idx: &[usize]) -> GroupWord {
        let ns = self.s_exps.len();
        GroupWord::new(
            idx.iter()
                .flat_map(|&p| [(Gen::T, self.t_exps[p / ns]), (Gen::S, self.s_exps[p % ns])]),
        )
    }
}

impl Iterator for WordEnumerator {
    type Item = GroupWord;

    fn next(&mut self) -> Option<GroupWord> {
        let idx = self.next_indices()?.to_vec();
        Some(self.word_of(&idx))
    }
}
