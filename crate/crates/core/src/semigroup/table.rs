//! Bit-packed forward dynamic program for membership in S(A).
//!
//! Word `w` of the table holds the flags for `64w .. 64w + 63`. A generator
//! `g >= 64` only ever reads finished words, so its contribution is a single
//! unaligned 64-bit load. Generators below 64 read bits of the word being
//! filled and are iterated to a fixpoint inside a 128-bit window.

use super::GeneratorSet;
use crate::error::{Error, Result};

/// Default ceiling on the number of table entries (2^31).
pub const DEFAULT_BUDGET: u64 = 1 << 31;

const WORD: u64 = 64;

#[derive(Debug, Clone)]
pub struct RepresentabilityTable {
    generators: GeneratorSet,
    small: Vec<u64>,
    large: Vec<u64>,
    bound: u64,
    words: Vec<u64>,
}

impl RepresentabilityTable {
    /// Builds the table for `0..=bound`, refusing if `bound + 1 > budget`.
    pub fn build(generators: &GeneratorSet, bound: u64, budget: u64) -> Result<Self> {
        check_budget(bound, budget)?;
        let mut table = RepresentabilityTable {
            generators: generators.clone(),
            small: Vec::new(),
            large: Vec::new(),
            bound: 0,
            words: Vec::new(),
        };
        table.grow(bound);
        Ok(table)
    }

    /// Continues the dynamic program up to `new_bound`. Existing entries are kept.
    pub fn extend_to(&mut self, new_bound: u64, budget: u64) -> Result<()> {
        if new_bound <= self.bound {
            return Ok(());
        }
        check_budget(new_bound, budget)?;
        self.grow(new_bound);
        Ok(())
    }

    fn grow(&mut self, bound: u64) {
        let nwords = (bound / WORD + 1) as usize;
        let capacity_end = nwords as u64 * WORD - 1;
        let first_new = self.words.len();
        self.words.resize(nwords, 0);
        self.bound = bound;

        // Only generators whose every use lands inside the allocated words.
        let usable: Vec<u64> = self
            .generators
            .iter()
            .filter_map(|g| u64::try_from(g).ok())
            .filter(|&g| g <= capacity_end)
            .collect();
        self.small = usable.iter().copied().filter(|&g| g < WORD).collect();
        self.large = usable.iter().copied().filter(|&g| g >= WORD).collect();

        for w in first_new..nwords {
            let word = self.compute_word(w);
            self.words[w] = word;
        }
    }

    fn compute_word(&self, w: usize) -> u64 {
        let base = w as i64 * WORD as i64;
        let mut acc: u64 = if w == 0 { 1 } else { 0 };
        for &g in &self.large {
            acc |= self.read_bits(base - g as i64);
        }
        if !self.small.is_empty() {
            let prev = if w == 0 { 0 } else { self.words[w - 1] };
            loop {
                let window = ((acc as u128) << 64) | prev as u128;
                let mut next = acc;
                for &g in &self.small {
                    next |= ((window << g) >> 64) as u64;
                }
                if next == acc {
                    break;
                }
                acc = next;
            }
        }
        acc
    }

    /// The 64 flags starting at `pos`; positions below zero read as false.
    fn read_bits(&self, pos: i64) -> u64 {
        if pos <= -(WORD as i64) {
            return 0;
        }
        if pos < 0 {
            return self.words[0] << (-pos) as u32;
        }
        let idx = (pos as u64 / WORD) as usize;
        let off = (pos as u64 % WORD) as u32;
        if off == 0 {
            self.words[idx]
        } else {
            (self.words[idx] >> off) | (self.words[idx + 1] << (64 - off))
        }
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    /// Largest index covered by the table.
    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Whether `n` lies in S(A). Panics if `n` is beyond the table.
    pub fn contains(&self, n: u64) -> bool {
        assert!(
            n <= self.bound,
            "index {n} beyond table bound {}",
            self.bound
        );
        self.words[(n / WORD) as usize] >> (n % WORD) & 1 == 1
    }

    /// Unrepresentable integers in `[lo, hi]`, ascending. `hi` is clamped to the bound.
    pub fn gaps_in(&self, lo: u64, hi: u64) -> GapIter<'_> {
        let hi = hi.min(self.bound);
        GapIter {
            table: self,
            next: lo.max(1),
            hi,
        }
    }

    pub fn count_gaps_in(&self, lo: u64, hi: u64) -> u64 {
        let lo = lo.max(1);
        let hi = hi.min(self.bound);
        if lo > hi {
            return 0;
        }
        let (lw, hw) = ((lo / WORD) as usize, (hi / WORD) as usize);
        let mut count = 0u64;
        for w in lw..=hw {
            let mut missing = !self.words[w];
            if w == lw {
                missing &= u64::MAX << (lo % WORD);
            }
            if w == hw && hi % WORD != WORD - 1 {
                missing &= (1u64 << (hi % WORD + 1)) - 1;
            }
            count += missing.count_ones() as u64;
        }
        count
    }

    /// Largest unrepresentable integer within the table, if any.
    pub fn last_gap(&self) -> Option<u64> {
        let hw = (self.bound / WORD) as usize;
        for w in (0..=hw).rev() {
            let mut missing = !self.words[w];
            if w == hw && self.bound % WORD != WORD - 1 {
                missing &= (1u64 << (self.bound % WORD + 1)) - 1;
            }
            if missing != 0 {
                return Some(w as u64 * WORD + 63 - missing.leading_zeros() as u64);
            }
        }
        None
    }
}

fn check_budget(bound: u64, budget: u64) -> Result<()> {
    let entries = bound as u128 + 1;
    if entries > budget as u128 {
        return Err(Error::budget("representability table", entries, budget));
    }
    Ok(())
}

pub struct GapIter<'a> {
    table: &'a RepresentabilityTable,
    next: u64,
    hi: u64,
}

impl Iterator for GapIter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.next <= self.hi {
            let w = (self.next / WORD) as usize;
            let missing = !self.table.words[w] & (u64::MAX << (self.next % WORD));
            if missing == 0 {
                self.next = (w as u64 + 1) * WORD;
                continue;
            }
            let n = w as u64 * WORD + missing.trailing_zeros() as u64;
            if n > self.hi {
                self.next = self.hi + 1;
                return None;
            }
            self.next = n + 1;
            return Some(n);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(gens: &[u64], bound: u64) -> Vec<bool> {
        let mut t = vec![false; bound as usize + 1];
        t[0] = true;
        for n in 1..=bound as usize {
            t[n] = gens.iter().any(|&g| g as usize <= n && t[n - g as usize]);
        }
        t
    }

    fn set(gens: &[u64]) -> GeneratorSet {
        GeneratorSet::from_u64s(gens).unwrap()
    }

    #[test]
    fn two_three_prefix() {
        let t = RepresentabilityTable::build(&set(&[2, 3]), 5, DEFAULT_BUDGET).unwrap();
        let flags: Vec<bool> = (0..=5).map(|n| t.contains(n)).collect();
        assert_eq!(flags, [true, false, true, true, true, true]);
    }

    #[test]
    fn matches_naive_across_word_boundaries() {
        for gens in [
            vec![6, 11, 15],
            vec![8, 12, 13],
            vec![63, 64, 65],
            vec![70, 101],
            vec![2, 129],
            vec![5, 64, 200, 333],
        ] {
            let bound = 1500;
            let t = RepresentabilityTable::build(&set(&gens), bound, DEFAULT_BUDGET).unwrap();
            let want = naive(&gens, bound);
            for n in 0..=bound {
                assert_eq!(t.contains(n), want[n as usize], "{gens:?} at {n}");
            }
            let gaps: Vec<u64> = t.gaps_in(0, bound).collect();
            let want_gaps: Vec<u64> = (1..=bound).filter(|&n| !want[n as usize]).collect();
            assert_eq!(gaps, want_gaps);
            assert_eq!(t.count_gaps_in(0, bound), want_gaps.len() as u64);
            assert_eq!(t.last_gap(), want_gaps.last().copied());
        }
    }

    #[test]
    fn extension_agrees_with_fresh_build() {
        let s = set(&[70, 101, 130]);
        let mut t = RepresentabilityTable::build(&s, 100, DEFAULT_BUDGET).unwrap();
        t.extend_to(5000, DEFAULT_BUDGET).unwrap();
        let fresh = RepresentabilityTable::build(&s, 5000, DEFAULT_BUDGET).unwrap();
        for n in 0..=5000 {
            assert_eq!(t.contains(n), fresh.contains(n));
        }
    }

    #[test]
    fn budget_refusal() {
        let err = RepresentabilityTable::build(&set(&[2, 3]), 1000, 1000).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
        assert!(RepresentabilityTable::build(&set(&[2, 3]), 999, 1000).is_ok());
    }

    #[test]
    fn partial_interval_counts() {
        let t = RepresentabilityTable::build(&set(&[8, 12, 13]), 200, DEFAULT_BUDGET).unwrap();
        assert_eq!(t.gaps_in(28, 31).collect::<Vec<_>>(), vec![30, 31]);
        assert_eq!(t.count_gaps_in(28, 31), 2);
        assert_eq!(t.count_gaps_in(31, 28), 0);
        assert!(t.contains(28) && t.contains(29));
    }
}
