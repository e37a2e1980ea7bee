//! Brute-force enumeration of cyclically reduced words. This is the ground
//! truth every other engine is checked against, so it deliberately works on
//! explicit [`Word`] values and recomputes each abelianization from scratch.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::table::{CountTable, DenseRow};
use crate::error::{Error, Result};
use crate::word::{check_rank, Word};

/// Words visited by the oracle before the default guard refuses.
pub const DEFAULT_ORACLE_BUDGET: u128 = 10_000_000;

/// Maximum length the brute-force engines accept for a given rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Guard {
    pub max_length: usize,
}

impl Guard {
    pub fn new(max_length: usize) -> Self {
        Self { max_length }
    }

    /// Largest `m` with `(2k-1)^m <= 10^7`: 14 for `k = 2`, 10 for `k = 3`.
    pub fn default_for(rank: usize) -> Self {
        let q = (2 * rank).saturating_sub(1).max(2) as u128;
        let mut m = 0usize;
        let mut words = 1u128;
        while words.saturating_mul(q) <= DEFAULT_ORACLE_BUDGET {
            words *= q;
            m += 1;
        }
        Self { max_length: m.max(1) }
    }

    pub fn check(&self, rank: usize, length: usize) -> Result<()> {
        if length > self.max_length {
            Err(Error::GuardExceeded {
                rank,
                length,
                guard: self.max_length,
            })
        } else {
            Ok(())
        }
    }
}

/// Iterator over the cyclically reduced words of one length, in lexicographic
/// order of the letter codes.
#[derive(Clone, Debug)]
pub struct CyclicWords {
    rank: usize,
    codes: Vec<usize>,
    /// Positions below this index never change (used to pin the first letter).
    frozen: usize,
    started: bool,
    done: bool,
}

impl CyclicWords {
    fn with_prefix(rank: usize, length: usize, first: Option<usize>) -> Self {
        let mut codes = vec![0usize; length];
        let frozen = usize::from(first.is_some());
        if let (Some(f), Some(slot)) = (first, codes.first_mut()) {
            *slot = f;
        }
        let mut it = Self {
            rank,
            codes,
            frozen,
            started: false,
            done: length == 0,
        };
        it.fill_from(frozen);
        it
    }

    /// Restricts the enumeration to words starting with letter `first`.
    pub fn starting_with(rank: usize, length: usize, first: usize) -> Self {
        Self::with_prefix(rank, length, Some(first))
    }

    fn fill_from(&mut self, start: usize) {
        for i in start..self.codes.len() {
            self.codes[i] = if i == 0 {
                0
            } else {
                (0..2 * self.rank)
                    .find(|&c| c != self.codes[i - 1] ^ 1)
                    .expect("rank >= 2 leaves an admissible letter")
            };
        }
    }

    /// Advances to the next freely reduced word; returns false when exhausted.
    fn advance(&mut self) -> bool {
        let n = self.codes.len();
        for i in (self.frozen..n).rev() {
            let forbidden = if i == 0 { None } else { Some(self.codes[i - 1] ^ 1) };
            let next = (self.codes[i] + 1..2 * self.rank).find(|&c| Some(c) != forbidden);
            if let Some(c) = next {
                self.codes[i] = c;
                self.fill_from(i + 1);
                return true;
            }
        }
        false
    }

    fn is_cyclic(&self) -> bool {
        let n = self.codes.len();
        n <= 1 || self.codes[0] ^ 1 != self.codes[n - 1]
    }
}

impl Iterator for CyclicWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        loop {
            if self.done {
                return None;
            }
            if self.started {
                if !self.advance() {
                    self.done = true;
                    return None;
                }
            } else {
                self.started = true;
            }
            if self.is_cyclic() {
                return Some(Word::from_codes_unchecked(self.rank, &self.codes));
            }
        }
    }
}

/// Every cyclically reduced word of length exactly `length`, each once.
pub fn enumerate_cyclically_reduced(rank: usize, length: usize, guard: Guard) -> Result<CyclicWords> {
    check_rank(rank)?;
    if length == 0 {
        return Err(Error::InvalidArgument("word length must be at least 1".into()));
    }
    guard.check(rank, length)?;
    Ok(CyclicWords::with_prefix(rank, length, None))
}

/// Exact `n_beta(m)` for all `beta` by enumerating every word of length `m`.
/// Shards by first letter; shard rows are summed in letter order.
pub fn oracle_count_by_homology(rank: usize, length: usize, guard: Guard) -> Result<DenseRow> {
    enumerate_cyclically_reduced(rank, length, guard)?;
    let shards: Vec<DenseRow> = (0..2 * rank)
        .into_par_iter()
        .map(|first| {
            let mut row = DenseRow::zeros(rank, length);
            for word in CyclicWords::starting_with(rank, length, first) {
                debug_assert!(word.is_cyclically_reduced());
                let beta = word.abelianize();
                let idx = row.index_of(beta.coords()).expect("|beta_i| <= m");
                row.counts_mut()[idx] += 1;
            }
            row
        })
        .collect();
    shards
        .iter()
        .skip(1)
        .try_fold(shards[0].clone(), |acc, r| acc.checked_add(r))
}

/// Oracle rows for lengths `1..=max_length`.
pub fn oracle_table(rank: usize, max_length: usize, guard: Guard) -> Result<CountTable> {
    check_rank(rank)?;
    guard.check(rank, max_length)?;
    let rows = (1..=max_length)
        .map(|m| oracle_count_by_homology(rank, m, guard))
        .collect::<Result<Vec<_>>>()?;
    CountTable::from_rows(rank, None, rows)
}

/// `q^m + 1 + (k-1)(1 + (-1)^m)` with `q = 2k - 1`, checked.
pub fn cyclic_word_total(rank: usize, length: usize) -> Result<u128> {
    let q = (2 * rank - 1) as u128;
    let overflow = Error::Overflow { repr: "u128", length };
    let pow = q.checked_pow(length as u32).ok_or(overflow.clone())?;
    let parity = if length.is_multiple_of(2) { 2 * (rank as u128 - 1) } else { 0 };
    pow.checked_add(1 + parity).ok_or(overflow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn default_guards() {
        assert_eq!(Guard::default_for(2).max_length, 14);
        assert_eq!(Guard::default_for(3).max_length, 10);
        assert_eq!(Guard::default_for(4).max_length, 8);
    }

    #[test]
    fn length_one_rank_two() {
        let words: Vec<String> = enumerate_cyclically_reduced(2, 1, Guard::default_for(2))
            .unwrap()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(words, vec!["a1", "A1", "a2", "A2"]);
    }

    #[test]
    fn small_counts() {
        let g = Guard::new(14);
        assert_eq!(enumerate_cyclically_reduced(2, 2, g).unwrap().count(), 12);
        assert_eq!(enumerate_cyclically_reduced(3, 2, g).unwrap().count(), 30);
        assert_eq!(cyclic_word_total(3, 2).unwrap(), 30);
    }

    #[test]
    fn words_are_distinct_and_cyclically_reduced() {
        let words: Vec<Word> = enumerate_cyclically_reduced(2, 6, Guard::new(10)).unwrap().collect();
        assert!(words.iter().all(|w| w.len() == 6 && w.is_cyclically_reduced()));
        let set: HashSet<_> = words.iter().cloned().collect();
        assert_eq!(set.len(), words.len());
        assert_eq!(words.len() as u128, cyclic_word_total(2, 6).unwrap());
    }

    /// Filters all `(2k)^m` letter strings; independent of the odometer.
    #[test]
    fn matches_unconstrained_filter() {
        for (rank, m) in [(2usize, 5usize), (3, 4)] {
            let letters = 2 * rank;
            let mut expected = Vec::new();
            for mut x in 0..letters.pow(m as u32) {
                let mut codes = vec![0; m];
                for slot in codes.iter_mut().rev() {
                    *slot = x % letters;
                    x /= letters;
                }
                let w = Word::from_codes_unchecked(rank, &codes);
                if w.is_cyclically_reduced() {
                    expected.push(w);
                }
            }
            let got: Vec<Word> = enumerate_cyclically_reduced(rank, m, Guard::new(10)).unwrap().collect();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn oracle_homology_examples() {
        let row = oracle_count_by_homology(2, 2, Guard::default_for(2)).unwrap();
        assert_eq!(row.get(&[2, 0]), 1);
        assert_eq!(row.get(&[1, 1]), 2);
        assert_eq!(row.get(&[1, 0]), 0);
        assert_eq!(row.total().unwrap(), 12);
    }

    #[test]
    fn guard_refuses() {
        let err = enumerate_cyclically_reduced(2, 15, Guard::default_for(2)).unwrap_err();
        assert!(matches!(err, Error::GuardExceeded { length: 15, guard: 14, .. }));
        assert!(oracle_count_by_homology(3, 11, Guard::default_for(3)).is_err());
        assert!(matches!(enumerate_cyclically_reduced(1, 2, Guard::new(5)), Err(Error::RankTooSmall(1))));
    }
}
