//! Words in the free group `F(A1, ..., Ak)`.
//!
//! A [`Word`] is a finite sequence of signed generator letters together with
//! the ambient rank `k`. Words are not reduced on construction; [`Word::reduce`]
//! and [`Word::cyclically_reduce`] produce the normal forms used by the census.
//!
//! Text format: positive letters are `a1`, `a2`, ..., inverses are `A1`, `A2`,
//! ..., concatenated with optional whitespace (`"a1 a2 A1"` or `"a1a2A1"`).
//! The empty word is written `1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator `A_g` or its inverse.
///
/// Letters are totally ordered as `A1 < A1⁻¹ < A2 < A2⁻¹ < ...`; the order is
/// only used to pick canonical conjugacy-class representatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    code: u16,
}

impl Letter {
    /// `generator` is 1-based; `sign` must be `+1` or `-1`.
    pub fn new(generator: usize, sign: i8) -> Result<Self> {
        if generator == 0 || generator > (u16::MAX as usize) / 2 {
            return Err(Error::GeneratorOutOfRange {
                index: generator,
                rank: (u16::MAX as usize) / 2,
            });
        }
        let inv = match sign {
            1 => 0,
            -1 => 1,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "letter sign must be +1 or -1, got {other}"
                )))
            }
        };
        Ok(Self {
            code: (2 * (generator - 1) + inv) as u16,
        })
    }

    pub fn positive(generator: usize) -> Self {
        Self::new(generator, 1).expect("generator index must be positive")
    }

    pub fn negative(generator: usize) -> Self {
        Self::new(generator, -1).expect("generator index must be positive")
    }

    /// Dense index in `0..2k`, consistent with the letter order.
    pub fn code(self) -> usize {
        self.code as usize
    }

    pub fn from_code(code: usize) -> Self {
        Self { code: code as u16 }
    }

    /// 1-based generator index.
    pub fn generator(self) -> usize {
        self.code as usize / 2 + 1
    }

    pub fn sign(self) -> i8 {
        if self.code & 1 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn inverse(self) -> Self {
        Self {
            code: self.code ^ 1,
        }
    }

    pub fn is_inverse_of(self, other: Letter) -> bool {
        self.code ^ 1 == other.code
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.sign() > 0 { 'a' } else { 'A' };
        write!(f, "{c}{}", self.generator())
    }
}

/// Image of a word under abelianization: the signed number of occurrences of
/// each generator.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HomologyVector(pub Vec<i64>);

impl HomologyVector {
    pub fn zero(rank: usize) -> Self {
        Self(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn l1_norm(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).sum()
    }

    pub fn max_abs(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn coord_sum(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn norm_sq(&self) -> i64 {
        self.0.iter().map(|c| c * c).sum()
    }

    /// Parses a comma separated list such as `2,-1`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(Self(Vec::new()));
        }
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::InvalidArgument(format!("bad vector coordinate {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

impl From<Vec<i64>> for HomologyVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl Add for &HomologyVector {
    type Output = HomologyVector;

    fn add(self, rhs: &HomologyVector) -> HomologyVector {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch in vector sum");
        HomologyVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &HomologyVector {
    type Output = HomologyVector;

    fn sub(self, rhs: &HomologyVector) -> HomologyVector {
        self + &(-rhs)
    }
}

impl Neg for &HomologyVector {
    type Output = HomologyVector;

    fn neg(self) -> HomologyVector {
        HomologyVector(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for HomologyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Checks the rank precondition shared by every free-group operation.
pub fn check_rank(rank: usize) -> Result<()> {
    if rank < 2 {
        Err(Error::RankTooSmall(rank))
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(rank: usize, letters: Vec<Letter>) -> Result<Self> {
        check_rank(rank)?;
        if let Some(bad) = letters.iter().find(|l| l.generator() > rank) {
            return Err(Error::GeneratorOutOfRange {
                index: bad.generator(),
                rank,
            });
        }
        Ok(Self { rank, letters })
    }

    pub fn empty(rank: usize) -> Result<Self> {
        Self::new(rank, Vec::new())
    }

    /// Builds a word from letter codes without validation. Callers guarantee
    /// `rank >= 2` and every code is below `2 * rank`.
    pub(crate) fn from_codes_unchecked(rank: usize, codes: &[usize]) -> Self {
        Self {
            rank,
            letters: codes.iter().map(|&c| Letter::from_code(c)).collect(),
        }
    }

    pub fn parse(rank: usize, text: &str) -> Result<Self> {
        check_rank(rank)?;
        let mut letters = Vec::new();
        let mut chars = text.chars().peekable();
        while let Some(c) = chars.next() {
            let sign = match c {
                c if c.is_whitespace() => continue,
                '1' if letters.is_empty() && chars.peek().is_none_or(|c| c.is_whitespace()) => {
                    continue
                }
                'a' => 1,
                'A' => -1,
                other => return Err(Error::ParseWord(format!("unexpected character {other:?} in {text:?}"))),
            };
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let generator: usize = digits
                .parse()
                .map_err(|_| Error::ParseWord(format!("letter without generator index in {text:?}")))?;
            if generator == 0 || generator > rank {
                return Err(Error::GeneratorOutOfRange {
                    index: generator,
                    rank,
                });
            }
            letters.push(Letter::new(generator, sign)?);
        }
        Ok(Self { rank, letters })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Left rotation by `shift` positions.
    pub fn rotated(&self, shift: usize) -> Self {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            let n = letters.len();
            letters.rotate_left(shift % n);
        }
        Self {
            rank: self.rank,
            letters,
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].is_inverse_of(w[1]))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.letters.first(), self.letters.last()) {
                (Some(first), Some(last)) if self.letters.len() > 1 => !first.is_inverse_of(*last),
                _ => true,
            }
    }

    /// Free reduction: repeatedly cancel adjacent `x x⁻¹` pairs.
    pub fn reduce(&self) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last().is_some_and(|&top| top.is_inverse_of(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self {
            rank: self.rank,
            letters: out,
        }
    }

    /// Reduces freely, then strips conjugating letters from both ends. The
    /// result is a minimal-length representative of the conjugacy class.
    pub fn cyclically_reduce(&self) -> Self {
        let reduced = self.reduce();
        let letters = &reduced.letters;
        let (mut lo, mut hi) = (0, letters.len());
        while hi - lo >= 2 && letters[lo].is_inverse_of(letters[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        Self {
            rank: self.rank,
            letters: letters[lo..hi].to_vec(),
        }
    }

    pub fn abelianize(&self) -> HomologyVector {
        let mut coords = vec![0i64; self.rank];
        for l in &self.letters {
            coords[l.generator() - 1] += l.sign() as i64;
        }
        HomologyVector(coords)
    }

    /// Canonical conjugacy-class representative: the least rotation of the
    /// cyclic reduction under the letter order.
    pub fn class_canonical(&self) -> Self {
        let cyc = self.cyclically_reduce();
        let start = least_rotation(&cyc.letters);
        cyc.rotated(start)
    }

    /// Length of the conjugacy class, i.e. of any cyclically reduced
    /// representative.
    pub fn class_length(&self) -> usize {
        self.cyclically_reduce().len()
    }

    /// Smallest `p` dividing the length such that the word is invariant under
    /// rotation by `p`. This is the size of the word's rotation orbit.
    pub fn rotation_period(&self) -> usize {
        rotation_period(&self.letters)
    }
}

/// Booth's least-rotation algorithm; returns the starting index of the
/// lexicographically least rotation (the first one, if several coincide).
pub(crate) fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let at = |i: usize| &s[i % n];
    let mut fail: Vec<isize> = vec![-1; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = at(j);
        let mut i = fail[j - k - 1];
        while i != -1 && sj != at(k + i as usize + 1) {
            if sj < at(k + i as usize + 1) {
                k = j - i as usize - 1;
            }
            i = fail[i as usize];
        }
        if i == -1 && sj != at(k) {
            if sj < at(k) {
                k = j;
            }
            fail[j - k] = -1;
        } else {
            fail[j - k] = i + 1;
        }
    }
    k % n
}

pub(crate) fn rotation_period<T: PartialEq>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    (1..=n)
        .filter(|p| n.is_multiple_of(*p))
        .find(|&p| (0..n).all(|i| s[i] == s[(i + p) % n]))
        .unwrap_or(n)
}

impl Mul for &Word {
    type Output = Word;

    /// Concatenation (no reduction).
    fn mul(self, rhs: &Word) -> Word {
        assert_eq!(self.rank, rhs.rank, "rank mismatch in word product");
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&rhs.letters);
        Word {
            rank: self.rank,
            letters,
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(rank: usize, s: &str) -> Word {
        Word::parse(rank, s).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(w(2, "a1 A1").reduce(), Word::empty(2).unwrap());
        assert_eq!(w(2, "a1 a2 A2 a1").reduce(), w(2, "a1 a1"));
        assert_eq!(w(2, "a1 a2 A1").reduce(), w(2, "a1 a2 A1"));
        assert_eq!(w(3, "a3 a1 A1 A3 a2").reduce(), w(3, "a2"));
    }

    #[test]
    fn cyclic_reduction_examples() {
        assert_eq!(w(2, "a1 a2 A1").cyclically_reduce(), w(2, "a2"));
        assert_eq!(w(2, "a2 a1 a2").cyclically_reduce(), w(2, "a2 a1 a2"));
        assert_eq!(w(2, "a1 a1 a2 A1").cyclically_reduce(), w(2, "a1 a2"));
        assert_eq!(w(2, "a1 A1").cyclically_reduce().len(), 0);
    }

    /// Minimal length over `g w g⁻¹` for all reduced conjugators `g` of length
    /// at most `depth`.
    fn brute_min_conjugate_length(word: &Word, depth: usize) -> usize {
        let rank = word.rank();
        let mut best = word.reduce().len();
        let mut frontier = vec![Word::empty(rank).unwrap()];
        for _ in 0..depth {
            let mut next = Vec::new();
            for g in &frontier {
                for code in 0..2 * rank {
                    let ext = &Word::from_codes_unchecked(rank, &[code]) * g;
                    let ext = ext.reduce();
                    if ext.len() == g.len() + 1 {
                        let conj = (&(&ext * word) * &ext.inverse()).reduce();
                        best = best.min(conj.len());
                        next.push(ext);
                    }
                }
            }
            frontier = next;
        }
        best
    }

    #[test]
    fn cyclic_reduction_matches_conjugator_search() {
        let word = w(2, "a1 a1 a2 A1");
        assert_eq!(brute_min_conjugate_length(&word, 3), 2);
        assert_eq!(word.class_length(), 2);
        let word = w(3, "A2 a3 a1 a3 a2");
        assert_eq!(brute_min_conjugate_length(&word, 3), word.class_length());
    }

    #[test]
    fn abelianize_examples() {
        assert_eq!(w(2, "a1 a2 A1").abelianize(), HomologyVector(vec![0, 1]));
        assert_eq!(Word::empty(3).unwrap().abelianize(), HomologyVector(vec![0, 0, 0]));
        assert_eq!(w(2, "a1 a1 A2").abelianize(), HomologyVector(vec![2, -1]));
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(w(2, "a2 a1").class_canonical(), w(2, "a1 a2"));
        assert_eq!(w(2, "a1 a1").class_canonical(), w(2, "a1 a1"));
        assert_eq!(w(2, "a1 a2 A1").class_canonical(), w(2, "a2"));
        // A1 < A1⁻¹ < A2 < A2⁻¹
        assert_eq!(w(2, "A2 A1").class_canonical(), w(2, "A1 A2"));
        assert_eq!(w(2, "a2 A1").class_canonical(), w(2, "A1 a2"));
    }

    #[test]
    fn class_length_examples() {
        assert_eq!(w(2, "a1 a2 A1").class_length(), 1);
        assert_eq!(Word::empty(2).unwrap().class_length(), 0);
        assert_eq!(w(2, "a2 a1 a2").class_length(), 3);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w(2, "a1a2A1").to_string(), "a1 a2 A1");
        assert_eq!(w(12, "a12 A10").letters()[0].generator(), 12);
        assert_eq!(Word::parse(2, "1").unwrap().len(), 0);
        assert_eq!(Word::empty(2).unwrap().to_string(), "1");
        assert!(matches!(Word::parse(2, "a3"), Err(Error::GeneratorOutOfRange { .. })));
        assert!(matches!(Word::parse(2, "b1"), Err(Error::ParseWord(_))));
        assert!(matches!(Word::parse(2, "a"), Err(Error::ParseWord(_))));
        assert!(matches!(Word::parse(1, "a1"), Err(Error::RankTooSmall(1))));
    }

    #[test]
    fn letter_order_and_sign() {
        let order = [
            Letter::positive(1),
            Letter::negative(1),
            Letter::positive(2),
            Letter::negative(2),
        ];
        assert!(order.windows(2).all(|p| p[0] < p[1]));
        assert_eq!(Letter::negative(3).sign(), -1);
        assert!(Letter::new(1, 0).is_err());
    }

    #[test]
    fn rotation_period_examples() {
        assert_eq!(w(2, "a1 a1").rotation_period(), 1);
        assert_eq!(w(2, "a1 a2 a1 a2").rotation_period(), 2);
        assert_eq!(w(2, "a1 a2 a2").rotation_period(), 3);
    }

    fn arb_word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec(0..2 * rank, 0..=max_len)
            .prop_map(move |codes| Word::from_codes_unchecked(rank, &codes))
    }

    proptest! {
        #[test]
        fn reductions_are_idempotent(word in arb_word(3, 24)) {
            let r = word.reduce();
            prop_assert!(r.is_reduced());
            prop_assert_eq!(r.reduce(), r.clone());
            let c = word.cyclically_reduce();
            prop_assert!(c.is_cyclically_reduced());
            prop_assert_eq!(c.cyclically_reduce(), c);
        }

        #[test]
        fn abelianization_is_invariant(word in arb_word(3, 24)) {
            let phi = word.abelianize();
            prop_assert_eq!(word.reduce().abelianize(), phi.clone());
            prop_assert_eq!(word.cyclically_reduce().abelianize(), phi.clone());
            let m = word.len() as i64;
            prop_assert!(phi.l1_norm() <= m);
            prop_assert_eq!((phi.coord_sum() - m).rem_euclid(2), 0);
        }

        #[test]
        fn abelianization_is_additive(u in arb_word(2, 16), v in arb_word(2, 16)) {
            prop_assert_eq!((&u * &v).abelianize(), &u.abelianize() + &v.abelianize());
        }

        #[test]
        fn canonical_form_is_conjugation_invariant(u in arb_word(2, 16), g in arb_word(2, 4)) {
            let conj = &(&g * &u) * &g.inverse();
            prop_assert_eq!(conj.class_canonical(), u.class_canonical());
        }

        #[test]
        fn booth_matches_naive_minimum(codes in prop::collection::vec(0usize..4, 1..20)) {
            let n = codes.len();
            let naive = (0..n)
                .map(|s| { let mut v = codes.clone(); v.rotate_left(s); v })
                .min()
                .unwrap();
            let mut got = codes.clone();
            got.rotate_left(least_rotation(&codes));
            prop_assert_eq!(got, naive);
        }
    }
}
