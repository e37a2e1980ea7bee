//! Conjugacy-class counts by length and homology vector.
//!
//! A class of length `m` is a rotation orbit of cyclically reduced words of
//! length `m`. The orbit of `w` has size equal to the rotation period of `w`,
//! a divisor of `m`, so primitive classes have `m` representatives and proper
//! powers fewer.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::enumerate::{CyclicWords, Guard};
use super::table::{CountTable, DenseRow, Stratified};
use crate::error::{Error, Result};
use crate::limits::sets::LatticeSet;
use crate::word::check_rank;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassMethod {
    /// Enumerate words and keep the least rotation of each orbit.
    Orbit,
    /// Cauchy-Frobenius over rotations, from an exact word table.
    Burnside,
}

/// Exact class counts `c_beta(m)` for `m` in `1..=max_length`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCountTable {
    rank: usize,
    method: ClassMethod,
    radius: Option<usize>,
    rows: Vec<DenseRow>,
}

impl ClassCountTable {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn method(&self) -> ClassMethod {
        self.method
    }

    pub fn radius(&self) -> Option<usize> {
        self.radius
    }

    pub fn max_length(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, m: usize) -> Option<&DenseRow> {
        m.checked_sub(1).and_then(|i| self.rows.get(i))
    }

    pub fn get(&self, m: usize, beta: &[i64]) -> u128 {
        self.row(m).map_or(0, |r| r.get(beta))
    }

    /// Number of classes of length exactly `m`.
    pub fn length_count(&self, m: usize) -> Result<u128> {
        self.row(m).map_or(Ok(0), |r| r.total())
    }

    /// `Pi(m)`: number of classes of length at most `m`.
    pub fn pi(&self, m: usize) -> Result<u128> {
        (1..=m.min(self.max_length())).try_fold(0u128, |acc, n| {
            acc.checked_add(self.length_count(n)?)
                .ok_or(Error::Overflow { repr: "u128", length: n })
        })
    }
}

impl Stratified for ClassCountTable {
    fn rank(&self) -> usize {
        self.rank
    }

    fn max_length(&self) -> usize {
        self.rows.len()
    }

    fn for_each_entry(&self, m: usize, f: &mut dyn FnMut(&[i64], u128)) {
        if let Some(row) = self.row(m) {
            row.for_each_nonzero(|b, c| f(b, c));
        }
    }
}

/// Orbit census of one length by brute force. Also returns the sum of orbit
/// sizes, which must equal the number of words.
pub fn orbit_class_row(rank: usize, length: usize, guard: Guard) -> Result<(DenseRow, u128)> {
    check_rank(rank)?;
    if length == 0 {
        return Err(Error::InvalidArgument("class length must be at least 1".into()));
    }
    guard.check(rank, length)?;
    let mut row = DenseRow::zeros(rank, length);
    let mut orbit_sizes = 0u128;
    for first in 0..2 * rank {
        for word in CyclicWords::starting_with(rank, length, first) {
            if word.class_canonical() != word {
                continue;
            }
            row.add_at(word.abelianize().coords(), 1)?;
            orbit_sizes += word.rotation_period() as u128;
        }
    }
    Ok((row, orbit_sizes))
}

pub fn orbit_class_table(rank: usize, max_length: usize, guard: Guard) -> Result<ClassCountTable> {
    check_rank(rank)?;
    guard.check(rank, max_length)?;
    let rows = (1..=max_length)
        .map(|m| orbit_class_row(rank, m, guard).map(|(row, _)| row))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassCountTable {
        rank,
        method: ClassMethod::Orbit,
        radius: None,
        rows,
    })
}

fn euler_phi(n: usize) -> u128 {
    (1..=n).filter(|&i| i.gcd(&n) == 1).count() as u128
}

/// Exact class counts from a word table:
/// `c_beta(m) = (1/m) sum_{d | m} phi(m/d) n_{beta/(m/d)}(d)`, the inner term
/// present only when `m/d` divides every coordinate of `beta`.
pub fn burnside_class_table(words: &CountTable) -> Result<ClassCountTable> {
    let rank = words.rank();
    let mut rows = Vec::with_capacity(words.max_length());
    for m in 1..=words.max_length() {
        let source = words.row(m).expect("row in range");
        let mut row = DenseRow::zeros(rank, source.half_width());
        let mut beta = vec![0i64; rank];
        let mut reduced = vec![0i64; rank];
        for idx in 0..row.counts().len() {
            row.coords_of(idx, &mut beta);
            let mut fixed_sum = 0u128;
            for d in (1..=m).filter(|d| m % d == 0) {
                let e = (m / d) as i64;
                if beta.iter().any(|b| b % e != 0) {
                    continue;
                }
                for (r, b) in reduced.iter_mut().zip(&beta) {
                    *r = b / e;
                }
                let term = euler_phi(m / d)
                    .checked_mul(words.get(d, &reduced))
                    .ok_or(Error::Overflow { repr: "u128", length: m })?;
                fixed_sum = fixed_sum
                    .checked_add(term)
                    .ok_or(Error::Overflow { repr: "u128", length: m })?;
            }
            debug_assert_eq!(fixed_sum % m as u128, 0);
            row.counts_mut()[idx] = fixed_sum / m as u128;
        }
        rows.push(row);
    }
    Ok(ClassCountTable {
        rank,
        method: ClassMethod::Burnside,
        radius: words.radius(),
        rows,
    })
}

/// Word counts divided by the length, as if every class had `m` rotations.
/// Proper powers have fewer, so this undercounts; `exact` is always false.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxClassCounts {
    pub rank: usize,
    /// `lengths[m-1]` holds `(#words of length m) / m`.
    pub lengths: Vec<f64>,
    pub exact: bool,
}

impl ApproxClassCounts {
    pub fn from_words(words: &CountTable) -> Result<Self> {
        let lengths = (1..=words.max_length())
            .map(|m| Ok(words.row_total(m)? as f64 / m as f64))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            rank: words.rank(),
            lengths,
            exact: false,
        })
    }

    pub fn pi(&self, m: usize) -> f64 {
        self.lengths.iter().take(m).sum()
    }
}

/// `sum_{n <= m} sum_{beta in B} entries[n, beta]`, on word or class tables.
pub fn restricted_count(table: &impl Stratified, set: &LatticeSet, m: usize) -> Result<u128> {
    if m > table.max_length() {
        return Err(Error::InvalidArgument(format!(
            "table covers lengths up to {}, asked for {m}",
            table.max_length()
        )));
    }
    let mut total = 0u128;
    let mut overflow = None;
    for n in 1..=m {
        table.for_each_entry(n, &mut |beta, c| {
            if set.contains(beta) {
                match total.checked_add(c) {
                    Some(t) => total = t,
                    None => overflow = Some(n),
                }
            }
        });
    }
    match overflow {
        Some(length) => Err(Error::Overflow { repr: "u128", length }),
        None => Ok(total),
    }
}
