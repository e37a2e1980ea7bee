use crate::error::{Error, Result};
use crate::word::HomologyVector;

/// Exact counts for a single word length, stored densely over the box
/// `[-half_width, half_width]^rank`.
///
/// Flat indices put coordinate 0 in the most significant position, so index
/// order is lexicographic order on the vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseRow {
    rank: usize,
    half_width: usize,
    counts: Vec<u128>,
}

impl DenseRow {
    pub fn zeros(rank: usize, half_width: usize) -> Self {
        let side = 2 * half_width + 1;
        Self {
            rank,
            half_width,
            counts: vec![0; side.pow(rank as u32)],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn side(&self) -> usize {
        2 * self.half_width + 1
    }

    pub fn counts(&self) -> &[u128] {
        &self.counts
    }

    pub(crate) fn counts_mut(&mut self) -> &mut [u128] {
        &mut self.counts
    }

    pub fn index_of(&self, beta: &[i64]) -> Option<usize> {
        if beta.len() != self.rank {
            return None;
        }
        let w = self.half_width as i64;
        let side = self.side();
        let mut idx = 0usize;
        for &b in beta {
            if b.abs() > w {
                return None;
            }
            idx = idx * side + (b + w) as usize;
        }
        Some(idx)
    }

    pub fn coords_of(&self, mut idx: usize, out: &mut [i64]) {
        let side = self.side();
        let w = self.half_width as i64;
        for slot in out.iter_mut().rev() {
            *slot = (idx % side) as i64 - w;
            idx /= side;
        }
    }

    /// Count at `beta`, zero outside the stored box.
    pub fn get(&self, beta: &[i64]) -> u128 {
        self.index_of(beta).map_or(0, |i| self.counts[i])
    }

    pub fn set(&mut self, beta: &[i64], value: u128) -> Result<()> {
        let idx = self.index_of(beta).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "vector {beta:?} outside row box of half width {}",
                self.half_width
            ))
        })?;
        self.counts[idx] = value;
        Ok(())
    }

    pub fn add_at(&mut self, beta: &[i64], value: u128) -> Result<()> {
        let idx = self.index_of(beta).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "vector {beta:?} outside row box of half width {}",
                self.half_width
            ))
        })?;
        self.counts[idx] = self.counts[idx]
            .checked_add(value)
            .ok_or(Error::Overflow { repr: "u128", length: 0 })?;
        Ok(())
    }

    pub fn total(&self) -> Result<u128> {
        self.counts
            .iter()
            .try_fold(0u128, |acc, &c| acc.checked_add(c))
            .ok_or(Error::Overflow { repr: "u128", length: 0 })
    }

    /// Calls `f` for every nonzero entry in lexicographic order of `beta`.
    pub fn for_each_nonzero(&self, mut f: impl FnMut(&[i64], u128)) {
        let mut beta = vec![0i64; self.rank];
        for (idx, &c) in self.counts.iter().enumerate() {
            if c != 0 {
                self.coords_of(idx, &mut beta);
                f(&beta, c);
            }
        }
    }

    pub fn nonzero_entries(&self) -> Vec<(HomologyVector, u128)> {
        let mut out = Vec::new();
        self.for_each_nonzero(|b, c| out.push((HomologyVector(b.to_vec()), c)));
        out
    }

    /// Entry-wise checked sum of two rows with the same box.
    pub fn checked_add(&self, other: &DenseRow) -> Result<DenseRow> {
        if self.rank != other.rank || self.half_width != other.half_width {
            return Err(Error::InvalidArgument("row shapes differ".into()));
        }
        let counts = self
            .counts
            .iter()
            .zip(&other.counts)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::Overflow { repr: "u128", length: 0 })?;
        Ok(Self {
            rank: self.rank,
            half_width: self.half_width,
            counts,
        })
    }

    /// Copies into a larger (or equal) box, padding with zeros.
    pub fn widened(&self, half_width: usize) -> DenseRow {
        assert!(half_width >= self.half_width);
        if half_width == self.half_width {
            return self.clone();
        }
        let mut out = DenseRow::zeros(self.rank, half_width);
        self.for_each_nonzero(|b, c| {
            let idx = out.index_of(b).expect("wider box contains narrower");
            out.counts[idx] = c;
        });
        out
    }

    /// Restricts to a smaller (or equal) box.
    pub fn narrowed(&self, half_width: usize) -> DenseRow {
        assert!(half_width <= self.half_width);
        if half_width == self.half_width {
            return self.clone();
        }
        let mut out = DenseRow::zeros(self.rank, half_width);
        let mut beta = vec![0i64; self.rank];
        for idx in 0..out.counts.len() {
            out.coords_of(idx, &mut beta);
            out.counts[idx] = self.get(&beta);
        }
        out
    }

    /// Two rows are equal as functions on `Z^k` (zero outside their boxes).
    pub fn same_entries(&self, other: &DenseRow) -> bool {
        if self.rank != other.rank {
            return false;
        }
        let w = self.half_width.max(other.half_width);
        self.widened(w) == other.widened(w)
    }
}

/// Exact counts indexed by word length `m` in `1..=max_length` and homology
/// vector `beta`.
///
/// When `radius` is set, each row only covers `max|beta_i| <= radius`;
/// entries beyond it are omitted rather than zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    rank: usize,
    max_length: usize,
    radius: Option<usize>,
    rows: Vec<DenseRow>,
}

impl CountTable {
    pub fn from_rows(rank: usize, radius: Option<usize>, rows: Vec<DenseRow>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.rank() != rank) {
            return Err(Error::RankMismatch {
                expected: rank,
                actual: bad.rank(),
            });
        }
        Ok(Self {
            rank,
            max_length: rows.len(),
            radius,
            rows,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    pub fn radius(&self) -> Option<usize> {
        self.radius
    }

    pub fn is_truncated(&self) -> bool {
        self.radius.is_some_and(|r| r < self.max_length)
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Row for length `m` (1-based).
    pub fn row(&self, m: usize) -> Option<&DenseRow> {
        m.checked_sub(1).and_then(|i| self.rows.get(i))
    }

    pub fn rows(&self) -> &[DenseRow] {
        &self.rows
    }

    pub fn get(&self, m: usize, beta: &[i64]) -> u128 {
        self.row(m).map_or(0, |r| r.get(beta))
    }

    pub fn row_total(&self, m: usize) -> Result<u128> {
        self.row(m).map_or(Ok(0), |r| r.total())
    }

    /// Same table restricted to lengths `1..=m`.
    pub fn truncated_to(&self, m: usize) -> CountTable {
        let m = m.min(self.max_length);
        Self {
            rank: self.rank,
            max_length: m,
            radius: self.radius,
            rows: self.rows[..m].to_vec(),
        }
    }
}

/// Counts stratified by length and homology vector; implemented by word and
/// conjugacy-class tables alike.
pub trait Stratified {
    fn rank(&self) -> usize;

    fn max_length(&self) -> usize;

    /// Visits every nonzero entry of length `m`.
    fn for_each_entry(&self, m: usize, f: &mut dyn FnMut(&[i64], u128));

    /// Total count at exact length `m`, over all stored vectors.
    fn length_total(&self, m: usize) -> Result<u128> {
        let mut total = 0u128;
        let mut overflow = false;
        self.for_each_entry(m, &mut |_, c| match total.checked_add(c) {
            Some(t) => total = t,
            None => overflow = true,
        });
        if overflow {
            Err(Error::Overflow { repr: "u128", length: m })
        } else {
            Ok(total)
        }
    }
}

impl Stratified for CountTable {
    fn rank(&self) -> usize {
        self.rank
    }

    fn max_length(&self) -> usize {
        self.max_length
    }

    fn for_each_entry(&self, m: usize, f: &mut dyn FnMut(&[i64], u128)) {
        if let Some(row) = self.row(m) {
            row.for_each_nonzero(|b, c| f(b, c));
        }
    }
}

/// Prefix sums over length: `N_beta(m) = sum_{n <= m} n_beta(n)`.
///
/// Row `m` of the result keeps the box of row `m` of the input.
pub fn cumulative_counts(table: &CountTable) -> Result<CountTable> {
    let mut rows: Vec<DenseRow> = Vec::with_capacity(table.max_length());
    for (i, row) in table.rows().iter().enumerate() {
        let next = match rows.last() {
            None => row.clone(),
            Some(prev) => {
                let w = row.half_width().max(prev.half_width());
                prev.widened(w)
                    .checked_add(&row.widened(w))
                    .map_err(|_| Error::Overflow {
                        repr: "u128",
                        length: i + 1,
                    })?
            }
        };
        rows.push(next);
    }
    CountTable::from_rows(table.rank(), table.radius(), rows)
}
