//! Exact transfer-matrix count of cyclically reduced words by homology.
//!
//! For each first letter `f` the engine extends reduced words one letter at a
//! time over states `(last letter, running homology vector)`, never appending
//! the inverse of the last letter. After step `t` the words whose last letter
//! is not `f⁻¹` are exactly the cyclically reduced words of length `t`
//! starting with `f`.

use std::fmt::Debug;

use rayon::prelude::*;

use super::table::{CountTable, DenseRow};
use crate::error::{Error, Result};
use crate::word::check_rank;

/// Upper bound on `2k * (2W+1)^k` cells per shard.
pub const DP_STATE_BUDGET: usize = 1 << 27;

/// Unsigned integer type usable as an exact counter.
pub trait ExactCount: Copy + Send + Sync + Eq + Debug + 'static {
    const NAME: &'static str;
    const ZERO: Self;
    const ONE: Self;

    fn checked_add(self, other: Self) -> Option<Self>;

    fn to_u128(self) -> u128;

    const MAX_AS_U128: u128;
}

impl ExactCount for u64 {
    const NAME: &'static str = "u64";
    const ZERO: Self = 0;
    const ONE: Self = 1;

    fn checked_add(self, other: Self) -> Option<Self> {
        u64::checked_add(self, other)
    }

    fn to_u128(self) -> u128 {
        self as u128
    }

    const MAX_AS_U128: u128 = u64::MAX as u128;
}

impl ExactCount for u128 {
    const NAME: &'static str = "u128";
    const ZERO: Self = 0;
    const ONE: Self = 1;

    fn checked_add(self, other: Self) -> Option<Self> {
        u128::checked_add(self, other)
    }

    fn to_u128(self) -> u128 {
        self
    }

    const MAX_AS_U128: u128 = u128::MAX;
}

struct Layout {
    rank: usize,
    half_width: usize,
    side: usize,
    cells: usize,
    /// Stride of coordinate `j` in the flat index.
    strides: Vec<usize>,
    coords: Vec<i32>,
    inf_norm: Vec<u32>,
}

impl Layout {
    fn new(rank: usize, half_width: usize) -> Self {
        let side = 2 * half_width + 1;
        let cells = side.pow(rank as u32);
        let strides = (0..rank).map(|j| side.pow((rank - 1 - j) as u32)).collect();
        let mut coords = vec![0i32; cells * rank];
        let mut inf_norm = vec![0u32; cells];
        for idx in 0..cells {
            let mut rest = idx;
            for j in (0..rank).rev() {
                let c = (rest % side) as i32 - half_width as i32;
                coords[idx * rank + j] = c;
                inf_norm[idx] = inf_norm[idx].max(c.unsigned_abs());
                rest /= side;
            }
        }
        Self {
            rank,
            half_width,
            side,
            cells,
            strides,
            coords,
            inf_norm,
        }
    }
}

/// Exact table of `n_beta(m)` for `m` in `1..=max_length`.
///
/// With `radius = Some(r)` every row keeps only `max|beta_i| <= r`. Running
/// states are kept while they can still return to the box: at step `t` a
/// coordinate may reach `r + (max_length - t)`. This makes truncated rows
/// exact, not approximations.
pub fn dp_table<T: ExactCount>(rank: usize, max_length: usize, radius: Option<usize>) -> Result<CountTable> {
    check_rank(rank)?;
    if max_length == 0 {
        return CountTable::from_rows(rank, radius, Vec::new());
    }
    let r = radius.map_or(max_length, |r| r.min(max_length));
    let limit = |t: usize| t.min(r + (max_length - t));
    // The first letter always lands at distance one, even when `r = 0`.
    let half_width = (1..=max_length).map(limit).max().unwrap_or(0).max(1);
    (2 * half_width + 1)
        .checked_pow(rank as u32)
        .and_then(|c| c.checked_mul(2 * rank))
        .filter(|&c| c <= DP_STATE_BUDGET)
        .ok_or_else(|| {
            Error::InvalidArgument(format!(
                "DP state space for rank {rank}, half width {half_width} exceeds {DP_STATE_BUDGET} cells; pass a radius"
            ))
        })?;
    let layout = Layout::new(rank, half_width);

    let shards: Vec<Vec<DenseRow>> = (0..2 * rank)
        .into_par_iter()
        .map(|first| run_shard::<T>(&layout, first, max_length, r, &limit))
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(max_length);
    for m in 0..max_length {
        let mut row = shards[0][m].clone();
        for shard in &shards[1..] {
            row = row
                .checked_add(&shard[m])
                .map_err(|_| Error::Overflow { repr: T::NAME, length: m + 1 })?;
        }
        // Row totals must fit the counter type as well.
        let total = row.total().map_err(|_| Error::Overflow { repr: T::NAME, length: m + 1 })?;
        if total > T::MAX_AS_U128 {
            return Err(Error::Overflow { repr: T::NAME, length: m + 1 });
        }
        rows.push(row);
    }
    CountTable::from_rows(rank, radius, rows)
}

fn run_shard<T: ExactCount>(
    layout: &Layout,
    first: usize,
    max_length: usize,
    radius: usize,
    limit: &dyn Fn(usize) -> usize,
) -> Result<Vec<DenseRow>> {
    let rank = layout.rank;
    let letters = 2 * rank;
    let cells = layout.cells;
    let w = layout.half_width as i32;
    let mut cur = vec![T::ZERO; letters * cells];
    let mut next = vec![T::ZERO; letters * cells];

    let origin = layout.cells / 2;
    let j0 = first / 2;
    let d0: isize = if first.is_multiple_of(2) { 1 } else { -1 };
    let start = (origin as isize + d0 * layout.strides[j0] as isize) as usize;
    cur[first * cells + start] = T::ONE;

    let mut rows = Vec::with_capacity(max_length);
    for t in 1..=max_length {
        rows.push(extract_row(layout, &cur, first, t.min(radius), t)?);
        if t == max_length {
            break;
        }
        let bound = limit(t + 1) as u32;
        next.iter_mut().for_each(|c| *c = T::ZERO);
        for last in 0..letters {
            let src = &cur[last * cells..(last + 1) * cells];
            for (idx, &count) in src.iter().enumerate() {
                if count == T::ZERO {
                    continue;
                }
                for letter in (0..letters).filter(|&c| c != last ^ 1) {
                    let j = letter / 2;
                    let c = layout.coords[idx * rank + j] + if letter % 2 == 0 { 1 } else { -1 };
                    if c.abs() > w {
                        continue;
                    }
                    let target = if letter % 2 == 0 {
                        idx + layout.strides[j]
                    } else {
                        idx - layout.strides[j]
                    };
                    if layout.inf_norm[target] > bound {
                        continue;
                    }
                    let slot = &mut next[letter * cells + target];
                    *slot = slot
                        .checked_add(count)
                        .ok_or(Error::Overflow { repr: T::NAME, length: t + 1 })?;
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(rows)
}

fn extract_row<T: ExactCount>(
    layout: &Layout,
    state: &[T],
    first: usize,
    row_width: usize,
    length: usize,
) -> Result<DenseRow> {
    let rank = layout.rank;
    let cells = layout.cells;
    let mut row = DenseRow::zeros(rank, row_width);
    let mut beta = vec![0i64; rank];
    let offset = layout.half_width as i64;
    let side = layout.side;
    for idx in 0..row.counts().len() {
        row.coords_of(idx, &mut beta);
        let src = beta
            .iter()
            .fold(0usize, |acc, &b| acc * side + (b + offset) as usize);
        let mut total = 0u128;
        for last in (0..2 * rank).filter(|&c| c != first ^ 1) {
            total = total
                .checked_add(state[last * cells + src].to_u128())
                .ok_or(Error::Overflow { repr: "u128", length })?;
        }
        row.counts_mut()[idx] = total;
    }
    Ok(row)
}

/// Slice of [`dp_table`] at length `m`.
pub fn dp_count_by_homology(rank: usize, length: usize, radius: Option<usize>) -> Result<DenseRow> {
    if length == 0 {
        return Err(Error::InvalidArgument("word length must be at least 1".into()));
    }
    let table = dp_table::<u128>(rank, length, radius)?;
    Ok(table.row(length).expect("row exists").clone())
}
