//! Fourier inversion of the closed-form character count.
//!
//! `n_eps(m)` is a trigonometric polynomial in `eps` with frequencies in
//! `[-m, m]^k`, so sampling on the grid `(Z / G)^k` with `G = 2m + 1` and
//! applying a discrete transform recovers every `n_beta(m)` up to round-off.

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::table::DenseRow;
use crate::error::{Error, Result};
use crate::spectral::{char_count_closed_form, CharacterPoint};
use crate::word::check_rank;

/// Default bound on `|value - round(value)| / q^m`.
pub const DEFAULT_FOURIER_TOLERANCE: f64 = 1e-6;

/// Above this distance to the nearest integer the rounded value is unreliable
/// whatever the normalized tolerance says.
const ROUNDING_LIMIT: f64 = 0.25;

/// Cells in the sampling grid before the engine refuses.
pub const FOURIER_GRID_BUDGET: usize = 1 << 26;

#[derive(Clone, Debug, PartialEq)]
pub struct FourierSlice {
    pub length: usize,
    /// Values rounded to the nearest nonnegative integer.
    pub row: DenseRow,
    /// Raw real parts, in the same index order as `row`.
    pub values: Vec<f64>,
    /// Largest of: distance to the nearest integer, magnitude at entries
    /// that parity forces to zero, and imaginary part.
    pub max_residual: f64,
    /// `max_residual / q^m`.
    pub max_normalized_residual: f64,
    pub max_imaginary: f64,
}

/// Approximate row of `n_beta(m)` by inverse transform of sampled character
/// counts. Fails with [`Error::NumericalBreakdown`] when some residual exceeds
/// `tolerance * q^m`, or exceeds 1/4 so that rounding is no longer safe.
pub fn fourier_count_by_homology(rank: usize, length: usize, tolerance: f64) -> Result<FourierSlice> {
    check_rank(rank)?;
    if length == 0 {
        return Err(Error::InvalidArgument("word length must be at least 1".into()));
    }
    let g = 2 * length + 1;
    let cells = g
        .checked_pow(rank as u32)
        .filter(|&c| c <= FOURIER_GRID_BUDGET)
        .ok_or_else(|| Error::InvalidArgument(format!("Fourier grid {g}^{rank} exceeds {FOURIER_GRID_BUDGET} cells")))?;

    // Sample with coordinate 0 most significant, matching DenseRow.
    let mut grid: Vec<Complex64> = Vec::with_capacity(cells);
    let mut idx_coords = vec![0usize; rank];
    for _ in 0..cells {
        let eps = CharacterPoint::new(idx_coords.iter().map(|&c| c as f64 / g as f64).collect());
        grid.push(char_count_closed_form(&eps, rank, length)?);
        for slot in idx_coords.iter_mut().rev() {
            *slot += 1;
            if *slot < g {
                break;
            }
            *slot = 0;
        }
    }

    // Forward transform along each axis: sum_g f(g/G) exp(-2 pi i <beta, g>/G).
    let fft = FftPlanner::<f64>::new().plan_fft_forward(g);
    let mut line = vec![Complex64::new(0.0, 0.0); g];
    for axis in 0..rank {
        let stride = g.pow((rank - 1 - axis) as u32);
        for base in 0..cells {
            if !(base / stride).is_multiple_of(g) {
                continue;
            }
            for (i, slot) in line.iter_mut().enumerate() {
                *slot = grid[base + i * stride];
            }
            fft.process(&mut line);
            for (i, v) in line.iter().enumerate() {
                grid[base + i * stride] = *v;
            }
        }
    }
    let scale = 1.0 / cells as f64;

    // Grid frequency f maps to beta = f for f <= m and f - G otherwise. The
    // output box [-m, m]^k has the same side G, so this is a cyclic shift.
    let mut row = DenseRow::zeros(rank, length);
    let mut values = vec![0.0; cells];
    let mut max_residual = 0.0f64;
    let mut max_imaginary = 0.0f64;
    let mut beta = vec![0i64; rank];
    let mut residuals = vec![0.0; cells];
    for (out_idx, value) in values.iter_mut().enumerate() {
        row.coords_of(out_idx, &mut beta);
        let src = beta
            .iter()
            .fold(0usize, |acc, &b| acc * g + b.rem_euclid(g as i64) as usize);
        let v = grid[src] * scale;
        *value = v.re;
        max_imaginary = max_imaginary.max(v.im.abs());
        let rounded = v.re.round();
        // Past 2^53 every double is an integer, so the distance to the
        // nearest integer stops measuring noise. Entries of the wrong
        // parity are exactly zero and keep measuring it.
        let parity_ok = (beta.iter().sum::<i64>() - length as i64).rem_euclid(2) == 0;
        let residual = if parity_ok { (v.re - rounded).abs() } else { v.re.abs() };
        residuals[out_idx] = residual.max(v.im.abs());
        max_residual = max_residual.max(residuals[out_idx]);
        row.counts_mut()[out_idx] = if parity_ok { rounded.max(0.0) as u128 } else { 0 };
    }
    let q_m = ((2 * rank - 1) as f64).powi(length as i32);
    let max_normalized_residual = max_residual / q_m;
    if max_normalized_residual > tolerance || max_residual > ROUNDING_LIMIT {
        let entries = residuals
            .iter()
            .filter(|&&r| r / q_m > tolerance || r > ROUNDING_LIMIT)
            .count();
        return Err(Error::NumericalBreakdown {
            length,
            entries,
            tolerance,
            worst: max_normalized_residual,
        });
    }
    Ok(FourierSlice {
        length,
        row,
        values,
        max_residual,
        max_normalized_residual,
        max_imaginary,
    })
}
