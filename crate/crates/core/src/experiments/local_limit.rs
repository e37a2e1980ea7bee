//! Error curves for the Gaussian local limit of word counts.

use super::report::{ExperimentReport, Verdict};
use crate::census::table::cumulative_counts;
use crate::error::{Error, Result};
use crate::experiments::equidistribution::word_table;
use crate::limits::gaussian::{gaussian_density, parity_factor};
use crate::limits::lattice::Neumaier;
use crate::limits::sets::LatticeSet;
use crate::word::check_rank;

#[derive(Clone, Debug, PartialEq)]
pub struct LocalLimitPoint {
    pub m: usize,
    /// `sup_beta |m^{k/2} n_beta(m) / q^m - s_{beta,m} g(beta)|`.
    pub sup_error: f64,
    /// Signed sum over `B` in the `sqrt(m) ln m` box of the averaged
    /// cumulative deviation, times `m^{-k/2}`.
    pub summed_statistic: f64,
    /// Largest absolute per-`beta` cumulative deviation in the box.
    pub sup_cumulative: f64,
    /// Number of `beta in B` in the box.
    pub box_points: usize,
}

/// Computes one point of each curve. `words` must reach `m + 1`.
fn curve_point(words: &crate::census::CountTable, cumulative: &crate::census::CountTable, set: &LatticeSet, m: usize) -> LocalLimitPoint {
    let rank = words.rank();
    let q = (2 * rank - 1) as f64;
    let mk2 = (m as f64).powf(rank as f64 / 2.0);
    let q_m = q.powi(m as i32);

    let row = words.row(m).expect("row in range");
    let mut sup_error = 0.0f64;
    let mut beta = vec![0i64; rank];
    for idx in 0..row.counts().len() {
        row.coords_of(idx, &mut beta);
        let observed = mk2 * row.counts()[idx] as f64 / q_m;
        let predicted = parity_factor(&beta, m) * gaussian_density(rank, &beta, m);
        sup_error = sup_error.max((observed - predicted).abs());
    }

    let w = ((m as f64).sqrt() * (m as f64).ln()).floor() as i64;
    let side = (2 * w + 1) as usize;
    let norm_m = q.powi(m as i32 + 1) / (q - 1.0);
    let norm_m1 = q.powi(m as i32 + 2) / (q - 1.0);
    let mut sum = Neumaier::default();
    let mut sup_cumulative = 0.0f64;
    let mut box_points = 0usize;
    for idx in 0..side.pow(rank as u32) {
        let mut rest = idx;
        for slot in beta.iter_mut().rev() {
            *slot = (rest % side) as i64 - w;
            rest /= side;
        }
        if !set.contains(&beta) {
            continue;
        }
        box_points += 1;
        let a = cumulative.get(m, &beta) as f64 / norm_m;
        let b = cumulative.get(m + 1, &beta) as f64 / norm_m1;
        let dev = mk2 / 2.0 * (a + b) - gaussian_density(rank, &beta, m);
        sup_cumulative = sup_cumulative.max(dev.abs());
        sum.add(dev);
    }
    LocalLimitPoint {
        m,
        sup_error,
        summed_statistic: sum.value() / mk2,
        sup_cumulative,
        box_points,
    }
}

pub fn local_limit_points(rank: usize, lengths: &[usize], set: &LatticeSet) -> Result<Vec<LocalLimitPoint>> {
    check_rank(rank)?;
    if lengths.is_empty() || lengths.contains(&0) {
        return Err(Error::InvalidArgument("lengths must be nonempty and positive".into()));
    }
    let top = lengths.iter().max().copied().unwrap_or(1) + 1;
    let words = word_table(rank, top)?;
    let cumulative = cumulative_counts(&words)?;
    Ok(lengths.iter().map(|&m| curve_point(&words, &cumulative, set, m)).collect())
}

/// Sup-error and summed-error series over `lengths`, with the verdict that
/// the sup error at the largest length is strictly below that at the
/// smallest.
pub fn local_limit_error_curve(rank: usize, lengths: &[usize], set: &LatticeSet) -> Result<ExperimentReport> {
    let mut sorted = lengths.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let points = local_limit_points(rank, &sorted, set)?;
    let mut report = ExperimentReport::new("local-limit");
    report
        .param("k", rank)
        .param("lengths", &sorted)
        .param("set", set.to_string())
        .param("engine", "dp");
    report.add_series("sup_error", points.iter().map(|p| (p.m, p.sup_error)).collect());
    report.add_series("summed_statistic", points.iter().map(|p| (p.m, p.summed_statistic)).collect());
    report.add_series("sup_cumulative", points.iter().map(|p| (p.m, p.sup_cumulative)).collect());
    let first = &points[0];
    let last = points.last().expect("nonempty");
    if points.len() >= 2 {
        report.verdicts.push(Verdict::check(
            "sup_error_decreases",
            last.sup_error < first.sup_error,
            format!(
                "m = {}: {:.6}, m = {}: {:.6}",
                first.m, first.sup_error, last.m, last.sup_error
            ),
        ));
    } else {
        report
            .verdicts
            .push(Verdict::no_verdict("sup_error_decreases", "needs at least two lengths"));
    }
    let unscaled = last.summed_statistic * (last.m as f64).powf(rank as f64 / 2.0);
    let bound = last.sup_cumulative * last.box_points as f64;
    report.verdicts.push(Verdict::check(
        "summed_cancellation",
        unscaled.abs() < bound,
        format!("m = {}: |sum| = {:.4} < sup * points = {:.4}", last.m, unscaled.abs(), bound),
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_mismatch_contributes_nothing() {
        // at m = 1 the only nonzero counts have |beta| = 1; beta = 0 is
        // parity-mismatched and both sides vanish there
        let words = word_table(2, 2).unwrap();
        let row = words.row(1).unwrap();
        assert_eq!(row.get(&[0, 0]), 0);
        assert_eq!(parity_factor(&[0, 0], 1), 0.0);
    }

    #[test]
    fn rank_two_curve() {
        let r = local_limit_error_curve(2, &[8, 16, 24, 32], &LatticeSet::Coprime).unwrap();
        let sup = &r.series("sup_error").unwrap().points;
        assert!(sup[3].1 < sup[0].1);
        assert!(r.all_passed(), "{}", r.to_text());
    }
}
