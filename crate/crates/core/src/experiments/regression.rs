//! Consolidated identity checks: formula vs engines, engines vs each other,
//! series vs character sums, classes vs words.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::report::{ExperimentReport, Verdict};
use crate::census::classes::{burnside_class_table, orbit_class_row};
use crate::census::dp::dp_table;
use crate::census::enumerate::{cyclic_word_total, oracle_table, Guard};
use crate::census::fourier::{fourier_count_by_homology, DEFAULT_FOURIER_TOLERANCE};
use crate::census::table::CountTable;
use crate::error::Result;
use crate::spectral::{ihara_identity_check_with, CharacterPoint};
use crate::word::check_rank;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegressionConfig {
    pub oracle_depth: usize,
    pub dp_depth: usize,
    pub fourier_depth: usize,
    pub ihara_depth: usize,
    pub class_depth: usize,
    pub characters: usize,
    pub seed: u64,
    pub guard: Guard,
}

impl RegressionConfig {
    /// Depths used by the default run.
    pub fn default_for(rank: usize) -> Self {
        let guard = Guard::default_for(rank);
        let (oracle, fourier, class) = match rank {
            2 => (12, 12, 10),
            3 => (8, 8, 7),
            _ => (guard.max_length.min(6), guard.max_length.min(5), guard.max_length.min(5)),
        };
        Self {
            oracle_depth: oracle,
            dp_depth: 40,
            fourier_depth: fourier,
            ihara_depth: 8.min(oracle),
            class_depth: class,
            characters: 20,
            seed: 0x5eed,
            guard,
        }
    }

    /// Shallow run for quick checks.
    pub fn reduced_for(rank: usize) -> Self {
        let mut c = Self::default_for(rank);
        c.oracle_depth = c.oracle_depth.min(6);
        c.fourier_depth = c.fourier_depth.min(6);
        c.ihara_depth = c.ihara_depth.min(6);
        c.class_depth = c.class_depth.min(5);
        c.dp_depth = 20;
        c.characters = 5;
        c
    }
}

fn symmetric_and_parity_clean(table: &CountTable) -> bool {
    let rank = table.rank();
    table.rows().iter().enumerate().all(|(i, row)| {
        let m = (i + 1) as i64;
        let mut ok = true;
        let mut neg = vec![0i64; rank];
        let mut swapped = vec![0i64; rank];
        let mut flipped = vec![0i64; rank];
        row.for_each_nonzero(|b, c| {
            for (n, x) in neg.iter_mut().zip(b) {
                *n = -x;
            }
            swapped.copy_from_slice(b);
            swapped.swap(0, 1);
            flipped.copy_from_slice(b);
            flipped[0] = -flipped[0];
            ok &= (b.iter().sum::<i64>() - m).rem_euclid(2) == 0
                && b.iter().all(|x| x.abs() <= m)
                && row.get(&neg) == c
                && row.get(&swapped) == c
                && row.get(&flipped) == c;
        });
        ok
    })
}

pub fn identity_regression_suite(rank: usize, config: RegressionConfig) -> Result<ExperimentReport> {
    check_rank(rank)?;
    let mut report = ExperimentReport::new("regression");
    report.param("k", rank).param("config", config);

    // Oracle, formula totals and engine agreement.
    let oracle = match oracle_table(rank, config.oracle_depth.max(config.fourier_depth).max(config.ihara_depth), config.guard) {
        Ok(t) => Some(t),
        Err(e) => {
            report.verdicts.push(Verdict::refused("oracle", &e));
            None
        }
    };
    if let Some(oracle) = &oracle {
        let bad: Vec<usize> = (1..=config.oracle_depth)
            .filter(|&m| oracle.row_total(m).ok() != cyclic_word_total(rank, m).ok())
            .collect();
        report.verdicts.push(Verdict::check(
            "formula_vs_oracle",
            bad.is_empty(),
            format!("m <= {}: mismatches at {bad:?}", config.oracle_depth),
        ));
    }

    match dp_table::<u128>(rank, config.dp_depth, None) {
        Ok(dp) => {
            let bad: Vec<usize> = (1..=config.dp_depth)
                .filter(|&m| dp.row_total(m).ok() != cyclic_word_total(rank, m).ok())
                .collect();
            report.verdicts.push(Verdict::check(
                "formula_vs_dp",
                bad.is_empty(),
                format!("m <= {}: mismatches at {bad:?}", config.dp_depth),
            ));
            report.verdicts.push(Verdict::check(
                "dp_symmetry_and_parity",
                symmetric_and_parity_clean(&dp),
                "inversion, coordinate swap and sign flip invariance; parity and support vanishing",
            ));
            if let Some(oracle) = &oracle {
                let depth = config.fourier_depth.min(config.dp_depth);
                let mut mismatches = Vec::new();
                let mut worst = 0.0f64;
                let mut refusal = None;
                for m in 1..=depth {
                    let fourier = match fourier_count_by_homology(rank, m, DEFAULT_FOURIER_TOLERANCE) {
                        Ok(f) => f,
                        Err(e) => {
                            refusal = Some(e);
                            break;
                        }
                    };
                    worst = worst.max(fourier.max_normalized_residual);
                    let o = oracle.row(m).expect("oracle depth covers fourier depth");
                    if dp.row(m) != Some(o) || &fourier.row != o {
                        mismatches.push(m);
                    }
                }
                match refusal {
                    Some(e) => report.verdicts.push(Verdict::refused("triple_engine_agreement", &e)),
                    None => report.verdicts.push(Verdict::check(
                        "triple_engine_agreement",
                        mismatches.is_empty(),
                        format!("m <= {depth}: mismatches at {mismatches:?}; worst residual / q^m = {worst:.1e}"),
                    )),
                }
            }
            if config.class_depth > 0 {
                let burnside = burnside_class_table(&dp)?;
                let mut bad = Vec::new();
                let mut refusal = None;
                for m in 1..=config.class_depth.min(config.dp_depth) {
                    match orbit_class_row(rank, m, config.guard) {
                        Ok((row, sizes)) => {
                            if Some(sizes) != cyclic_word_total(rank, m).ok() || burnside.row(m) != Some(&row) {
                                bad.push(m);
                            }
                        }
                        Err(e) => {
                            refusal = Some(e);
                            break;
                        }
                    }
                }
                match refusal {
                    Some(e) => report.verdicts.push(Verdict::refused("class_word_consistency", &e)),
                    None => report.verdicts.push(Verdict::check(
                        "class_word_consistency",
                        bad.is_empty(),
                        format!(
                            "m <= {}: orbit sizes sum to word counts and match the rotation count; mismatches at {bad:?}",
                            config.class_depth
                        ),
                    )),
                }
            }
        }
        Err(e) => report.verdicts.push(Verdict::refused("dp", &e)),
    }

    if let Some(oracle) = &oracle {
        let oracle = oracle.truncated_to(config.ihara_depth);
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut worst = 0.0f64;
        for _ in 0..config.characters {
            let eps = CharacterPoint::new((0..rank).map(|_| rng.random::<f64>()).collect());
            worst = worst.max(ihara_identity_check_with(&oracle, &eps)?.max_discrepancy);
        }
        report.verdicts.push(Verdict::check(
            "ihara_identity",
            worst <= 1e-9,
            format!(
                "{} characters, m <= {}: worst normalized discrepancy {worst:.1e}",
                config.characters, config.ihara_depth
            ),
        ));
    }
    Ok(report)
}
