//! Characters of the free group through its abelianization, and the spectral
//! data of the one-vertex graph with `k` loops.
//!
//! A point `eps` of the torus `R^k / Z^k` defines the character
//! `chi_eps(w) = exp(2 pi i <Phi(w), eps>)`. Its twisted adjacency value is
//! `A(eps) = 2 sum_j cos(2 pi eps_j)`, and the two roots `lambda1, lambda2` of
//! `1 - A u + (2k-1) u^2` give the character-weighted count of cyclically
//! reduced words of length `m`:
//!
//! ```text
//! n_eps(m) = lambda1^-m + lambda2^-m + (k-1)(1 + (-1)^m)
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::census::enumerate::{oracle_table, Guard};
use crate::census::table::{CountTable, DenseRow};
use crate::error::{Error, Result};
use crate::word::check_rank;

/// A point on the character torus, coordinates reduced into `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterPoint {
    eps: Vec<f64>,
}

impl CharacterPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        let eps = coords
            .into_iter()
            .map(|x| {
                let r = x.rem_euclid(1.0);
                if r >= 1.0 {
                    0.0
                } else {
                    r
                }
            })
            .collect();
        Self { eps }
    }

    pub fn trivial(rank: usize) -> Self {
        Self { eps: vec![0.0; rank] }
    }

    /// The point `(1/2, ..., 1/2)`, whose character is `(-1)^{|w|}`.
    pub fn sign(rank: usize) -> Self {
        Self { eps: vec![0.5; rank] }
    }

    pub fn coords(&self) -> &[f64] {
        &self.eps
    }

    pub fn rank(&self) -> usize {
        self.eps.len()
    }

    /// `chi_eps^beta = exp(2 pi i <beta, eps>)`.
    pub fn character_of(&self, beta: &[i64]) -> Complex64 {
        let phase: f64 = beta.iter().zip(&self.eps).map(|(&b, &e)| b as f64 * e).sum();
        Complex64::from_polar(1.0, 2.0 * PI * phase)
    }
}

pub fn adjacency_value(eps: &CharacterPoint) -> f64 {
    2.0 * eps.coords().iter().map(|e| (2.0 * PI * e).cos()).sum::<f64>()
}

/// Roots of `1 - A u + (2k-1) u^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenPair {
    pub lambda1: Complex64,
    pub lambda2: Complex64,
    pub adjacency: f64,
}

/// `lambda1,2 = (A ± sqrt(A^2 - 4q)) / 2q` with the principal complex square
/// root, `q = 2k - 1`. A double root is returned as two equal values.
pub fn eigenpair(adjacency: f64, rank: usize) -> Result<EigenPair> {
    check_rank(rank)?;
    let bound = 2.0 * rank as f64;
    if !adjacency.is_finite() || adjacency.abs() > bound * (1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "adjacency value {adjacency} outside [-{bound}, {bound}]"
        )));
    }
    let q = (2 * rank - 1) as f64;
    let disc = Complex64::new(adjacency * adjacency - 4.0 * q, 0.0).sqrt();
    let a = Complex64::new(adjacency, 0.0);
    Ok(EigenPair {
        lambda1: (a + disc) / (2.0 * q),
        lambda2: (a - disc) / (2.0 * q),
        adjacency,
    })
}

fn parity_term(rank: usize, length: usize) -> f64 {
    if length.is_multiple_of(2) {
        2.0 * (rank as f64 - 1.0)
    } else {
        0.0
    }
}

/// `sum over cyclically reduced w with |w| = m of chi_eps(w)`, from the
/// eigenvalues. The parity term is `(k-1)(1 + (-1)^m)`.
pub fn char_count_closed_form(eps: &CharacterPoint, rank: usize, length: usize) -> Result<Complex64> {
    if eps.rank() != rank {
        return Err(Error::RankMismatch {
            expected: rank,
            actual: eps.rank(),
        });
    }
    if length == 0 {
        return Err(Error::InvalidArgument("word length must be at least 1".into()));
    }
    let pair = eigenpair(adjacency_value(eps), rank)?;
    let m = length as i32;
    Ok(pair.lambda1.inv().powi(m) + pair.lambda2.inv().powi(m) + parity_term(rank, length))
}

/// Character sum `sum_beta n_beta(m) chi_eps^beta` over an exact count row.
pub fn character_sum(row: &DenseRow, eps: &CharacterPoint) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    row.for_each_nonzero(|beta, c| acc += eps.character_of(beta) * c as f64);
    acc
}

/// Power-series coefficients `c_1..c_order` of
/// `2(k-1)u^2/(1-u^2) + (uA - 2q u^2)/(1 - uA + q u^2)`, by long division.
pub fn ihara_series(adjacency: f64, rank: usize, order: usize) -> Vec<f64> {
    let q = (2 * rank - 1) as f64;
    let mut c = vec![0.0f64; order + 1];
    for m in 1..=order {
        let numerator = match m {
            1 => adjacency,
            2 => -2.0 * q,
            _ => 0.0,
        };
        let prev = c[m - 1];
        let prev2 = if m >= 2 { c[m - 2] } else { 0.0 };
        c[m] = numerator + adjacency * prev - q * prev2;
    }
    (1..=order).map(|m| c[m] + parity_term(rank, m)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IharaCheck {
    pub eps: Vec<f64>,
    /// `|series_m - oracle_m| / q^m` for `m = 1..=order`.
    pub normalized_discrepancies: Vec<f64>,
    pub max_discrepancy: f64,
}

/// Compares series coefficients with oracle character sums taken from an
/// already enumerated table.
pub fn ihara_identity_check_with(oracle: &CountTable, eps: &CharacterPoint) -> Result<IharaCheck> {
    let rank = oracle.rank();
    if eps.rank() != rank {
        return Err(Error::RankMismatch {
            expected: rank,
            actual: eps.rank(),
        });
    }
    let order = oracle.max_length();
    let q = (2 * rank - 1) as f64;
    let series = ihara_series(adjacency_value(eps), rank, order);
    let normalized: Vec<f64> = (1..=order)
        .map(|m| {
            let exact = character_sum(oracle.row(m).expect("row in range"), eps);
            (Complex64::new(series[m - 1], 0.0) - exact).norm() / q.powi(m as i32)
        })
        .collect();
    let max = normalized.iter().cloned().fold(0.0, f64::max);
    Ok(IharaCheck {
        eps: eps.coords().to_vec(),
        normalized_discrepancies: normalized,
        max_discrepancy: max,
    })
}

/// Enumerates the oracle to `order` and runs [`ihara_identity_check_with`].
pub fn ihara_identity_check(eps: &CharacterPoint, rank: usize, order: usize, guard: Guard) -> Result<IharaCheck> {
    let oracle = oracle_table(rank, order, guard)?;
    ihara_identity_check_with(&oracle, eps)
}

/// `rho^2 = 4 pi^2 / (k - 1)`.
pub fn eigen_scale_sq(rank: usize) -> f64 {
    4.0 * PI * PI / (rank as f64 - 1.0)
}

/// `lambda1(eps0 / (rho sqrt m))^m`, which tends to `exp(-<eps0,eps0>/2)`.
pub fn scaled_eigenpower(eps0: &[f64], rank: usize, length: usize) -> Result<f64> {
    check_rank(rank)?;
    if eps0.len() != rank {
        return Err(Error::RankMismatch {
            expected: rank,
            actual: eps0.len(),
        });
    }
    if length == 0 {
        return Err(Error::InvalidArgument("length must be at least 1".into()));
    }
    let scale = (eigen_scale_sq(rank) * length as f64).sqrt();
    let scaled: Vec<f64> = eps0.iter().map(|e| e / scale).collect();
    if scaled.iter().any(|e| e.abs() >= 0.5) {
        return Err(Error::InvalidArgument(format!(
            "eps0 / (rho sqrt m) leaves the principal chart at m = {length}"
        )));
    }
    let a = 2.0 * scaled.iter().map(|e| (2.0 * PI * e).cos()).sum::<f64>();
    let pair = eigenpair(a, rank)?;
    Ok(pair.lambda1.powi(length as i32).re)
}

/// A rational character point with its sieve weight.
#[derive(Clone, Debug, PartialEq)]
pub struct SievePoint {
    pub eps: CharacterPoint,
    pub weight: Complex64,
}

/// Rational points `g/l` with weights `conj(chi_g(a)) / (l_1...l_k)` whose
/// weighted character sum is the indicator of `Phi(w) ≡ a (mod l)`.
pub fn finite_character_sieve(moduli: &[i64], residues: &[i64]) -> Result<Vec<SievePoint>> {
    if moduli.len() != residues.len() {
        return Err(Error::InvalidArgument("moduli and residues differ in length".into()));
    }
    if let Some(bad) = moduli.iter().find(|&&l| l < 1) {
        return Err(Error::InvalidArgument(format!("modulus must be >= 1, got {bad}")));
    }
    if let Some((a, l)) = residues.iter().zip(moduli).find(|(a, l)| **a < 0 || *a >= *l) {
        return Err(Error::InvalidArgument(format!("residue {a} outside 0..{l}")));
    }
    let total: i64 = moduli.iter().product();
    let mut out = Vec::with_capacity(total as usize);
    let mut g = vec![0i64; moduli.len()];
    loop {
        let eps = CharacterPoint::new(g.iter().zip(moduli).map(|(&g, &l)| g as f64 / l as f64).collect());
        let weight = eps.character_of(residues).conj() / total as f64;
        out.push(SievePoint { eps, weight });
        // odometer over g in prod Z/l_j
        let mut j = moduli.len();
        loop {
            if j == 0 {
                return Ok(out);
            }
            j -= 1;
            g[j] += 1;
            if g[j] < moduli[j] {
                break;
            }
            g[j] = 0;
        }
    }
}

/// Evaluates a sieve on one homology vector. Returns the (complex) indicator.
pub fn sieve_indicator(sieve: &[SievePoint], beta: &[i64]) -> Complex64 {
    sieve.iter().map(|p| p.weight * p.eps.character_of(beta)).sum()
}
