//! Gaussian predictors for word counts stratified by homology.

use std::f64::consts::PI;

/// `sigma^2 = 1/(k-1)`.
pub fn word_variance(rank: usize) -> f64 {
    1.0 / (rank as f64 - 1.0)
}

/// `s_{beta,m} = 1 + (-1)^{m + beta_1 + ... + beta_k}`: 2 or 0.
pub fn parity_factor(beta: &[i64], m: usize) -> f64 {
    if (beta.iter().sum::<i64>() + m as i64).rem_euclid(2) == 0 {
        2.0
    } else {
        0.0
    }
}

/// `(2 pi sigma^2)^{-k/2} exp(-<beta,beta> / (2 sigma^2 m))`.
pub fn gaussian_density(rank: usize, beta: &[i64], m: usize) -> f64 {
    let s2 = word_variance(rank);
    let bb: f64 = beta.iter().map(|&b| (b * b) as f64).sum();
    (2.0 * PI * s2).powf(-(rank as f64) / 2.0) * (-bb / (2.0 * s2 * m as f64)).exp()
}

/// Predicted `n_beta(m)`: `q^m m^{-k/2} s_{beta,m} (2 pi sigma^2)^{-k/2}
/// exp(-<beta,beta>/(2 sigma^2 m))`.
pub fn gaussian_local_limit_prediction(rank: usize, beta: &[i64], m: usize) -> f64 {
    assert!(m >= 1);
    let q = (2 * rank - 1) as f64;
    q.powi(m as i32) * (m as f64).powf(-(rank as f64) / 2.0) * parity_factor(beta, m) * gaussian_density(rank, beta, m)
}

/// Predicted `N_beta(m)`, averaged over `m, m+1`:
/// `(2 pi sigma^2 m)^{-k/2} exp(-<beta,beta>/(2 sigma^2 m)) q^{m+1}/(q-1)`.
pub fn cumulative_prediction(rank: usize, beta: &[i64], m: usize) -> f64 {
    assert!(m >= 1);
    let q = (2 * rank - 1) as f64;
    (m as f64).powf(-(rank as f64) / 2.0) * gaussian_density(rank, beta, m) * q.powi(m as i32 + 1) / (q - 1.0)
}
