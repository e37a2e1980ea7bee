//! Gaussian predictors, lattice Gaussian sums and lattice densities.

pub mod gaussian;
pub mod lattice;
pub mod norm;
pub mod sets;
pub mod zeta;

pub use gaussian::{cumulative_prediction, gaussian_local_limit_prediction, parity_factor, word_variance};
pub use lattice::{
    ball_density_estimate, lattice_gaussian_sum, surface_predictor_sum, surface_variance, truncation_half_width,
    BallDensity, LatticeSum, Neumaier, SumOptions, SumPath, DEFAULT_POINT_BUDGET,
};
pub use norm::QuadraticNorm;
pub use sets::{KnownDensity, LatticeSet};
pub use zeta::zeta;
