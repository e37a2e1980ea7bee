//! End-to-end experiments with provenanced targets and threshold verdicts.

pub mod equidistribution;
pub mod local_limit;
pub mod regression;
pub mod report;

pub use equidistribution::{
    averaged_ratio, coprime_experiment, equidistribution_ratio, plain_ratio, progression_experiment,
    progression_parity_limits, Level, Ratio, WARM_UP_LENGTH,
};
pub use local_limit::{local_limit_error_curve, local_limit_points, LocalLimitPoint};
pub use regression::{identity_regression_suite, RegressionConfig};
pub use report::{ExperimentReport, Outcome, Series, Target, Verdict};
