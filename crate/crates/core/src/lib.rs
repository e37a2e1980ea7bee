//! Counting cyclically reduced words and conjugacy classes of the free group
//! `F_k` by length and abelianization, with the character-sum machinery and
//! the Gaussian limit laws that describe them.

pub mod census;
pub mod error;
pub mod experiments;
pub mod limits;
pub mod spectral;
pub mod word;

pub use error::{Error, Result};
pub use word::{HomologyVector, Letter, Word};
