//! Valence association tests for static word embeddings.
//!
//! The crate measures how strongly words associate with pleasant versus
//! unpleasant stimuli in a word-vector space (WEAT and single-category
//! WEAT effect sizes with permutation-test p-values), correlates those
//! per-word scores with human valence ratings, and runs the usual
//! word-similarity and analogy baselines next to it.

pub mod association;
pub mod error;
pub mod evalsuite;
pub mod reports;
pub mod stats;
pub mod stimuli;
pub mod valence;
pub mod vectorspace;

pub use error::{Error, Result};
