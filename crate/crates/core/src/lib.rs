//! Align conference-talk transcripts to the sentences of the corresponding
//! paper and turn the alignment into budgeted extractive summaries.
//!
//! The pipeline: [`corpus`] ingests and cleans the paper and transcript and
//! fixes the eligible hidden states; [`embeddings`] supplies word similarity;
//! [`hmm`] builds the alignment model and decodes the MAP sentence path;
//! [`summarizer`] ranks sentences by speaking time and extracts summaries
//! under word, ratio or sentence-count budgets; [`rouge`] scores summaries
//! against references.

pub mod corpus;
pub mod embeddings;
pub mod error;
pub mod hmm;
pub mod rouge;
pub mod summarizer;

pub use error::{Error, Result};
