//! Corpus-trained generation of class-conditioned floor speeches.
//!
//! The pipeline: ingest labeled transcript segments ([`corpus`]), assign POS
//! tags ([`postag`]), train per-class 6-gram language models ([`langmodel`])
//! and POS-pattern topic catalogs ([`topicmodel`]), generate new speeches by
//! blending the two models ([`generator`]), and score the output for
//! grammaticality and topical consistency ([`evaluation`]).

pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod generator;
pub mod langmodel;
pub mod postag;
pub mod topicmodel;

pub use error::{Error, Result};
