//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    ReadFile {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    WriteFile {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("manifest {path}: {message}")]
    Manifest { path: PathBuf, message: String },

    #[error("labeling rule: {0}")]
    LabelingRule(String),

    #[error("duplicate speech id {0:?}")]
    DuplicateId(String),

    #[error("unknown speech class code {0:?}")]
    ClassCode(String),

    #[error("corpus archive line {line}: {message}")]
    Archive { line: usize, message: String },

    #[error("invalid token stream: {0}")]
    TokenStream(String),

    #[error("empty class subset {0}; nothing to train on")]
    EmptyClass(String),

    #[error("model file line {line}: {message}")]
    ModelFormat { line: usize, message: String },

    #[error("catalog file line {line}: {message}")]
    CatalogFormat { line: usize, message: String },

    #[error("lexicon line {line}: {message}")]
    Lexicon { line: usize, message: String },

    #[error("pre-tagged corpus line {line}: {message}")]
    PreTagged { line: usize, message: String },

    #[error("invalid generation config: {0}")]
    Config(String),

    #[error("evaluation: {0}")]
    Evaluation(String),

    #[error("score card for {speech}: {message}")]
    ScoreCard { speech: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
