use thiserror::Error;

/// Errors produced by the ingestion, alignment, summarization and scoring stages.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed JSON input (paper or transcript).
    #[error("parse error at byte {offset} (line {line}, column {column}): {message}")]
    Parse {
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },

    /// Malformed embedding file.
    #[error("embedding format error at line {line}: {message}")]
    Format { line: usize, message: String },

    /// Document has no sections or no sentences at all.
    #[error("document contains no sentences")]
    EmptyDocument,

    /// Every sentence was excluded from the hidden-state space.
    #[error("no eligible sentences remain after section exclusions")]
    EmptyStateSpace,

    /// Transcript has no tokens left after cleaning.
    #[error("transcript is empty after cleaning")]
    EmptyTranscript,

    /// Embedding file contained no usable entries.
    #[error("embedding table is empty")]
    EmptyTable,

    /// A text handed to the scorer tokenized to nothing.
    #[error("text is empty after tokenization")]
    EmptyText,

    /// A ratio budget resolved to zero words.
    #[error("summary budget resolved to zero")]
    BudgetTooSmall,

    /// Hybrid summarization requires an abstract.
    #[error("document has no abstract sentences to augment")]
    MissingAbstract,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short stable name of the error class, used in batch manifests and exit-code
    /// mapping.
    pub fn class(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "Parse",
            Error::Format { .. } => "Format",
            Error::EmptyDocument => "EmptyDocument",
            Error::EmptyStateSpace => "EmptyStateSpace",
            Error::EmptyTranscript => "EmptyTranscript",
            Error::EmptyTable => "EmptyTable",
            Error::EmptyText => "EmptyText",
            Error::BudgetTooSmall => "BudgetTooSmall",
            Error::MissingAbstract => "MissingAbstract",
            Error::Io(_) => "Io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Convert a serde_json error position (1-based line/column) into [`Error::Parse`]
/// with the byte offset resolved against the original input.
pub(crate) fn json_parse_error(input: &str, err: &serde_json::Error) -> Error {
    let line = err.line();
    let column = err.column();
    let offset = input
        .split_inclusive('\n')
        .take(line.saturating_sub(1))
        .map(str::len)
        .sum::<usize>()
        + column.saturating_sub(1);
    Error::Parse {
        offset,
        line,
        column,
        message: err.to_string(),
    }
}
