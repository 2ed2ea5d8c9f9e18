//! Text ingestion: tokenization, inverted-index construction and persistence.

mod index;
mod storage;
mod tokenizer;

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub use index::{
    build_index, CorpusStats, DocId, Document, InvertedIndex, Posting, PreparedQuery, Query,
    QueryTerm,
};
pub use storage::{load_index, save_index, INDEX_MAGIC, INDEX_VERSION};
pub use tokenizer::{tokenize, TokenizerConfig, DEFAULT_STOPWORDS};

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("duplicate document id {0:?}")]
    DuplicateDocId(String),
    #[error("document id must not be empty")]
    EmptyDocId,
    #[error("cannot build an index over zero documents")]
    EmptyCorpus,
    #[error("file not found: {}", .0.display())]
    MissingFile(PathBuf),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("malformed file {}: {reason}", path.display())]
    Malformed { path: PathBuf, reason: String },
    #[error("index format version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
}

/// One line of a corpus or query file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextRecord {
    pub id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exclude_doc: Option<String>,
}

impl TextRecord {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            text: text.into(),
            exclude_doc: None,
        }
    }

    pub fn to_query(&self, config: &TokenizerConfig) -> Query {
        let mut q = Query::from_text(self.id.clone(), &self.text, config);
        q.exclude_doc = self.exclude_doc.clone();
        q
    }
}

/// Read a JSON-lines file of `{"id": .., "text": ..}` records. Blank lines are skipped.
pub fn read_records(path: impl AsRef<Path>) -> Result<Vec<TextRecord>, CorpusError> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|source| match source.kind() {
        io::ErrorKind::NotFound => CorpusError::MissingFile(path.to_path_buf()),
        _ => CorpusError::Io {
            path: path.to_path_buf(),
            source,
        },
    })?;
    let mut records = Vec::new();
    for (lineno, line) in io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record: TextRecord =
            serde_json::from_str(&line).map_err(|e| CorpusError::Malformed {
                path: path.to_path_buf(),
                reason: format!("line {}: {e}", lineno + 1),
            })?;
        records.push(record);
    }
    Ok(records)
}

pub fn write_records(records: &[TextRecord], path: impl AsRef<Path>) -> Result<(), CorpusError> {
    let path = path.as_ref();
    let io_err = |source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = io::BufWriter::new(fs::File::create(path).map_err(io_err)?);
    for r in records {
        let line = serde_json::to_string(r).expect("record serializes");
        writeln!(out, "{line}").map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

/// Index a list of records.
pub fn index_records(
    records: &[TextRecord],
    config: &TokenizerConfig,
) -> Result<InvertedIndex, CorpusError> {
    build_index(records.iter().map(|r| (r.id.clone(), &r.text)), config)
}
