//! On-disk index format.
//!
//! One header line `lengthsim-index <version>` followed by a JSON body
//! holding every index field. Floats are written in shortest round-trip form
//! and parsed exactly, so a loaded index is bit-identical to the saved one.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use super::index::InvertedIndex;
use super::CorpusError;

pub const INDEX_MAGIC: &str = "lengthsim-index";
pub const INDEX_VERSION: u32 = 1;

pub fn save_index(index: &InvertedIndex, path: impl AsRef<Path>) -> Result<(), CorpusError> {
    let path = path.as_ref();
    let io_err = |source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    };
    let body = serde_json::to_string(index).expect("index serializes");
    let mut file = io::BufWriter::new(fs::File::create(path).map_err(io_err)?);
    writeln!(file, "{INDEX_MAGIC} {INDEX_VERSION}").map_err(io_err)?;
    file.write_all(body.as_bytes()).map_err(io_err)?;
    file.write_all(b"\n").map_err(io_err)?;
    file.flush().map_err(io_err)
}

pub fn load_index(path: impl AsRef<Path>) -> Result<InvertedIndex, CorpusError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| match source.kind() {
        io::ErrorKind::NotFound => CorpusError::MissingFile(path.to_path_buf()),
        _ => CorpusError::Io {
            path: path.to_path_buf(),
            source,
        },
    })?;
    let malformed = |reason: String| CorpusError::Malformed {
        path: path.to_path_buf(),
        reason,
    };
    let text = std::str::from_utf8(&bytes).map_err(|e| malformed(e.to_string()))?;
    let (header, body) = text
        .split_once('\n')
        .ok_or_else(|| malformed("missing header line".into()))?;
    let version = header
        .strip_prefix(INDEX_MAGIC)
        .and_then(|rest| rest.trim().parse::<u32>().ok())
        .ok_or_else(|| malformed(format!("bad header {header:?}")))?;
    if version != INDEX_VERSION {
        return Err(CorpusError::VersionMismatch {
            found: version,
            expected: INDEX_VERSION,
        });
    }
    let mut index: InvertedIndex =
        serde_json::from_str(body).map_err(|e| malformed(e.to_string()))?;
    validate(&index).map_err(malformed)?;
    index.rebuild_lookup();
    Ok(index)
}

fn validate(index: &InvertedIndex) -> Result<(), String> {
    let m = index.doc_ids.len();
    if m == 0 {
        return Err("no documents".into());
    }
    if index.doc_lengths.len() != m || index.stats.num_docs != m {
        return Err("document count mismatch".into());
    }
    if index.doc_ids.windows(2).any(|w| w[0] >= w[1]) {
        return Err("document ids not strictly sorted".into());
    }
    let total: u64 = index.doc_lengths.iter().map(|&l| u64::from(l)).sum();
    if total != index.stats.total_tokens {
        return Err("total_tokens does not match document lengths".into());
    }
    if index.stats.avgdl.to_bits() != (total as f64 / m as f64).to_bits() {
        return Err("avgdl does not match document lengths".into());
    }
    if index.stats.collection_tf.len() != index.postings.len() {
        return Err("collection_tf and postings disagree on vocabulary".into());
    }
    for (term, list) in &index.postings {
        if list.is_empty() || list.len() > m {
            return Err(format!("bad posting list length for {term:?}"));
        }
        if list.windows(2).any(|w| w[0].doc >= w[1].doc) {
            return Err(format!("postings for {term:?} not sorted"));
        }
        if list.iter().any(|p| p.tf == 0 || p.doc.index() >= m) {
            return Err(format!("bad posting for {term:?}"));
        }
        let cf: u64 = list.iter().map(|p| u64::from(p.tf)).sum();
        if index.stats.collection_tf.get(term) != Some(&cf) {
            return Err(format!("collection_tf mismatch for {term:?}"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_index, TokenizerConfig};

    fn sample() -> InvertedIndex {
        build_index(
            [
                ("d1", "cat cat dog"),
                ("d2", "dog bird"),
                ("d3", "bird bird bird"),
            ],
            &TokenizerConfig::plain(),
        )
        .unwrap()
    }

    #[test]
    fn round_trip_is_identity() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("idx");
        let idx = sample();
        save_index(&idx, &path).unwrap();
        let back = load_index(&path).unwrap();
        assert_eq!(back, idx);
        assert_eq!(back.stats().avgdl.to_bits(), idx.stats().avgdl.to_bits());
        assert_eq!(back.doc("d3"), idx.doc("d3"));
    }

    #[test]
    fn missing_file() {
        let dir = tempfile::tempdir().unwrap();
        let err = load_index(dir.path().join("nope")).unwrap_err();
        assert!(matches!(err, CorpusError::MissingFile(_)), "{err}");
    }

    #[test]
    fn truncated_file_is_malformed() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("idx");
        save_index(&sample(), &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() / 2]).unwrap();
        let err = load_index(&path).unwrap_err();
        assert!(matches!(err, CorpusError::Malformed { .. }), "{err}");
    }

    #[test]
    fn version_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("idx");
        save_index(&sample(), &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let bumped = text.replacen(
            &format!("{INDEX_MAGIC} {INDEX_VERSION}"),
            &format!("{INDEX_MAGIC} 99"),
            1,
        );
        std::fs::write(&path, bumped).unwrap();
        let err = load_index(&path).unwrap_err();
        assert!(
            matches!(
                err,
                CorpusError::VersionMismatch {
                    found: 99,
                    expected: INDEX_VERSION
                }
            ),
            "{err}"
        );
    }

    #[test]
    fn inconsistent_body_is_malformed() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("idx");
        save_index(&sample(), &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        std::fs::write(
            &path,
            text.replace("\"total_tokens\":8", "\"total_tokens\":9"),
        )
        .unwrap();
        assert!(matches!(
            load_index(&path),
            Err(CorpusError::Malformed { .. })
        ));
    }
}
