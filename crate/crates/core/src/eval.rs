//! Relevance judgments, run execution and mean reciprocal rank.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::corpus::{DocId, InvertedIndex, PreparedQuery, Query};
use crate::rankers::{rank_prepared, result_order, Accumulator, RankError, ScoredList, Scorer};

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("query {0:?} has no relevance judgments")]
    MissingQuery(String),
    #[error("run contains no queries")]
    EmptyRun,
    #[error(transparent)]
    Rank(#[from] RankError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("malformed qrels {}: line {line}: {reason}", path.display())]
    Malformed {
        path: PathBuf,
        line: usize,
        reason: String,
    },
}

/// Query id → non-empty set of relevant document ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Qrels {
    judgments: BTreeMap<String, BTreeSet<String>>,
}

impl Qrels {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, query_id: impl Into<String>, doc_id: impl Into<String>) {
        self.judgments
            .entry(query_id.into())
            .or_default()
            .insert(doc_id.into());
    }

    pub fn relevant(&self, query_id: &str) -> Option<&BTreeSet<String>> {
        self.judgments.get(query_id)
    }

    pub fn len(&self) -> usize {
        self.judgments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.judgments.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &BTreeSet<String>)> + '_ {
        self.judgments.iter().map(|(q, d)| (q.as_str(), d))
    }

    /// Parse `query_id<TAB>doc_id<TAB>relevance` lines; relevance-0 lines are skipped.
    pub fn parse(text: &str, path: &Path) -> Result<Self, EvalError> {
        let mut qrels = Self::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let malformed = |reason: &str| EvalError::Malformed {
                path: path.to_path_buf(),
                line: i + 1,
                reason: reason.to_string(),
            };
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            let [query, doc, rel] = fields[..] else {
                return Err(malformed("expected 3 tab-separated fields"));
            };
            if query.is_empty() || doc.is_empty() {
                return Err(malformed("empty id"));
            }
            match rel {
                "1" => qrels.insert(query, doc),
                "0" => {}
                _ => return Err(malformed("relevance must be 0 or 1")),
            }
        }
        Ok(qrels)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, EvalError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| EvalError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path)
    }

    pub fn write_to<W: Write>(&self, out: &mut W) -> io::Result<()> {
        for (q, docs) in &self.judgments {
            for d in docs {
                writeln!(out, "{q}\t{d}\t1")?;
            }
        }
        Ok(())
    }
}

/// Ranked lists for a set of queries.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunResult {
    pub lists: Vec<ScoredList>,
}

impl RunResult {
    /// Position of the first relevant document in each list; 0 if none was retrieved.
    pub fn first_relevant_ranks(&self, qrels: &Qrels) -> Result<Vec<usize>, EvalError> {
        self.lists
            .iter()
            .map(|list| {
                let relevant = qrels
                    .relevant(&list.query_id)
                    .ok_or_else(|| EvalError::MissingQuery(list.query_id.clone()))?;
                Ok(list
                    .hits
                    .iter()
                    .position(|h| relevant.contains(&h.doc_id))
                    .map_or(0, |i| i + 1))
            })
            .collect()
    }

    pub fn write_run<W: Write>(&self, out: &mut W) -> io::Result<()> {
        for list in &self.lists {
            list.write_run(out)?;
        }
        Ok(())
    }
}

/// Mean of `1/rank` over all queries, with 0 standing for "not retrieved".
///
/// The reciprocals are summed in a canonical order (largest rank first), so
/// the result does not depend on query order.
pub fn mean_reciprocal_rank(ranks: &[usize]) -> Result<f64, EvalError> {
    if ranks.is_empty() {
        return Err(EvalError::EmptyRun);
    }
    let mut found: Vec<usize> = ranks.iter().copied().filter(|&r| r > 0).collect();
    found.sort_unstable_by(|a, b| b.cmp(a));
    let total: f64 = found.iter().map(|&r| 1.0 / r as f64).sum();
    Ok(total / ranks.len() as f64)
}

pub fn mrr(run: &RunResult, qrels: &Qrels) -> Result<f64, EvalError> {
    mean_reciprocal_rank(&run.first_relevant_ranks(qrels)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub run: RunResult,
    pub mrr: f64,
}

/// Rank every query and compute MRR.
///
/// A query without an explicit `exclude_doc` whose id names an indexed
/// document never retrieves that document (a profile does not match itself).
pub fn evaluate<S: Scorer + ?Sized>(
    index: &InvertedIndex,
    queries: &[Query],
    qrels: &Qrels,
    scorer: &S,
    top_k: usize,
) -> Result<Evaluation, EvalError> {
    let prepared = PreparedRun::new(index, queries, qrels)?;
    let run = prepared.run(scorer, top_k)?;
    let mrr = mrr(&run, qrels)?;
    Ok(Evaluation { run, mrr })
}

/// Queries bound to an index and their judgments, reusable across scorers.
pub struct PreparedRun<'a> {
    index: &'a InvertedIndex,
    queries: Vec<PreparedQuery<'a>>,
    relevant: Vec<Vec<DocId>>,
}

impl<'a> PreparedRun<'a> {
    pub fn new(
        index: &'a InvertedIndex,
        queries: &'a [Query],
        qrels: &Qrels,
    ) -> Result<Self, EvalError> {
        let mut prepared = Vec::with_capacity(queries.len());
        let mut relevant = Vec::with_capacity(queries.len());
        for q in queries {
            let judged = qrels
                .relevant(&q.id)
                .ok_or_else(|| EvalError::MissingQuery(q.id.clone()))?;
            let mut p = index.prepare(q);
            if q.exclude_doc.is_none() {
                p.exclude = index.doc(&q.id);
            }
            prepared.push(p);
            relevant.push(judged.iter().filter_map(|d| index.doc(d)).collect());
        }
        if prepared.is_empty() {
            return Err(EvalError::EmptyRun);
        }
        Ok(Self {
            index,
            queries: prepared,
            relevant,
        })
    }

    pub fn len(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }

    pub fn run<S: Scorer + ?Sized>(
        &self,
        scorer: &S,
        top_k: usize,
    ) -> Result<RunResult, EvalError> {
        let mut acc = Accumulator::new(self.index.num_docs());
        let lists = self
            .queries
            .iter()
            .map(|q| rank_prepared(q, self.index, scorer, top_k, &mut acc))
            .collect::<Result<_, _>>()?;
        Ok(RunResult { lists })
    }

    /// First-relevant rank per query without materializing ranked lists.
    /// Agrees exactly with [`RunResult::first_relevant_ranks`] of [`Self::run`].
    pub fn first_relevant_ranks<S: Scorer + ?Sized>(
        &self,
        scorer: &S,
        top_k: usize,
    ) -> Result<Vec<usize>, EvalError> {
        if top_k == 0 {
            return Err(RankError::InvalidTopK.into());
        }
        let mut acc = Accumulator::new(self.index.num_docs());
        Ok(self
            .queries
            .iter()
            .zip(&self.relevant)
            .map(|(q, relevant)| {
                acc.run(q, self.index, scorer);
                let best = relevant
                    .iter()
                    .filter(|&&d| acc.contains(d))
                    .map(|&d| (acc.score_of(d), d))
                    .min_by(|&a, &b| result_order(a, b));
                let Some(best) = best else { return 0 };
                let ahead = acc
                    .candidates()
                    .iter()
                    .filter(|&&d| result_order((acc.score_of(d), d), best).is_lt())
                    .count();
                if ahead < top_k {
                    ahead + 1
                } else {
                    0
                }
            })
            .collect())
    }

    pub fn mrr<S: Scorer + ?Sized>(&self, scorer: &S, top_k: usize) -> Result<f64, EvalError> {
        mean_reciprocal_rank(&self.first_relevant_ranks(scorer, top_k)?)
    }
}
