//! Ranking functions behind a common [`Scorer`] contract, and top-k ranking.
//!
//! Every scorer decomposes into a per-(query, document) factor, a sum of
//! per-matched-term contributions, and an optional per-document bias. Both
//! single-document scoring and term-at-a-time ranking add the contributions
//! in the same (query term) order, so they produce bit-identical scores.

mod baselines;
mod bm25;
mod spec;

use std::cmp::Ordering;
use std::io::{self, Write};

pub use baselines::{Dirichlet, MdTf2ln, MdTf2lnParams, MpTf2ln, MpTf2lnParams, Pivoted, Pl2};
pub use bm25::{
    Bm25, Bm25LengthSim, Bm25LengthSimParams, Bm25Params, LengthNormalizer, LengthSimNormalizer,
    NormalizedBm25, PivotedNormalizer,
};
pub use spec::{ScorerFamily, ScorerSpec};

use crate::corpus::{CorpusStats, DocId, InvertedIndex, PreparedQuery, Query, QueryTerm};
use crate::feature_curve::CurveError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RankError {
    #[error("unknown document id {0:?}")]
    UnknownDoc(String),
    #[error("document {0:?} is empty")]
    EmptyDocument(String),
    #[error("parameter {name} = {value} violates {requirement}")]
    InvalidParam {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("unknown scorer {0:?}")]
    UnknownScorer(String),
    #[error("scorer {family} has no parameter {name:?}")]
    UnknownParam { family: &'static str, name: String },
    #[error("top_k must be at least 1")]
    InvalidTopK,
}

pub(crate) fn require(
    name: &'static str,
    value: f64,
    ok: bool,
    requirement: &'static str,
) -> Result<(), RankError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(RankError::InvalidParam {
            name,
            value,
            requirement,
        })
    }
}

/// `ln((M + 1) / df(t))`
pub fn idf(stats: &CorpusStats, df: usize) -> f64 {
    ((stats.num_docs as f64 + 1.0) / df as f64).ln()
}

/// Collection statistics of one query term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TermStats {
    pub query_tf: u32,
    pub df: usize,
    pub collection_tf: u64,
}

impl From<&QueryTerm<'_>> for TermStats {
    fn from(t: &QueryTerm<'_>) -> Self {
        Self {
            query_tf: t.query_tf,
            df: t.df(),
            collection_tf: t.collection_tf,
        }
    }
}

/// What a scorer knows about the (query, document) pair being scored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DocContext {
    /// `|q|`
    pub query_len: u32,
    /// Query tokens whose term occurs in the collection.
    pub known_query_len: u32,
    pub doc_len: u32,
    /// The value of [`Scorer::doc_factor`] for this pair.
    pub factor: f64,
}

pub trait Scorer: Send + Sync {
    /// Quantity shared by every term of one (query, document) pair, such as a
    /// length normalizer.
    fn doc_factor(&self, stats: &CorpusStats, query_len: u32, doc_len: u32) -> f64;

    /// Contribution of one query term that occurs `tf >= 1` times in the document.
    fn term_score(&self, stats: &CorpusStats, term: &TermStats, tf: u32, doc: &DocContext) -> f64;

    /// Added once per scored document, after the term contributions.
    fn doc_bias(&self, _stats: &CorpusStats, _doc: &DocContext) -> f64 {
        0.0
    }

    fn check_doc(&self, _doc_id: &str, _doc_len: u32) -> Result<(), RankError> {
        Ok(())
    }
}

impl<S: Scorer + ?Sized> Scorer for &S {
    fn doc_factor(&self, stats: &CorpusStats, query_len: u32, doc_len: u32) -> f64 {
        (**self).doc_factor(stats, query_len, doc_len)
    }
    fn term_score(&self, stats: &CorpusStats, term: &TermStats, tf: u32, doc: &DocContext) -> f64 {
        (**self).term_score(stats, term, tf, doc)
    }
    fn doc_bias(&self, stats: &CorpusStats, doc: &DocContext) -> f64 {
        (**self).doc_bias(stats, doc)
    }
    fn check_doc(&self, doc_id: &str, doc_len: u32) -> Result<(), RankError> {
        (**self).check_doc(doc_id, doc_len)
    }
}

/// Score one document for `query`.
pub fn score<S: Scorer + ?Sized>(
    query: &Query,
    doc_id: &str,
    index: &InvertedIndex,
    scorer: &S,
) -> Result<f64, RankError> {
    let doc = index
        .doc(doc_id)
        .ok_or_else(|| RankError::UnknownDoc(doc_id.to_string()))?;
    score_prepared(&index.prepare(query), doc, index, scorer)
}

pub fn score_prepared<S: Scorer + ?Sized>(
    query: &PreparedQuery<'_>,
    doc: DocId,
    index: &InvertedIndex,
    scorer: &S,
) -> Result<f64, RankError> {
    let stats = index.stats();
    let doc_len = index.doc_length(doc);
    scorer.check_doc(index.doc_id(doc), doc_len)?;
    let ctx = DocContext {
        query_len: query.length,
        known_query_len: query.known_length,
        doc_len,
        factor: scorer.doc_factor(stats, query.length, doc_len),
    };
    let mut total = 0.0;
    for term in &query.terms {
        let tf = term.tf(doc);
        if tf > 0 {
            total += scorer.term_score(stats, &TermStats::from(term), tf, &ctx);
        }
    }
    Ok(total + scorer.doc_bias(stats, &ctx))
}

pub fn score_bm25(
    q: &Query,
    d: &str,
    index: &InvertedIndex,
    p: Bm25Params,
) -> Result<f64, RankError> {
    score(q, d, index, &Bm25::new(p)?)
}

pub fn score_bm25_lengthsim(
    q: &Query,
    d: &str,
    index: &InvertedIndex,
    p: Bm25LengthSimParams,
) -> Result<f64, RankError> {
    score(q, d, index, &Bm25LengthSim::new(p)?)
}

pub fn score_pivoted(q: &Query, d: &str, index: &InvertedIndex, s: f64) -> Result<f64, RankError> {
    score(q, d, index, &Pivoted::new(s)?)
}

pub fn score_dirichlet(
    q: &Query,
    d: &str,
    index: &InvertedIndex,
    mu: f64,
) -> Result<f64, RankError> {
    score(q, d, index, &Dirichlet::new(mu)?)
}

pub fn score_pl2(q: &Query, d: &str, index: &InvertedIndex, c: f64) -> Result<f64, RankError> {
    score(q, d, index, &Pl2::new(c)?)
}

pub fn score_mptf2ln(
    q: &Query,
    d: &str,
    index: &InvertedIndex,
    p: MpTf2lnParams,
) -> Result<f64, RankError> {
    score(q, d, index, &MpTf2ln::new(p)?)
}

pub fn score_mdtf2ln(
    q: &Query,
    d: &str,
    index: &InvertedIndex,
    p: MdTf2lnParams,
) -> Result<f64, RankError> {
    score(q, d, index, &MdTf2ln::new(p)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hit {
    pub doc_id: String,
    pub score: f64,
}

/// Ranked results for one query: descending score, ties by ascending doc id.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredList {
    pub query_id: String,
    pub hits: Vec<Hit>,
}

impl ScoredList {
    /// 1-based position of `doc_id`, if retrieved.
    pub fn position(&self, doc_id: &str) -> Option<usize> {
        self.hits
            .iter()
            .position(|h| h.doc_id == doc_id)
            .map(|i| i + 1)
    }

    /// Tab-separated `query_id doc_id rank score` lines.
    pub fn write_run<W: Write>(&self, out: &mut W) -> io::Result<()> {
        for (i, hit) in self.hits.iter().enumerate() {
            writeln!(
                out,
                "{}\t{}\t{}\t{:.6}",
                self.query_id,
                hit.doc_id,
                i + 1,
                hit.score
            )?;
        }
        Ok(())
    }
}

/// `(score desc, doc asc)`
pub(crate) fn result_order(a: (f64, DocId), b: (f64, DocId)) -> Ordering {
    b.0.total_cmp(&a.0).then(a.1.cmp(&b.1))
}

/// Reusable term-at-a-time score accumulator sized to one index.
pub(crate) struct Accumulator {
    scores: Vec<f64>,
    factors: Vec<f64>,
    seen: Vec<bool>,
    candidates: Vec<DocId>,
}

impl Accumulator {
    pub(crate) fn new(num_docs: usize) -> Self {
        Self {
            scores: vec![0.0; num_docs],
            factors: vec![0.0; num_docs],
            seen: vec![false; num_docs],
            candidates: Vec::new(),
        }
    }

    /// Score every document sharing a term with `query`. Returns the
    /// candidates (unordered, `exclude` removed) with final scores readable
    /// through [`Accumulator::score_of`].
    pub(crate) fn run<S: Scorer + ?Sized>(
        &mut self,
        query: &PreparedQuery<'_>,
        index: &InvertedIndex,
        scorer: &S,
    ) -> &[DocId] {
        for &d in &self.candidates {
            self.seen[d.index()] = false;
            self.scores[d.index()] = 0.0;
        }
        self.candidates.clear();

        let stats = index.stats();
        for term in &query.terms {
            let term_stats = TermStats::from(term);
            for posting in term.postings {
                let i = posting.doc.index();
                if !self.seen[i] {
                    self.seen[i] = true;
                    self.candidates.push(posting.doc);
                    self.factors[i] =
                        scorer.doc_factor(stats, query.length, index.doc_length(posting.doc));
                }
                let ctx = DocContext {
                    query_len: query.length,
                    known_query_len: query.known_length,
                    doc_len: index.doc_length(posting.doc),
                    factor: self.factors[i],
                };
                self.scores[i] += scorer.term_score(stats, &term_stats, posting.tf, &ctx);
            }
        }
        for &d in &self.candidates {
            let i = d.index();
            let ctx = DocContext {
                query_len: query.length,
                known_query_len: query.known_length,
                doc_len: index.doc_length(d),
                factor: self.factors[i],
            };
            self.scores[i] += scorer.doc_bias(stats, &ctx);
        }
        if let Some(ex) = query.exclude {
            if self.seen[ex.index()] {
                self.candidates.retain(|&d| d != ex);
                // keep `seen` in step with `candidates` for the next reset
                self.seen[ex.index()] = false;
                self.scores[ex.index()] = 0.0;
            }
        }
        &self.candidates
    }

    pub(crate) fn score_of(&self, doc: DocId) -> f64 {
        self.scores[doc.index()]
    }

    /// Whether `doc` is among the current (non-excluded) candidates.
    pub(crate) fn contains(&self, doc: DocId) -> bool {
        self.seen[doc.index()]
    }

    pub(crate) fn candidates(&self) -> &[DocId] {
        &self.candidates
    }
}

/// Rank all documents that share at least one term with `query`.
pub fn rank<S: Scorer + ?Sized>(
    query: &Query,
    index: &InvertedIndex,
    scorer: &S,
    top_k: usize,
) -> Result<ScoredList, RankError> {
    let prepared = index.prepare(query);
    let mut acc = Accumulator::new(index.num_docs());
    rank_prepared(&prepared, index, scorer, top_k, &mut acc)
}

pub(crate) fn rank_prepared<S: Scorer + ?Sized>(
    query: &PreparedQuery<'_>,
    index: &InvertedIndex,
    scorer: &S,
    top_k: usize,
    acc: &mut Accumulator,
) -> Result<ScoredList, RankError> {
    if top_k == 0 {
        return Err(RankError::InvalidTopK);
    }
    acc.run(query, index, scorer);
    let mut scored: Vec<(f64, DocId)> = acc
        .candidates()
        .iter()
        .map(|&d| (acc.score_of(d), d))
        .collect();
    scored.sort_unstable_by(|&a, &b| result_order(a, b));
    scored.truncate(top_k);
    Ok(ScoredList {
        query_id: query.id.to_string(),
        hits: scored
            .into_iter()
            .map(|(score, d)| Hit {
                doc_id: index.doc_id(d).to_string(),
                score,
            })
            .collect(),
    })
}
