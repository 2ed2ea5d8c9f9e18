use serde::{Deserialize, Serialize};

use super::{idf, require, DocContext, RankError, Scorer, TermStats};
use crate::corpus::CorpusStats;
use crate::feature_curve::LengthSimParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bm25Params {
    pub k: f64,
    pub b: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Self { k: 1.2, b: 0.75 }
    }
}

impl Bm25Params {
    pub fn validate(&self) -> Result<(), RankError> {
        require("k", self.k, self.k > 0.0, "k > 0")?;
        require("b", self.b, (0.0..=1.0).contains(&self.b), "0 <= b <= 1")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bm25LengthSimParams {
    pub k: f64,
    #[serde(flatten)]
    pub lengthsim: LengthSimParams,
}

impl Default for Bm25LengthSimParams {
    fn default() -> Self {
        Self {
            k: 2.8,
            lengthsim: LengthSimParams::default(),
        }
    }
}

impl Bm25LengthSimParams {
    pub fn validate(&self) -> Result<(), RankError> {
        require("k", self.k, self.k > 0.0, "k > 0")?;
        Ok(self.lengthsim.validate()?)
    }
}

/// Okapi BM25 with pivoted length normalization `1 - b + b·|d|/avgdl`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bm25 {
    params: Bm25Params,
}

impl Bm25 {
    pub fn new(params: Bm25Params) -> Result<Self, RankError> {
        params.validate()?;
        Ok(Self { params })
    }

    pub fn params(&self) -> Bm25Params {
        self.params
    }
}

// Shared by every BM25 variant so a plugged normalizer reproduces the stock
// scorers bit for bit.
fn bm25_term(k: f64, stats: &CorpusStats, term: &TermStats, tf: u32, factor: f64) -> f64 {
    let tf = f64::from(tf);
    f64::from(term.query_tf) * idf(stats, term.df) * ((k + 1.0) * tf) / (tf + k * factor)
}

impl Scorer for Bm25 {
    fn doc_factor(&self, stats: &CorpusStats, _query_len: u32, doc_len: u32) -> f64 {
        let b = self.params.b;
        1.0 - b + b * (f64::from(doc_len) / stats.avgdl)
    }

    fn term_score(&self, stats: &CorpusStats, term: &TermStats, tf: u32, doc: &DocContext) -> f64 {
        bm25_term(self.params.k, stats, term, tf, doc.factor)
    }
}

/// BM25 with the length normalizer replaced by `h(|d|, |q|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bm25LengthSim {
    params: Bm25LengthSimParams,
}

impl Bm25LengthSim {
    pub fn new(params: Bm25LengthSimParams) -> Result<Self, RankError> {
        params.validate()?;
        Ok(Self { params })
    }

    pub fn params(&self) -> Bm25LengthSimParams {
        self.params
    }
}

impl Scorer for Bm25LengthSim {
    fn doc_factor(&self, _stats: &CorpusStats, query_len: u32, doc_len: u32) -> f64 {
        self.params
            .lengthsim
            .value(f64::from(doc_len), f64::from(query_len))
    }

    fn term_score(&self, stats: &CorpusStats, term: &TermStats, tf: u32, doc: &DocContext) -> f64 {
        bm25_term(self.params.k, stats, term, tf, doc.factor)
    }
}

/// The length-dependent part of a BM25 denominator.
pub trait LengthNormalizer: Send + Sync {
    fn normalize(&self, stats: &CorpusStats, query_len: u32, doc_len: u32) -> f64;
}

/// `1 - b + b·|d|/avgdl`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PivotedNormalizer {
    pub b: f64,
}

impl LengthNormalizer for PivotedNormalizer {
    fn normalize(&self, stats: &CorpusStats, _query_len: u32, doc_len: u32) -> f64 {
        1.0 - self.b + self.b * (f64::from(doc_len) / stats.avgdl)
    }
}

/// `h(|d|, |q|)`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthSimNormalizer {
    pub params: LengthSimParams,
}

impl LengthNormalizer for LengthSimNormalizer {
    fn normalize(&self, _stats: &CorpusStats, query_len: u32, doc_len: u32) -> f64 {
        self.params.value(f64::from(doc_len), f64::from(query_len))
    }
}

/// BM25 term weighting over an arbitrary length normalizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedBm25<N> {
    pub k: f64,
    pub normalizer: N,
}

impl<N: LengthNormalizer> Scorer for NormalizedBm25<N> {
    fn doc_factor(&self, stats: &CorpusStats, query_len: u32, doc_len: u32) -> f64 {
        self.normalizer.normalize(stats, query_len, doc_len)
    }

    fn term_score(&self, stats: &CorpusStats, term: &TermStats, tf: u32, doc: &DocContext) -> f64 {
        bm25_term(self.k, stats, term, tf, doc.factor)
    }
}
