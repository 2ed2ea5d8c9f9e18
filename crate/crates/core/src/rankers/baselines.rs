//! Baseline ranking functions: pivoted normalization, Dirichlet prior, PL2,
//! and the modified pivoted/Dirichlet variants.

use std::f64::consts::{LOG2_E, PI};

use serde::{Deserialize, Serialize};

use super::{idf, require, DocContext, RankError, Scorer, TermStats};
use crate::corpus::CorpusStats;

fn pivot(s: f64, stats: &CorpusStats, doc_len: u32) -> f64 {
    1.0 - s + s * (f64::from(doc_len) / stats.avgdl)
}

/// `1 + ln(1 + ln tf)`; callers guarantee `tf >= 1`.
fn double_log_tf(tf: f64) -> f64 {
    1.0 + (1.0 + tf.ln()).ln()
}

/// Pivoted length normalization with slope `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pivoted {
    s: f64,
}

impl Pivoted {
    pub fn new(s: f64) -> Result<Self, RankError> {
        require("s", s, (0.0..=1.0).contains(&s), "0 <= s <= 1")?;
        Ok(Self { s })
    }

    pub fn slope(&self) -> f64 {
        self.s
    }
}

impl Scorer for Pivoted {
    fn doc_factor(&self, stats: &CorpusStats, _query_len: u32, doc_len: u32) -> f64 {
        pivot(self.s, stats, doc_len)
    }

    fn term_score(&self, stats: &CorpusStats, term: &TermStats, tf: u32, doc: &DocContext) -> f64 {
        f64::from(term.query_tf) * (double_log_tf(f64::from(tf)) / doc.factor) * idf(stats, term.df)
    }
}

/// Query likelihood with Dirichlet prior smoothing (rank-equivalent form).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dirichlet {
    mu: f64,
}

impl Dirichlet {
    pub fn new(mu: f64) -> Result<Self, RankError> {
        require("mu", mu, mu > 0.0, "mu > 0")?;
        Ok(Self { mu })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}

fn dirichlet_ratio(mu: f64, stats: &CorpusStats, term: &TermStats, tf: u32) -> f64 {
    f64::from(tf) / (mu * stats.collection_prob(term.collection_tf))
}

fn dirichlet_length_penalty(mu: f64, doc: &DocContext) -> f64 {
    f64::from(doc.known_query_len) * (mu / (mu + f64::from(doc.doc_len))).ln()
}

impl Scorer for Dirichlet {
    fn doc_factor(&self, _stats: &CorpusStats, _query_len: u32, _doc_len: u32) -> f64 {
        0.0
    }

    fn term_score(&self, stats: &CorpusStats, term: &TermStats, tf: u32, _doc: &DocContext) -> f64 {
        f64::from(term.query_tf) * dirichlet_ratio(self.mu, stats, term, tf).ln_1p()
    }

    fn doc_bias(&self, _stats: &CorpusStats, doc: &DocContext) -> f64 {
        dirichlet_length_penalty(self.mu, doc)
    }
}

/// Divergence from randomness: Poisson model, Laplace after-effect, second
/// length normalization with strength `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pl2 {
    c: f64,
}

impl Pl2 {
    pub fn new(c: f64) -> Result<Self, RankError> {
        require("c", c, c > 0.0, "c > 0")?;
        Ok(Self { c })
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

impl Scorer for Pl2 {
    /// `log2(1 + c·avgdl/|d|)`, the per-document tf multiplier.
    fn doc_factor(&self, stats: &CorpusStats, _query_len: u32, doc_len: u32) -> f64 {
        (1.0 + self.c * stats.avgdl / f64::from(doc_len)).log2()
    }

    fn term_score(&self, stats: &CorpusStats, term: &TermStats, tf: u32, doc: &DocContext) -> f64 {
        let tfn = f64::from(tf) * doc.factor;
        if tfn.is_nan() || tfn <= 0.0 {
            return 0.0;
        }
        let lambda = term.collection_tf as f64 / stats.num_docs as f64;
        let gain =
            tfn * (tfn / lambda).log2() + (lambda - tfn) * LOG2_E + 0.5 * (2.0 * PI * tfn).log2();
        f64::from(term.query_tf) * gain / (tfn + 1.0)
    }

    fn check_doc(&self, doc_id: &str, doc_len: u32) -> Result<(), RankError> {
        if doc_len == 0 {
            Err(RankError::EmptyDocument(doc_id.to_string()))
        } else {
            Ok(())
        }
    }
}

/// Blends a tf component `a` with its doubly-logarithmic saturation `b`.
fn blend(alpha: f64, a: f64, b: f64) -> f64 {
    (1.0 - alpha) * a + alpha * b
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MpTf2lnParams {
    /// Pivot slope (length-normalization strength).
    pub s: f64,
    /// Weight of the length-normalized, doubly saturated tf component.
    pub alpha: f64,
}

impl Default for MpTf2lnParams {
    fn default() -> Self {
        Self { s: 0.2, alpha: 0.5 }
    }
}

/// Modified pivoted normalization.
///
/// Per term: `qtf · [(1-α)·(1 + ln(1 + ln tf))/N + α·ln(1 + ln(1 + tf/N))] · idf`
/// with `N = 1 - s + s·|d|/avgdl`. At `α = 0` this is [`Pivoted`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpTf2ln {
    params: MpTf2lnParams,
}

impl MpTf2ln {
    pub fn new(params: MpTf2lnParams) -> Result<Self, RankError> {
        require(
            "s",
            params.s,
            (0.0..=1.0).contains(&params.s),
            "0 <= s <= 1",
        )?;
        require(
            "alpha",
            params.alpha,
            (0.0..=1.0).contains(&params.alpha),
            "0 <= alpha <= 1",
        )?;
        Ok(Self { params })
    }

    pub fn params(&self) -> MpTf2lnParams {
        self.params
    }
}

impl Scorer for MpTf2ln {
    fn doc_factor(&self, stats: &CorpusStats, _query_len: u32, doc_len: u32) -> f64 {
        pivot(self.params.s, stats, doc_len)
    }

    fn term_score(&self, stats: &CorpusStats, term: &TermStats, tf: u32, doc: &DocContext) -> f64 {
        let tf = f64::from(tf);
        let pivoted = double_log_tf(tf) / doc.factor;
        let normalized = (1.0 + (tf / doc.factor).ln_1p()).ln();
        f64::from(term.query_tf)
            * blend(self.params.alpha, pivoted, normalized)
            * idf(stats, term.df)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MdTf2lnParams {
    /// Dirichlet mass (length-normalization strength).
    pub mu: f64,
    /// Weight of the doubly saturated tf component.
    pub alpha: f64,
}

impl Default for MdTf2lnParams {
    fn default() -> Self {
        Self {
            mu: 1000.0,
            alpha: 0.5,
        }
    }
}

/// Modified Dirichlet prior.
///
/// Per term: `qtf · [(1-α)·ln(1 + r) + α·ln(1 + ln(1 + r))]` with
/// `r = tf/(μ·p(t|C))`, plus the usual `|q|·ln(μ/(μ+|d|))`. At `α = 0`
/// this is [`Dirichlet`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MdTf2ln {
    params: MdTf2lnParams,
}

impl MdTf2ln {
    pub fn new(params: MdTf2lnParams) -> Result<Self, RankError> {
        require("mu", params.mu, params.mu > 0.0, "mu > 0")?;
        require(
            "alpha",
            params.alpha,
            (0.0..=1.0).contains(&params.alpha),
            "0 <= alpha <= 1",
        )?;
        Ok(Self { params })
    }

    pub fn params(&self) -> MdTf2lnParams {
        self.params
    }
}

impl Scorer for MdTf2ln {
    fn doc_factor(&self, _stats: &CorpusStats, _query_len: u32, _doc_len: u32) -> f64 {
        0.0
    }

    fn term_score(&self, stats: &CorpusStats, term: &TermStats, tf: u32, _doc: &DocContext) -> f64 {
        let smoothed = dirichlet_ratio(self.params.mu, stats, term, tf).ln_1p();
        let saturated = smoothed.ln_1p();
        f64::from(term.query_tf) * blend(self.params.alpha, smoothed, saturated)
    }

    fn doc_bias(&self, _stats: &CorpusStats, doc: &DocContext) -> f64 {
        dirichlet_length_penalty(self.params.mu, doc)
    }
}
