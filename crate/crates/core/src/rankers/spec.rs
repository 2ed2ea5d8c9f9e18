use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::{
    Bm25, Bm25LengthSim, Bm25LengthSimParams, Bm25Params, Dirichlet, DocContext, MdTf2ln,
    MdTf2lnParams, MpTf2ln, MpTf2lnParams, Pivoted, Pl2, RankError, Scorer, TermStats,
};
use crate::corpus::CorpusStats;
use crate::feature_curve::LengthSimParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScorerFamily {
    Bm25,
    Bm25LengthSim,
    Pivoted,
    Dirichlet,
    Pl2,
    MpTf2ln,
    MdTf2ln,
}

impl ScorerFamily {
    pub const ALL: [ScorerFamily; 7] = [
        ScorerFamily::Bm25,
        ScorerFamily::Bm25LengthSim,
        ScorerFamily::Pivoted,
        ScorerFamily::Dirichlet,
        ScorerFamily::Pl2,
        ScorerFamily::MpTf2ln,
        ScorerFamily::MdTf2ln,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScorerFamily::Bm25 => "bm25",
            ScorerFamily::Bm25LengthSim => "bm25-lengthsim",
            ScorerFamily::Pivoted => "pivoted",
            ScorerFamily::Dirichlet => "dirichlet",
            ScorerFamily::Pl2 => "pl2",
            ScorerFamily::MpTf2ln => "mptf2ln",
            ScorerFamily::MdTf2ln => "mdtf2ln",
        }
    }

    /// Parameter names in canonical (grid enumeration) order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            ScorerFamily::Bm25 => &["k", "b"],
            ScorerFamily::Bm25LengthSim => &["k", "b1", "b2", "B1", "B2", "c"],
            ScorerFamily::Pivoted => &["s"],
            ScorerFamily::Dirichlet => &["mu"],
            ScorerFamily::Pl2 => &["c"],
            ScorerFamily::MpTf2ln => &["s", "alpha"],
            ScorerFamily::MdTf2ln => &["mu", "alpha"],
        }
    }

    pub fn default_values(self) -> Vec<f64> {
        match self {
            ScorerFamily::Bm25 => {
                let p = Bm25Params::default();
                vec![p.k, p.b]
            }
            ScorerFamily::Bm25LengthSim => {
                let p = Bm25LengthSimParams::default();
                let h = p.lengthsim;
                vec![
                    p.k,
                    h.left_bound,
                    h.right_bound,
                    h.left_growth,
                    h.right_growth,
                    h.curvature,
                ]
            }
            ScorerFamily::Pivoted => vec![0.2],
            ScorerFamily::Dirichlet => vec![1000.0],
            ScorerFamily::Pl2 => vec![1.0],
            ScorerFamily::MpTf2ln => {
                let p = MpTf2lnParams::default();
                vec![p.s, p.alpha]
            }
            ScorerFamily::MdTf2ln => {
                let p = MdTf2lnParams::default();
                vec![p.mu, p.alpha]
            }
        }
    }
}

impl fmt::Display for ScorerFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScorerFamily {
    type Err = RankError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ScorerFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| RankError::UnknownScorer(s.to_string()))
    }
}

/// A validated scorer of any family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScorerSpec {
    Bm25(Bm25),
    Bm25LengthSim(Bm25LengthSim),
    Pivoted(Pivoted),
    Dirichlet(Dirichlet),
    Pl2(Pl2),
    MpTf2ln(MpTf2ln),
    MdTf2ln(MdTf2ln),
}

impl ScorerSpec {
    pub fn default_for(family: ScorerFamily) -> Self {
        Self::from_values(family, &family.default_values()).expect("defaults are valid")
    }

    /// Build from values listed in [`ScorerFamily::param_names`] order.
    pub fn from_values(family: ScorerFamily, v: &[f64]) -> Result<Self, RankError> {
        assert_eq!(
            v.len(),
            family.param_names().len(),
            "parameter count for {family}"
        );
        Ok(match family {
            ScorerFamily::Bm25 => ScorerSpec::Bm25(Bm25::new(Bm25Params { k: v[0], b: v[1] })?),
            ScorerFamily::Bm25LengthSim => {
                ScorerSpec::Bm25LengthSim(Bm25LengthSim::new(Bm25LengthSimParams {
                    k: v[0],
                    lengthsim: LengthSimParams {
                        left_bound: v[1],
                        right_bound: v[2],
                        left_growth: v[3],
                        right_growth: v[4],
                        curvature: v[5],
                    },
                })?)
            }
            ScorerFamily::Pivoted => ScorerSpec::Pivoted(Pivoted::new(v[0])?),
            ScorerFamily::Dirichlet => ScorerSpec::Dirichlet(Dirichlet::new(v[0])?),
            ScorerFamily::Pl2 => ScorerSpec::Pl2(Pl2::new(v[0])?),
            ScorerFamily::MpTf2ln => ScorerSpec::MpTf2ln(MpTf2ln::new(MpTf2lnParams {
                s: v[0],
                alpha: v[1],
            })?),
            ScorerFamily::MdTf2ln => ScorerSpec::MdTf2ln(MdTf2ln::new(MdTf2lnParams {
                mu: v[0],
                alpha: v[1],
            })?),
        })
    }

    /// Build from named values; parameters not mentioned keep their defaults.
    pub fn from_params(
        family: ScorerFamily,
        params: &BTreeMap<String, f64>,
    ) -> Result<Self, RankError> {
        let names = family.param_names();
        if let Some(unknown) = params.keys().find(|k| !names.contains(&k.as_str())) {
            return Err(RankError::UnknownParam {
                family: family.name(),
                name: unknown.clone(),
            });
        }
        let mut values = family.default_values();
        for (slot, name) in values.iter_mut().zip(names) {
            if let Some(&v) = params.get(*name) {
                *slot = v;
            }
        }
        Self::from_values(family, &values)
    }

    pub fn family(&self) -> ScorerFamily {
        match self {
            ScorerSpec::Bm25(_) => ScorerFamily::Bm25,
            ScorerSpec::Bm25LengthSim(_) => ScorerFamily::Bm25LengthSim,
            ScorerSpec::Pivoted(_) => ScorerFamily::Pivoted,
            ScorerSpec::Dirichlet(_) => ScorerFamily::Dirichlet,
            ScorerSpec::Pl2(_) => ScorerFamily::Pl2,
            ScorerSpec::MpTf2ln(_) => ScorerFamily::MpTf2ln,
            ScorerSpec::MdTf2ln(_) => ScorerFamily::MdTf2ln,
        }
    }

    /// Values in [`ScorerFamily::param_names`] order.
    pub fn values(&self) -> Vec<f64> {
        match self {
            ScorerSpec::Bm25(s) => vec![s.params().k, s.params().b],
            ScorerSpec::Bm25LengthSim(s) => {
                let p = s.params();
                let h = p.lengthsim;
                vec![
                    p.k,
                    h.left_bound,
                    h.right_bound,
                    h.left_growth,
                    h.right_growth,
                    h.curvature,
                ]
            }
            ScorerSpec::Pivoted(s) => vec![s.slope()],
            ScorerSpec::Dirichlet(s) => vec![s.mu()],
            ScorerSpec::Pl2(s) => vec![s.c()],
            ScorerSpec::MpTf2ln(s) => vec![s.params().s, s.params().alpha],
            ScorerSpec::MdTf2ln(s) => vec![s.params().mu, s.params().alpha],
        }
    }

    pub fn params(&self) -> BTreeMap<String, f64> {
        self.family()
            .param_names()
            .iter()
            .map(|n| n.to_string())
            .zip(self.values())
            .collect()
    }

    fn as_scorer(&self) -> &dyn Scorer {
        match self {
            ScorerSpec::Bm25(s) => s,
            ScorerSpec::Bm25LengthSim(s) => s,
            ScorerSpec::Pivoted(s) => s,
            ScorerSpec::Dirichlet(s) => s,
            ScorerSpec::Pl2(s) => s,
            ScorerSpec::MpTf2ln(s) => s,
            ScorerSpec::MdTf2ln(s) => s,
        }
    }
}

impl Scorer for ScorerSpec {
    fn doc_factor(&self, stats: &CorpusStats, query_len: u32, doc_len: u32) -> f64 {
        self.as_scorer().doc_factor(stats, query_len, doc_len)
    }

    fn term_score(&self, stats: &CorpusStats, term: &TermStats, tf: u32, doc: &DocContext) -> f64 {
        self.as_scorer().term_score(stats, term, tf, doc)
    }

    fn doc_bias(&self, stats: &CorpusStats, doc: &DocContext) -> f64 {
        self.as_scorer().doc_bias(stats, doc)
    }

    fn check_doc(&self, doc_id: &str, doc_len: u32) -> Result<(), RankError> {
        self.as_scorer().check_doc(doc_id, doc_len)
    }
}
