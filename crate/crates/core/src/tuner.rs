//! Exhaustive grid search over a scorer family's parameters.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{self, Write};

use crate::corpus::{InvertedIndex, Query};
use crate::eval::{EvalError, PreparedRun, Qrels};
use crate::rankers::{RankError, ScorerFamily, ScorerSpec};

#[derive(Debug, thiserror::Error)]
pub enum TuneError {
    #[error("grid is empty")]
    EmptyGrid,
    #[error("parameter {0} has no values")]
    EmptyAxis(String),
    #[error("{family} has no parameter {name}")]
    UnknownParam { family: ScorerFamily, name: String },
    #[error("grid is for {grid}, asked to tune {requested}")]
    FamilyMismatch {
        grid: ScorerFamily,
        requested: ScorerFamily,
    },
    #[error("invalid grid point {point}: {source}")]
    InvalidPoint {
        point: String,
        #[source]
        source: RankError,
    },
    #[error("malformed grid: {0}")]
    Malformed(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Ordered value lists for every parameter of one family.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamGrid {
    family: ScorerFamily,
    /// One list per parameter, in [`ScorerFamily::param_names`] order.
    axes: Vec<Vec<f64>>,
}

fn tenths(lo: u32, hi: u32) -> Vec<f64> {
    (lo..=hi).map(|i| f64::from(i) / 10.0).collect()
}

fn halves(lo: u32, hi: u32) -> Vec<f64> {
    (lo..=hi).map(|i| f64::from(i) / 2.0).collect()
}

impl ParamGrid {
    /// Parameters absent from `values` are pinned to their default.
    pub fn new(
        family: ScorerFamily,
        values: BTreeMap<String, Vec<f64>>,
    ) -> Result<Self, TuneError> {
        let names = family.param_names();
        if let Some(unknown) = values.keys().find(|k| !names.contains(&k.as_str())) {
            return Err(TuneError::UnknownParam {
                family,
                name: unknown.clone(),
            });
        }
        let axes = names
            .iter()
            .zip(family.default_values())
            .map(|(name, default)| match values.get(*name) {
                Some(list) if list.is_empty() => Err(TuneError::EmptyAxis(name.to_string())),
                Some(list) => Ok(list.clone()),
                None => Ok(vec![default]),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let grid = Self { family, axes };
        grid.validate()?;
        Ok(grid)
    }

    /// Parse a JSON object mapping parameter name to a list of numbers.
    pub fn from_json(family: ScorerFamily, json: &str) -> Result<Self, TuneError> {
        let values: BTreeMap<String, Vec<f64>> =
            serde_json::from_str(json).map_err(|e| TuneError::Malformed(e.to_string()))?;
        Self::new(family, values)
    }

    /// The search space used when no grid is given.
    pub fn default_for(family: ScorerFamily) -> Self {
        let k: Vec<f64> = (2..=9).map(|i| f64::from(i) * 4.0 / 10.0).collect();
        let growth = vec![0.5, 1.0, 2.0];
        let alpha = vec![0.0, 0.25, 0.5, 0.75, 1.0];
        let mus = vec![50.0, 100.0, 500.0, 1000.0, 2000.0];
        let axes = match family {
            ScorerFamily::Bm25 => vec![k, tenths(0, 10)],
            ScorerFamily::Bm25LengthSim => vec![
                k,
                halves(3, 10),
                halves(3, 10),
                growth.clone(),
                growth,
                tenths(1, 9),
            ],
            ScorerFamily::Pivoted => vec![tenths(0, 10)],
            ScorerFamily::Dirichlet => vec![mus],
            ScorerFamily::Pl2 => vec![vec![0.5, 1.0, 2.0, 4.0, 8.0]],
            ScorerFamily::MpTf2ln => vec![tenths(0, 10), alpha],
            ScorerFamily::MdTf2ln => vec![mus, alpha],
        };
        Self { family, axes }
    }

    pub fn family(&self) -> ScorerFamily {
        self.family
    }

    pub fn axes(&self) -> impl Iterator<Item = (&'static str, &[f64])> {
        self.family
            .param_names()
            .iter()
            .copied()
            .zip(self.axes.iter().map(Vec::as_slice))
    }

    /// Number of points: the product of the axis lengths.
    pub fn len(&self) -> usize {
        self.axes.iter().map(Vec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every point in lexicographic order; the last parameter varies fastest.
    pub fn points(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.len()).map(move |mut n| {
            let mut point = vec![0.0; self.axes.len()];
            for (slot, axis) in point.iter_mut().zip(&self.axes).rev() {
                *slot = axis[n % axis.len()];
                n /= axis.len();
            }
            point
        })
    }

    /// Check every point; the first invalid one is reported.
    pub fn validate(&self) -> Result<(), TuneError> {
        if self.is_empty() {
            return Err(TuneError::EmptyGrid);
        }
        for point in self.points() {
            self.spec(&point)?;
        }
        Ok(())
    }

    fn spec(&self, point: &[f64]) -> Result<ScorerSpec, TuneError> {
        ScorerSpec::from_values(self.family, point).map_err(|source| TuneError::InvalidPoint {
            point: format_point(self.family, point),
            source,
        })
    }
}

fn format_point(family: ScorerFamily, point: &[f64]) -> String {
    let mut s = String::new();
    for (i, (name, v)) in family.param_names().iter().zip(point).enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{name}={v}");
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneEntry {
    /// Values in [`ScorerFamily::param_names`] order.
    pub values: Vec<f64>,
    pub mrr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneReport {
    pub family: ScorerFamily,
    /// Sorted by MRR descending, ties in grid order.
    pub entries: Vec<TuneEntry>,
}

impl TuneReport {
    pub const TIE_POLICY: &'static str = "earliest grid point";

    pub fn best(&self) -> &TuneEntry {
        &self.entries[0]
    }

    pub fn best_spec(&self) -> ScorerSpec {
        ScorerSpec::from_values(self.family, &self.best().values).expect("tuned point is valid")
    }

    pub fn best_params(&self) -> BTreeMap<String, f64> {
        self.best_spec().params()
    }

    /// TSV with a `params… mrr` header, one row per point, then a `#best` line.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let names = self.family.param_names();
        writeln!(out, "{}\tmrr", names.join("\t"))?;
        for e in &self.entries {
            for v in &e.values {
                write!(out, "{v}\t")?;
            }
            writeln!(out, "{}", e.mrr)?;
        }
        let best = self.best();
        writeln!(
            out,
            "#best\t{}\t{}\tmrr={}\tpoints={}\tties={}",
            self.family,
            format_point(self.family, &best.values),
            best.mrr,
            self.entries.len(),
            Self::TIE_POLICY
        )
    }
}

fn point_mrr(
    prepared: &PreparedRun<'_>,
    spec: &ScorerSpec,
    top_k: usize,
) -> Result<f64, EvalError> {
    // dispatch once per point so the scoring loop is monomorphized
    match spec {
        ScorerSpec::Bm25(s) => prepared.mrr(s, top_k),
        ScorerSpec::Bm25LengthSim(s) => prepared.mrr(s, top_k),
        ScorerSpec::Pivoted(s) => prepared.mrr(s, top_k),
        ScorerSpec::Dirichlet(s) => prepared.mrr(s, top_k),
        ScorerSpec::Pl2(s) => prepared.mrr(s, top_k),
        ScorerSpec::MpTf2ln(s) => prepared.mrr(s, top_k),
        ScorerSpec::MdTf2ln(s) => prepared.mrr(s, top_k),
    }
}

/// Evaluate training MRR at every grid point.
pub fn grid_search(
    index: &InvertedIndex,
    queries: &[Query],
    qrels: &Qrels,
    family: ScorerFamily,
    grid: &ParamGrid,
    top_k: usize,
) -> Result<TuneReport, TuneError> {
    if grid.family != family {
        return Err(TuneError::FamilyMismatch {
            grid: grid.family,
            requested: family,
        });
    }
    grid.validate()?;
    let prepared = PreparedRun::new(index, queries, qrels)?;
    let mut entries = grid
        .points()
        .map(|values| {
            let spec = grid.spec(&values)?;
            let mrr = point_mrr(&prepared, &spec, top_k)?;
            Ok(TuneEntry { values, mrr })
        })
        .collect::<Result<Vec<_>, TuneError>>()?;
    // stable: equal MRRs keep grid order
    entries.sort_by(|a, b| b.mrr.total_cmp(&a.mrr));
    Ok(TuneReport { family, entries })
}
