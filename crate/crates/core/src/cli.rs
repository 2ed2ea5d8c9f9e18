//! Command-line front end.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::corpus::{
    index_records, load_index, read_records, save_index, CorpusError, InvertedIndex, Query,
    TokenizerConfig,
};
use crate::eval::{evaluate, EvalError, Qrels};
use crate::feature_curve::{sample_curve, write_curve_csv, CurveError, LengthSimParams};
use crate::rankers::{rank, RankError, ScorerFamily, ScorerSpec};
use crate::synth::{generate_corpus, SynthConfig, SynthError};
use crate::tuner::{grid_search, ParamGrid, TuneError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_PARAMS: i32 = 4;
pub const EXIT_DATA: i32 = 5;

const EXIT_CODES_HELP: &str = "\
Exit codes:
  0  success
  2  usage error (unknown flag or subcommand, unknown scorer name)
  3  I/O error (missing or unreadable input, unwritable output)
  4  invalid parameters (out-of-bounds value, unknown parameter, bad grid)
  5  malformed data (corrupt index, bad JSONL or qrels, unjudged query)";

#[derive(Debug, Parser)]
#[command(name = "lengthsim", version, about = "Ranked retrieval with a length-similarity BM25 variant", after_help = EXIT_CODES_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Index a JSONL corpus and save it.
    Index {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rank documents for a single query; run lines go to stdout.
    Search {
        #[command(flatten)]
        source: IndexSource,
        #[arg(long)]
        query: String,
        #[arg(long, default_value = "query")]
        query_id: String,
        #[command(flatten)]
        scorer: ScorerArgs,
        #[arg(long, default_value_t = 10)]
        top_k: usize,
    },
    /// Rank a query file, print `MRR<TAB>value`, optionally save the run.
    Eval {
        #[command(flatten)]
        source: IndexSource,
        #[arg(long)]
        queries: PathBuf,
        #[arg(long)]
        qrels: PathBuf,
        #[command(flatten)]
        scorer: ScorerArgs,
        #[arg(long, default_value_t = 1000)]
        top_k: usize,
        /// Run file to write.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grid-search a scorer family on training queries.
    Tune {
        #[command(flatten)]
        source: IndexSource,
        #[arg(long)]
        queries: PathBuf,
        #[arg(long)]
        qrels: PathBuf,
        #[arg(long, default_value = "bm25-lengthsim")]
        scorer: ScorerFamily,
        /// JSON object of parameter name to value list, inline or a file path.
        /// Defaults to the built-in grid for the family.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value_t = 1000)]
        top_k: usize,
        /// Report file (TSV).
        #[arg(long)]
        out: PathBuf,
        /// Write the best point as a params JSON usable with --params.
        #[arg(long)]
        best_out: Option<PathBuf>,
    },
    /// Sample h(x, y) as CSV.
    Curve {
        /// Length-similarity parameters (b1, b2, B1, B2, c) as JSON, inline or a path.
        #[arg(long)]
        params: Option<String>,
        #[arg(long)]
        y: f64,
        #[arg(long, default_value_t = 0.0)]
        x_min: f64,
        #[arg(long)]
        x_max: Option<f64>,
        /// Number of samples. Defaults to one per integer length.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a synthetic paired corpus.
    Synth {
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// JSON file overriding generator settings.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct IndexSource {
    /// Saved index.
    #[arg(long)]
    index: Option<PathBuf>,
    /// JSONL corpus, indexed on the fly with the default tokenizer.
    #[arg(long)]
    corpus: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScorerArgs {
    /// One of bm25, bm25-lengthsim, pivoted, dirichlet, pl2, mptf2ln, mdtf2ln.
    #[arg(long, default_value = "bm25-lengthsim")]
    scorer: ScorerFamily,
    /// Parameter values as a JSON object, inline or a file path.
    /// Missing parameters keep their defaults.
    #[arg(long)]
    params: Option<String>,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        let code = match e {
            CorpusError::MissingFile(_) | CorpusError::Io { .. } => EXIT_IO,
            _ => EXIT_DATA,
        };
        Self::new(code, e.to_string())
    }
}

impl From<RankError> for CliError {
    fn from(e: RankError) -> Self {
        let code = match e {
            RankError::UnknownScorer(_) => EXIT_USAGE,
            RankError::UnknownDoc(_) | RankError::EmptyDocument(_) => EXIT_DATA,
            _ => EXIT_PARAMS,
        };
        Self::new(code, e.to_string())
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Rank(r) => r.into(),
            EvalError::Io { .. } => Self::new(EXIT_IO, e.to_string()),
            _ => Self::new(EXIT_DATA, e.to_string()),
        }
    }
}

impl From<TuneError> for CliError {
    fn from(e: TuneError) -> Self {
        match e {
            TuneError::Eval(inner) => inner.into(),
            _ => Self::new(EXIT_PARAMS, e.to_string()),
        }
    }
}

impl From<SynthError> for CliError {
    fn from(e: SynthError) -> Self {
        match e {
            SynthError::Corpus(inner) => inner.into(),
            SynthError::Io { .. } => Self::new(EXIT_IO, e.to_string()),
            SynthError::Infeasible(_) => Self::new(EXIT_PARAMS, e.to_string()),
        }
    }
}

impl From<CurveError> for CliError {
    fn from(e: CurveError) -> Self {
        Self::new(EXIT_PARAMS, e.to_string())
    }
}

fn io_error(path: &Path, e: io::Error) -> CliError {
    CliError::new(EXIT_IO, format!("{}: {e}", path.display()))
}

/// Inline JSON if it looks like an object, otherwise the contents of a file.
fn json_arg(arg: &str) -> Result<String, CliError> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).map_err(|e| io_error(Path::new(arg), e))
    }
}

fn param_map(arg: Option<&str>) -> Result<BTreeMap<String, f64>, CliError> {
    let Some(arg) = arg else {
        return Ok(BTreeMap::new());
    };
    serde_json::from_str(&json_arg(arg)?)
        .map_err(|e| CliError::new(EXIT_PARAMS, format!("bad --params: {e}")))
}

fn scorer(args: &ScorerArgs) -> Result<ScorerSpec, CliError> {
    Ok(ScorerSpec::from_params(
        args.scorer,
        &param_map(args.params.as_deref())?,
    )?)
}

fn load(source: &IndexSource) -> Result<InvertedIndex, CliError> {
    match (&source.index, &source.corpus) {
        (Some(path), _) => Ok(load_index(path)?),
        (None, Some(path)) => Ok(index_records(
            &read_records(path)?,
            &TokenizerConfig::default(),
        )?),
        (None, None) => Err(CliError::new(EXIT_USAGE, "need --index or --corpus")),
    }
}

fn load_queries(path: &Path, index: &InvertedIndex) -> Result<Vec<Query>, CliError> {
    Ok(read_records(path)?
        .iter()
        .map(|r| r.to_query(index.tokenizer()))
        .collect())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| io_error(path, e))
}

fn lengthsim_params(arg: Option<&str>) -> Result<LengthSimParams, CliError> {
    let given = param_map(arg)?;
    let mut values = serde_json::to_value(LengthSimParams::default()).expect("params serialize");
    let obj = values.as_object_mut().expect("params are an object");
    for (name, v) in given {
        if !obj.contains_key(&name) {
            return Err(CliError::new(
                EXIT_PARAMS,
                format!("unknown curve parameter {name}"),
            ));
        }
        obj.insert(name, v.into());
    }
    let p: LengthSimParams = serde_json::from_value(values).expect("known fields");
    p.validate()?;
    Ok(p)
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    let out_err = |e: io::Error| CliError::new(EXIT_IO, format!("stdout: {e}"));
    match command {
        Command::Index { corpus, out } => {
            let index = index_records(&read_records(&corpus)?, &TokenizerConfig::default())?;
            save_index(&index, &out)?;
            writeln!(
                stdout,
                "indexed {} documents, {} terms, avgdl {:.3}",
                index.num_docs(),
                index.terms().count(),
                index.stats().avgdl
            )
            .map_err(out_err)?;
        }
        Command::Search {
            source,
            query,
            query_id,
            scorer: args,
            top_k,
        } => {
            let index = load(&source)?;
            let spec = scorer(&args)?;
            let q = Query::from_text(query_id, &query, index.tokenizer());
            let list = rank(&q, &index, &spec, top_k)?;
            list.write_run(&mut &mut *stdout).map_err(out_err)?;
        }
        Command::Eval {
            source,
            queries,
            qrels,
            scorer: args,
            top_k,
            out,
        } => {
            let index = load(&source)?;
            let spec = scorer(&args)?;
            let queries = load_queries(&queries, &index)?;
            let qrels = Qrels::read(&qrels)?;
            let ev = evaluate(&index, &queries, &qrels, &spec, top_k)?;
            if let Some(path) = out {
                let mut buf = Vec::new();
                ev.run.write_run(&mut buf).expect("write to Vec");
                write_file(&path, &buf)?;
            }
            writeln!(stdout, "MRR\t{:.6}", ev.mrr).map_err(out_err)?;
        }
        Command::Tune {
            source,
            queries,
            qrels,
            scorer: family,
            grid,
            top_k,
            out,
            best_out,
        } => {
            let grid = match grid {
                Some(arg) => ParamGrid::from_json(family, &json_arg(&arg)?)?,
                None => ParamGrid::default_for(family),
            };
            let index = load(&source)?;
            let queries = load_queries(&queries, &index)?;
            let qrels = Qrels::read(&qrels)?;
            let report = grid_search(&index, &queries, &qrels, family, &grid, top_k)?;
            let mut buf = Vec::new();
            report.write_tsv(&mut buf).expect("write to Vec");
            write_file(&out, &buf)?;
            if let Some(path) = best_out {
                let mut json =
                    serde_json::to_vec_pretty(&report.best_params()).expect("map serializes");
                json.push(b'\n');
                write_file(&path, &json)?;
            }
            let last = buf.rsplit(|&b| b == b'\n').nth(1).unwrap_or_default();
            stdout.write_all(last).map_err(out_err)?;
            writeln!(stdout).map_err(out_err)?;
        }
        Command::Curve {
            params,
            y,
            x_min,
            x_max,
            n,
            out,
        } => {
            let p = lengthsim_params(params.as_deref())?;
            let x_max = x_max.unwrap_or(3.0 * y);
            let n = n.unwrap_or_else(|| ((x_max - x_min).max(0.0) as usize) + 1);
            let samples = sample_curve(&p, y, x_min, x_max, n)?;
            let mut buf = Vec::new();
            write_curve_csv(&samples, &mut buf).expect("write to Vec");
            match out {
                Some(path) => write_file(&path, &buf)?,
                None => stdout.write_all(&buf).map_err(out_err)?,
            }
        }
        Command::Synth { out, seed, config } => {
            let cfg = match config {
                Some(path) => {
                    let text = fs::read_to_string(&path).map_err(|e| io_error(&path, e))?;
                    serde_json::from_str::<SynthConfig>(&text)
                        .map_err(|e| CliError::new(EXIT_PARAMS, format!("bad --config: {e}")))?
                }
                None => SynthConfig::default(),
            }
            .with_seed(seed);
            let corpus = generate_corpus(&cfg)?;
            corpus.write(&out)?;
            writeln!(
                stdout,
                "wrote {} documents ({} train / {} test queries) to {}",
                corpus.docs.len(),
                corpus.train_queries.len(),
                corpus.test_queries.len(),
                out.display()
            )
            .map_err(out_err)?;
        }
    }
    Ok(())
}

/// Parse `args` (including the program name) and run. Returns the exit code.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}
