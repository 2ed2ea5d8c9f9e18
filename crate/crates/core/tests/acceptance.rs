//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::BTreeMap;
use std::fs;
use std::panic;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use lengthsim::corpus::{build_index, index_records, Query, TokenizerConfig};
use lengthsim::eval::{evaluate, mean_reciprocal_rank, mrr, Qrels, RunResult};
use lengthsim::feature_curve::{
    length_similarity, verify_feature_constraints, Constraint, CurveError, LengthSimParams,
};
use lengthsim::rankers::{
    score, score_bm25, score_bm25_lengthsim, score_dirichlet, score_pivoted, Bm25, Bm25LengthSim,
    Bm25LengthSimParams, Bm25Params, Hit, LengthSimNormalizer, NormalizedBm25, PivotedNormalizer,
    ScoredList, ScorerFamily, ScorerSpec,
};
use lengthsim::synth::{generate_corpus, PairKind, Split, SynthConfig};
use lengthsim::tuner::{grid_search, ParamGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1_feature_curve() -> Outcome {
    let start = Instant::now();
    let p = LengthSimParams::default();
    let y = 131.0;
    let h = |x: f64| length_similarity(x, y, &p).unwrap();
    ensure(h(y) == 1.0, format!("h(y,y) = {}", h(y)))?;
    let left = (h(0.0) - 2.9).abs();
    ensure(left < 1e-6, format!("|h(0,y)-2.9| = {left:e}"))?;
    let right = (h(1e6) - 3.7).abs();
    ensure(right < 1e-9, format!("|h(1e6,y)-3.7| = {right:e}"))?;
    let n = 10_000;
    let below: Vec<f64> = (0..n).map(|i| h(y * i as f64 / (n - 1) as f64)).collect();
    let above: Vec<f64> = (0..n)
        .map(|i| h(y + 9.0 * y * i as f64 / (n - 1) as f64))
        .collect();
    ensure(
        below.windows(2).all(|w| w[1] <= w[0]),
        "not monotone below y",
    )?;
    ensure(
        above.windows(2).all(|w| w[1] >= w[0]),
        "not monotone above y",
    )?;
    let jump = (h(y - 1.0) - 1.0).abs();
    ensure(jump < 1e-4, format!("|h(y-1,y)-1| = {jump:e}"))?;
    let report = verify_feature_constraints(&p, y, 1e-3, 1e-6).map_err(|e| e.to_string())?;
    for c in [Constraint::DecreasingBelow, Constraint::IncreasingAbove] {
        ensure(
            report.get(c).passed,
            format!("slope sign check {} failed", c.name()),
        )?;
    }
    let elapsed = start.elapsed();
    ensure(
        elapsed < Duration::from_secs(1),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "h(y,y)=1, |h(0)-b1|={left:.1e}, |h(1e6)-b2|={right:.1e}, jump={jump:.1e}, {elapsed:.0?}"
    ))
}

fn c2_constraint_verifier() -> Outcome {
    let ok = verify_feature_constraints(&LengthSimParams::default(), 131.0, 1e-3, 1e-6)
        .map_err(|e| e.to_string())?;
    ensure(ok.all_passed(), format!("defaults fail: {:?}", ok.checks))?;
    let base = LengthSimParams::default();
    let cases = [
        (
            "c",
            LengthSimParams {
                curvature: 1.5,
                ..base
            },
        ),
        (
            "c",
            LengthSimParams {
                curvature: 0.0,
                ..base
            },
        ),
        (
            "b1",
            LengthSimParams {
                left_bound: 1.0,
                ..base
            },
        ),
        (
            "b2",
            LengthSimParams {
                right_bound: 0.5,
                ..base
            },
        ),
        (
            "B1",
            LengthSimParams {
                left_growth: 0.0,
                ..base
            },
        ),
        (
            "B2",
            LengthSimParams {
                right_growth: -1.0,
                ..base
            },
        ),
    ];
    for (name, p) in cases {
        match verify_feature_constraints(&p, 131.0, 1e-3, 1e-6) {
            Err(CurveError::InvalidParam { name: got, .. }) if got == name => {}
            other => return Err(format!("{name}: expected rejection, got {other:?}")),
        }
    }
    Ok(format!(
        "6/6 constraints hold on defaults; {} bad params rejected",
        cases.len()
    ))
}

fn random_index(rng: &mut ChaCha8Rng) -> (lengthsim::corpus::InvertedIndex, Query) {
    let vocab = rng.random_range(1..=50);
    let docs: Vec<(String, String)> = (0..rng.random_range(1..=20))
        .map(|i| {
            let len = rng.random_range(0..30);
            let words: Vec<String> = (0..len)
                .map(|_| format!("t{}", rng.random_range(0..vocab)))
                .collect();
            (format!("d{i}"), words.join(" "))
        })
        .collect();
    let idx = build_index(docs, &TokenizerConfig::plain()).unwrap();
    let qwords: Vec<String> = (0..rng.random_range(1..12))
        .map(|_| format!("t{}", rng.random_range(0..vocab)))
        .collect();
    (
        idx,
        Query::from_text("q", &qwords.join(" "), &TokenizerConfig::plain()),
    )
}

fn c3_normalizer_plug() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut max_diff, mut pairs) = (0.0f64, 0usize);
    for _ in 0..100 {
        let (idx, q) = random_index(&mut rng);
        let k = rng.random_range(0.1..4.0);
        let b = rng.random_range(0.0..=1.0);
        let c = rng.random_range(0.05..0.95);
        let stock = Bm25::new(Bm25Params { k, b }).unwrap();
        let plugged = NormalizedBm25 {
            k,
            normalizer: PivotedNormalizer { b },
        };
        let hp = LengthSimParams {
            curvature: c,
            ..Default::default()
        };
        let lengthsim = Bm25LengthSim::new(Bm25LengthSimParams { k, lengthsim: hp }).unwrap();
        let plugged_h = NormalizedBm25 {
            k,
            normalizer: LengthSimNormalizer { params: hp },
        };
        for (id, _) in idx.doc_lengths() {
            let a = score(&q, id, &idx, &stock).unwrap();
            let bb = score(&q, id, &idx, &plugged).unwrap();
            max_diff = max_diff.max((a - bb).abs());
            let x = score(&q, id, &idx, &lengthsim).unwrap();
            let y = score(&q, id, &idx, &plugged_h).unwrap();
            ensure(
                x.to_bits() == y.to_bits(),
                format!("h plug differs at {id}: {x} vs {y}"),
            )?;
            pairs += 1;
        }
    }
    ensure(
        max_diff <= 1e-12,
        format!("pivoted plug max diff {max_diff:e}"),
    )?;
    Ok(format!(
        "100 corpora, {pairs} docs: pivoted max diff {max_diff:.1e}, h plug bit-identical"
    ))
}

fn c4_hand_oracles() -> Outcome {
    let idx = build_index(
        [("d1", "cat cat dog"), ("d2", "dog bird")],
        &TokenizerConfig::plain(),
    )
    .unwrap();
    let q = Query::from_text("q", "cat", &TokenizerConfig::plain());
    let ln3 = 3f64.ln();
    // |d| = 3 > |q| = 1, so the right branch applies
    let h = 1.0 + 2.7 / (1.0 + (-1.5f64).exp());
    // (name, computed, re-derived by hand, printed value)
    let rows = [
        (
            "bm25",
            score_bm25(&q, "d1", &idx, Bm25Params { k: 1.2, b: 0.75 }).unwrap(),
            ln3 * 2.2 * 2.0 / (2.0 + 1.2 * 1.15),
            1.4302,
        ),
        (
            "lengthsim",
            score_bm25_lengthsim(&q, "d1", &idx, Bm25LengthSimParams::default()).unwrap(),
            ln3 * 3.8 * 2.0 / (2.0 + 2.8 * h),
            0.7604,
        ),
        (
            "pivoted",
            score_pivoted(&q, "d1", &idx, 0.2).unwrap(),
            (1.0 + (1.0 + 2f64.ln()).ln()) / 1.04 * ln3,
            1.6129,
        ),
        (
            "dirichlet",
            score_dirichlet(&q, "d1", &idx, 100.0).unwrap(),
            1.05f64.ln() + (100.0f64 / 103.0).ln(),
            0.01923,
        ),
    ];
    let mut notes = Vec::new();
    for (name, got, derived, printed) in rows {
        ensure(
            (got - derived).abs() < 1e-4,
            format!("{name}: {got} vs re-derived {derived}"),
        )?;
        let off = (derived - printed).abs();
        notes.push(if off < 1e-4 {
            format!("{name} {got:.6}")
        } else {
            format!("{name} {got:.6} (printed {printed} is {off:.1e} off the re-derivation)")
        });
    }
    Ok(notes.join(", "))
}

fn c5_mrr_oracle() -> Outcome {
    let known = mean_reciprocal_rank(&[1, 2, 4]).unwrap();
    ensure(
        (known - 7.0 / 12.0).abs() < 1e-10,
        format!("{{1,2,4}} -> {known}"),
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for trial in 0..1000 {
        let n_docs = rng.random_range(1..15);
        let mut qrels = Qrels::new();
        let mut lists = Vec::new();
        let mut brute = Vec::new();
        for qi in 0..rng.random_range(1..8) {
            let qid = format!("q{qi}");
            let mut docs: Vec<usize> = (0..n_docs).collect();
            for i in (1..docs.len()).rev() {
                docs.swap(i, rng.random_range(0..=i));
            }
            docs.truncate(rng.random_range(0..=n_docs));
            let relevant: Vec<usize> = (0..n_docs).filter(|_| rng.random_bool(0.3)).collect();
            let relevant = if relevant.is_empty() {
                vec![rng.random_range(0..n_docs)]
            } else {
                relevant
            };
            for &d in &relevant {
                qrels.insert(qid.clone(), format!("d{d}"));
            }
            let rr = docs
                .iter()
                .position(|d| relevant.contains(d))
                .map_or(0.0, |p| 1.0 / (p + 1) as f64);
            brute.push(rr);
            let hits = docs
                .iter()
                .enumerate()
                .map(|(r, d)| Hit {
                    doc_id: format!("d{d}"),
                    score: -(r as f64),
                })
                .collect();
            lists.push(ScoredList {
                query_id: qid,
                hits,
            });
        }
        let got = mrr(&RunResult { lists }, &qrels).unwrap();
        // same summation order as the implementation: largest rank first
        let mut rrs = brute.clone();
        rrs.sort_by(|a, b| a.total_cmp(b));
        let oracle = rrs.iter().sum::<f64>() / rrs.len() as f64;
        ensure(got == oracle, format!("trial {trial}: {got} vs {oracle}"))?;
    }
    Ok(format!("{{1,2,4}} -> {known:.10}; 1000 random runs exact"))
}

fn c6_tuner_exhaustive() -> Outcome {
    let cfg = TokenizerConfig::plain();
    let docs = [
        ("a", "apple banana"),
        ("b", "apple apple apple cherry date elder fig grape"),
        ("c", "banana cherry"),
        ("d", "cherry cherry date"),
        ("e", "apple fig fig fig fig grape grape honey kiwi lime"),
        ("f", "date elder"),
        ("g", "banana banana kiwi lime mango"),
        ("h", "grape"),
        ("i", "honey kiwi kiwi lime lime mango nut olive pear"),
        ("j", "apple cherry elder grape kiwi mango olive"),
    ];
    let idx = build_index(docs, &cfg).unwrap();
    let queries: Vec<Query> = [
        ("q1", "apple"),
        ("q2", "cherry date"),
        ("q3", "kiwi lime"),
        ("q4", "grape fig"),
    ]
    .iter()
    .map(|(id, t)| Query::from_text(*id, t, &cfg))
    .collect();
    let mut qrels = Qrels::new();
    for (q, d) in [("q1", "a"), ("q2", "f"), ("q3", "g"), ("q4", "h")] {
        qrels.insert(q, d);
    }
    let grid = ParamGrid::from_json(
        ScorerFamily::Bm25,
        r#"{"k":[0.5,1.2,3.0],"b":[0.0,0.5,1.0]}"#,
    )
    .map_err(|e| e.to_string())?;
    let report = grid_search(&idx, &queries, &qrels, ScorerFamily::Bm25, &grid, 10)
        .map_err(|e| e.to_string())?;
    ensure(
        report.entries.len() == 9,
        format!("report length {}", report.entries.len()),
    )?;
    let recomputed: Vec<(Vec<f64>, f64)> = grid
        .points()
        .map(|p| {
            let spec = ScorerSpec::from_values(ScorerFamily::Bm25, &p).unwrap();
            let m = evaluate(&idx, &queries, &qrels, &spec, 10).unwrap().mrr;
            (p, m)
        })
        .collect();
    let max = recomputed
        .iter()
        .map(|r| r.1)
        .fold(f64::NEG_INFINITY, f64::max);
    let first_max = &recomputed.iter().find(|r| r.1 == max).unwrap().0;
    ensure(
        report.best().mrr == max,
        format!("best {} vs max {max}", report.best().mrr),
    )?;
    ensure(
        &report.best().values == first_max,
        "tie policy not earliest point",
    )?;
    let distinct: std::collections::BTreeSet<u64> =
        recomputed.iter().map(|r| r.1.to_bits()).collect();
    Ok(format!(
        "9 points, best {:?} MRR {max:.4} ({} distinct MRRs)",
        report.best().values,
        distinct.len()
    ))
}

/// Coarse subset of the default bm25-lengthsim grid, B1 = B2 = 1.
const LENGTHSIM_GRID: &str = r#"{"k":[0.8,1.2,1.6,2.0,2.4,2.8,3.2,3.6],"b1":[1.5,2,3,4,5],"b2":[1.5,2,3,4,5],"c":[0.1,0.3,0.5,0.7,0.9]}"#;
const SEEDS: [u64; 3] = [1, 2, 3];
const PUBLISHED_IMPROVEMENT: f64 = 52.0;

fn c7_synthetic_reproduction() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut all_better = true;
    for seed in SEEDS {
        let corpus =
            generate_corpus(&SynthConfig::default().with_seed(seed)).map_err(|e| e.to_string())?;
        ensure(
            corpus.docs.len() == 630,
            format!("seed {seed}: {} docs", corpus.docs.len()),
        )?;
        let avgdl = corpus.realized.mean_length;
        ensure(
            (avgdl - 131.0).abs() <= 13.1,
            format!("seed {seed}: avgdl {avgdl}"),
        )?;
        let mix = corpus.realized.train_mix;
        ensure(
            mix.short_short == 62 && mix.long_long == 131,
            format!("seed {seed}: mix {mix:?}"),
        )?;
        let n_other = corpus
            .pairs
            .iter()
            .filter(|p| p.split == Split::Train && p.kind == PairKind::Other)
            .count();
        ensure(
            n_other == mix.other,
            "pair kinds disagree with realized mix",
        )?;

        let tok = TokenizerConfig::default();
        let idx = index_records(&corpus.docs, &tok).map_err(|e| e.to_string())?;
        let train: Vec<Query> = corpus
            .queries(Split::Train)
            .iter()
            .map(|r| r.to_query(&tok))
            .collect();
        let test: Vec<Query> = corpus
            .queries(Split::Test)
            .iter()
            .map(|r| r.to_query(&tok))
            .collect();

        let tune = |family, grid: &ParamGrid| {
            let report = grid_search(&idx, &train, &corpus.qrels, family, grid, 1000).unwrap();
            let spec = report.best_spec();
            let test_mrr = evaluate(&idx, &test, &corpus.qrels, &spec, 1000)
                .unwrap()
                .mrr;
            (report.best().values.clone(), report.best().mrr, test_mrr)
        };
        let bm25 = tune(
            ScorerFamily::Bm25,
            &ParamGrid::default_for(ScorerFamily::Bm25),
        );
        let ls_grid = ParamGrid::from_json(ScorerFamily::Bm25LengthSim, LENGTHSIM_GRID).unwrap();
        let ls = tune(ScorerFamily::Bm25LengthSim, &ls_grid);
        let rel = 100.0 * (ls.2 / bm25.2 - 1.0);
        all_better &= ls.2 > bm25.2;
        lines.push(format!(
            "    seed {seed}: avgdl {avgdl:.1}, mix {}/{}/{}; bm25 {:?} train {:.4} test {:.4}; lengthsim {:?} train {:.4} test {:.4}; improvement {rel:+.1}%",
            mix.short_short, mix.long_long, mix.other, bm25.0, bm25.1, bm25.2, ls.0, ls.1, ls.2
        ));
    }
    let elapsed = start.elapsed();
    let summary = format!(
        "{} seeds in {elapsed:.1?} (published figure: +{PUBLISHED_IMPROVEMENT}% on private data; not asserted)\n{}",
        SEEDS.len(),
        lines.join("\n")
    );
    ensure(
        all_better,
        format!("lengthsim not strictly better on every seed\n{summary}"),
    )?;
    ensure(
        elapsed < Duration::from_secs(120),
        format!("too slow\n{summary}"),
    )?;
    Ok(summary)
}

fn cli(dir: &Path, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_lengthsim"))
        .current_dir(dir)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn pipeline(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let mut stdout = Vec::new();
    stdout.extend(cli(dir, &["synth", "--out", "data", "--seed", "7"])?);
    stdout.extend(cli(
        dir,
        &["index", "--corpus", "data/corpus.jsonl", "--out", "index"],
    )?);
    stdout.extend(cli(
        dir,
        &[
            "tune",
            "--index",
            "index",
            "--queries",
            "data/queries_train.jsonl",
            "--qrels",
            "data/qrels.tsv",
            "--scorer",
            "bm25-lengthsim",
            "--grid",
            r#"{"k":[1.2,2.8],"c":[0.3,0.5]}"#,
            "--out",
            "report.tsv",
            "--best-out",
            "best.json",
        ],
    )?);
    stdout.extend(cli(
        dir,
        &[
            "eval",
            "--index",
            "index",
            "--queries",
            "data/queries_test.jsonl",
            "--qrels",
            "data/qrels.tsv",
            "--scorer",
            "bm25-lengthsim",
            "--params",
            "best.json",
            "--out",
            "run.tsv",
        ],
    )?);
    let mut files = BTreeMap::new();
    files.insert("stdout".to_string(), stdout);
    for f in [
        "data/corpus.jsonl",
        "data/queries_train.jsonl",
        "data/queries_test.jsonl",
        "data/qrels.tsv",
        "data/manifest.json",
        "index",
        "report.tsv",
        "best.json",
        "run.tsv",
    ] {
        files.insert(
            f.to_string(),
            fs::read(dir.join(f)).map_err(|e| format!("{f}: {e}"))?,
        );
    }
    Ok(files)
}

fn c8_determinism() -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = pipeline(a.path())?;
    let second = pipeline(b.path())?;
    for (name, bytes) in &first {
        ensure(!bytes.is_empty(), format!("{name} is empty"))?;
        ensure(Some(bytes) == second.get(name), format!("{name} differs"))?;
    }
    Ok(format!(
        "{} outputs byte-identical across two synth/index/tune/eval runs",
        first.len()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("feature-curve suite", c1_feature_curve),
        ("constraint verifier", c2_constraint_verifier),
        ("normalizer-plug equivalence", c3_normalizer_plug),
        ("hand-oracle scoring", c4_hand_oracles),
        ("MRR oracle", c5_mrr_oracle),
        ("tuner exhaustiveness", c6_tuner_exhaustive),
        ("synthetic reproduction", c7_synthetic_reproduction),
        ("determinism", c8_determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
