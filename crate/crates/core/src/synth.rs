//! Synthetic penpal corpus.
//!
//! Users come in pairs. Each pair draws a pool of interest terms; a member
//! mentions a prefix of that pool proportional to its length, so longer
//! profiles list more interests and the shorter partner's interests are a
//! subset of the longer one's. Every document also mentions a few unrelated
//! interests and is filled up to its sampled length with background words.
//! Pair lengths follow a configured short/long mix, so partners usually have
//! similar lengths.

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric, Zipf};
use serde::{Deserialize, Serialize};

use crate::corpus::{write_records, CorpusError, TextRecord};
use crate::eval::Qrels;

pub const CORPUS_FILE: &str = "corpus.jsonl";
pub const TRAIN_QUERIES_FILE: &str = "queries_train.jsonl";
pub const TEST_QUERIES_FILE: &str = "queries_test.jsonl";
pub const QRELS_FILE: &str = "qrels.tsv";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Attempts at drawing a length assignment that separates short from long.
const MAX_LENGTH_ATTEMPTS: usize = 1000;

#[derive(Debug, thiserror::Error)]
pub enum SynthError {
    #[error("infeasible config: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

/// Pair counts by length class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairMix {
    /// Both members shorter than the mean document length.
    pub short_short: usize,
    /// Both members longer than the mean.
    pub long_long: usize,
    /// One of each.
    pub other: usize,
}

impl PairMix {
    pub fn total(&self) -> usize {
        self.short_short + self.long_long + self.other
    }
}

/// Missing fields take their defaults when deserialized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub users: usize,
    pub pairs: usize,
    pub train_pairs: usize,
    pub test_pairs: usize,
    pub target_avgdl: f64,
    /// Training-split mix. Pairs not covered by it are generated as `other`.
    pub mix: PairMix,
    pub interest_vocab: usize,
    pub interest_zipf: f64,
    pub background_vocab: usize,
    pub background_zipf: f64,
    /// Size of each pair's shared interest pool.
    pub shared_terms: usize,
    /// Shared interests mentioned per document token.
    pub shared_rate: f64,
    /// Shared interests every member mentions regardless of length.
    pub min_shared: usize,
    /// Unrelated interest terms added to each document.
    pub noise_terms: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            users: 630,
            pairs: 315,
            train_pairs: 252,
            test_pairs: 63,
            target_avgdl: 131.0,
            mix: PairMix {
                short_short: 62,
                long_long: 131,
                other: 53,
            },
            interest_vocab: 200,
            interest_zipf: 1.2,
            background_vocab: 50_000,
            background_zipf: 0.3,
            shared_terms: 20,
            shared_rate: 0.04,
            min_shared: 2,
            noise_terms: 2,
            seed: 1,
        }
    }
}

impl SynthConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let fail = |m: String| Err(SynthError::Infeasible(m));
        if self.pairs == 0 {
            return fail("pair count must be positive".into());
        }
        if self.users != 2 * self.pairs {
            return fail(format!(
                "{} users cannot form {} pairs",
                self.users, self.pairs
            ));
        }
        if self.train_pairs + self.test_pairs != self.pairs {
            return fail(format!(
                "train {} + test {} pairs != {} pairs",
                self.train_pairs, self.test_pairs, self.pairs
            ));
        }
        if self.train_pairs == 0 {
            return fail("need at least one training pair".into());
        }
        if self.mix.total() > self.train_pairs {
            return fail(format!(
                "mix counts sum to {} but there are only {} training pairs",
                self.mix.total(),
                self.train_pairs
            ));
        }
        if !(self.target_avgdl.is_finite() && self.target_avgdl > 0.0) {
            return fail(format!(
                "target avgdl {} must be positive",
                self.target_avgdl
            ));
        }
        if self.min_shared == 0 || self.min_shared > self.shared_terms {
            return fail(format!(
                "min_shared {} must be in 1..={}",
                self.min_shared, self.shared_terms
            ));
        }
        if !(self.shared_rate.is_finite() && self.shared_rate >= 0.0) {
            return fail(format!("shared rate {} must be >= 0", self.shared_rate));
        }
        if self.shared_terms + self.noise_terms > self.interest_vocab {
            return fail("interest vocabulary too small for shared + noise terms".into());
        }
        if self.background_vocab == 0 {
            return fail("background vocabulary must be non-empty".into());
        }
        for (name, z) in [
            ("interest", self.interest_zipf),
            ("background", self.background_zipf),
        ] {
            if !(z.is_finite() && z >= 0.0) {
                return fail(format!("{name} zipf exponent {z} must be >= 0"));
            }
        }
        Ok(())
    }

    fn min_length(&self) -> usize {
        self.min_shared + self.noise_terms
    }

    /// Shared interests mentioned by a document of `len` tokens.
    fn shared_mentions(&self, len: usize) -> usize {
        ((self.shared_rate * len as f64).round() as usize).clamp(self.min_shared, self.shared_terms)
    }

    /// Mix actually generated for the training split.
    pub fn train_mix(&self) -> PairMix {
        PairMix {
            other: self.train_pairs - self.mix.short_short - self.mix.long_long,
            ..self.mix
        }
    }

    /// Test mix: the training proportions scaled by largest remainder.
    pub fn test_mix(&self) -> PairMix {
        let train = self.train_mix();
        let counts = [train.short_short, train.long_long, train.other];
        let quota = |c: usize| c * self.test_pairs;
        let mut out: Vec<usize> = counts
            .iter()
            .map(|&c| quota(c) / self.train_pairs)
            .collect();
        let mut order: Vec<usize> = (0..3).collect();
        // largest remainder first; earlier class wins ties
        order.sort_by_key(|&i| std::cmp::Reverse(quota(counts[i]) % self.train_pairs));
        let missing = self.test_pairs - out.iter().sum::<usize>();
        for &i in order.iter().take(missing) {
            out[i] += 1;
        }
        PairMix {
            short_short: out[0],
            long_long: out[1],
            other: out[2],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    ShortShort,
    LongLong,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Test,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pair {
    pub a: String,
    pub b: String,
    pub kind: PairKind,
    pub split: Split,
}

/// Length statistics of the generated documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Realized {
    pub mean_length: f64,
    pub train_mean_length: f64,
    /// Training pairs classified against `train_mean_length`.
    pub train_mix: PairMix,
    pub test_mix: PairMix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    pub config: SynthConfig,
    /// Sorted by id.
    pub docs: Vec<TextRecord>,
    pub pairs: Vec<Pair>,
    pub qrels: Qrels,
    pub train_queries: Vec<String>,
    pub test_queries: Vec<String>,
    pub realized: Realized,
}

#[derive(Serialize)]
struct Manifest<'a> {
    config: &'a SynthConfig,
    realized: &'a Realized,
    files: [&'static str; 4],
}

fn zipf(n: usize, s: f64) -> Zipf<f64> {
    Zipf::new(n as f64, s).expect("validated vocabulary and exponent")
}

/// Draw `count` distinct Zipf ranks (0-based) not in `taken`.
fn distinct_ranks(
    rng: &mut ChaCha8Rng,
    dist: &Zipf<f64>,
    count: usize,
    taken: &BTreeSet<usize>,
) -> Vec<usize> {
    let mut chosen = BTreeSet::new();
    let mut order = Vec::with_capacity(count);
    while order.len() < count {
        let r = dist.sample(rng) as usize - 1;
        if !taken.contains(&r) && chosen.insert(r) {
            order.push(r);
        }
    }
    order
}

/// Two-sided geometric offset around `centre`, truncated at `half_width`.
fn sample_length(rng: &mut ChaCha8Rng, centre: f64, half_width: f64, min: usize) -> usize {
    let p = 1.0 / (1.0 + half_width / 3.0);
    let geo = Geometric::new(p).expect("0 < p <= 1");
    loop {
        let offset = geo.sample(rng) as f64;
        if offset > half_width {
            continue;
        }
        let signed = if rng.random::<bool>() {
            offset
        } else {
            -offset
        };
        let len = (centre + signed).round();
        if len >= min as f64 {
            return len as usize;
        }
    }
}

fn mean(xs: impl Iterator<Item = usize>) -> f64 {
    let (sum, n) = xs.fold((0usize, 0usize), |(s, n), x| (s + x, n + 1));
    sum as f64 / n as f64
}

fn classify(a: usize, b: usize, mean: f64) -> PairKind {
    let (a, b) = (a as f64, b as f64);
    if a < mean && b < mean {
        PairKind::ShortShort
    } else if a > mean && b > mean {
        PairKind::LongLong
    } else {
        PairKind::Other
    }
}

fn count_mix(kinds: impl Iterator<Item = PairKind>) -> PairMix {
    let mut mix = PairMix {
        short_short: 0,
        long_long: 0,
        other: 0,
    };
    for k in kinds {
        match k {
            PairKind::ShortShort => mix.short_short += 1,
            PairKind::LongLong => mix.long_long += 1,
            PairKind::Other => mix.other += 1,
        }
    }
    mix
}

fn kinds(mix: PairMix) -> Vec<PairKind> {
    let mut v = vec![PairKind::ShortShort; mix.short_short];
    v.extend(std::iter::repeat_n(PairKind::LongLong, mix.long_long));
    v.extend(std::iter::repeat_n(PairKind::Other, mix.other));
    v
}

pub fn generate_corpus(cfg: &SynthConfig) -> Result<SynthCorpus, SynthError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut train_kinds = kinds(cfg.train_mix());
    let mut test_kinds = kinds(cfg.test_mix());
    train_kinds.shuffle(&mut rng);
    test_kinds.shuffle(&mut rng);

    let width = cfg.users.to_string().len().max(4);
    let mut ids: Vec<String> = (0..cfg.users).map(|i| format!("u{i:0width$}")).collect();
    ids.shuffle(&mut rng);

    // (a_is_long, b_is_long) per pair
    let classes: Vec<(bool, bool)> = train_kinds
        .iter()
        .chain(&test_kinds)
        .map(|k| match k {
            PairKind::ShortShort => (false, false),
            PairKind::LongLong => (true, true),
            PairKind::Other => {
                let a_long = rng.random::<bool>();
                (a_long, !a_long)
            }
        })
        .collect();
    let longs = classes
        .iter()
        .map(|&(a, b)| usize::from(a) + usize::from(b))
        .sum::<usize>() as f64;
    let shorts = cfg.users as f64 - longs;

    // Centre short docs at 0.5T and long at 1.5T, scaled so the expected mean is T.
    let t = cfg.target_avgdl;
    let kappa = cfg.users as f64 / (0.5 * shorts + 1.5 * longs);
    let (short_c, long_c) = (0.5 * t * kappa, 1.5 * t * kappa);
    let (short_hw, long_hw) = (0.6 * (t - short_c).abs(), 0.6 * (long_c - t).abs());

    if short_c + short_hw < cfg.min_length() as f64 {
        return Err(SynthError::Infeasible(format!(
            "documents need at least {} tokens, too many for avgdl {t}",
            cfg.min_length()
        )));
    }

    let n_train_docs = 2 * cfg.train_pairs;
    let mut lengths = Vec::new();
    let mut accepted = false;
    for _ in 0..MAX_LENGTH_ATTEMPTS {
        lengths = classes
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .map(|long| {
                if long {
                    sample_length(&mut rng, long_c, long_hw, cfg.min_length())
                } else {
                    sample_length(&mut rng, short_c, short_hw, cfg.min_length())
                }
            })
            .collect::<Vec<_>>();
        let is_long = classes.iter().flat_map(|&(a, b)| [a, b]);
        let all_mean = mean(lengths.iter().copied());
        let train_mean = mean(lengths[..n_train_docs].iter().copied());
        let (lo, hi) = (all_mean.min(train_mean), all_mean.max(train_mean));
        let separated =
            lengths
                .iter()
                .zip(is_long)
                .all(|(&l, long)| if long { l as f64 > hi } else { (l as f64) < lo });
        if separated && (all_mean - t).abs() <= 0.1 * t {
            accepted = true;
            break;
        }
    }
    if !accepted {
        return Err(SynthError::Infeasible(
            "could not draw lengths separating short from long documents".into(),
        ));
    }

    let interest = zipf(cfg.interest_vocab, cfg.interest_zipf);
    let background = zipf(cfg.background_vocab, cfg.background_zipf);
    let mut docs = Vec::with_capacity(cfg.users);
    let mut pairs = Vec::with_capacity(cfg.pairs);
    let mut qrels = Qrels::new();
    for (p, kind) in train_kinds.iter().chain(&test_kinds).enumerate() {
        let (a, b) = (ids[2 * p].clone(), ids[2 * p + 1].clone());
        let shared = distinct_ranks(&mut rng, &interest, cfg.shared_terms, &BTreeSet::new());
        let taken: BTreeSet<usize> = shared.iter().copied().collect();
        for (member, id) in [&a, &b].into_iter().enumerate() {
            let len = lengths[2 * p + member];
            let noise = distinct_ranks(&mut rng, &interest, cfg.noise_terms, &taken);
            let mut tokens: Vec<String> = shared[..cfg.shared_mentions(len)]
                .iter()
                .chain(&noise)
                .map(|r| format!("int{r}"))
                .collect();
            while tokens.len() < len {
                tokens.push(format!("bg{}", background.sample(&mut rng) as usize - 1));
            }
            tokens.shuffle(&mut rng);
            docs.push(TextRecord::new(id.clone(), tokens.join(" ")));
        }
        qrels.insert(a.clone(), b.clone());
        qrels.insert(b.clone(), a.clone());
        let split = if p < cfg.train_pairs {
            Split::Train
        } else {
            Split::Test
        };
        pairs.push(Pair {
            a,
            b,
            kind: *kind,
            split,
        });
    }

    let train_mean = mean(lengths[..n_train_docs].iter().copied());
    let realized = Realized {
        mean_length: mean(lengths.iter().copied()),
        train_mean_length: train_mean,
        train_mix: count_mix(
            (0..cfg.train_pairs).map(|p| classify(lengths[2 * p], lengths[2 * p + 1], train_mean)),
        ),
        test_mix: count_mix(test_kinds.iter().copied()),
    };

    let mut train_queries: Vec<String> = pairs[..cfg.train_pairs]
        .iter()
        .flat_map(|p| [p.a.clone(), p.b.clone()])
        .collect();
    let mut test_queries: Vec<String> = pairs[cfg.train_pairs..]
        .iter()
        .flat_map(|p| [p.a.clone(), p.b.clone()])
        .collect();
    train_queries.sort();
    test_queries.sort();
    docs.sort_by(|x, y| x.id.cmp(&y.id));

    Ok(SynthCorpus {
        config: cfg.clone(),
        docs,
        pairs,
        qrels,
        train_queries,
        test_queries,
        realized,
    })
}

impl SynthCorpus {
    fn doc_text(&self, id: &str) -> &str {
        let i = self
            .docs
            .binary_search_by(|d| d.id.as_str().cmp(id))
            .expect("query ids are document ids");
        &self.docs[i].text
    }

    /// Query records for a split: each user's own text, never matching itself.
    pub fn queries(&self, split: Split) -> Vec<TextRecord> {
        let ids = match split {
            Split::Train => &self.train_queries,
            Split::Test => &self.test_queries,
        };
        ids.iter()
            .map(|id| TextRecord {
                id: id.clone(),
                text: self.doc_text(id).to_string(),
                exclude_doc: Some(id.clone()),
            })
            .collect()
    }

    /// Write corpus, query, qrels and manifest files into `dir`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<(), SynthError> {
        let dir = dir.as_ref();
        let io_err = |path: PathBuf| move |source| SynthError::Io { path, source };
        fs::create_dir_all(dir).map_err(io_err(dir.to_path_buf()))?;
        write_records(&self.docs, dir.join(CORPUS_FILE))?;
        write_records(&self.queries(Split::Train), dir.join(TRAIN_QUERIES_FILE))?;
        write_records(&self.queries(Split::Test), dir.join(TEST_QUERIES_FILE))?;

        let path = dir.join(QRELS_FILE);
        let mut out = Vec::new();
        self.qrels.write_to(&mut out).expect("write to Vec");
        fs::write(&path, out).map_err(io_err(path.clone()))?;

        let manifest = Manifest {
            config: &self.config,
            realized: &self.realized,
            files: [
                CORPUS_FILE,
                TRAIN_QUERIES_FILE,
                TEST_QUERIES_FILE,
                QRELS_FILE,
            ],
        };
        let path = dir.join(MANIFEST_FILE);
        let mut f = fs::File::create(&path).map_err(io_err(path.clone()))?;
        serde_json::to_writer_pretty(&mut f, &manifest).expect("manifest serializes");
        writeln!(f).map_err(io_err(path))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn corpus() -> SynthCorpus {
        generate_corpus(&SynthConfig::default()).unwrap()
    }

    fn lengths(c: &SynthCorpus) -> BTreeMap<&str, usize> {
        c.docs
            .iter()
            .map(|d| (d.id.as_str(), d.text.split(' ').count()))
            .collect()
    }

    #[test]
    fn default_counts() {
        let c = corpus();
        assert_eq!(c.docs.len(), 630);
        assert_eq!(c.qrels.len(), 630);
        assert_eq!(c.train_queries.len(), 504);
        assert_eq!(c.test_queries.len(), 126);
        let ids: BTreeSet<&str> = c.docs.iter().map(|d| d.id.as_str()).collect();
        assert_eq!(ids.len(), 630);
        for (q, rel) in c.qrels.iter() {
            assert_eq!(rel.len(), 1);
            let partner = rel.iter().next().unwrap();
            assert_ne!(partner, q);
            assert!(c.qrels.relevant(partner).unwrap().contains(q));
        }
    }

    #[test]
    fn mix_matches_against_realized_mean() {
        let c = corpus();
        let len = lengths(&c);
        let train: Vec<_> = c.pairs.iter().filter(|p| p.split == Split::Train).collect();
        let mean = train
            .iter()
            .map(|p| (len[p.a.as_str()] + len[p.b.as_str()]) as f64)
            .sum::<f64>()
            / (2 * train.len()) as f64;
        assert_eq!(mean, c.realized.train_mean_length);
        let counted = count_mix(
            train
                .iter()
                .map(|p| classify(len[p.a.as_str()], len[p.b.as_str()], mean)),
        );
        assert_eq!(counted.short_short, 62);
        assert_eq!(counted.long_long, 131);
        assert_eq!(counted, c.config.train_mix());
        assert_eq!(counted, c.realized.train_mix);
        for p in &train {
            assert_eq!(classify(len[p.a.as_str()], len[p.b.as_str()], mean), p.kind);
        }
    }

    #[test]
    fn avgdl_near_target() {
        let c = corpus();
        let m = c.realized.mean_length;
        assert!((m - 131.0).abs() <= 13.1, "{m}");
        let direct = mean(lengths(&c).values().copied());
        assert_eq!(direct, m);
    }

    #[test]
    fn test_mix_by_largest_remainder() {
        let cfg = SynthConfig::default();
        assert_eq!(
            cfg.train_mix(),
            PairMix {
                short_short: 62,
                long_long: 131,
                other: 59
            }
        );
        assert_eq!(
            cfg.test_mix(),
            PairMix {
                short_short: 15,
                long_long: 33,
                other: 15
            }
        );
    }

    #[test]
    fn deterministic_per_seed() {
        let a = corpus();
        let b = corpus();
        assert_eq!(a, b);
        let c = generate_corpus(&SynthConfig::default().with_seed(2)).unwrap();
        assert_ne!(a.docs, c.docs);
    }

    #[test]
    fn written_files_are_identical() {
        let (x, y) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        corpus().write(x.path()).unwrap();
        corpus().write(y.path()).unwrap();
        for f in [
            CORPUS_FILE,
            TRAIN_QUERIES_FILE,
            TEST_QUERIES_FILE,
            QRELS_FILE,
            MANIFEST_FILE,
        ] {
            let a = fs::read(x.path().join(f)).unwrap();
            assert!(!a.is_empty(), "{f}");
            assert_eq!(a, fs::read(y.path().join(f)).unwrap(), "{f}");
        }
    }

    fn jaccard(a: &BTreeSet<&str>, b: &BTreeSet<&str>) -> f64 {
        let inter = a.intersection(b).count() as f64;
        inter / ((a.len() + b.len()) as f64 - inter)
    }

    #[test]
    fn pairs_overlap_more_than_strangers() {
        let c = corpus();
        let sets: Vec<BTreeSet<&str>> =
            c.docs.iter().map(|d| d.text.split(' ').collect()).collect();
        let pos: BTreeMap<&str, usize> = c
            .docs
            .iter()
            .enumerate()
            .map(|(i, d)| (d.id.as_str(), i))
            .collect();
        let partner: BTreeMap<usize, usize> = c
            .pairs
            .iter()
            .flat_map(|p| {
                let (a, b) = (pos[p.a.as_str()], pos[p.b.as_str()]);
                [(a, b), (b, a)]
            })
            .collect();
        let (mut sum, mut n) = (0.0, 0usize);
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                if partner[&i] != j {
                    sum += jaccard(&sets[i], &sets[j]);
                    n += 1;
                }
            }
        }
        let background = sum / n as f64;
        for (&i, &j) in &partner {
            let pj = jaccard(&sets[i], &sets[j]);
            assert!(
                pj > background,
                "{} {} {pj} <= {background}",
                c.docs[i].id,
                c.docs[j].id
            );
        }
    }

    #[test]
    fn shorter_partner_interests_are_a_subset() {
        let c = corpus();
        let interests = |id: &str| -> BTreeSet<String> {
            c.doc_text(id)
                .split(' ')
                .filter(|t| t.starts_with("int"))
                .map(String::from)
                .collect()
        };
        let len = lengths(&c);
        for p in &c.pairs {
            let (short, long) = if len[p.a.as_str()] <= len[p.b.as_str()] {
                (&p.a, &p.b)
            } else {
                (&p.b, &p.a)
            };
            let (s, l) = (interests(short), interests(long));
            let shared = s.intersection(&l).count();
            assert!(
                shared >= c.config.shared_mentions(len[short.as_str()]),
                "{short} {long}"
            );
            assert!(shared >= c.config.min_shared);
        }
        assert_eq!(c.config.shared_mentions(10), 2);
        assert_eq!(c.config.shared_mentions(175), 7);
        assert_eq!(c.config.shared_mentions(10_000), 20);
    }

    #[test]
    fn queries_are_own_text_excluding_self() {
        let c = corpus();
        let qs = c.queries(Split::Test);
        assert_eq!(qs.len(), 126);
        for q in qs {
            assert_eq!(q.exclude_doc.as_deref(), Some(q.id.as_str()));
            assert_eq!(q.text, c.doc_text(&q.id));
        }
    }

    #[test]
    fn infeasible_configs() {
        let mut cfg = SynthConfig::default();
        cfg.mix.short_short = 300;
        assert!(matches!(
            generate_corpus(&cfg),
            Err(SynthError::Infeasible(_))
        ));
        let cfg = SynthConfig {
            users: 629,
            ..Default::default()
        };
        assert!(matches!(
            generate_corpus(&cfg),
            Err(SynthError::Infeasible(_))
        ));
        let cfg = SynthConfig {
            test_pairs: 64,
            ..Default::default()
        };
        assert!(matches!(
            generate_corpus(&cfg),
            Err(SynthError::Infeasible(_))
        ));
        let cfg = SynthConfig {
            target_avgdl: 3.0,
            ..Default::default()
        };
        assert!(matches!(
            generate_corpus(&cfg),
            Err(SynthError::Infeasible(_))
        ));
        let cfg = SynthConfig {
            min_shared: 21,
            ..Default::default()
        };
        assert!(matches!(
            generate_corpus(&cfg),
            Err(SynthError::Infeasible(_))
        ));
    }
}
