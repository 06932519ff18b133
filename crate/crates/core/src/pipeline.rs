//! End-to-end stages and their output files.
//!
//! | stage   | writes                                            |
//! |---------|---------------------------------------------------|
//! | link    | `links.csv`, `ambiguities.csv`                    |
//! | extract | `interests.jsonl`                                 |
//! | score   | `scores.csv`                                      |
//! | report  | `summary.json`, `plotdata/hist_*.csv`, `box_*.csv` |
//!
//! The report stage reads `scores.csv` back, so it summarizes exactly the
//! six-digit values that were written. Every output is a deterministic
//! function of the input files and the configuration.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::identity::{link_identities, Linking};
use crate::ingest::{load_dataset_dir, Dataset, Platform};
use crate::interests::{ItemCatalog, ItemInterestsLine};
use crate::metrics::{Metric, MetricConfig, ScoreCounts, ScoreRecord, Scorer};
use crate::ratio::{format_score, parse_score, Score};
use crate::report::{summarize, write_plotdata, write_summary_json, DistributionSummary};
use crate::synthgen::{brute_force_scores, DEFAULT_ORACLE_CAP};

pub const LINKS_FILE: &str = "links.csv";
pub const AMBIGUITIES_FILE: &str = "ambiguities.csv";
pub const INTERESTS_FILE: &str = "interests.jsonl";
pub const SCORES_FILE: &str = "scores.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const PLOTDATA_DIR: &str = "plotdata";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricSelection {
    Cross,
    Pairs,
    Co,
    #[default]
    All,
}

impl MetricSelection {
    pub fn metrics(self) -> Vec<Metric> {
        Metric::all()
            .into_iter()
            .filter(|m| {
                matches!(
                    (self, m),
                    (MetricSelection::All, _)
                        | (MetricSelection::Cross, Metric::Cross)
                        | (MetricSelection::Pairs, Metric::Pair(_))
                        | (MetricSelection::Co, Metric::Co(_))
                )
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub output: PathBuf,
    pub selection: MetricSelection,
    pub metric: MetricConfig,
    pub threads: Option<usize>,
    pub oracle_cap: usize,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, output: impl Into<PathBuf>) -> Self {
        RunConfig {
            input: input.into(),
            output: output.into(),
            selection: MetricSelection::default(),
            metric: MetricConfig::default(),
            threads: None,
            oracle_cap: DEFAULT_ORACLE_CAP,
        }
    }
}

/// Every field optional; used for both the config file and command-line
/// flags before they are layered.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub selection: Option<MetricSelection>,
    pub membership: Option<crate::metrics::Membership>,
    pub empty_side: Option<crate::metrics::EmptySidePolicy>,
    pub threads: Option<usize>,
    pub oracle_cap: Option<usize>,
}

impl PartialConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `self` win over `lower`.
    pub fn or(self, lower: PartialConfig) -> PartialConfig {
        PartialConfig {
            input: self.input.or(lower.input),
            output: self.output.or(lower.output),
            selection: self.selection.or(lower.selection),
            membership: self.membership.or(lower.membership),
            empty_side: self.empty_side.or(lower.empty_side),
            threads: self.threads.or(lower.threads),
            oracle_cap: self.oracle_cap.or(lower.oracle_cap),
        }
    }

    pub fn resolve(self) -> Result<RunConfig> {
        let input = self
            .input
            .ok_or_else(|| Error::Config("no input directory given".into()))?;
        let output = self
            .output
            .ok_or_else(|| Error::Config("no output directory given".into()))?;
        if self.threads == Some(0) {
            return Err(Error::Config("thread count must be positive".into()));
        }
        Ok(RunConfig {
            input,
            output,
            selection: self.selection.unwrap_or_default(),
            metric: MetricConfig {
                membership: self.membership.unwrap_or_default(),
                empty_side: self.empty_side.unwrap_or_default(),
            },
            threads: self.threads,
            oracle_cap: self.oracle_cap.unwrap_or(DEFAULT_ORACLE_CAP),
        })
    }
}

/// Sizes the global worker pool. Only the first call in a process has an
/// effect.
pub fn configure_threads(threads: Option<usize>) {
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

pub fn write_links(linking: &Linking, out: &Path) -> Result<()> {
    create_dir(out)?;
    let mut w = csv::Writer::from_path(out.join(LINKS_FILE))?;
    w.write_record(["dev_id", "a_user_id", "b_user_id"])?;
    for l in &linking.links {
        w.write_record([&l.dev_id, &l.a_user_id, &l.b_user_id])?;
    }
    w.flush().map_err(|e| Error::io(out.join(LINKS_FILE), e))?;

    let mut w = csv::Writer::from_path(out.join(AMBIGUITIES_FILE))?;
    w.write_record(["email_md5", "a_user_ids", "b_user_ids"])?;
    for a in &linking.ambiguities {
        w.write_record([
            &a.email_md5,
            &a.a_user_ids.join(";"),
            &a.b_user_ids.join(";"),
        ])?;
    }
    w.flush()
        .map_err(|e| Error::io(out.join(AMBIGUITIES_FILE), e))
}

pub fn write_interests(dataset: &Dataset, catalog: &ItemCatalog, out: &Path) -> Result<()> {
    create_dir(out)?;
    let path = out.join(INTERESTS_FILE);
    let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
    let mut w = BufWriter::new(file);
    let vocab = &dataset.vocabulary;
    let repos = dataset
        .repos
        .iter()
        .zip(&catalog.repos)
        .map(|(r, s)| ItemInterestsLine {
            item_id: &r.repo_id,
            platform: Platform::A,
            interests: s.names(vocab),
        });
    let questions = dataset
        .questions
        .iter()
        .zip(&catalog.questions)
        .map(|(q, s)| ItemInterestsLine {
            item_id: &q.question_id,
            platform: Platform::B,
            interests: s.names(vocab),
        });
    for line in repos.chain(questions) {
        serde_json::to_writer(&mut w, &line)?;
        w.write_all(b"\n").map_err(|e| Error::io(&path, e))?;
    }
    w.flush().map_err(|e| Error::io(&path, e))
}

pub fn write_scores(scorer: &Scorer, records: &[ScoreRecord], out: &Path) -> Result<()> {
    create_dir(out)?;
    let path = out.join(SCORES_FILE);
    let mut w = csv::Writer::from_writer(BufWriter::new(
        File::create(&path).map_err(|e| Error::io(&path, e))?,
    ));
    w.write_record([
        "dev_id",
        "metric",
        "value",
        "shared_r",
        "shared_q",
        "denom_r",
        "denom_q",
        "neighbors",
    ])?;
    let links = scorer.links();
    for r in records {
        let counts: [String; 5] = match r.counts {
            ScoreCounts::Overlap {
                shared_r,
                shared_q,
                denom_r,
                denom_q,
            } => [
                shared_r.to_string(),
                shared_q.to_string(),
                denom_r.to_string(),
                denom_q.to_string(),
                String::new(),
            ],
            ScoreCounts::Neighbors(n) => [
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                n.to_string(),
            ],
        };
        w.write_record(
            [
                links[r.dev as usize].dev_id.clone(),
                r.metric.to_string(),
                format_score(r.value.as_ref()),
            ]
            .iter()
            .chain(&counts),
        )?;
    }
    w.flush().map_err(|e| Error::io(&path, e))
}

/// One parsed `scores.csv` row.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreRow {
    pub dev_id: String,
    pub metric: String,
    pub value: Option<Score>,
}

pub fn read_scores(path: &Path) -> Result<Vec<ScoreRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Config(format!("{}: {other:?}", path.display())),
    })?;
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let malformed = |message: String| Error::Malformed {
            file: SCORES_FILE.into(),
            line: i + 2,
            message,
        };
        if rec.len() < 3 {
            return Err(malformed("expected at least 3 columns".into()));
        }
        let value =
            parse_score(&rec[2]).ok_or_else(|| malformed(format!("bad value '{}'", &rec[2])))?;
        rows.push(ScoreRow {
            dev_id: rec[0].to_string(),
            metric: rec[1].to_string(),
            value,
        });
    }
    Ok(rows)
}

/// Summaries per metric, in order of first appearance.
pub fn summarize_rows(rows: &[ScoreRow]) -> Vec<DistributionSummary> {
    let mut order: Vec<&str> = Vec::new();
    let mut groups: HashMap<&str, Vec<Option<Score>>> = HashMap::new();
    for row in rows {
        let g = groups.entry(&row.metric).or_insert_with(|| {
            order.push(&row.metric);
            Vec::new()
        });
        g.push(row.value.clone());
    }
    order
        .into_iter()
        .map(|m| summarize(m, &groups[m]))
        .collect()
}

pub fn write_report(summaries: &[DistributionSummary], out: &Path) -> Result<()> {
    create_dir(out)?;
    write_summary_json(&out.join(SUMMARY_FILE), summaries)?;
    write_plotdata(&out.join(PLOTDATA_DIR), summaries)
}

pub fn run_link(cfg: &RunConfig) -> Result<Linking> {
    let dataset = load_dataset_dir(&cfg.input)?;
    let linking = link_identities(&dataset.users_a, &dataset.users_b);
    write_links(&linking, &cfg.output)?;
    Ok(linking)
}

pub fn run_extract(cfg: &RunConfig) -> Result<ItemCatalog> {
    let dataset = load_dataset_dir(&cfg.input)?;
    let catalog = ItemCatalog::build(&dataset);
    write_interests(&dataset, &catalog, &cfg.output)?;
    Ok(catalog)
}

fn score_loaded(
    cfg: &RunConfig,
    dataset: &Dataset,
    linking: &Linking,
) -> Result<(Scorer, Vec<ScoreRecord>)> {
    let scorer = Scorer::build(dataset, linking.links.clone(), cfg.metric)?;
    let records = scorer.score_all(&cfg.selection.metrics());
    write_scores(&scorer, &records, &cfg.output)?;
    Ok((scorer, records))
}

pub fn run_score(cfg: &RunConfig) -> Result<Vec<ScoreRecord>> {
    let dataset = load_dataset_dir(&cfg.input)?;
    let linking = link_identities(&dataset.users_a, &dataset.users_b);
    Ok(score_loaded(cfg, &dataset, &linking)?.1)
}

/// Summarizes `scores.csv` from the output directory.
pub fn run_report(cfg: &RunConfig) -> Result<Vec<DistributionSummary>> {
    let rows = read_scores(&cfg.output.join(SCORES_FILE))?;
    let summaries = summarize_rows(&rows);
    write_report(&summaries, &cfg.output)?;
    Ok(summaries)
}

/// Link, extract, score and report with a single load of the inputs.
pub fn run_all(cfg: &RunConfig) -> Result<Vec<DistributionSummary>> {
    let dataset = load_dataset_dir(&cfg.input)?;
    let linking = link_identities(&dataset.users_a, &dataset.users_b);
    write_links(&linking, &cfg.output)?;
    let (scorer, _) = score_loaded(cfg, &dataset, &linking)?;
    write_interests(&dataset, scorer.catalog(), &cfg.output)?;
    run_report(cfg)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub dev_id: String,
    pub metric: Metric,
    pub engine: Option<Option<Score>>,
    pub oracle: Option<Option<Score>>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct OracleReport {
    pub compared: usize,
    pub mismatches: Vec<Mismatch>,
}

/// `None` when a side produced no row for the key.
type Slot = Option<Option<Score>>;

/// Scores `dataset` with the indexed engine and with the brute-force
/// oracle, and lists every `(developer, metric)` whose values differ.
pub fn compare_with_oracle(
    dataset: &Dataset,
    config: MetricConfig,
    cap: usize,
) -> Result<OracleReport> {
    let linking = link_identities(&dataset.users_a, &dataset.users_b);
    let oracle = brute_force_scores(dataset, &linking.links, config, cap)?;
    let scorer = Scorer::build(dataset, linking.links.clone(), config)?;
    let engine = scorer.score_all(&Metric::all());

    let mut by_key: HashMap<(&str, Metric), (Slot, Slot)> = HashMap::new();
    for r in &engine {
        by_key
            .entry((&scorer.links()[r.dev as usize].dev_id, r.metric))
            .or_default()
            .0 = Some(r.value.clone());
    }
    for r in &oracle {
        by_key.entry((&r.dev_id, r.metric)).or_default().1 = Some(r.value.clone());
    }
    let compared = by_key.len();
    let mut mismatches: Vec<Mismatch> = by_key
        .into_iter()
        .filter(|(_, (e, o))| e != o)
        .map(|((dev_id, metric), (engine, oracle))| Mismatch {
            dev_id: dev_id.to_string(),
            metric,
            engine,
            oracle,
        })
        .collect();
    mismatches.sort_by(|a, b| (&a.dev_id, a.metric).cmp(&(&b.dev_id, b.metric)));
    Ok(OracleReport {
        compared,
        mismatches,
    })
}

pub fn run_oracle_check(cfg: &RunConfig) -> Result<OracleReport> {
    let dataset = load_dataset_dir(&cfg.input)?;
    compare_with_oracle(&dataset, cfg.metric, cfg.oracle_cap)
}
