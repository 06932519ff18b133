//! Loading and validation of the line-delimited input tables.
//!
//! Every table is a UTF-8 file with one JSON object per line (`tags.txt` is
//! one tag per line). After loading, all tables are sorted by primary key
//! and activities are deduplicated on `(user, kind, item)`, so two files
//! that differ only in line order or repeated activity lines load to equal
//! [`Dataset`]s.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interests::TagVocabulary;

pub const USERS_A_FILE: &str = "users_a.jsonl";
pub const USERS_B_FILE: &str = "users_b.jsonl";
pub const REPOS_FILE: &str = "repos.jsonl";
pub const QUESTIONS_FILE: &str = "questions.jsonl";
pub const ACTIVITIES_A_FILE: &str = "activities_a.jsonl";
pub const ACTIVITIES_B_FILE: &str = "activities_b.jsonl";
pub const TAGS_FILE: &str = "tags.txt";

/// Platform A hosts repositories, platform B hosts questions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Platform {
    A,
    B,
}

impl fmt::Display for Platform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Platform::A => f.write_str("A"),
            Platform::B => f.write_str("B"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActivityKind {
    Fork,
    Watch,
    Commit,
    PullRequest,
    Ask,
    Answer,
    Favorite,
}

impl ActivityKind {
    pub const ALL: [ActivityKind; 7] = [
        ActivityKind::Fork,
        ActivityKind::Watch,
        ActivityKind::Commit,
        ActivityKind::PullRequest,
        ActivityKind::Ask,
        ActivityKind::Answer,
        ActivityKind::Favorite,
    ];

    pub const PLATFORM_A: [ActivityKind; 4] = [
        ActivityKind::Fork,
        ActivityKind::Watch,
        ActivityKind::Commit,
        ActivityKind::PullRequest,
    ];

    pub const PLATFORM_B: [ActivityKind; 3] = [
        ActivityKind::Ask,
        ActivityKind::Answer,
        ActivityKind::Favorite,
    ];

    pub fn platform(self) -> Platform {
        match self {
            ActivityKind::Fork
            | ActivityKind::Watch
            | ActivityKind::Commit
            | ActivityKind::PullRequest => Platform::A,
            ActivityKind::Ask | ActivityKind::Answer | ActivityKind::Favorite => Platform::B,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ActivityKind::Fork => "fork",
            ActivityKind::Watch => "watch",
            ActivityKind::Commit => "commit",
            ActivityKind::PullRequest => "pull_request",
            ActivityKind::Ask => "ask",
            ActivityKind::Answer => "answer",
            ActivityKind::Favorite => "favorite",
        }
    }

    /// Dense slot in `0..7`, used by per-kind tables.
    pub(crate) fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ActivityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ActivityKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ActivityKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown activity kind '{s}'"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlatformAUser {
    pub user_id: String,
    #[serde(default)]
    pub email: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlatformBUser {
    pub user_id: String,
    #[serde(default)]
    pub email_md5: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepositoryItem {
    pub repo_id: String,
    #[serde(default)]
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionItem {
    pub question_id: String,
    #[serde(default)]
    pub tags: Vec<String>,
}

/// One developer action. The platform is implied by the kind.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActivityRecord {
    pub user_id: String,
    pub kind: ActivityKind,
    pub item_id: String,
}

impl ActivityRecord {
    pub fn new(user_id: impl Into<String>, kind: ActivityKind, item_id: impl Into<String>) -> Self {
        ActivityRecord {
            user_id: user_id.into(),
            kind,
            item_id: item_id.into(),
        }
    }

    pub fn platform(&self) -> Platform {
        self.kind.platform()
    }
}

#[derive(Serialize, Deserialize)]
struct ActivityLine {
    user_id: String,
    kind: String,
    item_id: String,
    #[serde(default, skip_serializing)]
    #[allow(dead_code)]
    timestamp: Option<String>,
}

/// All input tables, validated and in canonical order.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Dataset {
    pub users_a: Vec<PlatformAUser>,
    pub users_b: Vec<PlatformBUser>,
    pub repos: Vec<RepositoryItem>,
    pub questions: Vec<QuestionItem>,
    pub activities: Vec<ActivityRecord>,
    pub vocabulary: TagVocabulary,
}

impl Dataset {
    /// Sorts every table, collapses duplicate activities and validates keys
    /// and references. `load_dataset` goes through here, and so should any
    /// dataset built in memory.
    pub fn from_tables(
        mut users_a: Vec<PlatformAUser>,
        mut users_b: Vec<PlatformBUser>,
        mut repos: Vec<RepositoryItem>,
        mut questions: Vec<QuestionItem>,
        mut activities: Vec<ActivityRecord>,
        vocabulary: TagVocabulary,
    ) -> Result<Self> {
        for u in &mut users_b {
            u.email_md5.make_ascii_lowercase();
        }
        users_a.sort_by(|a, b| a.user_id.cmp(&b.user_id));
        users_b.sort_by(|a, b| a.user_id.cmp(&b.user_id));
        repos.sort_by(|a, b| a.repo_id.cmp(&b.repo_id));
        questions.sort_by(|a, b| a.question_id.cmp(&b.question_id));
        check_keys(USERS_A_FILE, users_a.iter().map(|u| u.user_id.as_str()))?;
        check_keys(USERS_B_FILE, users_b.iter().map(|u| u.user_id.as_str()))?;
        check_keys(REPOS_FILE, repos.iter().map(|r| r.repo_id.as_str()))?;
        check_keys(
            QUESTIONS_FILE,
            questions.iter().map(|q| q.question_id.as_str()),
        )?;
        for u in &users_b {
            if !is_md5_hex(&u.email_md5) {
                return Err(Error::Malformed {
                    file: USERS_B_FILE.into(),
                    line: 0,
                    message: format!(
                        "user {}: email_md5 must be empty or 32 hex characters",
                        u.user_id
                    ),
                });
            }
        }

        activities.sort_unstable();
        activities.dedup();

        let dataset = Dataset {
            users_a,
            users_b,
            repos,
            questions,
            activities,
            vocabulary,
        };
        for a in &dataset.activities {
            dataset.check_references(a)?;
        }
        Ok(dataset)
    }

    fn check_references(&self, a: &ActivityRecord) -> Result<()> {
        let (user_known, item_known) = match a.platform() {
            Platform::A => (
                self.user_a_position(&a.user_id).is_some(),
                self.repo_position(&a.item_id).is_some(),
            ),
            Platform::B => (
                self.user_b_position(&a.user_id).is_some(),
                self.question_position(&a.item_id).is_some(),
            ),
        };
        let record = || format!("activity ({}, {}, {})", a.user_id, a.kind, a.item_id);
        if !item_known {
            return Err(Error::DanglingReference {
                reference: a.item_id.clone(),
                record: record(),
            });
        }
        if !user_known {
            return Err(Error::DanglingReference {
                reference: a.user_id.clone(),
                record: record(),
            });
        }
        Ok(())
    }

    pub fn user_a_position(&self, id: &str) -> Option<usize> {
        self.users_a
            .binary_search_by(|u| u.user_id.as_str().cmp(id))
            .ok()
    }

    pub fn user_b_position(&self, id: &str) -> Option<usize> {
        self.users_b
            .binary_search_by(|u| u.user_id.as_str().cmp(id))
            .ok()
    }

    pub fn repo_position(&self, id: &str) -> Option<usize> {
        self.repos
            .binary_search_by(|r| r.repo_id.as_str().cmp(id))
            .ok()
    }

    pub fn question_position(&self, id: &str) -> Option<usize> {
        self.questions
            .binary_search_by(|q| q.question_id.as_str().cmp(id))
            .ok()
    }
}

fn check_keys<'a>(file: &str, sorted: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut prev: Option<&str> = None;
    for key in sorted {
        if key.is_empty() {
            return Err(Error::Malformed {
                file: file.into(),
                line: 0,
                message: "empty primary key".into(),
            });
        }
        if prev == Some(key) {
            return Err(Error::DuplicateKey {
                file: file.into(),
                key: key.into(),
            });
        }
        prev = Some(key);
    }
    Ok(())
}

fn is_md5_hex(s: &str) -> bool {
    s.is_empty() || (s.len() == 32 && s.bytes().all(|b| b.is_ascii_hexdigit()))
}

/// Locations of the seven canonical input files.
#[derive(Clone, Debug)]
pub struct DatasetPaths {
    pub users_a: PathBuf,
    pub users_b: PathBuf,
    pub repos: PathBuf,
    pub questions: PathBuf,
    pub activities_a: PathBuf,
    pub activities_b: PathBuf,
    pub tags: PathBuf,
}

impl DatasetPaths {
    pub fn in_dir(dir: impl AsRef<Path>) -> Self {
        let dir = dir.as_ref();
        DatasetPaths {
            users_a: dir.join(USERS_A_FILE),
            users_b: dir.join(USERS_B_FILE),
            repos: dir.join(REPOS_FILE),
            questions: dir.join(QUESTIONS_FILE),
            activities_a: dir.join(ACTIVITIES_A_FILE),
            activities_b: dir.join(ACTIVITIES_B_FILE),
            tags: dir.join(TAGS_FILE),
        }
    }
}

fn display_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<(usize, T)>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| Error::Malformed {
            file: display_name(path),
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push((i + 1, record));
    }
    Ok(out)
}

fn read_activities(path: &Path, platform: Platform) -> Result<Vec<ActivityRecord>> {
    read_jsonl::<ActivityLine>(path)?
        .into_iter()
        .map(|(line, raw)| {
            let malformed = |message: String| Error::Malformed {
                file: display_name(path),
                line,
                message,
            };
            let kind: ActivityKind = raw.kind.parse().map_err(malformed)?;
            if kind.platform() != platform {
                return Err(malformed(format!(
                    "activity kind '{kind}' is not valid on platform {platform}"
                )));
            }
            if raw.user_id.is_empty() || raw.item_id.is_empty() {
                return Err(malformed("empty user_id or item_id".into()));
            }
            Ok(ActivityRecord::new(raw.user_id, kind, raw.item_id))
        })
        .collect()
}

fn read_tags(path: &Path) -> Result<TagVocabulary> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut tags = Vec::new();
    for line in BufReader::new(file).lines() {
        tags.push(line.map_err(|e| Error::io(path, e))?);
    }
    Ok(TagVocabulary::new(tags))
}

fn strip_lines<T>(rows: Vec<(usize, T)>) -> Vec<T> {
    rows.into_iter().map(|(_, r)| r).collect()
}

/// Reads and validates all seven input files. Files are parsed in parallel.
pub fn load_dataset(paths: &DatasetPaths) -> Result<Dataset> {
    let ((users_a, users_b), ((repos, questions), ((acts_a, acts_b), tags))) = rayon::join(
        || {
            rayon::join(
                || read_jsonl::<PlatformAUser>(&paths.users_a),
                || read_jsonl::<PlatformBUser>(&paths.users_b),
            )
        },
        || {
            rayon::join(
                || {
                    rayon::join(
                        || read_jsonl::<RepositoryItem>(&paths.repos),
                        || read_jsonl::<QuestionItem>(&paths.questions),
                    )
                },
                || {
                    rayon::join(
                        || {
                            rayon::join(
                                || read_activities(&paths.activities_a, Platform::A),
                                || read_activities(&paths.activities_b, Platform::B),
                            )
                        },
                        || read_tags(&paths.tags),
                    )
                },
            )
        },
    );
    let mut activities = acts_a?;
    activities.extend(acts_b?);
    Dataset::from_tables(
        strip_lines(users_a?),
        strip_lines(users_b?),
        strip_lines(repos?),
        strip_lines(questions?),
        activities,
        tags?,
    )
}

pub fn load_dataset_dir(dir: impl AsRef<Path>) -> Result<Dataset> {
    load_dataset(&DatasetPaths::in_dir(dir))
}

fn write_lines<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for row in rows {
        serde_json::to_writer(&mut w, &row)?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes `dataset` in the canonical file layout. Timestamps are not kept,
/// so the output omits them.
pub fn write_dataset(dataset: &Dataset, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let paths = DatasetPaths::in_dir(dir);
    write_lines(&paths.users_a, &dataset.users_a)?;
    write_lines(&paths.users_b, &dataset.users_b)?;
    write_lines(&paths.repos, &dataset.repos)?;
    write_lines(&paths.questions, &dataset.questions)?;
    for (path, platform) in [
        (&paths.activities_a, Platform::A),
        (&paths.activities_b, Platform::B),
    ] {
        let rows = dataset
            .activities
            .iter()
            .filter(|a| a.platform() == platform)
            .map(|a| ActivityLine {
                user_id: a.user_id.clone(),
                kind: a.kind.as_str().to_string(),
                item_id: a.item_id.clone(),
                timestamp: None,
            });
        write_lines(path, rows)?;
    }
    let file = File::create(&paths.tags).map_err(|e| Error::io(&paths.tags, e))?;
    let mut w = BufWriter::new(file);
    for tag in dataset.vocabulary.tags() {
        writeln!(w, "{tag}").map_err(|e| Error::io(&paths.tags, e))?;
    }
    w.flush().map_err(|e| Error::io(&paths.tags, e))
}
