#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use md5::{Digest, Md5};
use proptest::prelude::*;
use regex::Regex;

use devinterest::ingest::{PlatformAUser, PlatformBUser, QuestionItem, RepositoryItem};
use devinterest::{ActivityKind, ActivityRecord, Dataset, TagVocabulary};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn fixture_lines(name: &str) -> Vec<String> {
    std::fs::read_to_string(fixture(name))
        .unwrap()
        .lines()
        .map(String::from)
        .collect()
}

/// Word-boundary matcher written as a regular expression over the
/// lowercased description. Token characters are `[a-z0-9#+.-]`; a tag
/// without a dot may be followed by dots before the boundary; a hyphenated
/// tag also matches as its parts separated by non-token characters.
pub fn regex_match_tag(description: &str, tag: &str) -> bool {
    const SEP: &str = "[^a-z0-9#+.-]";
    let tag = tag.to_lowercase();
    let dots = if tag.contains('.') { "" } else { r"\.*" };
    let whole: Vec<&str> = tag
        .split(|c: char| !matches!(c, 'a'..='z' | '0'..='9' | '#' | '+' | '.' | '-'))
        .map(|t| {
            if dots.is_empty() {
                t
            } else {
                t.trim_end_matches('.')
            }
        })
        .filter(|t| !t.is_empty())
        .collect();
    if whole.is_empty() {
        return false;
    }
    let mut forms = vec![whole.clone()];
    if tag.contains('-') {
        let parts: Vec<&str> = whole
            .iter()
            .flat_map(|t| t.split('-'))
            .filter(|t| !t.is_empty())
            .collect();
        if !parts.is_empty() {
            forms.push(parts);
        }
    }
    let lower = description.to_lowercase();
    forms.iter().any(|form| {
        let body: Vec<String> = form
            .iter()
            .map(|t| format!("{}{dots}", regex::escape(t)))
            .collect();
        let pattern = format!("(?:^|{SEP}){}(?:{SEP}|$)", body.join(&format!("{SEP}+")));
        Regex::new(&pattern).unwrap().is_match(&lower)
    })
}

pub const ADVERSARIAL_TAGS: [&str; 14] = [
    "java",
    "javascript",
    "c",
    "c#",
    "c++",
    "node.js",
    "ruby-on-rails",
    "ruby",
    "rails",
    ".net",
    "objective-c",
    "python",
    "go",
    "f#",
];

const DESCRIPTION_WORDS: [&str; 24] = [
    "java",
    "Java.",
    "javascript",
    "c",
    "C#",
    "c++",
    "node.js",
    "node.js.",
    "ruby",
    "on",
    "rails",
    "ruby-on-rails",
    ".net",
    "asp.net",
    "objective-c",
    "objective",
    "python",
    "go",
    "golang",
    "f#",
    "tool",
    "the",
    "java-based",
    "...",
];

const SEPARATORS: [&str; 7] = [" ", " ", ", ", "/", " (", ") ", "-"];

pub fn arb_description() -> impl Strategy<Value = String> {
    prop::collection::vec(
        (
            prop::sample::select(&DESCRIPTION_WORDS[..]),
            prop::sample::select(&SEPARATORS[..]),
        ),
        0..8,
    )
    .prop_map(|parts| parts.into_iter().map(|(w, s)| format!("{w}{s}")).collect())
}

/// Small raw tables with colliding emails, unlinked users, empty items and
/// repeated activities. Every table is in generation order, not sorted.
#[derive(Clone, Debug)]
pub struct RawTables {
    pub users_a: Vec<PlatformAUser>,
    pub users_b: Vec<PlatformBUser>,
    pub repos: Vec<RepositoryItem>,
    pub questions: Vec<QuestionItem>,
    pub activities: Vec<ActivityRecord>,
    pub vocabulary: Vec<String>,
}

impl RawTables {
    pub fn dataset(&self) -> Dataset {
        Dataset::from_tables(
            self.users_a.clone(),
            self.users_b.clone(),
            self.repos.clone(),
            self.questions.clone(),
            self.activities.clone(),
            TagVocabulary::new(&self.vocabulary),
        )
        .unwrap()
    }
}

const VOCAB: [&str; 8] = [
    "java",
    "android",
    "c#",
    "ios",
    "python",
    "ruby-on-rails",
    "node.js",
    "go",
];

const REPO_WORDS: [&str; 10] = [
    "java",
    "Android",
    "c#",
    "iOS",
    "python",
    "ruby on rails",
    "node.js",
    "go",
    "library",
    "app",
];

pub fn arb_tables() -> impl Strategy<Value = RawTables> {
    (2usize..9, 0usize..4, 1usize..9, 1usize..9)
        .prop_flat_map(|(n_users, extra, n_repos, n_q)| {
            let emails = prop::collection::vec(0usize..(n_users + 2), n_users);
            let b_emails = prop::collection::vec(
                prop::option::weighted(0.9, 0usize..(n_users + 2)),
                n_users + extra,
            );
            let repos = prop::collection::vec(
                prop::collection::vec(prop::sample::select(&REPO_WORDS[..]), 0..4),
                n_repos,
            );
            let questions = prop::collection::vec(
                prop::collection::btree_set(prop::sample::select(&VOCAB[..]), 0..3),
                n_q,
            );
            let a_acts = prop::collection::vec(
                (
                    0..n_users,
                    prop::sample::select(&ActivityKind::PLATFORM_A[..]),
                    0..n_repos,
                ),
                0..30,
            );
            let b_acts = prop::collection::vec(
                (
                    0..n_users + extra,
                    prop::sample::select(&ActivityKind::PLATFORM_B[..]),
                    0..n_q,
                ),
                0..30,
            );
            (emails, b_emails, repos, questions, a_acts, b_acts)
        })
        .prop_map(|(emails, b_emails, repos, questions, a_acts, b_acts)| {
            let users_a = emails
                .iter()
                .enumerate()
                .map(|(i, e)| PlatformAUser {
                    user_id: format!("a{i}"),
                    email: if i % 2 == 0 {
                        format!("u{e}@x.org")
                    } else {
                        format!(" U{e}@X.org")
                    },
                })
                .collect();
            let users_b = b_emails
                .iter()
                .enumerate()
                .map(|(i, e)| PlatformBUser {
                    user_id: format!("b{i}"),
                    email_md5: e.map_or(String::new(), |e| md5_of(&format!("u{e}@x.org"))),
                })
                .collect();
            let repos = repos
                .into_iter()
                .enumerate()
                .map(|(i, words)| RepositoryItem {
                    repo_id: format!("r{i}"),
                    description: words.join(" "),
                })
                .collect();
            let questions = questions
                .into_iter()
                .enumerate()
                .map(|(i, tags)| QuestionItem {
                    question_id: format!("q{i}"),
                    tags: tags.into_iter().map(|t| t.to_uppercase()).collect(),
                })
                .collect();
            let activities = a_acts
                .into_iter()
                .map(|(u, k, r)| ActivityRecord::new(format!("a{u}"), k, format!("r{r}")))
                .chain(
                    b_acts
                        .into_iter()
                        .map(|(u, k, q)| ActivityRecord::new(format!("b{u}"), k, format!("q{q}"))),
                )
                .collect();
            RawTables {
                users_a,
                users_b,
                repos,
                questions,
                activities,
                vocabulary: VOCAB.iter().map(|s| s.to_string()).collect(),
            }
        })
}

pub fn md5_of(s: &str) -> String {
    hex::encode(Md5::digest(s.as_bytes()))
}

pub fn names<'a>(items: impl IntoIterator<Item = &'a str>) -> BTreeSet<String> {
    items.into_iter().map(String::from).collect()
}
