//! Synthetic two-platform datasets with planted interest overlap.
//!
//! The vocabulary is cut into *topics* of `topic_size` tags. Item `j` on
//! either platform belongs to topic `j % n_topics`, and every non-empty item
//! carries its topic's first tag (the anchor) plus a few more tags from the
//! same topic. Each developer draws a platform-A topic and, with probability
//! `overlap`, reuses it on platform B; otherwise the platform-B topic is a
//! different one. With `noise = 0` the cross-platform score of a developer
//! active on both platforms is therefore exactly 1 or exactly 0.
//!
//! Repository descriptions embed their tags among filler words that are not
//! in the vocabulary, so extraction recovers the planted sets exactly.

mod oracle;

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::identity::md5_hex;
use crate::ingest::{
    ActivityKind, ActivityRecord, Dataset, Platform, PlatformAUser, PlatformBUser, QuestionItem,
    RepositoryItem,
};
use crate::interests::TagVocabulary;

pub use oracle::{brute_force_scores, OracleRow, DEFAULT_ORACLE_CAP};

/// Inclusive integer range a count is drawn from uniformly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRange {
    pub min: u32,
    pub max: u32,
}

impl CountRange {
    pub const fn new(min: u32, max: u32) -> Self {
        CountRange { min, max }
    }
}

fn default_topic_size() -> usize {
    8
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n_developers: usize,
    pub n_repos: usize,
    pub n_questions: usize,
    pub vocabulary_size: usize,
    #[serde(default = "default_topic_size")]
    pub topic_size: usize,
    pub tags_per_item: CountRange,
    /// Items per developer for each kind; missing kinds get none.
    pub activities: BTreeMap<ActivityKind, CountRange>,
    /// Probability that a developer's two platforms share one topic.
    pub overlap: f64,
    /// Probability that an activity targets a uniformly random item instead
    /// of one from the developer's topic.
    #[serde(default)]
    pub noise: f64,
    /// Fraction of items generated without any tag.
    #[serde(default)]
    pub empty_item_fraction: f64,
    /// Extra users per platform that do not link, with their own activity.
    #[serde(default)]
    pub unlinked_users: usize,
    pub seed: u64,
}

impl GenSpec {
    /// A moderate all-kinds activity profile (about nine items per developer).
    pub fn standard_activities() -> BTreeMap<ActivityKind, CountRange> {
        BTreeMap::from([
            (ActivityKind::Fork, CountRange::new(1, 2)),
            (ActivityKind::Watch, CountRange::new(1, 4)),
            (ActivityKind::Commit, CountRange::new(0, 2)),
            (ActivityKind::PullRequest, CountRange::new(0, 1)),
            (ActivityKind::Ask, CountRange::new(0, 1)),
            (ActivityKind::Answer, CountRange::new(1, 3)),
            (ActivityKind::Favorite, CountRange::new(0, 2)),
        ])
    }

    pub fn new(n_developers: usize, n_items: usize, overlap: f64, seed: u64) -> Self {
        GenSpec {
            n_developers,
            n_repos: n_items,
            n_questions: n_items,
            vocabulary_size: 240,
            topic_size: default_topic_size(),
            tags_per_item: CountRange::new(1, 3),
            activities: Self::standard_activities(),
            overlap,
            noise: 0.0,
            empty_item_fraction: 0.0,
            unlinked_users: 0,
            seed,
        }
    }

    pub fn n_topics(&self) -> usize {
        self.vocabulary_size / self.topic_size.max(1)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InfeasibleSpec(msg));
        if self.n_developers == 0 || self.n_repos == 0 || self.n_questions == 0 {
            return fail("developer and item counts must be positive".into());
        }
        if self.topic_size == 0 || self.vocabulary_size == 0 {
            return fail("vocabulary and topic size must be positive".into());
        }
        for (name, p) in [
            ("overlap", self.overlap),
            ("noise", self.noise),
            ("empty_item_fraction", self.empty_item_fraction),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return fail(format!("{name} = {p} is outside [0, 1]"));
            }
        }
        let topics = self.n_topics();
        if topics < 2 {
            return fail(format!(
                "vocabulary of {} tags holds {topics} topic(s) of {}; at least 2 are needed",
                self.vocabulary_size, self.topic_size
            ));
        }
        let t = self.tags_per_item;
        if t.min == 0 || t.min > t.max {
            return fail(format!(
                "tags_per_item {}..={} is empty or allows 0",
                t.min, t.max
            ));
        }
        if t.max as usize > self.topic_size {
            return fail(format!(
                "{} tags per item exceed topic size {}",
                t.max, self.topic_size
            ));
        }
        if self.n_repos < topics || self.n_questions < topics {
            return fail(format!(
                "each platform needs at least {topics} items, one per topic"
            ));
        }
        for (kind, r) in &self.activities {
            if r.min > r.max {
                return fail(format!("activity range for {kind} is empty"));
            }
        }
        Ok(())
    }
}

/// A generated dataset and the interests planted in its items.
#[derive(Clone, Debug)]
pub struct Generated {
    pub dataset: Dataset,
    pub planted_repos: BTreeMap<String, BTreeSet<String>>,
    pub planted_questions: BTreeMap<String, BTreeSet<String>>,
}

const FILLER: [&str; 24] = [
    "a",
    "simple",
    "fast",
    "library",
    "for",
    "and",
    "with",
    "the",
    "demo",
    "service",
    "lightweight",
    "modern",
    "utility",
    "framework",
    "toolkit",
    "built",
    "using",
    "project",
    "sample",
    "experimental",
    "plugin",
    "wrapper",
    "engine",
    "client",
];

/// Tag spellings cycle through plain, hyphenated, dotted, `#` and `++`
/// forms. No tag's word sequence is a run inside another's.
pub fn synthetic_tag(i: usize) -> String {
    match i % 5 {
        0 => format!("t{i}"),
        1 => format!("t{i}-kit"),
        2 => format!("t{i}.js"),
        3 => format!("t{i}#"),
        _ => format!("t{i}++"),
    }
}

fn random_case(rng: &mut ChaCha8Rng, s: &str) -> String {
    match rng.gen_range(0..3) {
        0 => s.to_string(),
        1 => s.to_uppercase(),
        _ => {
            let mut c = s.chars();
            c.next()
                .map(|f| f.to_uppercase().chain(c).collect())
                .unwrap_or_default()
        }
    }
}

fn render_tag(rng: &mut ChaCha8Rng, tag: &str) -> String {
    let spelled = if tag.contains('-') && rng.gen_bool(0.5) {
        tag.replace('-', " ")
    } else {
        tag.to_string()
    };
    random_case(rng, &spelled)
}

fn describe(rng: &mut ChaCha8Rng, tags: &[String]) -> String {
    let lead = FILLER[rng.gen_range(0..FILLER.len())];
    let mut parts: Vec<String> = vec![random_case(rng, lead)];
    for tag in tags {
        let rendered = render_tag(rng, tag);
        parts.push(match rng.gen_range(0..4) {
            0 => format!("({rendered})"),
            1 => format!("{rendered},"),
            _ => rendered,
        });
        for _ in 0..rng.gen_range(0..3) {
            parts.push(FILLER[rng.gen_range(0..FILLER.len())].to_string());
        }
    }
    let ends_in_tag = parts.len() > 1 && !FILLER.contains(&parts[parts.len() - 1].as_str());
    let mut text = parts.join(" ");
    if rng.gen_bool(0.5) && !ends_in_tag {
        text.push('.');
    }
    text
}

struct Topics {
    size: usize,
    count: usize,
}

impl Topics {
    fn tag_index(&self, topic: usize, k: usize) -> usize {
        topic * self.size + k
    }

    /// Anchor plus `n - 1` other distinct tags of `topic`.
    fn draw_tags(&self, rng: &mut ChaCha8Rng, topic: usize, n: usize) -> Vec<usize> {
        let mut rest: Vec<usize> = (1..self.size).collect();
        rest.shuffle(rng);
        let mut out = vec![self.tag_index(topic, 0)];
        out.extend(
            rest.into_iter()
                .take(n - 1)
                .map(|k| self.tag_index(topic, k)),
        );
        out
    }
}

fn item_tags(
    spec: &GenSpec,
    topics: &Topics,
    rng: &mut ChaCha8Rng,
    n_items: usize,
    vocab: &[String],
) -> Vec<Vec<String>> {
    (0..n_items)
        .map(|j| {
            if rng.gen_bool(spec.empty_item_fraction) {
                return Vec::new();
            }
            let n = rng.gen_range(spec.tags_per_item.min..=spec.tags_per_item.max) as usize;
            topics
                .draw_tags(rng, j % topics.count, n)
                .into_iter()
                .map(|t| vocab[t].clone())
                .collect()
        })
        .collect()
}

fn pick_items(
    rng: &mut ChaCha8Rng,
    count: u32,
    topic: usize,
    n_topics: usize,
    n_items: usize,
    noise: f64,
) -> BTreeSet<usize> {
    let per_topic = (n_items - topic).div_ceil(n_topics);
    (0..count)
        .map(|_| {
            if noise > 0.0 && rng.gen_bool(noise) {
                rng.gen_range(0..n_items)
            } else {
                topic + n_topics * rng.gen_range(0..per_topic)
            }
        })
        .collect()
}

/// Generates a dataset from `spec`. Identical specs give identical datasets.
pub fn generate(spec: &GenSpec) -> Result<Generated> {
    spec.validate()?;
    let topics = Topics {
        size: spec.topic_size,
        count: spec.n_topics(),
    };
    let vocab: Vec<String> = (0..spec.vocabulary_size).map(synthetic_tag).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let repo_ids: Vec<String> = (0..spec.n_repos).map(|j| format!("r{j:06}")).collect();
    let question_ids: Vec<String> = (0..spec.n_questions).map(|j| format!("q{j:06}")).collect();
    let repo_tags = item_tags(spec, &topics, &mut rng, spec.n_repos, &vocab);
    let question_tags = item_tags(spec, &topics, &mut rng, spec.n_questions, &vocab);

    let repos = repo_ids
        .iter()
        .zip(&repo_tags)
        .map(|(id, tags)| RepositoryItem {
            repo_id: id.clone(),
            description: describe(&mut rng, tags),
        })
        .collect();
    let questions = question_ids
        .iter()
        .zip(&question_tags)
        .map(|(id, tags)| {
            let mut shown: Vec<String> = tags
                .iter()
                .map(|t| {
                    let t = random_case(&mut rng, t);
                    if rng.gen_bool(0.1) {
                        format!(" {t} ")
                    } else {
                        t
                    }
                })
                .collect();
            shown.shuffle(&mut rng);
            QuestionItem {
                question_id: id.clone(),
                tags: shown,
            }
        })
        .collect();

    let mut users_a = Vec::new();
    let mut users_b = Vec::new();
    let mut activities = Vec::new();
    let total_users = spec.n_developers + spec.unlinked_users;
    for u in 0..total_users {
        let linked = u < spec.n_developers;
        let (a_id, b_id, email, b_email) = if linked {
            let email = format!("dev{u}@example.org");
            (
                format!("gh{u:06}"),
                format!("so{u:06}"),
                email.clone(),
                email,
            )
        } else {
            let j = u - spec.n_developers;
            (
                format!("gh-x{j:06}"),
                format!("so-x{j:06}"),
                format!("nolink{j}@example.org"),
                format!("other{j}@example.net"),
            )
        };

        let mut dev_rng = ChaCha8Rng::seed_from_u64(spec.seed);
        dev_rng.set_stream(u as u64 + 1);
        let shared = dev_rng.gen::<f64>() < spec.overlap;
        let a_topic = dev_rng.gen_range(0..topics.count);
        let b_topic = if shared {
            a_topic
        } else {
            let t = dev_rng.gen_range(0..topics.count - 1);
            if t >= a_topic {
                t + 1
            } else {
                t
            }
        };

        let shown_email = match dev_rng.gen_range(0..3) {
            0 => email.clone(),
            1 => email.to_uppercase(),
            _ => format!("  {email} "),
        };
        users_a.push(PlatformAUser {
            user_id: a_id.clone(),
            email: shown_email,
        });
        users_b.push(PlatformBUser {
            user_id: b_id.clone(),
            email_md5: md5_hex(&b_email),
        });

        for kind in ActivityKind::ALL {
            let Some(range) = spec.activities.get(&kind) else {
                continue;
            };
            let count = dev_rng.gen_range(range.min..=range.max);
            let (topic, n_items, ids, user) = match kind.platform() {
                Platform::A => (a_topic, spec.n_repos, &repo_ids, &a_id),
                Platform::B => (b_topic, spec.n_questions, &question_ids, &b_id),
            };
            for item in pick_items(
                &mut dev_rng,
                count,
                topic,
                topics.count,
                n_items,
                spec.noise,
            ) {
                activities.push(ActivityRecord::new(user.clone(), kind, ids[item].clone()));
            }
        }
    }

    let planted = |ids: &[String], tags: &[Vec<String>]| {
        ids.iter()
            .cloned()
            .zip(tags.iter().map(|t| t.iter().cloned().collect()))
            .collect()
    };
    let planted_repos = planted(&repo_ids, &repo_tags);
    let planted_questions = planted(&question_ids, &question_tags);
    let dataset = Dataset::from_tables(
        users_a,
        users_b,
        repos,
        questions,
        activities,
        TagVocabulary::new(&vocab),
    )?;
    Ok(Generated {
        dataset,
        planted_repos,
        planted_questions,
    })
}
