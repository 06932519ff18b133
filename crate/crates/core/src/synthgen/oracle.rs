//! Straight-from-definition scoring used to check the indexed engine.
//!
//! Works on string ids and ordered sets, scans the full activity table per
//! developer, and finds co-participants by comparing every pair of
//! developers. It uses nothing from the index or metric code paths.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::identity::LinkedDeveloper;
use crate::ingest::{ActivityKind, Dataset, Platform};
use crate::interests::{match_tag, normalize_tag};
use crate::metrics::{EmptySidePolicy, Membership, Metric, MetricConfig, CO_PARTICIPATION_KINDS};
use crate::ratio::Score;

pub const DEFAULT_ORACLE_CAP: usize = 200;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleRow {
    pub dev_id: String,
    pub metric: Metric,
    pub value: Option<Score>,
}

type Tags = BTreeSet<String>;
type Items = BTreeSet<String>;

fn frac(num: usize, den: usize) -> Score {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

struct Truth<'a> {
    repo_tags: BTreeMap<&'a str, Tags>,
    question_tags: BTreeMap<&'a str, Tags>,
    config: MetricConfig,
}

impl Truth<'_> {
    fn tags(&self, platform: Platform, item: &str) -> &Tags {
        match platform {
            Platform::A => &self.repo_tags[item],
            Platform::B => &self.question_tags[item],
        }
    }

    fn union(&self, platform: Platform, items: &Items) -> Tags {
        items
            .iter()
            .flat_map(|i| self.tags(platform, i).iter().cloned())
            .collect()
    }

    fn falls_in(&self, tags: &Tags, ci: &Tags) -> bool {
        match self.config.membership {
            Membership::Intersection => !tags.is_disjoint(ci),
            Membership::Subset => !tags.is_empty() && tags.is_subset(ci),
        }
    }

    fn overlap(&self, repos: &Items, questions: &Items) -> Option<Score> {
        let gh = self.union(Platform::A, repos);
        let so = self.union(Platform::B, questions);
        let ci: Tags = so.intersection(&gh).cloned().collect();
        let shared_r = repos
            .iter()
            .filter(|r| self.falls_in(self.tags(Platform::A, r), &ci))
            .count();
        let shared_q = questions
            .iter()
            .filter(|q| self.falls_in(self.tags(Platform::B, q), &ci))
            .count();
        let den = repos.len() + questions.len();
        (den > 0).then(|| frac(shared_r + shared_q, den))
    }
}

/// Every metric for every linked developer, evaluated from the definitions.
///
/// Item interests are taken from per-tag [`match_tag`] calls and raw
/// question tags. Fails when there are more than `cap` developers.
pub fn brute_force_scores(
    dataset: &Dataset,
    links: &[LinkedDeveloper],
    config: MetricConfig,
    cap: usize,
) -> Result<Vec<OracleRow>> {
    if links.len() > cap {
        return Err(Error::CapExceeded {
            actual: links.len(),
            cap,
        });
    }
    let vocab: Tags = dataset.vocabulary.tags().iter().cloned().collect();
    let truth = Truth {
        repo_tags: dataset
            .repos
            .iter()
            .map(|r| {
                let tags = vocab
                    .iter()
                    .filter(|t| match_tag(&r.description, t))
                    .cloned()
                    .collect();
                (r.repo_id.as_str(), tags)
            })
            .collect(),
        question_tags: dataset
            .questions
            .iter()
            .map(|q| {
                let tags = q
                    .tags
                    .iter()
                    .map(|t| normalize_tag(t))
                    .filter(|t| vocab.contains(t))
                    .collect();
                (q.question_id.as_str(), tags)
            })
            .collect(),
        config,
    };

    // items[d][kind] by scanning the whole activity table.
    let items: Vec<BTreeMap<ActivityKind, Items>> = links
        .iter()
        .map(|l| {
            let mut m: BTreeMap<ActivityKind, Items> = ActivityKind::ALL
                .iter()
                .map(|&k| (k, Items::new()))
                .collect();
            for a in &dataset.activities {
                let user = match a.kind.platform() {
                    Platform::A => &l.a_user_id,
                    Platform::B => &l.b_user_id,
                };
                if &a.user_id == user {
                    m.get_mut(&a.kind).unwrap().insert(a.item_id.clone());
                }
            }
            m
        })
        .collect();

    let mut rows = Vec::new();
    for (d, link) in links.iter().enumerate() {
        let mine = &items[d];
        for metric in Metric::all() {
            let value = match metric {
                Metric::Cross => {
                    let repos: Items = ActivityKind::PLATFORM_A
                        .iter()
                        .flat_map(|k| mine[k].iter().cloned())
                        .collect();
                    let questions: Items = ActivityKind::PLATFORM_B
                        .iter()
                        .flat_map(|k| mine[k].iter().cloned())
                        .collect();
                    truth.overlap(&repos, &questions)
                }
                Metric::Pair(pair) => {
                    let (repos, questions) = (&mine[&pair.gh()], &mine[&pair.so()]);
                    let one_side_empty = repos.is_empty() || questions.is_empty();
                    if one_side_empty && config.empty_side == EmptySidePolicy::Undefined {
                        None
                    } else {
                        truth.overlap(repos, questions)
                    }
                }
                Metric::Co(kind) => {
                    debug_assert!(CO_PARTICIPATION_KINDS.contains(&kind));
                    let platform = kind.platform();
                    let my_items = &mine[&kind];
                    let my_tags = truth.union(platform, my_items);
                    let mut sum = BigRational::zero();
                    let mut neighbors = 0usize;
                    for (o, other) in items.iter().enumerate() {
                        let theirs = &other[&kind];
                        if o == d || my_items.is_disjoint(theirs) {
                            continue;
                        }
                        neighbors += 1;
                        let shared = theirs
                            .iter()
                            .filter(|i| !truth.tags(platform, i).is_disjoint(&my_tags))
                            .count();
                        sum += frac(shared, theirs.len());
                    }
                    (neighbors > 0).then(|| sum / frac(neighbors, 1))
                }
            };
            rows.push(OracleRow {
                dev_id: link.dev_id.clone(),
                metric,
                value,
            });
        }
    }
    Ok(rows)
}
