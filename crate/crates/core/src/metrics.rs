//! Interest-similarity scores.
//!
//! * **Cross-platform**: the common interests `CI(d)` are the tags a
//!   developer shows on both platforms. The score is the fraction of the
//!   developer's repositories and questions whose interests fall in `CI(d)`.
//! * **Activity pair**: the same score with the repository side restricted to
//!   one platform-A kind and the question side to one platform-B kind.
//! * **Co-participation**: for a kind `k`, the mean over every developer
//!   `d'` sharing a `k` item with `d` of the fraction of `d'`'s `k` items
//!   that share a tag with the union of `d`'s `k` interests.
//!
//! All values are exact rationals.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::identity::LinkedDeveloper;
use crate::index::{DevIndex, ItemIndex, ParticipationIndex};
use crate::ingest::{ActivityKind, Dataset, Platform};
use crate::interests::{developer_interests, DeveloperInterests, InterestSet, ItemCatalog};
use crate::ratio::{ratio, Score};

/// How "an item's interests fall in `CI(d)`" is decided.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    /// The item shares at least one tag with `CI(d)`.
    #[default]
    Intersection,
    /// Every tag of the item is in `CI(d)`; items without tags never count.
    Subset,
}

/// Score of an activity pair when one of its two sides has no items.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmptySidePolicy {
    #[default]
    Undefined,
    /// Evaluate the formula anyway: `CI` is empty, so the score is 0.
    Zero,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricConfig {
    pub membership: Membership,
    pub empty_side: EmptySidePolicy,
}

/// Kinds with a co-participation score, in reporting order.
pub const CO_PARTICIPATION_KINDS: [ActivityKind; 6] = [
    ActivityKind::Fork,
    ActivityKind::Watch,
    ActivityKind::Commit,
    ActivityKind::PullRequest,
    ActivityKind::Answer,
    ActivityKind::Favorite,
];

const PAIR_GH_ORDER: [ActivityKind; 4] = [
    ActivityKind::Fork,
    ActivityKind::Commit,
    ActivityKind::PullRequest,
    ActivityKind::Watch,
];

/// A platform-A kind combined with a platform-B kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActivityPair {
    gh: ActivityKind,
    so: ActivityKind,
}

impl ActivityPair {
    pub fn new(gh: ActivityKind, so: ActivityKind) -> Result<Self> {
        if gh.platform() != Platform::A || so.platform() != Platform::B {
            return Err(Error::InvalidPair {
                gh: gh.to_string(),
                so: so.to_string(),
            });
        }
        Ok(ActivityPair { gh, so })
    }

    /// The twelve pairs, fork/commit/pull_request/watch crossed with
    /// ask/answer/favorite.
    pub fn all() -> Vec<ActivityPair> {
        PAIR_GH_ORDER
            .into_iter()
            .flat_map(|gh| {
                ActivityKind::PLATFORM_B
                    .into_iter()
                    .map(move |so| ActivityPair { gh, so })
            })
            .collect()
    }

    pub fn gh(self) -> ActivityKind {
        self.gh
    }

    pub fn so(self) -> ActivityKind {
        self.so
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Cross,
    Pair(ActivityPair),
    Co(ActivityKind),
}

impl Metric {
    /// Cross, the twelve pairs, then the six co-participation kinds.
    pub fn all() -> Vec<Metric> {
        let mut v = vec![Metric::Cross];
        v.extend(ActivityPair::all().into_iter().map(Metric::Pair));
        v.extend(CO_PARTICIPATION_KINDS.into_iter().map(Metric::Co));
        v
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Cross => f.write_str("cross"),
            Metric::Pair(p) => write!(f, "pair:{}:{}", p.gh, p.so),
            Metric::Co(k) => write!(f, "co:{k}"),
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("unknown metric '{s}'"));
        let kind = |k: &str| k.parse::<ActivityKind>().map_err(|_| bad());
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["cross"] => Ok(Metric::Cross),
            ["pair", gh, so] => Ok(Metric::Pair(ActivityPair::new(kind(gh)?, kind(so)?)?)),
            ["co", k] => {
                let k = kind(k)?;
                if !CO_PARTICIPATION_KINDS.contains(&k) {
                    return Err(Error::UnsupportedKind(k.to_string()));
                }
                Ok(Metric::Co(k))
            }
            _ => Err(bad()),
        }
    }
}

/// Cross-platform (or activity-pair) score with the counts behind it.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossPlatformScore {
    pub dev: DevIndex,
    pub ci: InterestSet,
    pub shared_r: usize,
    pub shared_q: usize,
    pub denom_r: usize,
    pub denom_q: usize,
    pub score: Option<Score>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairScore {
    pub pair: ActivityPair,
    pub overlap: CrossPlatformScore,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoParticipationScore {
    pub dev: DevIndex,
    pub kind: ActivityKind,
    pub neighbor_count: usize,
    pub score: Option<Score>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SharedItems {
    pub repos: Vec<ItemIndex>,
    pub questions: Vec<ItemIndex>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScoreCounts {
    Overlap {
        shared_r: usize,
        shared_q: usize,
        denom_r: usize,
        denom_q: usize,
    },
    Neighbors(usize),
}

/// One row of the score table.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreRecord {
    pub dev: DevIndex,
    pub metric: Metric,
    pub value: Option<Score>,
    pub counts: ScoreCounts,
}

impl From<CrossPlatformScore> for ScoreCounts {
    fn from(s: CrossPlatformScore) -> Self {
        ScoreCounts::Overlap {
            shared_r: s.shared_r,
            shared_q: s.shared_q,
            denom_r: s.denom_r,
            denom_q: s.denom_q,
        }
    }
}

/// Per-thread buffers for co-participation scoring. Marks are epoch-stamped
/// so nothing is cleared between developers.
struct Scratch {
    epoch: u32,
    tag_mark: Vec<u32>,
    item_epoch: Vec<u32>,
    item_hit: Vec<bool>,
    neighbors: Vec<DevIndex>,
    ratios: Vec<(u32, u32)>,
}

impl Scratch {
    fn new(n_tags: usize, n_items: usize) -> Self {
        Scratch {
            epoch: 0,
            tag_mark: vec![0; n_tags],
            item_epoch: vec![0; n_items],
            item_hit: vec![false; n_items],
            neighbors: Vec::new(),
            ratios: Vec::new(),
        }
    }

    fn next_epoch(&mut self) -> u32 {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.tag_mark.fill(0);
            self.item_epoch.fill(0);
            self.epoch = 1;
        }
        self.epoch
    }
}

/// Indexed scoring engine over one dataset and its base developers.
pub struct Scorer {
    links: Vec<LinkedDeveloper>,
    dev_lookup: HashMap<String, DevIndex>,
    n_tags: usize,
    catalog: ItemCatalog,
    index: ParticipationIndex,
    developers: Vec<DeveloperInterests>,
    config: MetricConfig,
}

impl Scorer {
    /// Extracts item interests, builds the participation index and the
    /// per-developer interest sets.
    pub fn build(
        dataset: &Dataset,
        links: Vec<LinkedDeveloper>,
        config: MetricConfig,
    ) -> Result<Self> {
        let catalog = ItemCatalog::build(dataset);
        let index = ParticipationIndex::build(dataset, &links)?;
        Ok(Self::from_parts(
            links,
            dataset.vocabulary.len(),
            catalog,
            index,
            config,
        ))
    }

    pub fn from_parts(
        links: Vec<LinkedDeveloper>,
        n_tags: usize,
        catalog: ItemCatalog,
        index: ParticipationIndex,
        config: MetricConfig,
    ) -> Self {
        let developers = (0..links.len() as DevIndex)
            .into_par_iter()
            .map(|d| developer_interests(d, &index, &catalog))
            .collect();
        let dev_lookup = links
            .iter()
            .enumerate()
            .map(|(i, l)| (l.dev_id.clone(), i as DevIndex))
            .collect();
        Scorer {
            links,
            dev_lookup,
            n_tags,
            catalog,
            index,
            developers,
            config,
        }
    }

    pub fn config(&self) -> MetricConfig {
        self.config
    }

    pub fn links(&self) -> &[LinkedDeveloper] {
        &self.links
    }

    pub fn catalog(&self) -> &ItemCatalog {
        &self.catalog
    }

    pub fn index(&self) -> &ParticipationIndex {
        &self.index
    }

    pub fn developer(&self, dev: DevIndex) -> &DeveloperInterests {
        &self.developers[dev as usize]
    }

    pub fn dev_index(&self, dev_id: &str) -> Result<DevIndex> {
        self.dev_lookup
            .get(dev_id)
            .copied()
            .ok_or_else(|| Error::UnknownDeveloper(dev_id.to_string()))
    }

    fn counts_as_shared(&self, item: &InterestSet, ci: &InterestSet) -> bool {
        match self.config.membership {
            Membership::Intersection => item.intersects(ci),
            Membership::Subset => !item.is_empty() && item.is_subset(ci),
        }
    }

    /// `I^SO(d) ∩ I^GH(d)`.
    pub fn common_interests(&self, dev: DevIndex) -> InterestSet {
        let d = self.developer(dev);
        d.platform_b.intersection(&d.platform_a)
    }

    pub fn shared_items(&self, dev: DevIndex) -> SharedItems {
        let d = self.developer(dev);
        let ci = self.common_interests(dev);
        let keep = |items: Vec<ItemIndex>, platform| {
            items
                .into_iter()
                .filter(|&i| self.counts_as_shared(self.catalog.get(platform, i), &ci))
                .collect()
        };
        SharedItems {
            repos: keep(d.repos(), Platform::A),
            questions: keep(d.questions(), Platform::B),
        }
    }

    fn overlap(
        &self,
        dev: DevIndex,
        repos: &[ItemIndex],
        questions: &[ItemIndex],
    ) -> CrossPlatformScore {
        let gh = InterestSet::union_of(repos.iter().map(|&i| &self.catalog.repos[i as usize]));
        let so = InterestSet::union_of(
            questions
                .iter()
                .map(|&i| &self.catalog.questions[i as usize]),
        );
        let ci = so.intersection(&gh);
        let count = |items: &[ItemIndex], sets: &[InterestSet]| {
            items
                .iter()
                .filter(|&&i| self.counts_as_shared(&sets[i as usize], &ci))
                .count()
        };
        let shared_r = count(repos, &self.catalog.repos);
        let shared_q = count(questions, &self.catalog.questions);
        let denom = repos.len() + questions.len();
        let score = (denom > 0).then(|| ratio((shared_r + shared_q) as u64, denom as u64));
        CrossPlatformScore {
            dev,
            ci,
            shared_r,
            shared_q,
            denom_r: repos.len(),
            denom_q: questions.len(),
            score,
        }
    }

    pub fn cross_platform_similarity(&self, dev: DevIndex) -> CrossPlatformScore {
        let d = self.developer(dev);
        self.overlap(dev, &d.repos(), &d.questions())
    }

    pub fn pair_similarity(
        &self,
        dev: DevIndex,
        gh: ActivityKind,
        so: ActivityKind,
    ) -> Result<PairScore> {
        let pair = ActivityPair::new(gh, so)?;
        Ok(self.pair_score(dev, pair))
    }

    fn pair_score(&self, dev: DevIndex, pair: ActivityPair) -> PairScore {
        let d = self.developer(dev);
        let (repos, questions) = (d.items(pair.gh), d.items(pair.so));
        let mut overlap = self.overlap(dev, repos, questions);
        if self.config.empty_side == EmptySidePolicy::Undefined
            && (repos.is_empty() || questions.is_empty())
        {
            overlap.score = None;
        }
        PairScore { pair, overlap }
    }

    /// Items of `other` (through `kind`) sharing a tag with the union of
    /// `dev`'s interests over its own `kind` items.
    pub fn shared_activity_items(
        &self,
        dev: DevIndex,
        other: DevIndex,
        kind: ActivityKind,
    ) -> Vec<ItemIndex> {
        let platform = kind.platform();
        let mine = InterestSet::union_of(
            self.developer(dev)
                .items(kind)
                .iter()
                .map(|&i| self.catalog.get(platform, i)),
        );
        self.developer(other)
            .items(kind)
            .iter()
            .copied()
            .filter(|&i| self.catalog.get(platform, i).intersects(&mine))
            .collect()
    }

    fn scratch(&self) -> Scratch {
        let n_items = self.catalog.repos.len().max(self.catalog.questions.len());
        Scratch::new(self.n_tags.max(self.max_tag_id()), n_items)
    }

    fn max_tag_id(&self) -> usize {
        self.catalog
            .repos
            .iter()
            .chain(&self.catalog.questions)
            .filter_map(|s| s.ids().last())
            .max()
            .map_or(0, |&t| t as usize + 1)
    }

    pub fn co_participation_similarity(
        &self,
        dev: DevIndex,
        kind: ActivityKind,
    ) -> Result<CoParticipationScore> {
        if !CO_PARTICIPATION_KINDS.contains(&kind) {
            return Err(Error::UnsupportedKind(kind.to_string()));
        }
        if dev as usize >= self.developers.len() {
            return Err(Error::UnknownDeveloper(dev.to_string()));
        }
        Ok(self.co_score(dev, kind, &mut self.scratch()))
    }

    fn co_score(&self, dev: DevIndex, kind: ActivityKind, s: &mut Scratch) -> CoParticipationScore {
        let epoch = s.next_epoch();
        let sets = self.catalog.platform(kind.platform());
        for &i in self.index.items_of(dev, kind) {
            for &t in sets[i as usize].ids() {
                s.tag_mark[t as usize] = epoch;
            }
        }

        let mut neighbors = std::mem::take(&mut s.neighbors);
        self.index.co_participants_into(dev, kind, &mut neighbors);
        s.ratios.clear();
        for &other in &neighbors {
            let items = self.index.items_of(other, kind);
            let mut hits = 0u32;
            for &i in items {
                let i = i as usize;
                if s.item_epoch[i] != epoch {
                    s.item_epoch[i] = epoch;
                    s.item_hit[i] = sets[i]
                        .ids()
                        .iter()
                        .any(|&t| s.tag_mark[t as usize] == epoch);
                }
                hits += s.item_hit[i] as u32;
            }
            s.ratios.push((items.len() as u32, hits));
        }
        let neighbor_count = neighbors.len();
        s.neighbors = neighbors;

        let score = (neighbor_count > 0).then(|| mean_of_ratios(&mut s.ratios, neighbor_count));
        CoParticipationScore {
            dev,
            kind,
            neighbor_count,
            score,
        }
    }

    fn record(&self, dev: DevIndex, metric: Metric, s: &mut Scratch) -> ScoreRecord {
        match metric {
            Metric::Cross => {
                let o = self.cross_platform_similarity(dev);
                ScoreRecord {
                    dev,
                    metric,
                    value: o.score.clone(),
                    counts: o.into(),
                }
            }
            Metric::Pair(pair) => {
                let p = self.pair_score(dev, pair);
                ScoreRecord {
                    dev,
                    metric,
                    value: p.overlap.score.clone(),
                    counts: p.overlap.into(),
                }
            }
            Metric::Co(kind) => {
                let c = self.co_score(dev, kind, s);
                ScoreRecord {
                    dev,
                    metric,
                    value: c.score,
                    counts: ScoreCounts::Neighbors(c.neighbor_count),
                }
            }
        }
    }

    /// Every requested metric for every developer, ordered by developer and
    /// then by position in `metrics`. Developers are scored in parallel.
    pub fn score_all(&self, metrics: &[Metric]) -> Vec<ScoreRecord> {
        let per_dev: Vec<Vec<ScoreRecord>> = (0..self.developers.len() as DevIndex)
            .into_par_iter()
            .map_init(
                || self.scratch(),
                |s, dev| metrics.iter().map(|&m| self.record(dev, m, s)).collect(),
            )
            .collect();
        per_dev.into_iter().flatten().collect()
    }
}

/// `(Σ hits/len) / n` over `(len, hits)` pairs, summed per distinct
/// denominator first so the big-rational work stays small.
fn mean_of_ratios(ratios: &mut [(u32, u32)], n: usize) -> Score {
    ratios.sort_unstable();
    let mut total = BigRational::zero();
    let mut i = 0;
    while i < ratios.len() {
        let den = ratios[i].0;
        let mut num = 0u64;
        while i < ratios.len() && ratios[i].0 == den {
            num += ratios[i].1 as u64;
            i += 1;
        }
        total += ratio(num, den as u64);
    }
    total / BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_pairs() {
        let names: Vec<String> = ActivityPair::all()
            .into_iter()
            .map(|p| Metric::Pair(p).to_string())
            .collect();
        assert_eq!(names.len(), 12);
        assert_eq!(
            &names[..3],
            ["pair:fork:ask", "pair:fork:answer", "pair:fork:favorite"]
        );
        assert_eq!(names[11], "pair:watch:favorite");
        let set: std::collections::HashSet<_> = names.iter().collect();
        assert_eq!(set.len(), 12);
    }

    #[test]
    fn invalid_pairs_rejected() {
        assert!(ActivityPair::new(ActivityKind::Ask, ActivityKind::Fork).is_err());
        assert!(ActivityPair::new(ActivityKind::Fork, ActivityKind::Watch).is_err());
    }

    #[test]
    fn metric_names_parse_back() {
        for m in Metric::all() {
            assert_eq!(m.to_string().parse::<Metric>().unwrap(), m);
        }
        assert_eq!(Metric::all().len(), 19);
        assert!("co:ask".parse::<Metric>().is_err());
        assert!("pair:ask:fork".parse::<Metric>().is_err());
        assert!("nope".parse::<Metric>().is_err());
    }

    #[test]
    fn mean_of_ratios_groups_denominators() {
        let mut r = vec![(3, 2), (3, 1), (2, 1)];
        assert_eq!(mean_of_ratios(&mut r, 3), ratio(1, 2));
        let mut single = vec![(3, 2)];
        assert_eq!(mean_of_ratios(&mut single, 1), ratio(2, 3));
    }
}
