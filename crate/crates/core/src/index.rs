//! Inverted indices over dense integer ids.
//!
//! Developers are numbered by their position in the link table and items by
//! their position in the dataset's sorted repository or question table. All
//! adjacency lists are sorted and duplicate-free.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::identity::LinkedDeveloper;
use crate::ingest::{ActivityKind, Dataset, Platform};
use crate::interests::{ItemCatalog, TagId};

pub type DevIndex = u32;
pub type ItemIndex = u32;

/// Compressed sparse rows: row `r` is `values[offsets[r]..offsets[r + 1]]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Csr {
    offsets: Vec<u32>,
    values: Vec<u32>,
}

impl Csr {
    /// Builds from `(row, value)` pairs; rows come out sorted and deduplicated.
    pub fn from_pairs(rows: usize, mut pairs: Vec<(u32, u32)>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        let mut offsets = vec![0u32; rows + 1];
        for &(r, _) in &pairs {
            offsets[r as usize + 1] += 1;
        }
        for r in 0..rows {
            offsets[r + 1] += offsets[r];
        }
        let values = pairs.into_iter().map(|(_, v)| v).collect();
        Csr { offsets, values }
    }

    pub fn rows(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    pub fn row(&self, r: u32) -> &[u32] {
        let r = r as usize;
        if r + 1 >= self.offsets.len() {
            return &[];
        }
        &self.values[self.offsets[r] as usize..self.offsets[r + 1] as usize]
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn transpose(&self, rows: usize) -> Csr {
        let pairs = (0..self.rows() as u32)
            .flat_map(|r| self.row(r).iter().map(move |&v| (v, r)))
            .collect();
        Csr::from_pairs(rows, pairs)
    }
}

/// Who did what to which item, restricted to linked developers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParticipationIndex {
    n_devs: usize,
    by_dev: [Csr; 7],
    by_item: [Csr; 7],
}

impl ParticipationIndex {
    /// Activities of users that are not linked are ignored.
    pub fn build(dataset: &Dataset, links: &[LinkedDeveloper]) -> Result<Self> {
        let a_map: HashMap<&str, DevIndex> = links
            .iter()
            .enumerate()
            .map(|(i, l)| (l.a_user_id.as_str(), i as DevIndex))
            .collect();
        let b_map: HashMap<&str, DevIndex> = links
            .iter()
            .enumerate()
            .map(|(i, l)| (l.b_user_id.as_str(), i as DevIndex))
            .collect();

        let mut pairs: [Vec<(u32, u32)>; 7] = Default::default();
        for a in &dataset.activities {
            let (dev, item) = match a.platform() {
                Platform::A => (
                    a_map.get(a.user_id.as_str()),
                    dataset.repo_position(&a.item_id),
                ),
                Platform::B => (
                    b_map.get(a.user_id.as_str()),
                    dataset.question_position(&a.item_id),
                ),
            };
            let Some(&dev) = dev else { continue };
            let item = item.ok_or_else(|| Error::DanglingReference {
                reference: a.item_id.clone(),
                record: format!("activity ({}, {}, {})", a.user_id, a.kind, a.item_id),
            })?;
            pairs[a.kind.slot()].push((dev, item as ItemIndex));
        }
        Ok(Self::from_pairs(
            links.len(),
            dataset.repos.len(),
            dataset.questions.len(),
            pairs,
        ))
    }

    /// `pairs[kind.slot()]` holds `(developer, item)` pairs for that kind.
    pub fn from_pairs(
        n_devs: usize,
        n_repos: usize,
        n_questions: usize,
        pairs: [Vec<(u32, u32)>; 7],
    ) -> Self {
        let mut by_dev: [Csr; 7] = Default::default();
        let mut by_item: [Csr; 7] = Default::default();
        for (kind, p) in ActivityKind::ALL.into_iter().zip(pairs) {
            let n_items = match kind.platform() {
                Platform::A => n_repos,
                Platform::B => n_questions,
            };
            let d = Csr::from_pairs(n_devs, p);
            by_item[kind.slot()] = d.transpose(n_items);
            by_dev[kind.slot()] = d;
        }
        ParticipationIndex {
            n_devs,
            by_dev,
            by_item,
        }
    }

    pub fn n_devs(&self) -> usize {
        self.n_devs
    }

    /// Items `dev` touched through `kind`, sorted.
    pub fn items_of(&self, dev: DevIndex, kind: ActivityKind) -> &[ItemIndex] {
        self.by_dev[kind.slot()].row(dev)
    }

    /// Developers who touched `item` through `kind`, sorted.
    pub fn participants(&self, item: ItemIndex, kind: ActivityKind) -> &[DevIndex] {
        self.by_item[kind.slot()].row(item)
    }

    pub fn activity_count(&self, kind: ActivityKind) -> usize {
        self.by_dev[kind.slot()].nnz()
    }

    /// Every other developer that shares at least one `kind` item with `dev`.
    pub fn co_participants(&self, dev: DevIndex, kind: ActivityKind) -> Result<Vec<DevIndex>> {
        if dev as usize >= self.n_devs {
            return Err(Error::UnknownDeveloper(dev.to_string()));
        }
        let mut out = Vec::new();
        self.co_participants_into(dev, kind, &mut out);
        Ok(out)
    }

    /// Allocation-reusing form of [`co_participants`](Self::co_participants).
    pub fn co_participants_into(&self, dev: DevIndex, kind: ActivityKind, out: &mut Vec<DevIndex>) {
        out.clear();
        let items = self.items_of(dev, kind);
        match items {
            [] => {}
            [only] => out.extend(
                self.participants(*only, kind)
                    .iter()
                    .copied()
                    .filter(|&d| d != dev),
            ),
            _ => {
                for &item in items {
                    out.extend_from_slice(self.participants(item, kind));
                }
                out.sort_unstable();
                out.dedup();
                if let Ok(pos) = out.binary_search(&dev) {
                    out.remove(pos);
                }
            }
        }
    }
}

/// Tag to items carrying that tag, per platform.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TagItemIndex {
    repos: Csr,
    questions: Csr,
}

impl TagItemIndex {
    pub fn build(catalog: &ItemCatalog, n_tags: usize) -> Self {
        let invert = |sets: &[crate::interests::InterestSet]| {
            let pairs = sets
                .iter()
                .enumerate()
                .flat_map(|(i, s)| s.ids().iter().map(move |&t| (t, i as u32)))
                .collect();
            Csr::from_pairs(n_tags, pairs)
        };
        TagItemIndex {
            repos: invert(&catalog.repos),
            questions: invert(&catalog.questions),
        }
    }

    pub fn items_with_tag(&self, platform: Platform, tag: TagId) -> &[ItemIndex] {
        match platform {
            Platform::A => self.repos.row(tag),
            Platform::B => self.questions.row(tag),
        }
    }
}
