//! Tag-based interest extraction.
//!
//! Questions carry their interests directly as tags. Repositories only have a
//! free-text description, so their interests are the vocabulary tags that
//! occur in it as whole words.
//!
//! # Matching rule
//!
//! Text is lowercased and cut into *tokens*: maximal runs of characters in
//! `[a-z0-9#+.-]`. A tag is tokenized the same way. A tag matches when its
//! tokens occur as a contiguous run of the description's tokens, where
//!
//! * trailing dots are stripped from every token, unless the tag itself
//!   contains a dot;
//! * a tag with a hyphen also matches as the run of its hyphen-separated
//!   parts.
//!
//! So `java` matches `Java.` but not `javascript` or `java-based`, `c` does
//! not match `c#` or `objective-c`, and `ruby-on-rails` matches both
//! `ruby-on-rails` and `ruby on rails`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::index::{DevIndex, ItemIndex, ParticipationIndex};
use crate::ingest::{ActivityKind, Dataset, Platform, QuestionItem, RepositoryItem};

/// Dense id of a tag in a [`TagVocabulary`]. Ids follow the lexical order of
/// the tag strings.
pub type TagId = u32;

pub fn normalize_tag(raw: &str) -> String {
    raw.trim().to_lowercase()
}

fn is_token_char(c: char) -> bool {
    matches!(c, 'a'..='z' | '0'..='9' | '#' | '+' | '.' | '-')
}

/// Tokens of already-lowercased text.
fn raw_tokens(lower: &str) -> impl Iterator<Item = &str> {
    lower
        .split(|c: char| !is_token_char(c))
        .filter(|t| !t.is_empty())
}

/// Splits lowercased `text` into tokens, stripping trailing dots unless
/// `keep_dots`.
pub fn tokenize(text: &str, keep_dots: bool) -> Vec<String> {
    let lower = text.to_lowercase();
    raw_tokens(&lower)
        .map(|t| {
            if keep_dots {
                t
            } else {
                t.trim_end_matches('.')
            }
        })
        .map(String::from)
        .collect()
}

/// The token runs a tag can occur as.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TagPattern {
    keep_dots: bool,
    forms: Vec<Vec<String>>,
}

impl TagPattern {
    pub fn new(tag: &str) -> Self {
        let keep_dots = tag.contains('.');
        let whole: Vec<String> = tokenize(tag, keep_dots)
            .into_iter()
            .filter(|t| !t.is_empty())
            .collect();
        let mut forms = Vec::new();
        if whole.iter().any(|t| t.contains('-')) {
            let parts: Vec<String> = whole
                .iter()
                .flat_map(|t| t.split('-'))
                .filter(|t| !t.is_empty())
                .map(String::from)
                .collect();
            if !parts.is_empty() {
                forms.push(parts);
            }
        }
        if !whole.is_empty() {
            forms.insert(0, whole);
        }
        TagPattern { keep_dots, forms }
    }

    pub fn keeps_dots(&self) -> bool {
        self.keep_dots
    }

    pub fn forms(&self) -> &[Vec<String>] {
        &self.forms
    }

    fn matches_at(&self, form: &[String], tokens: &Tokens<'_>, pos: usize) -> bool {
        let hay = tokens.get(self.keep_dots);
        pos + form.len() <= hay.len()
            && hay[pos..pos + form.len()]
                .iter()
                .zip(form)
                .all(|(h, f)| *h == f)
    }

    fn matches(&self, tokens: &Tokens<'_>) -> bool {
        let n = tokens.raw.len();
        self.forms
            .iter()
            .any(|f| (0..n).any(|pos| self.matches_at(f, tokens, pos)))
    }
}

struct Tokens<'a> {
    raw: Vec<&'a str>,
    stripped: Vec<&'a str>,
}

impl<'a> Tokens<'a> {
    fn new(lower: &'a str) -> Self {
        let raw: Vec<&str> = raw_tokens(lower).collect();
        let stripped = raw.iter().map(|t| t.trim_end_matches('.')).collect();
        Tokens { raw, stripped }
    }

    fn get(&self, keep_dots: bool) -> &[&'a str] {
        if keep_dots {
            &self.raw
        } else {
            &self.stripped
        }
    }
}

/// Whether `tag` occurs in `description` under the matching rule above.
pub fn match_tag(description: &str, tag: &str) -> bool {
    let pattern = TagPattern::new(tag);
    let lower = description.to_lowercase();
    pattern.matches(&Tokens::new(&lower))
}

/// Sorted set of tag ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct InterestSet(Vec<TagId>);

impl InterestSet {
    pub fn new() -> Self {
        InterestSet(Vec::new())
    }

    pub fn from_ids(ids: impl IntoIterator<Item = TagId>) -> Self {
        let mut v: Vec<TagId> = ids.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        InterestSet(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ids(&self) -> &[TagId] {
        &self.0
    }

    pub fn contains(&self, tag: TagId) -> bool {
        self.0.binary_search(&tag).is_ok()
    }

    pub fn intersects(&self, other: &InterestSet) -> bool {
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.0, &other.0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn intersection(&self, other: &InterestSet) -> InterestSet {
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        InterestSet(out)
    }

    pub fn is_subset(&self, other: &InterestSet) -> bool {
        self.0.iter().all(|t| other.contains(*t))
    }

    /// Union of many sets.
    pub fn union_of<'a>(sets: impl IntoIterator<Item = &'a InterestSet>) -> InterestSet {
        InterestSet::from_ids(sets.into_iter().flat_map(|s| s.0.iter().copied()))
    }

    pub fn names<'v>(&self, vocabulary: &'v TagVocabulary) -> Vec<&'v str> {
        self.0.iter().map(|&t| vocabulary.tag(t)).collect()
    }
}

/// The set of tags interests are expressed in, with a first-word lookup
/// table for scanning descriptions.
#[derive(Clone, Debug, Default)]
pub struct TagVocabulary {
    tags: Vec<String>,
    patterns: Vec<TagPattern>,
    by_first_token: HashMap<String, Vec<(TagId, usize)>>,
}

impl PartialEq for TagVocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.tags == other.tags
    }
}

impl TagVocabulary {
    /// Normalizes, deduplicates and sorts `raw`; blank entries are dropped.
    pub fn new<S: AsRef<str>>(raw: impl IntoIterator<Item = S>) -> Self {
        let mut tags: Vec<String> = raw
            .into_iter()
            .map(|t| normalize_tag(t.as_ref()))
            .filter(|t| !t.is_empty())
            .collect();
        tags.sort_unstable();
        tags.dedup();
        let patterns: Vec<TagPattern> = tags.iter().map(|t| TagPattern::new(t)).collect();
        let mut by_first_token: HashMap<String, Vec<(TagId, usize)>> = HashMap::new();
        for (id, p) in patterns.iter().enumerate() {
            for (f, form) in p.forms.iter().enumerate() {
                by_first_token
                    .entry(form[0].clone())
                    .or_default()
                    .push((id as TagId, f));
            }
        }
        TagVocabulary {
            tags,
            patterns,
            by_first_token,
        }
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    pub fn tag(&self, id: TagId) -> &str {
        &self.tags[id as usize]
    }

    /// Id of an already-normalized tag.
    pub fn id(&self, tag: &str) -> Option<TagId> {
        self.tags
            .binary_search_by(|t| t.as_str().cmp(tag))
            .ok()
            .map(|i| i as TagId)
    }

    pub fn pattern(&self, id: TagId) -> &TagPattern {
        &self.patterns[id as usize]
    }

    /// All vocabulary tags occurring in `text`, in one pass over its tokens.
    pub fn scan(&self, text: &str) -> InterestSet {
        let lower = text.to_lowercase();
        let tokens = Tokens::new(&lower);
        let mut found = Vec::new();
        for pos in 0..tokens.raw.len() {
            let (raw, stripped) = (tokens.raw[pos], tokens.stripped[pos]);
            let keys = std::iter::once(raw).chain((stripped != raw).then_some(stripped));
            for key in keys {
                let Some(candidates) = self.by_first_token.get(key) else {
                    continue;
                };
                for &(id, f) in candidates {
                    let p = &self.patterns[id as usize];
                    if p.matches_at(&p.forms[f], &tokens, pos) {
                        found.push(id);
                    }
                }
            }
        }
        InterestSet::from_ids(found)
    }

    fn set_from_tags<S: AsRef<str>>(&self, tags: &[S]) -> InterestSet {
        InterestSet::from_ids(
            tags.iter()
                .filter_map(|t| self.id(&normalize_tag(t.as_ref()))),
        )
    }
}

/// Normalized tags of `q` that are in the vocabulary.
pub fn question_interests(q: &QuestionItem, vocabulary: &TagVocabulary) -> InterestSet {
    vocabulary.set_from_tags(&q.tags)
}

/// `{ t in vocabulary | match_tag(r.description, t) }`.
pub fn repo_interests(r: &RepositoryItem, vocabulary: &TagVocabulary) -> InterestSet {
    vocabulary.scan(&r.description)
}

/// Interest sets of every repository and question, aligned with the
/// dataset's item tables.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ItemCatalog {
    pub repos: Vec<InterestSet>,
    pub questions: Vec<InterestSet>,
}

impl ItemCatalog {
    pub fn build(dataset: &Dataset) -> Self {
        let vocab = &dataset.vocabulary;
        let (repos, questions) = rayon::join(
            || {
                dataset
                    .repos
                    .par_iter()
                    .map(|r| repo_interests(r, vocab))
                    .collect()
            },
            || {
                dataset
                    .questions
                    .par_iter()
                    .map(|q| question_interests(q, vocab))
                    .collect()
            },
        );
        ItemCatalog { repos, questions }
    }

    pub fn get(&self, platform: Platform, item: ItemIndex) -> &InterestSet {
        match platform {
            Platform::A => &self.repos[item as usize],
            Platform::B => &self.questions[item as usize],
        }
    }

    pub fn platform(&self, platform: Platform) -> &[InterestSet] {
        match platform {
            Platform::A => &self.repos,
            Platform::B => &self.questions,
        }
    }
}

/// One line of the `interests.jsonl` audit dump.
#[derive(Clone, Debug, Serialize)]
pub struct ItemInterestsLine<'a> {
    pub item_id: &'a str,
    pub platform: Platform,
    pub interests: Vec<&'a str>,
}

/// A developer's items per activity kind and the per-platform interest
/// unions over them.
#[derive(Clone, Debug, PartialEq)]
pub struct DeveloperInterests {
    pub dev: DevIndex,
    items: [Vec<ItemIndex>; 7],
    pub platform_a: InterestSet,
    pub platform_b: InterestSet,
}

impl DeveloperInterests {
    pub fn items(&self, kind: ActivityKind) -> &[ItemIndex] {
        &self.items[kind.slot()]
    }

    /// Items touched through any of `kinds` (all on one platform).
    pub fn items_of(&self, kinds: &[ActivityKind]) -> Vec<ItemIndex> {
        let mut v: Vec<ItemIndex> = kinds
            .iter()
            .flat_map(|k| self.items(*k).iter().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Repositories the developer forked, watched, committed to or opened a
    /// pull request on.
    pub fn repos(&self) -> Vec<ItemIndex> {
        self.items_of(&ActivityKind::PLATFORM_A)
    }

    /// Questions the developer asked, answered or favorited.
    pub fn questions(&self) -> Vec<ItemIndex> {
        self.items_of(&ActivityKind::PLATFORM_B)
    }

    pub fn interests(&self, platform: Platform) -> &InterestSet {
        match platform {
            Platform::A => &self.platform_a,
            Platform::B => &self.platform_b,
        }
    }
}

pub fn developer_interests(
    dev: DevIndex,
    index: &ParticipationIndex,
    catalog: &ItemCatalog,
) -> DeveloperInterests {
    let items: [Vec<ItemIndex>; 7] = ActivityKind::ALL.map(|k| index.items_of(dev, k).to_vec());
    let union = |kinds: &[ActivityKind], platform: Platform| {
        InterestSet::union_of(
            kinds
                .iter()
                .flat_map(|k| items[k.slot()].iter())
                .map(|&i| catalog.get(platform, i)),
        )
    };
    DeveloperInterests {
        dev,
        platform_a: union(&ActivityKind::PLATFORM_A, Platform::A),
        platform_b: union(&ActivityKind::PLATFORM_B, Platform::B),
        items,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab(tags: &[&str]) -> TagVocabulary {
        TagVocabulary::new(tags.iter().copied())
    }

    fn names(set: &InterestSet, v: &TagVocabulary) -> Vec<String> {
        set.names(v).into_iter().map(String::from).collect()
    }

    #[test]
    fn normalizes_tags() {
        assert_eq!(normalize_tag("Java "), "java");
        assert_eq!(normalize_tag("C#"), "c#");
        assert_eq!(normalize_tag("Ruby-on-Rails"), "ruby-on-rails");
    }

    #[test]
    fn question_tags_filtered_and_deduplicated() {
        let v = vocab(&["java", "android", "ios"]);
        let q = |tags: &[&str]| QuestionItem {
            question_id: "q".into(),
            tags: tags.iter().map(|s| s.to_string()).collect(),
        };
        assert_eq!(
            names(&question_interests(&q(&["Java", "Android"]), &v), &v),
            ["android", "java"]
        );
        assert!(question_interests(&q(&[]), &v).is_empty());
        assert_eq!(
            names(&question_interests(&q(&["Java", "java"]), &v), &v),
            ["java"]
        );
        assert!(question_interests(&q(&["kotlin"]), &v).is_empty());
    }

    #[test]
    fn matches_whole_words_only() {
        assert!(match_tag("A simple Javascript and AJAX demo", "javascript"));
        assert!(match_tag("A simple Javascript and AJAX demo", "ajax"));
        assert!(!match_tag("A simple Javascript and AJAX demo", "java"));
        assert!(!match_tag("", "java"));
        assert!(!match_tag("scalable database", "java"));
        assert!(!match_tag("c# server", "c"));
        assert!(match_tag("modern c++ tooling", "c++"));
    }

    #[test]
    fn dots_and_hyphens() {
        assert!(match_tag("Built with node.js today", "node.js"));
        assert!(!match_tag("Built with node.js", "node"));
        assert!(match_tag("Written in Java.", "java"));
        assert!(match_tag("a ruby-on-rails blog", "ruby-on-rails"));
        assert!(match_tag("a Ruby on Rails blog", "ruby-on-rails"));
        assert!(!match_tag("a java-based tool", "java"));
        assert!(!match_tag("objective-c bindings", "c"));
        assert!(match_tag("objective c bindings", "objective-c"));
        assert!(!match_tag("ends with node.js.", "node.js"));
        assert!(!match_tag("asp.net core", ".net"));
        assert!(match_tag("the .NET runtime", ".net"));
    }

    #[test]
    fn empty_tag_never_matches() {
        assert!(!match_tag("anything at all", ""));
        assert!(!match_tag("a / b", "/"));
    }

    #[test]
    fn repo_interests_examples() {
        let v = vocab(&["java", "android", "c#"]);
        let repo = |d: &str| RepositoryItem {
            repo_id: "r".into(),
            description: d.into(),
        };
        assert_eq!(
            names(&repo_interests(&repo("Java Android app"), &v), &v),
            ["android", "java"]
        );
        assert!(repo_interests(&repo(""), &v).is_empty());
        assert_eq!(
            names(&repo_interests(&repo("c# sharp server"), &v), &v),
            ["c#"]
        );
    }

    #[test]
    fn scan_agrees_with_per_tag_matching() {
        let v = vocab(&[
            "java",
            "javascript",
            "c",
            "c#",
            "c++",
            "node.js",
            "ruby-on-rails",
            "ruby",
            "rails",
            "on",
            ".net",
            "objective-c",
        ]);
        let texts = [
            "Ruby on Rails with JavaScript, Java and C",
            "objective c bindings for .net; node.js. c++!",
            "c#/c++ interop (java-based)",
            "rails-on-ruby",
            "",
        ];
        for text in texts {
            let expected: Vec<TagId> = (0..v.len() as TagId)
                .filter(|&t| match_tag(text, v.tag(t)))
                .collect();
            assert_eq!(v.scan(text).ids(), expected.as_slice(), "{text}");
        }
    }

    #[test]
    fn set_algebra() {
        let a = InterestSet::from_ids([3, 1, 2, 2]);
        let b = InterestSet::from_ids([2, 5]);
        assert_eq!(a.ids(), &[1, 2, 3]);
        assert!(a.intersects(&b));
        assert_eq!(a.intersection(&b).ids(), &[2]);
        assert!(InterestSet::from_ids([1, 3]).is_subset(&a));
        assert!(!b.is_subset(&a));
        assert_eq!(InterestSet::union_of([&a, &b]).ids(), &[1, 2, 3, 5]);
        assert!(!InterestSet::new().intersects(&a));
    }

    #[test]
    fn vocabulary_normalizes_and_drops_blank_lines() {
        let v = vocab(&["Java", " java", "", "  ", "C#"]);
        assert_eq!(v.tags(), ["c#", "java"]);
        assert_eq!(v.id("java"), Some(1));
    }
}
