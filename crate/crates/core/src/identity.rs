//! Base-developer identification: platform-A emails are hashed and matched
//! against the MD5 hashes published for platform-B users.

use std::collections::BTreeMap;

use md5::{Digest, Md5};
use serde::Serialize;

use crate::ingest::{PlatformAUser, PlatformBUser};

/// A user known on both platforms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LinkedDeveloper {
    pub dev_id: String,
    pub a_user_id: String,
    pub b_user_id: String,
}

/// A hash shared by more than one user on either side. None of the users
/// involved are linked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ambiguity {
    pub email_md5: String,
    pub a_user_ids: Vec<String>,
    pub b_user_ids: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Linking {
    pub links: Vec<LinkedDeveloper>,
    pub ambiguities: Vec<Ambiguity>,
}

/// Trims surrounding whitespace and lowercases ASCII letters.
pub fn normalize_email(raw: &str) -> String {
    raw.trim().to_ascii_lowercase()
}

pub fn md5_hex(s: &str) -> String {
    hex::encode(Md5::digest(s.as_bytes()))
}

pub fn dev_id_for(index: usize) -> String {
    format!("D{:06}", index + 1)
}

/// One-to-one matching of platform-A users to platform-B users by email hash.
///
/// Links are ordered by platform-A user id and numbered in that order, so
/// the result does not depend on the order of the input slices.
pub fn link_identities(users_a: &[PlatformAUser], users_b: &[PlatformBUser]) -> Linking {
    let mut by_hash: BTreeMap<String, (Vec<&str>, Vec<&str>)> = BTreeMap::new();
    for u in users_a {
        let email = normalize_email(&u.email);
        if email.is_empty() {
            continue;
        }
        by_hash
            .entry(md5_hex(&email))
            .or_default()
            .0
            .push(&u.user_id);
    }
    for u in users_b {
        if u.email_md5.is_empty() {
            continue;
        }
        if let Some(entry) = by_hash.get_mut(&u.email_md5.to_ascii_lowercase()) {
            entry.1.push(&u.user_id);
        }
    }

    let mut pairs = Vec::new();
    let mut ambiguities = Vec::new();
    for (hash, (mut a_ids, mut b_ids)) in by_hash {
        match (a_ids.len(), b_ids.len()) {
            (_, 0) => {}
            (1, 1) => pairs.push((a_ids[0], b_ids[0])),
            _ => {
                a_ids.sort_unstable();
                b_ids.sort_unstable();
                ambiguities.push(Ambiguity {
                    email_md5: hash,
                    a_user_ids: a_ids.into_iter().map(String::from).collect(),
                    b_user_ids: b_ids.into_iter().map(String::from).collect(),
                });
            }
        }
    }

    pairs.sort_unstable();
    let links = pairs
        .into_iter()
        .enumerate()
        .map(|(i, (a, b))| LinkedDeveloper {
            dev_id: dev_id_for(i),
            a_user_id: a.to_string(),
            b_user_id: b.to_string(),
        })
        .collect();
    Linking { links, ambiguities }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn a(id: &str, email: &str) -> PlatformAUser {
        PlatformAUser {
            user_id: id.into(),
            email: email.into(),
        }
    }

    fn b(id: &str, hash: &str) -> PlatformBUser {
        PlatformBUser {
            user_id: id.into(),
            email_md5: hash.into(),
        }
    }

    #[test]
    fn normalizes_emails() {
        assert_eq!(normalize_email(" Alice@Example.COM "), "alice@example.com");
        assert_eq!(normalize_email(""), "");
        assert_eq!(normalize_email("bob@x.io"), "bob@x.io");
    }

    #[test]
    fn known_digests() {
        // RFC 1321 test suite.
        assert_eq!(md5_hex(""), "d41d8cd98f00b204e9800998ecf8427e");
        assert_eq!(md5_hex("abc"), "900150983cd24fb0d6963f7d28e17f72");
    }

    #[test]
    fn single_match_links() {
        let l = link_identities(&[a("a1", "x@y.z")], &[b("b1", &md5_hex("x@y.z"))]);
        assert_eq!(l.links.len(), 1);
        assert_eq!(l.links[0].a_user_id, "a1");
        assert_eq!(l.links[0].b_user_id, "b1");
        assert!(l.ambiguities.is_empty());
    }

    #[test]
    fn duplicate_emails_are_ambiguous() {
        let l = link_identities(
            &[a("a1", "x@y.z"), a("a2", "X@Y.Z ")],
            &[b("b1", &md5_hex("x@y.z"))],
        );
        assert!(l.links.is_empty());
        assert_eq!(l.ambiguities.len(), 1);
        assert_eq!(l.ambiguities[0].a_user_ids, vec!["a1", "a2"]);
    }

    #[test]
    fn duplicate_hashes_on_b_side_are_ambiguous() {
        let h = md5_hex("x@y.z");
        let l = link_identities(&[a("a1", "x@y.z")], &[b("b1", &h), b("b2", &h)]);
        assert!(l.links.is_empty());
        assert_eq!(l.ambiguities[0].b_user_ids, vec!["b1", "b2"]);
    }

    #[test]
    fn hand_computed_fixture_links_two() {
        // Digests from coreutils md5sum: ann@dev.io, cy@dev.io, bo@dev.io.
        let users_a = [a("a1", "ann@dev.io"), a("a2", "Cy@Dev.io"), a("a3", "")];
        let users_b = [
            b("b1", "4d5a6433a528726c2b2bb08be5a94682"),
            b("b2", "11E58A0AA6BBD40F457B6F0A44D2613A"),
            b("b3", "254d9d41186fbf48c6e77a398fc75791"),
        ];
        let l = link_identities(&users_a, &users_b);
        let pairs: HashSet<_> = l
            .links
            .iter()
            .map(|d| (d.a_user_id.as_str(), d.b_user_id.as_str()))
            .collect();
        assert_eq!(pairs, HashSet::from([("a1", "b3"), ("a2", "b2")]));
    }

    #[test]
    fn empty_values_never_link() {
        let l = link_identities(&[a("a1", "  ")], &[b("b1", "")]);
        assert!(l.links.is_empty());
    }
}
