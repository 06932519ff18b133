//! Match accounts across the two platforms by the MD5 of the normalized email.

use devinterest::identity::md5_hex;
use devinterest::ingest::{PlatformAUser, PlatformBUser};
use devinterest::{link_identities, normalize_email};

fn main() {
    let a = |id: &str, email: &str| PlatformAUser {
        user_id: id.into(),
        email: email.into(),
    };
    let b = |id: &str, email: &str| PlatformBUser {
        user_id: id.into(),
        email_md5: md5_hex(&normalize_email(email)),
    };
    let users_a = vec![
        a("octo", "  Ann@Dev.io "),
        a("twin-1", "shared@dev.io"),
        a("twin-2", "SHARED@dev.io"),
        a("loner", "cy@dev.io"),
    ];
    let users_b = vec![
        b("ann_so", "ann@dev.io"),
        b("shared_so", "shared@dev.io"),
        b("bo_so", "bo@dev.io"),
    ];

    let linking = link_identities(&users_a, &users_b);
    for l in &linking.links {
        println!("{}  {} <-> {}", l.dev_id, l.a_user_id, l.b_user_id);
    }
    for amb in &linking.ambiguities {
        println!(
            "ambiguous {}: A {:?}, B {:?}",
            amb.email_md5, amb.a_user_ids, amb.b_user_ids
        );
    }
}
