mod common;

use common::{arb_description, fixture_lines, regex_match_tag, ADVERSARIAL_TAGS};
use devinterest::{match_tag, TagVocabulary};
use proptest::prelude::*;

fn disagreements(descriptions: &[String], tags: &[String]) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for d in descriptions {
        for t in tags {
            if match_tag(d, t) != regex_match_tag(d, t) {
                out.push((d.clone(), t.clone()));
            }
        }
    }
    out
}

#[test]
fn fifty_description_fixture_agrees_with_regex() {
    let descriptions = fixture_lines("descriptions_50.txt");
    assert_eq!(descriptions.len(), 50);
    let bad = disagreements(&descriptions, &fixture_lines("match_tags.txt"));
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn two_hundred_description_fixture_agrees_with_regex() {
    let descriptions = fixture_lines("descriptions_200.txt");
    assert_eq!(descriptions.len(), 200);
    let bad = disagreements(&descriptions, &fixture_lines("match_tags.txt"));
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn adversarial_cases() {
    let cases = [
        ("A simple Javascript and AJAX demo", "java", false),
        ("A simple Javascript and AJAX demo", "javascript", true),
        ("scalable database", "java", false),
        ("c# sharp server", "c#", true),
        ("c# sharp server", "c", false),
        ("modern c++", "c++", true),
        ("modern c++", "c", false),
        ("node.js server", "node.js", true),
        ("a ruby on rails app", "ruby-on-rails", true),
        ("a ruby-on-rails app", "ruby-on-rails", true),
        ("a ruby-on-rails app", "rails", false),
        ("objective-c", "c", false),
    ];
    for (d, t, expected) in cases {
        assert_eq!(match_tag(d, t), expected, "{d:?} / {t:?}");
        assert_eq!(regex_match_tag(d, t), expected, "oracle {d:?} / {t:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn random_descriptions_agree_with_regex(desc in arb_description()) {
        for tag in ADVERSARIAL_TAGS {
            prop_assert_eq!(match_tag(&desc, tag), regex_match_tag(&desc, tag), "{:?} / {:?}", desc, tag);
        }
    }

    #[test]
    fn vocabulary_scan_equals_per_tag_matching(desc in arb_description()) {
        let v = TagVocabulary::new(ADVERSARIAL_TAGS);
        let expected: Vec<String> = v.tags().iter().filter(|t| match_tag(&desc, t)).cloned().collect();
        let got: Vec<String> = v.scan(&desc).names(&v).into_iter().map(String::from).collect();
        prop_assert_eq!(got, expected);
    }
}
