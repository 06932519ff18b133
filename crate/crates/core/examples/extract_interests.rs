//! Tag matching on repository descriptions and tag filtering on questions.

use devinterest::ingest::{QuestionItem, RepositoryItem};
use devinterest::interests::{question_interests, repo_interests};
use devinterest::{match_tag, TagVocabulary};

fn main() {
    let vocab = TagVocabulary::new([
        "java",
        "javascript",
        "c",
        "c#",
        "c++",
        "node.js",
        "ruby-on-rails",
        "android",
    ]);

    for desc in [
        "A simple Javascript and AJAX demo",
        "Java Android app",
        "c#/c++ interop on node.js",
        "A Ruby on Rails blog",
        "objective-c bindings",
    ] {
        let repo = RepositoryItem {
            repo_id: "r".into(),
            description: desc.into(),
        };
        println!(
            "{desc:40} -> {:?}",
            repo_interests(&repo, &vocab).names(&vocab)
        );
    }

    println!(
        "match_tag(\"javascript tips\", \"java\") = {}",
        match_tag("javascript tips", "java")
    );

    let q = QuestionItem {
        question_id: "q".into(),
        tags: vec!["Java".into(), "Kotlin".into(), "android".into()],
    };
    println!(
        "question tags {:?} -> {:?}",
        q.tags,
        question_interests(&q, &vocab).names(&vocab)
    );
}
