//! Common interests and the cross-platform score of one developer.

use std::path::Path;

use devinterest::ratio::format_score;
use devinterest::{link_identities, load_dataset_dir, MetricConfig, Scorer};

fn main() -> devinterest::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/cross_example");
    let ds = load_dataset_dir(dir)?;
    let scorer = Scorer::build(
        &ds,
        link_identities(&ds.users_a, &ds.users_b).links,
        MetricConfig::default(),
    )?;
    let d = scorer.dev_index("D000001")?;

    let dev = scorer.developer(d);
    println!("I^A = {:?}", dev.platform_a.names(&ds.vocabulary));
    println!("I^B = {:?}", dev.platform_b.names(&ds.vocabulary));
    println!(
        "CI  = {:?}",
        scorer.common_interests(d).names(&ds.vocabulary)
    );

    let shared = scorer.shared_items(d);
    let repos: Vec<_> = shared
        .repos
        .iter()
        .map(|&i| &ds.repos[i as usize].repo_id)
        .collect();
    let questions: Vec<_> = shared
        .questions
        .iter()
        .map(|&i| &ds.questions[i as usize].question_id)
        .collect();
    println!("shared repos {repos:?}, shared questions {questions:?}");

    let s = scorer.cross_platform_similarity(d);
    println!(
        "score = ({} + {}) / ({} + {}) = {}",
        s.shared_r,
        s.shared_q,
        s.denom_r,
        s.denom_q,
        format_score(s.score.as_ref())
    );
    Ok(())
}
