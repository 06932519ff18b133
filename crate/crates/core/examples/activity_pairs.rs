//! The twelve activity-pair scores, under both empty-side policies.

use std::path::Path;

use devinterest::metrics::ActivityPair;
use devinterest::ratio::format_score;
use devinterest::{link_identities, load_dataset_dir, EmptySidePolicy, MetricConfig, Scorer};

fn main() -> devinterest::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/cross_example");
    let ds = load_dataset_dir(dir)?;
    let links = link_identities(&ds.users_a, &ds.users_b).links;

    for empty_side in [EmptySidePolicy::Undefined, EmptySidePolicy::Zero] {
        let config = MetricConfig {
            empty_side,
            ..MetricConfig::default()
        };
        let scorer = Scorer::build(&ds, links.clone(), config)?;
        println!("empty side: {empty_side:?}");
        for pair in ActivityPair::all() {
            let p = scorer.pair_similarity(0, pair.gh(), pair.so())?;
            println!(
                "  {:>12} x {:<8} {}",
                pair.gh().as_str(),
                pair.so().as_str(),
                format_score(p.overlap.score.as_ref())
            );
        }
    }
    Ok(())
}
