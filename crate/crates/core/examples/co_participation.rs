//! Co-participants of a developer and the co-participation scores.

use std::path::Path;

use devinterest::metrics::CO_PARTICIPATION_KINDS;
use devinterest::ratio::format_score;
use devinterest::{link_identities, load_dataset_dir, ActivityKind, MetricConfig, Scorer};

fn main() -> devinterest::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/cowatch_example");
    let ds = load_dataset_dir(dir)?;
    let scorer = Scorer::build(
        &ds,
        link_identities(&ds.users_a, &ds.users_b).links,
        MetricConfig::default(),
    )?;
    let d = scorer.dev_index("D000001")?;

    for other in scorer.index().co_participants(d, ActivityKind::Watch)? {
        let shared = scorer.shared_activity_items(d, other, ActivityKind::Watch);
        let ids: Vec<_> = shared
            .iter()
            .map(|&i| &ds.repos[i as usize].repo_id)
            .collect();
        println!(
            "co-watcher {}: shared {ids:?}",
            scorer.links()[other as usize].dev_id
        );
    }
    for kind in CO_PARTICIPATION_KINDS {
        let c = scorer.co_participation_similarity(d, kind)?;
        println!(
            "{:>12}: {} neighbours, score {}",
            kind.as_str(),
            c.neighbor_count,
            format_score(c.score.as_ref())
        );
    }
    // Asking has no co-participation score.
    assert!(scorer
        .co_participation_similarity(d, ActivityKind::Ask)
        .is_err());
    Ok(())
}
