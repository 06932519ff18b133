//! Synthetic datasets with a planted overlap between the two platforms.

use devinterest::ratio::to_f64;
use devinterest::{generate, link_identities, GenSpec, Metric, MetricConfig, Scorer};

fn main() -> devinterest::Result<()> {
    for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let g = generate(&GenSpec::new(300, 240, p, 5))?;
        let ds = &g.dataset;
        let scorer = Scorer::build(
            ds,
            link_identities(&ds.users_a, &ds.users_b).links,
            MetricConfig::default(),
        )?;
        let scores: Vec<f64> = scorer
            .score_all(&[Metric::Cross])
            .iter()
            .filter_map(|r| r.value.as_ref().map(to_f64))
            .collect();
        let mean = scores.iter().sum::<f64>() / scores.len() as f64;
        println!(
            "p = {p:.2}: {} activities, mean cross score {mean:.3}",
            ds.activities.len()
        );
    }

    let g = generate(&GenSpec::new(3, 60, 0.5, 1))?;
    for r in g.dataset.repos.iter().take(4) {
        println!(
            "{}: {:?} planted {:?}",
            r.repo_id, r.description, g.planted_repos[&r.repo_id]
        );
    }
    Ok(())
}
