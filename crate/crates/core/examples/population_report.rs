//! Summary statistics and plot data for a synthetic population.

use devinterest::pipeline::{write_report, MetricSelection};
use devinterest::{generate, link_identities, summarize, GenSpec, Metric, MetricConfig, Scorer};

fn main() -> devinterest::Result<()> {
    let ds = generate(&GenSpec {
        noise: 0.3,
        ..GenSpec::new(500, 400, 0.5, 11)
    })?
    .dataset;
    let scorer = Scorer::build(
        &ds,
        link_identities(&ds.users_a, &ds.users_b).links,
        MetricConfig::default(),
    )?;
    let metrics = MetricSelection::All.metrics();
    let records = scorer.score_all(&metrics);

    let summaries: Vec<_> = metrics
        .iter()
        .map(|m: &Metric| {
            let values: Vec<_> = records
                .iter()
                .filter(|r| r.metric == *m)
                .map(|r| r.value.clone())
                .collect();
            summarize(&m.to_string(), &values)
        })
        .collect();
    for s in &summaries {
        let f = s.five_number.unwrap();
        println!(
            "{:24} n={:<4} undefined={:<4} mean={:.3} >=0.5: {:.2}  box [{:.2} {:.2} {:.2} {:.2} {:.2}]",
            s.metric,
            s.n_defined,
            s.n_undefined,
            s.mean.unwrap(),
            s.fraction_ge["0.5"].unwrap(),
            f.min,
            f.q1,
            f.median,
            f.q3,
            f.max
        );
    }

    let out = std::env::temp_dir().join("devinterest-report");
    write_report(&summaries, &out)?;
    println!("wrote {}", out.display());
    Ok(())
}
