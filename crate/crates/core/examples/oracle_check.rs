//! The indexed engine against the brute-force oracle on generated data.

use devinterest::pipeline::compare_with_oracle;
use devinterest::synthgen::DEFAULT_ORACLE_CAP;
use devinterest::{generate, EmptySidePolicy, GenSpec, Membership, MetricConfig};

fn main() -> devinterest::Result<()> {
    for seed in [42, 43, 44] {
        let ds = generate(&GenSpec {
            noise: 0.2,
            ..GenSpec::new(50, 200, 0.5, seed)
        })?
        .dataset;
        for membership in [Membership::Intersection, Membership::Subset] {
            let config = MetricConfig {
                membership,
                empty_side: EmptySidePolicy::Undefined,
            };
            let report = compare_with_oracle(&ds, config, DEFAULT_ORACLE_CAP)?;
            println!(
                "seed {seed} {membership:?}: {} compared, {} mismatches",
                report.compared,
                report.mismatches.len()
            );
        }
    }
    Ok(())
}
