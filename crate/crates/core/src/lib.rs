//! Developer interest similarity across a code-hosting platform (A) and a
//! question-and-answer platform (B).
//!
//! The pipeline links accounts by email hash, derives tag-based interest sets
//! for repositories and questions, and scores each linked developer:
//!
//! * how much of their activity falls in interests shared by both platforms
//!   ([`metrics::Scorer::cross_platform_similarity`]), overall and for each of
//!   the twelve platform-A/platform-B activity pairs;
//! * how similar their interests are to those of developers who forked,
//!   watched, committed to, opened pull requests on, answered or favorited
//!   the same items ([`metrics::Scorer::co_participation_similarity`]).
//!
//! Scores are exact rationals. [`synthgen`] builds datasets with a planted
//! overlap and holds a brute-force oracle the engine is checked against.
//!
//! ## Examples
//!
//! Each capability has a runnable example under `examples/`:
//!
//! - **`link_accounts`** - match accounts by email hash, report ambiguities
//! - **`extract_interests`** - tag matching on repository descriptions
//! - **`cross_platform`** - common interests and the cross-platform score
//! - **`activity_pairs`** - the twelve restricted activity-pair scores
//! - **`co_participation`** - neighbours and co-participation scores
//! - **`population_report`** - summary statistics and plot data
//! - **`generate_dataset`** - synthetic data with planted overlap
//! - **`oracle_check`** - indexed engine against the brute-force oracle
//!
//! ```bash
//! cargo run -p devinterest --example cross_platform
//! ```

pub mod error;
pub mod identity;
pub mod index;
pub mod ingest;
pub mod interests;
pub mod metrics;
pub mod pipeline;
pub mod ratio;
pub mod report;
pub mod synthgen;

pub use error::{Error, Result};
pub use identity::{link_identities, normalize_email, LinkedDeveloper, Linking};
pub use index::{DevIndex, ItemIndex, ParticipationIndex, TagItemIndex};
pub use ingest::{
    load_dataset, load_dataset_dir, write_dataset, ActivityKind, ActivityRecord, Dataset, Platform,
};
pub use interests::{match_tag, normalize_tag, InterestSet, ItemCatalog, TagVocabulary};
pub use metrics::{EmptySidePolicy, Membership, Metric, MetricConfig, Scorer};
pub use ratio::Score;
pub use report::{summarize, DistributionSummary};
pub use synthgen::{brute_force_scores, generate, GenSpec};
