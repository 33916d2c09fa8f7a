//! Test support: random graphs and queries, a reference evaluator for
//! patterns, and a differential check between the two evaluators.

pub mod diff;
pub mod generate;
pub mod oracle;
pub mod patterns;

pub use diff::{differential_check, DiffReport};
pub use generate::{gen_graph, GeneratorConfig};
pub use oracle::{oracle_eval_pattern, OracleError};
pub use patterns::{gen_pattern, PatternConfig, PatternGen, Production, Vocabulary};

/// Seeds for randomized tests: `MPGQL_TEST_SEEDS` as a comma-separated
/// list, or `default` when unset or unparsable.
pub fn seeds(default: &[u64]) -> Vec<u64> {
    std::env::var("MPGQL_TEST_SEEDS")
        .ok()
        .and_then(|s| {
            s.split(',')
                .map(|x| x.trim().parse().ok())
                .collect::<Option<Vec<u64>>>()
        })
        .filter(|v| !v.is_empty())
        .unwrap_or_else(|| default.to_vec())
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/testing.md")]
pub mod book_testing {}
