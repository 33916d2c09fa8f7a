use std::collections::BTreeSet;

use mpgql_core::eval::eval_query;
use mpgql_core::model::validate;
use mpgql_core::syntax::{parse_query, render, Pattern};
use mpgql_testkit::patterns::{all_productions, query_productions};
use mpgql_testkit::{gen_graph, GeneratorConfig, PatternConfig, PatternGen, Vocabulary};
use proptest::prelude::*;

#[test]
fn graphs_are_deterministic() {
    let cfg = GeneratorConfig::default().with_seed(42);
    assert_eq!(gen_graph(&cfg), gen_graph(&cfg));
    assert_ne!(gen_graph(&cfg), gen_graph(&cfg.with_seed(43)));
}

#[test]
fn generated_graphs_are_valid() {
    for seed in 0..1000 {
        let g = gen_graph(&GeneratorConfig::default().with_seed(seed));
        assert!(validate(&g).is_empty(), "seed {seed}");
        assert!(g.object_count() <= mpgql_testkit::oracle::MAX_OBJECTS);
    }
}

#[test]
fn no_nodes_means_an_empty_graph() {
    let g = gen_graph(&GeneratorConfig {
        max_nodes: 0,
        ..GeneratorConfig::default()
    });
    assert_eq!(g.object_count(), 0);
}

fn meta_depth(p: &Pattern) -> usize {
    match p {
        Pattern::Node {
            descriptor: Some(d), ..
        } => d.meta.as_deref().map_or(0, |m| 1 + meta_depth(m)),
        Pattern::Concat(a, b) | Pattern::Union(a, b) => meta_depth(a).max(meta_depth(b)),
        Pattern::Where(p, _) => meta_depth(p),
        _ => 0,
    }
}

#[test]
fn meta_nesting_respects_the_depth_bound() {
    let g = mpgql_core::io::example_graph();
    for max_depth in 0..3 {
        let mut gen = PatternGen::new(
            PatternConfig {
                max_depth,
                ..PatternConfig::default()
            },
            Vocabulary::of(&g),
        );
        for _ in 0..500 {
            assert!(meta_depth(&gen.pattern()) <= max_depth);
        }
    }
}

#[test]
fn queries_reach_every_production() {
    let g = mpgql_core::io::example_graph();
    let mut gen = PatternGen::new(PatternConfig::default(), Vocabulary::of(&g));
    let mut seen = BTreeSet::new();
    for _ in 0..10_000 {
        seen.extend(query_productions(&gen.query()));
    }
    let missing: Vec<_> = all_productions().difference(&seen).copied().collect();
    assert!(missing.is_empty(), "never generated: {missing:?}");
}

#[test]
fn generated_queries_evaluate() {
    let g = mpgql_core::io::example_graph();
    let mut gen = PatternGen::new(PatternConfig::default(), Vocabulary::of(&g));
    for _ in 0..200 {
        let q = gen.query();
        assert!(eval_query(&q, &g).is_ok(), "{}", render(&q));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn render_then_parse_is_identity(seed in any::<u64>()) {
        let g = gen_graph(&GeneratorConfig::default().with_seed(seed));
        let mut gen = PatternGen::new(PatternConfig { seed, ..PatternConfig::default() }, Vocabulary::of(&g));
        let q = gen.query();
        let text = render(&q);
        prop_assert_eq!(parse_query(&text).map_err(|e| e.to_string()), Ok(q), "{}", text);
    }
}
