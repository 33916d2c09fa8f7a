use mpgql_core::model::GraphView;
use mpgql_core::syntax::{parse_pattern, render_pattern};
use mpgql_testkit::{differential_check, gen_graph, seeds, GeneratorConfig, PatternConfig, PatternGen, Vocabulary};

fn check_graph(seed: u64, patterns: usize) {
    let g = gen_graph(&GeneratorConfig::default().with_seed(seed));
    let mut gen = PatternGen::new(
        PatternConfig {
            seed,
            ..PatternConfig::default()
        },
        Vocabulary::of(&g),
    );
    for _ in 0..patterns {
        let p = gen.pattern();
        let report = differential_check(&g, &p).expect("generated graphs fit the oracle");
        assert!(
            report.is_empty(),
            "seed {seed}, pattern {}\nmissing {:?}\nextra {:?}",
            render_pattern(&p),
            report.missing,
            report.extra
        );
    }
}

#[test]
fn engine_agrees_with_oracle_on_random_graphs() {
    for seed in seeds(&(0..40).collect::<Vec<_>>()) {
        check_graph(seed, 25);
    }
}

#[test]
fn engine_agrees_with_oracle_inside_substructures() {
    for seed in seeds(&[3, 5, 8, 13]) {
        let g = gen_graph(&GeneratorConfig {
            rho_density: 10,
            ..GeneratorConfig::default().with_seed(seed)
        });
        let mut gen = PatternGen::new(
            PatternConfig {
                seed,
                ..PatternConfig::default()
            },
            Vocabulary::of(&g),
        );
        for n in g.nodes() {
            let view = g.substructure(n).unwrap();
            for _ in 0..10 {
                let p = gen.pattern();
                let report = differential_check(&view, &p).unwrap();
                assert!(
                    report.is_empty(),
                    "seed {seed}, view of {n}, pattern {}",
                    render_pattern(&p)
                );
            }
        }
    }
}

#[test]
fn fixed_patterns_on_the_example_graph() {
    let g = mpgql_core::io::example_graph();
    for src in [
        "(x)-[e:reviews]->(y)",
        "(x)<-[e]-(y)",
        "(x:Person)+(y:Indexing_DB)",
        "(n::(x)-[e]->())",
        "()-[e]->()",
        "(x:?l){p}|m|",
        "(x).p WHERE KEY(p) = \"Title\"",
        "(w:Person::(z)-[:reviews]->()) WHERE w.Name = z.Name",
    ] {
        let p = parse_pattern(src).unwrap();
        assert!(differential_check(&g, &p).unwrap().is_empty(), "{src}");
    }
}
