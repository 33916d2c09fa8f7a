//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints exactly one PASS or FAIL line; any failure makes the
//! process exit non-zero.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use mpgql_core::eval::{eval_condition, eval_query, Binding, BindingValue, ResultTable, ResultValue, Truth};
use mpgql_core::io::{example_graph, load, GraphIoError};
use mpgql_core::model::{
    parse_date, substructure, validate, Endpoints, GraphParts, GraphView, MetaPropertyGraph, ObjectId, Value,
    ViewEndpoints,
};
use mpgql_core::syntax::{parse_condition, parse_query, render, Query};
use mpgql_testkit::patterns::{all_productions, query_productions};
use mpgql_testkit::{differential_check, gen_graph, seeds, GeneratorConfig, PatternConfig, PatternGen, Vocabulary};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);
/// Name, expected violation class, classes actually reported.
type NegativeCase = (&'static str, &'static str, Result<BTreeSet<&'static str>, String>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(budget: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    f()?;
    let spent = start.elapsed();
    ensure(spent < budget, || format!("took {spent:?}, budget {budget:?}"))
}

fn run_query(file: &str) -> Result<ResultTable, String> {
    let q = parse_query(file).map_err(|e| e.to_string())?;
    eval_query(&q, &example_graph()).map_err(|e| e.to_string())
}

fn s(v: &str) -> ResultValue {
    ResultValue::Value(Value::from(v))
}

/// Rows as sorted `(column, rendered value)` lists.
fn rendered(t: &ResultTable) -> BTreeSet<Vec<(String, String)>> {
    t.rows
        .iter()
        .map(|r| r.iter().map(|(k, v)| (k.clone(), v.to_string())).collect())
        .collect()
}

fn expect_rows(t: &ResultTable, want: &[&[(&str, &str)]]) -> Outcome {
    let want: BTreeSet<Vec<(String, String)>> = want
        .iter()
        .map(|r| {
            let mut v: Vec<_> = r.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
            v.sort();
            v
        })
        .collect();
    let got = rendered(t);
    ensure(got == want, || format!("rows {got:?}, expected {want:?}"))
}

fn golden_q1() -> Outcome {
    timed(Duration::from_secs(1), || {
        let t = run_query(include_str!("../../../fixtures/queries/q1.mpgql"))?;
        let sets: BTreeSet<BTreeSet<String>> = t
            .column("Publication_Co_Tags")
            .into_iter()
            .filter_map(|v| match v {
                ResultValue::LabelSet { labels, .. } => Some(labels.clone()),
                _ => None,
            })
            .collect();
        let want = BTreeSet::from([
            BTreeSet::from(["Publication".to_string(), "Journal".to_string()]),
            BTreeSet::from(["Publication".to_string(), "Conference".to_string()]),
        ]);
        ensure(t.len() == 2 && sets == want, || format!("got {t:?}"))
    })
}

fn golden_q2() -> Outcome {
    timed(Duration::from_secs(1), || {
        let t = run_query(include_str!("../../../fixtures/queries/q2.mpgql"))?;
        let got: BTreeSet<ResultValue> = t.column("Names").into_iter().cloned().collect();
        let want = BTreeSet::from([s("Lee"), s("Scopus"), s("Rose"), s("PubMed")]);
        ensure(t.len() == 4 && got == want, || format!("got {got:?}"))
    })
}

fn golden_q3() -> Outcome {
    timed(Duration::from_secs(1), || {
        let t = run_query(include_str!("../../../fixtures/queries/q3.mpgql"))?;
        expect_rows(
            &t,
            &[
                &[("Title", "Nature Studies"), ("Scopus", "{\"Archived\"}")],
                &[("Title", "Nature Studies"), ("PubMed", "{\"Indexed\"}")],
                &[("Title", "Biology Advancements"), ("PubMed", "{\"Indexed\"}")],
            ],
        )
    })
}

fn golden_q4() -> Outcome {
    timed(Duration::from_secs(1), || {
        let t = run_query(include_str!("../../../fixtures/queries/q4.mpgql"))?;
        let row = |who, venue, field| -> [(&str, &str); 3] {
            [
                ("Reviewer candidate", who),
                ("Publication venue", venue),
                ("Research field", field),
            ]
        };
        expect_rows(
            &t,
            &[
                &row("Lee", "Nature Studies", "Biology"),
                &row("Lee", "Biology Advancements", "Biology"),
                &row("Rose", "Nature Studies", "Ecology"),
            ],
        )
    })
}

fn golden_q5() -> Outcome {
    timed(Duration::from_secs(1), || {
        let t = run_query(include_str!("../../../fixtures/queries/q5.mpgql"))?;
        let date = ResultValue::Value(Value::Date(parse_date("05-11-2024").expect("valid date")));
        let want: BTreeSet<Vec<(String, ResultValue)>> = BTreeSet::from([vec![
            ("Assigning editor".to_string(), s("Rose")),
            ("Date".to_string(), date),
            ("reviewer name".to_string(), s("Lee")),
        ]]);
        let got: BTreeSet<Vec<(String, ResultValue)>> = t
            .rows
            .iter()
            .map(|r| r.iter().map(|(k, v)| (k.clone(), v.clone())).collect())
            .collect();
        ensure(got == want, || format!("got {got:?}"))
    })
}

fn doc(nodes: &str, edges: &str, rho: &str) -> String {
    format!(r#"{{"format_version": "1", "nodes": [{nodes}], "edges": [{edges}], "rho": {{{rho}}}}}"#)
}

/// A two-node graph with one edge, each element owning one property, as raw parts.
fn small_parts() -> GraphParts {
    let mut g = MetaPropertyGraph::new();
    let a = g.add_node(["A"], [("k", Value::Integer(1))]).expect("fresh node");
    let b = g.add_node(["B"], [("k", Value::Integer(2))]).expect("fresh node");
    g.add_edge(Endpoints::directed(a, b), ["R"], [("w", Value::from("x"))])
        .expect("endpoints exist");
    g.into_parts()
}

fn classes_of_parts(parts: GraphParts) -> BTreeSet<&'static str> {
    validate(&MetaPropertyGraph::from_parts_unchecked(parts))
        .iter()
        .map(|v| v.class())
        .collect()
}

fn classes_of_doc(text: &str) -> Result<BTreeSet<&'static str>, String> {
    match load(text) {
        Err(e @ GraphIoError::Integrity(_)) => Ok(e.violation_classes().into_iter().collect()),
        other => Err(format!("expected an integrity error, got {other:?}")),
    }
}

fn validator() -> Outcome {
    let n1 = ObjectId::node(1);
    let n2 = ObjectId::node(2);
    let e1 = ObjectId::edge(1);
    let p1 = ObjectId::property(1);
    let l1 = ObjectId::label_set(1);
    let l2 = ObjectId::label_set(2);

    let mut cases: Vec<NegativeCase> = Vec::new();

    let mut shared = small_parts();
    shared.sigma.get_mut(&n2).expect("n2 owns properties").insert(p1);
    cases.push(("shared property", "SharedProperty", Ok(classes_of_parts(shared))));

    cases.push((
        "duplicate key",
        "DuplicateKey",
        classes_of_doc(&doc(r#"{"id": "a", "properties": {"Name": "x", "Name": "y"}}"#, "", "")),
    ));

    let mut non_injective = small_parts();
    non_injective.lambda.insert(n2, l1);
    cases.push((
        "non-injective λ",
        "LambdaNotInjective",
        Ok(classes_of_parts(non_injective)),
    ));

    let mut partial = small_parts();
    partial.lambda.remove(&e1);
    cases.push(("partial λ", "LambdaNotTotal", Ok(classes_of_parts(partial))));

    cases.push((
        "ρ self-cycle",
        "CyclicReification",
        classes_of_doc(&doc(r#"{"id": "a"}"#, "", r#""a": ["a"]"#)),
    ));
    cases.push((
        "ρ 2-cycle",
        "CyclicReification",
        classes_of_doc(&doc(r#"{"id": "a"}, {"id": "b"}"#, "", r#""a": ["b"], "b": ["a"]"#)),
    ));
    cases.push((
        "dangling endpoint",
        "DanglingEndpoint",
        classes_of_doc(&doc(
            r#"{"id": "a"}"#,
            r#"{"id": "e", "kind": "directed", "endpoints": ["a", "zz"]}"#,
            "",
        )),
    ));
    cases.push((
        "kind mismatch",
        "KindMismatch",
        classes_of_doc(&doc(
            r#"{"id": "a"}"#,
            r#"{"id": "e", "kind": "directed", "endpoints": ["a", "e"]}"#,
            "",
        )),
    ));

    let mut orphan = small_parts();
    orphan.sigma.get_mut(&n1).expect("n1 owns properties").remove(&p1);
    cases.push(("orphan property", "OrphanProperty", Ok(classes_of_parts(orphan))));

    let mut unlabelled = small_parts();
    unlabelled.mu.remove(&l2);
    cases.push(("label set without μ", "MuNotTotal", Ok(classes_of_parts(unlabelled))));

    let mut no_ends = small_parts();
    no_ends.eta.remove(&e1);
    cases.push(("edge without η", "EtaNotTotal", Ok(classes_of_parts(no_ends))));

    let mut failures = Vec::new();
    for (name, class, got) in &cases {
        match got {
            Ok(classes) if classes.contains(class) => {}
            other => failures.push(format!("{name}: expected {class}, got {other:?}")),
        }
    }
    let fixture = validate(&example_graph());
    if !fixture.is_empty() {
        failures.push(format!("fixture reports {fixture:?}"));
    }
    ensure(cases.len() >= 10 && failures.is_empty(), || failures.join("; "))
}

fn oracle_equivalence() -> Outcome {
    timed(Duration::from_secs(60), || {
        let cfg = GeneratorConfig {
            max_nodes: 6,
            max_edges: 6,
            max_props_per_object: 3,
            ..GeneratorConfig::default()
        };
        let graph_seeds = seeds(&(0..200).collect::<Vec<_>>());
        let mut compared = 0;
        for seed in graph_seeds {
            let g = gen_graph(&cfg.with_seed(seed));
            let mut gen = PatternGen::new(
                PatternConfig {
                    seed,
                    ..PatternConfig::default()
                },
                Vocabulary::of(&g),
            );
            for i in 0..50 {
                let p = gen.pattern();
                let report = differential_check(&g, &p).map_err(|e| format!("seed {seed}: {e}"))?;
                ensure(report.is_empty(), || {
                    format!(
                        "graph seed {seed}, pattern {i} `{p}`: missing {:?}, extra {:?}",
                        report.missing, report.extra
                    )
                })?;
                compared += 1;
            }
        }
        ensure(compared > 0, || "nothing compared".into())
    })
}

/// One or more queries per grammar alternative.
const WITNESSES: &[&str] = &[
    "MATCH (x), (:A), (:?l), (::(y)), (x:A), (x:?l), (x::(y)), (:A::(y)), (:?l::(y)), (x:A::(y)), (x:?l::(y)) RETURN x AS x",
    "MATCH ()-[e]->(), ()-[:A]->(), ()-[:?l]->(), ()-[e:A]->(), ()-[e:?l]->() RETURN e AS e",
    "MATCH ()-[]->(), ()<-[]-(), ()-[]-(), ()<-[e]-(), ()-[e]-() RETURN e AS e",
    "MATCH ()-[e].p->(), ()<-[e].p-(), ()-[e].p-() RETURN p AS p",
    "MATCH (x).p, ().q, {}, {r}, ||, |l| RETURN p AS p",
    "MATCH (x)-[e]->(y) + (z) WHERE x:A, (w) WHERE w:B RETURN x AS x, z AS \"the z\"",
    "MATCH (x) WHERE x.k = 1 AND x.k < 2.5 OR NOT x:A RETURN x.k AS x.k",
    "MATCH |l|, |m| WHERE SUBSETEQ(l, m) AND \"A\" ELEMENTOF l AND .k ELEMENTOF m AND :A ELEMENTOF l RETURN l AS l",
    "MATCH {p} FILTER KEY(p) = .k AND VAL(p) = DATE \"2024-11-05\" AND :A = \"A\" RETURN VAL(p) AS KEY(p)",
];

fn parser_round_trip() -> Outcome {
    let mut productions = BTreeSet::new();
    for w in WITNESSES {
        let q = parse_query(w).map_err(|e| format!("witness `{w}`: {e}"))?;
        let back = parse_query(&render(&q)).map_err(|e| format!("rendered witness `{w}`: {e}"))?;
        ensure(back == q, || format!("witness `{w}` does not round-trip"))?;
        productions.extend(query_productions(&q));
    }
    let missing: Vec<_> = all_productions().difference(&productions).copied().collect();
    ensure(missing.is_empty(), || format!("no witness for {missing:?}"))?;

    let g = example_graph();
    let mut gen = PatternGen::new(PatternConfig::default(), Vocabulary::of(&g));
    for i in 0..10_000 {
        let q: Query = gen.query();
        let text = render(&q);
        let back = parse_query(&text).map_err(|e| format!("sample {i} `{text}`: {e}"))?;
        ensure(back == q, || format!("sample {i} `{text}` does not round-trip"))?;
    }
    Ok(())
}

fn kleene() -> Outcome {
    use Truth::{False as F, Null as N, True as T};
    let and = [
        (T, T, T),
        (T, F, F),
        (T, N, N),
        (F, T, F),
        (F, F, F),
        (F, N, F),
        (N, T, N),
        (N, F, F),
        (N, N, N),
    ];
    let or = [
        (T, T, T),
        (T, F, T),
        (T, N, T),
        (F, T, T),
        (F, F, F),
        (F, N, N),
        (N, T, T),
        (N, F, N),
        (N, N, N),
    ];
    let not = [(T, F), (F, T), (N, N)];
    for (a, b, want) in and {
        ensure(a.and(b) == want, || format!("{a} AND {b} gave {}", a.and(b)))?;
    }
    for (a, b, want) in or {
        ensure(a.or(b) == want, || format!("{a} OR {b} gave {}", a.or(b)))?;
    }
    for (a, want) in not {
        ensure(a.not() == want, || format!("NOT {a} gave {}", a.not()))?;
    }

    // The same tables through the condition evaluator: `x = 1` is True,
    // False or Null for x = 1, x = 2 and x unbound.
    let g = MetaPropertyGraph::new();
    let env = |v: Option<i64>| -> Binding {
        v.map(|i| (mpgql_core::syntax::Var::from("x"), Value::Integer(i)))
            .into_iter()
            .collect()
    };
    let y = |t: Truth| -> Binding {
        match t {
            T => [("y", Value::Integer(1))]
                .into_iter()
                .map(|(k, v)| (k.into(), v))
                .collect(),
            F => [("y", Value::Integer(2))]
                .into_iter()
                .map(|(k, v)| (k.into(), v))
                .collect(),
            N => Binding::new(),
        }
    };
    let truth_binding = |a: Truth, b: Truth| -> Binding {
        let mut out = env(match a {
            T => Some(1),
            F => Some(2),
            N => None,
        });
        for (k, v) in y(b).iter() {
            out.insert(k.clone(), v.clone());
        }
        out
    };
    let and_c = parse_condition("x = 1 AND y = 1").map_err(|e| e.to_string())?;
    let or_c = parse_condition("x = 1 OR y = 1").map_err(|e| e.to_string())?;
    let not_c = parse_condition("NOT x = 1").map_err(|e| e.to_string())?;
    for (a, b, want) in and {
        let got = eval_condition(&and_c, &truth_binding(a, b), &g);
        ensure(got == want, || format!("condition {a} AND {b} gave {got}"))?;
    }
    for (a, b, want) in or {
        let got = eval_condition(&or_c, &truth_binding(a, b), &g);
        ensure(got == want, || format!("condition {a} OR {b} gave {got}"))?;
    }
    for (a, want) in not {
        let got = eval_condition(&not_c, &truth_binding(a, T), &g);
        ensure(got == want, || format!("condition NOT {a} gave {got}"))?;
    }

    // Null on either side of `=` and `<` gives Null.
    let mut b = Binding::new();
    b.insert("n".into(), BindingValue::Null);
    b.insert("v".into(), Value::Integer(3));
    for text in ["n = v", "v = n", "n = n", "n < v", "v < n", "n < n", "u = v", "v < u"] {
        let c = parse_condition(text).map_err(|e| e.to_string())?;
        let got = eval_condition(&c, &b, &g);
        ensure(got == N, || format!("`{text}` gave {got}, expected Null"))?;
    }
    Ok(())
}

fn substructure_laws() -> Outcome {
    let cfg = GeneratorConfig {
        rho_density: 8,
        ..GeneratorConfig::default()
    };
    for seed in 0..100 {
        let g = gen_graph(&cfg.with_seed(seed));
        let parts = g.parts();
        for n in g.nodes() {
            let view = substructure(&g, n).map_err(|e| e.to_string())?;
            let rho = g.rho_of(n).map_err(|e| e.to_string())?;
            let at = |what: &str| format!("seed {seed}, node {n}: {what}");

            let inter = |set: &BTreeSet<ObjectId>| -> Vec<ObjectId> { set.intersection(rho).copied().collect() };
            ensure(view.nodes() == inter(&parts.nodes), || at("N_n"))?;
            ensure(view.edges() == inter(&parts.edges), || at("E_n"))?;
            ensure(view.properties() == inter(&parts.properties), || at("P_n"))?;
            ensure(view.label_sets() == inter(&parts.label_sets), || at("L_n"))?;

            for o in parts.nodes.iter().chain(&parts.edges) {
                let inside = rho.contains(o);
                let want_lambda = parts.lambda.get(o).copied().filter(|l| inside && rho.contains(l));
                ensure(view.lambda(*o) == want_lambda, || at(&format!("λ_n({o})")))?;
                let want_sigma: Vec<ObjectId> = if inside {
                    parts.sigma.get(o).map(&inter).unwrap_or_default()
                } else {
                    Vec::new()
                };
                ensure(view.sigma(*o) == want_sigma, || at(&format!("σ_n({o})")))?;
            }
            for p in &parts.properties {
                let want = parts
                    .upsilon
                    .get(p)
                    .filter(|_| rho.contains(p))
                    .map(|(k, v)| (k.as_str(), v));
                ensure(view.upsilon(*p) == want, || at(&format!("υ_n({p})")))?;
            }
            for l in &parts.label_sets {
                let want = parts.mu.get(l).filter(|_| rho.contains(l));
                ensure(view.mu(*l) == want, || at(&format!("μ_n({l})")))?;
            }
            for e in &parts.edges {
                let keep = |x: ObjectId| rho.contains(&x).then_some(x);
                let want = rho.contains(e).then(|| match parts.eta[e] {
                    Endpoints::Directed { source, target } => ViewEndpoints::Directed {
                        source: keep(source),
                        target: keep(target),
                    },
                    Endpoints::Undirected(a, b) => ViewEndpoints::Undirected(keep(a), keep(b)),
                });
                ensure(view.eta(*e) == want, || at(&format!("η_n({e})")))?;
            }
            for m in view.nodes() {
                let want: BTreeSet<ObjectId> = g
                    .rho_of(m)
                    .map_err(|e| e.to_string())?
                    .intersection(rho)
                    .copied()
                    .collect();
                ensure(view.rho(m) == want, || at(&format!("ρ_n({m})")))?;
            }
        }
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("golden Q1", golden_q1),
        ("golden Q2", golden_q2),
        ("golden Q3", golden_q3),
        ("golden Q4", golden_q4),
        ("golden Q5", golden_q5),
        ("validator classes", validator),
        ("engine equals oracle on 200 graphs x 50 patterns", oracle_equivalence),
        ("parse(render(a)) = a", parser_round_trip),
        ("Kleene logic and Null propagation", kleene),
        ("substructure laws", substructure_laws),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(()) => println!("PASS {:>2} {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
