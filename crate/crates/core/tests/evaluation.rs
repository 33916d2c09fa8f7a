use std::collections::BTreeSet;

use mpgql_core::eval::{
    eval_clause, eval_condition, eval_expression, eval_pattern, eval_query, Binding, BindingSet, BindingValue,
    EvalError, GraphContext, Truth,
};
use mpgql_core::io::example_graph;
use mpgql_core::model::{substructure, Endpoints, GraphView, MetaPropertyGraph, ObjectId, Value, NO_LABELS, NO_PROPS};
use mpgql_core::syntax::{parse_condition, parse_pattern, parse_query, Clause, Expression, Var};

fn pat(g: &dyn GraphView, text: &str) -> BindingSet {
    eval_pattern(&parse_pattern(text).unwrap(), g)
}

fn binding(pairs: &[(&str, BindingValue)]) -> Binding {
    pairs.iter().map(|(x, v)| (Var::from(*x), v.clone())).collect()
}

fn obj(o: ObjectId) -> BindingValue {
    BindingValue::Object(o)
}

#[test]
fn empty_graph_matches_nothing() {
    let g = MetaPropertyGraph::new();
    for p in ["(x)", "()", "-[e]->", "{p}", "|l|", "(a) + (b)"] {
        assert!(pat(&g, p).is_empty(), "{p}");
    }
}

#[test]
fn union_pads_with_null() {
    let mut g = MetaPropertyGraph::new();
    let n = g.add_node(["A"], NO_PROPS).unwrap();
    let got = pat(&g, "(a) + (b)");
    let want = BTreeSet::from([
        binding(&[("a", obj(n)), ("b", BindingValue::Null)]),
        binding(&[("b", obj(n)), ("a", BindingValue::Null)]),
    ]);
    assert_eq!(got, want);
}

#[test]
fn publications_and_their_indexes() {
    let g = example_graph();
    assert_eq!(pat(&g, "(x:Publication)-[:?y]->(z:Indexing_DB)").len(), 3);
    let q1 = pat(&g, "|l| WHERE \"Publication\" ELEMENTOF l");
    let sets: BTreeSet<_> = q1
        .iter()
        .map(|b| {
            g.label_set(b.get(&Var::from("l")).unwrap().as_object().unwrap())
                .unwrap()
                .clone()
        })
        .collect();
    assert_eq!(sets.len(), 2);
    assert!(sets.iter().all(|s| s.contains("Publication")));
}

#[test]
fn paths_follow_edge_direction() {
    let g = example_graph();
    let right = pat(&g, "(x:Person)-[:reviews]->(y)");
    let left = pat(&g, "(y)<-[:reviews]-(x:Person)");
    assert_eq!(right, left);
    assert_eq!(right.len(), 2);
    assert!(pat(&g, "(x:Publication)-[:reviews]->(y)").is_empty());
    // Directed edges never match the undirected form.
    assert!(pat(&g, "(x)-[:reviews]-(y)").is_empty());
}

#[test]
fn undirected_edges_match_both_ways() {
    let mut g = MetaPropertyGraph::new();
    let a = g.add_node(["A"], NO_PROPS).unwrap();
    let b = g.add_node(["B"], NO_PROPS).unwrap();
    g.add_edge(Endpoints::undirected(a, b), ["knows"], NO_PROPS).unwrap();
    let got = pat(&g, "(x)-[:knows]-(y)");
    assert_eq!(
        got,
        BTreeSet::from([
            binding(&[("x", obj(a)), ("y", obj(b))]),
            binding(&[("x", obj(b)), ("y", obj(a))]),
        ])
    );
    assert_eq!(pat(&g, "(x:A)-[]-(y)").len(), 1);
}

#[test]
fn free_atoms_do_not_break_paths() {
    let g = example_graph();
    let plain = pat(&g, "(x:Person)-[:reviews]->(y)");
    let with_prop = pat(&g, "(x:Person){p}-[:reviews]->(y) WHERE KEY(p) = \"Title\"");
    // `{p}` is joined freely; the path from x to y is still enforced.
    // Two Title properties in the graph.
    assert_eq!(with_prop.len(), plain.len() * 2);
}

/// Bob edited some book, but the book is not part of Mary's view.
fn dangling() -> (MetaPropertyGraph, ObjectId, ObjectId, ObjectId) {
    let mut g = MetaPropertyGraph::new();
    let bob = g.add_node(["Person"], [("Name", Value::from("Bob"))]).unwrap();
    let book = g.add_node(["Book"], NO_PROPS).unwrap();
    let edited = g
        .add_edge(Endpoints::directed(bob, book), ["edited"], NO_PROPS)
        .unwrap();
    let mary = g.add_node(["Person"], NO_PROPS).unwrap();
    let bob_labels = g.label_id_of(bob).unwrap();
    let edited_labels = g.label_id_of(edited).unwrap();
    g.set_rho(mary, [bob, bob_labels, edited, edited_labels]).unwrap();
    (g, bob, edited, mary)
}

#[test]
fn empty_node_matches_missing_endpoint() {
    let (g, bob, edited, mary) = dangling();
    let view = substructure(&g, mary).unwrap();
    let got = pat(&view, "(x:Person)-[e:edited]->()");
    assert_eq!(got, BTreeSet::from([binding(&[("x", obj(bob)), ("e", obj(edited))])]));
    assert!(pat(&view, "(x:Person)-[e:edited]->(y)").is_empty());
    assert!(pat(&view, "(x)-[e]->(:Book)").is_empty());
    // On the whole graph the endpoint is defined and () binds to it.
    assert_eq!(pat(&g, "(x)-[e:edited]->()").len(), 1);
    // Matched through the meta-node.
    let meta = pat(&g, "(m::(x:Person)-[:edited]->())");
    assert_eq!(meta, BTreeSet::from([binding(&[("m", obj(mary)), ("x", obj(bob))])]));
}

#[test]
fn empty_node_on_its_own() {
    let (g, _, _, mary) = dangling();
    let view = substructure(&g, mary).unwrap();
    assert_eq!(pat(&view, "()"), BTreeSet::from([Binding::new()]));
    let mut edges_only = MetaPropertyGraph::new();
    let a = edges_only.add_node(NO_LABELS, NO_PROPS).unwrap();
    let b = edges_only.add_node(NO_LABELS, NO_PROPS).unwrap();
    let e = edges_only
        .add_edge(Endpoints::directed(a, b), NO_LABELS, NO_PROPS)
        .unwrap();
    let r = edges_only.add_node(NO_LABELS, NO_PROPS).unwrap();
    edges_only.set_rho(r, [e]).unwrap();
    let view = substructure(&edges_only, r).unwrap();
    // No node in view: `()` alone matches nothing, but `()-[x]->()` does.
    assert!(pat(&view, "()").is_empty());
    assert_eq!(pat(&view, "()-[x]->()"), BTreeSet::from([binding(&[("x", obj(e))])]));
}

#[test]
fn meta_node_bindings_stay_inside_rho() {
    let g = example_graph();
    let got = pat(&g, "(y::(z)-[r]->())");
    assert!(!got.is_empty());
    for b in &got {
        let y = b.get(&Var::from("y")).unwrap().as_object().unwrap();
        let rho = g.rho_of(y).unwrap();
        for x in ["z", "r"] {
            assert!(rho.contains(&b.get(&Var::from(x)).unwrap().as_object().unwrap()));
        }
    }
}

#[test]
fn meta_node_inner_pattern_sees_only_the_view() {
    let g = example_graph();
    // Lee's ResearchField is not reified, so it is invisible inside n7.
    assert!(pat(&g, "(y::(z) WHERE z.ResearchField = \"Biology\")").is_empty());
    assert_eq!(pat(&g, "(y::(z) WHERE z.Name = \"Lee\")").len(), 1);
    assert!(pat(&g, "(y::(z).p WHERE KEY(p) = \"ResearchField\")").is_empty());
}

#[test]
fn label_variables_bind_label_set_objects() {
    let g = example_graph();
    let got = pat(&g, "(x:?l) WHERE x:Indexing_DB");
    assert_eq!(got.len(), 2);
    for b in &got {
        let x = b.get(&Var::from("x")).unwrap().as_object().unwrap();
        assert_eq!(b.get(&Var::from("l")), Some(&obj(g.label_id_of(x).unwrap())));
    }
}

#[test]
fn selectors_bind_each_property() {
    let g = example_graph();
    assert_eq!(pat(&g, "(x:Journal).p").len(), 3);
    assert!(pat(&g, "-[e:reviews].p->").is_empty());
}

#[test]
fn expressions_default_to_null() {
    let g = example_graph();
    let n1 = ObjectId::node(1);
    let b = binding(&[
        ("x", obj(n1)),
        ("p", obj(g.property_by_key(ObjectId::node(5), "Name").unwrap())),
    ]);
    let ev = |e: &Expression| eval_expression(e, &b, &g);
    assert_eq!(ev(&Expression::prop("x", "Missing")), BindingValue::Null);
    assert_eq!(
        ev(&Expression::prop("x", "Name")),
        BindingValue::Value(Value::from("Lee"))
    );
    assert_eq!(
        ev(&Expression::ValOf(Var::from("p"))),
        BindingValue::Value(Value::from("Scopus"))
    );
    assert_eq!(
        ev(&Expression::KeyOf(Var::from("p"))),
        BindingValue::Value(Value::from("Name"))
    );
    assert_eq!(ev(&Expression::KeyOf(Var::from("x"))), BindingValue::Null);
    assert_eq!(ev(&Expression::var("unbound")), BindingValue::Null);
}

#[test]
fn conditions_follow_three_valued_logic() {
    let g = example_graph();
    let l1 = g.label_id_of(ObjectId::node(1)).unwrap();
    let l7 = g.label_id_of(ObjectId::node(7)).unwrap();
    let l3 = g.label_id_of(ObjectId::node(3)).unwrap();
    let b = binding(&[
        ("x", obj(ObjectId::node(1))),
        ("l", obj(l3)),
        ("empty", obj(l7)),
        ("person", obj(l1)),
        ("n", BindingValue::Null),
        ("v", BindingValue::Value(Value::Integer(3))),
    ]);
    let c = |s: &str| eval_condition(&parse_condition(s).unwrap(), &b, &g);
    assert_eq!(c("\"Publication\" ELEMENTOF l"), Truth::True);
    assert_eq!(c(":Journal ELEMENTOF l"), Truth::True);
    assert_eq!(c("\"Person\" ELEMENTOF l"), Truth::False);
    assert_eq!(c("\"Person\" ELEMENTOF x"), Truth::False);
    assert_eq!(c("n = \"x\""), Truth::Null);
    assert_eq!(c("n < 1"), Truth::Null);
    assert_eq!(c("n = \"x\" AND v = 4"), Truth::False);
    assert_eq!(c("n = \"x\" OR v = 3"), Truth::True);
    assert_eq!(c("SUBSETEQ(empty, person)"), Truth::True);
    assert_eq!(c("SUBSETEQ(person, l)"), Truth::False);
    assert_eq!(c("x:Person"), Truth::True);
    assert_eq!(c("x:Book"), Truth::False);
    assert_eq!(c("v:Person"), Truth::Null);
    assert_eq!(c("v < 3.5"), Truth::True);
    assert_eq!(c("v = 3.0"), Truth::True);
    assert_eq!(c("v < \"a\""), Truth::Null);
    assert_eq!(c("v = \"3\""), Truth::False);
    assert_eq!(c("x.Name < \"Rose\""), Truth::True);
}

#[test]
fn dates_compare_with_day_first_strings() {
    let g = example_graph();
    let b = binding(&[("y", obj(ObjectId::node(7)))]);
    let c = |s: &str| eval_condition(&parse_condition(s).unwrap(), &b, &g);
    assert_eq!(c("y.Date = \"05-11-2024\""), Truth::True);
    assert_eq!(c("y.Date = DATE \"2024-11-05\""), Truth::True);
    assert_eq!(c("y.Date < \"06-11-2024\""), Truth::True);
}

#[test]
fn clauses_over_working_tables() {
    let g = example_graph();
    let q = parse_query(include_str!("../../../fixtures/queries/q4.mpgql"))
        .unwrap()
        .desugar();
    let mut t = BindingSet::from([Binding::new()]);
    for c in &q.clauses {
        t = eval_clause(c, t, &g);
    }
    assert_eq!(t.len(), 3);
    let filter = Clause::Filter(parse_condition("x:Person").unwrap());
    assert!(eval_clause(&filter, BindingSet::new(), &g).is_empty());
    let m = parse_query("MATCH (x:Person) RETURN x AS x").unwrap().clauses.remove(0);
    assert_eq!(
        eval_clause(&m, BindingSet::from([Binding::new()]), &g),
        pat(&g, "(x:Person)")
    );
}

#[test]
fn graph_patterns_commute() {
    let g = example_graph();
    let a = parse_query("MATCH (x:Person), (y)-[:Indexed]->(z) RETURN x AS x").unwrap();
    let b = parse_query("MATCH (y)-[:Indexed]->(z), (x:Person) RETURN x AS x").unwrap();
    let run = |q: &mpgql_core::syntax::Query| eval_clause(&q.clauses[0], BindingSet::from([Binding::new()]), &g);
    assert_eq!(run(&a), run(&b));
    assert_eq!(run(&a).len(), 4);
}

#[test]
fn return_checks_bound_variables() {
    let g = example_graph();
    let q = parse_query("MATCH (x) RETURN y.Name AS n").unwrap();
    assert_eq!(eval_query(&q, &g), Err(EvalError::UnboundVariable(Var::from("y"))));
    let q = parse_query("MATCH (x) RETURN x AS w.Name").unwrap();
    assert_eq!(eval_query(&q, &g), Err(EvalError::UnboundVariable(Var::from("w"))));
    let q = parse_query("MATCH (x:Nothing) RETURN 1 AS c").unwrap();
    assert!(eval_query(&q, &g).unwrap().is_empty());
}

#[test]
fn dynamic_alias_null_drops_the_column() {
    let g = example_graph();
    let q = parse_query("MATCH (x:Person) RETURN x.Name AS x.Missing, x.Name AS \"n\"").unwrap();
    let t = eval_query(&q, &g).unwrap();
    assert_eq!(t.columns, ["n"]);
    assert_eq!(t.len(), 2);
}

#[test]
fn context_wraps_graph_or_view() {
    let g = example_graph();
    let whole = GraphContext::from(&g);
    let view = GraphContext::from(substructure(&g, ObjectId::node(7)).unwrap());
    assert_eq!(pat(&whole, "(x:Person)").len(), 2);
    assert_eq!(pat(&view, "(x:Person)").len(), 1);
}
