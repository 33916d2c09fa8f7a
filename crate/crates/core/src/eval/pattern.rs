//! Pattern matching.
//!
//! Node and edge atoms juxtaposed in a pattern form a path: in
//! `(a)-[e]->(b)` the edge must leave `a` and enter `b`. Each partial match
//! therefore remembers what sits at its two open ends so that the next
//! concatenation can check adjacency. Property `{x}` and label `|x|` atoms
//! have no position on a path and are joined without any adjacency test.
//!
//! Inside a substructure an edge endpoint may lie outside the view. Only
//! the bare node pattern `()` accepts such an endpoint; it may then stand
//! for no node at all (`End::Absent`), which is only meaningful next to an
//! edge whose endpoint is missing.

use std::collections::BTreeSet;

use crate::model::{GraphView, ObjectId, ViewEndpoints};
use crate::syntax::{Direction, LabelTest, Pattern, Var};

use super::binding::{join, Binding, BindingSet, BindingValue};
use super::expr::eval_condition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum End {
    /// The match contains no node or edge atom.
    Open,
    /// A node atom bound to this node; `bare` for the `()` pattern.
    Node { id: ObjectId, bare: bool },
    /// A bare `()` standing for a missing endpoint.
    Absent,
    /// An edge endpoint; `None` if it lies outside the view.
    Edge(Option<ObjectId>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct PathMatch {
    binding: Binding,
    start: End,
    end: End,
    /// An `Absent` node not yet attached to any edge with a missing endpoint.
    pending: bool,
}

/// Evaluates a pattern against a graph or substructure.
pub fn eval_pattern(p: &Pattern, ctx: &dyn GraphView) -> BindingSet {
    matches(p, ctx)
        .into_iter()
        .filter(|m| !m.pending)
        .map(|m| m.binding)
        .collect()
}

fn free(binding: Binding) -> PathMatch {
    PathMatch {
        binding,
        start: End::Open,
        end: End::Open,
        pending: false,
    }
}

fn matches(p: &Pattern, ctx: &dyn GraphView) -> BTreeSet<PathMatch> {
    match p {
        Pattern::Node { .. } => node_matches(p, ctx),
        Pattern::Edge { .. } => edge_matches(p, ctx),
        Pattern::Property(x) => object_matches(x, ctx.properties()),
        Pattern::Label(x) => object_matches(x, ctx.label_sets()),
        Pattern::Concat(a, b) => {
            let left = matches(a, ctx);
            let right = matches(b, ctx);
            let mut out = BTreeSet::new();
            for l in &left {
                for r in &right {
                    if let Some(m) = concat(l, r) {
                        out.insert(m);
                    }
                }
            }
            out
        }
        Pattern::Union(a, b) => {
            let all = p.variables();
            let mut out = BTreeSet::new();
            for arm in [a, b] {
                for mut m in matches(arm, ctx) {
                    for x in &all {
                        if !m.binding.contains(x) {
                            m.binding.insert(x.clone(), BindingValue::Null);
                        }
                    }
                    out.insert(m);
                }
            }
            out
        }
        Pattern::Where(inner, cond) => matches(inner, ctx)
            .into_iter()
            .filter(|m| eval_condition(cond, &m.binding, ctx).is_true())
            .collect(),
    }
}

fn object_matches(x: &Option<Var>, objects: Vec<ObjectId>) -> BTreeSet<PathMatch> {
    objects
        .into_iter()
        .map(|o| {
            let mut b = Binding::new();
            if let Some(x) = x {
                b.insert(x.clone(), o);
            }
            free(b)
        })
        .collect()
}

/// Joins two adjacent partial paths if their facing ends connect.
fn concat(l: &PathMatch, r: &PathMatch) -> Option<PathMatch> {
    let (clear_left, clear_right) = connect(l.end, r.start)?;
    let binding = join(&l.binding, &r.binding).ok()?;
    Some(PathMatch {
        binding,
        start: if l.start == End::Open { r.start } else { l.start },
        end: if r.end == End::Open { l.end } else { r.end },
        pending: (l.pending && !clear_left) || (r.pending && !clear_right),
    })
}

/// Whether two facing ends may meet. On success, reports for each side
/// whether an `Absent` node was just attached to a missing endpoint.
fn connect(x: End, y: End) -> Option<(bool, bool)> {
    use End::*;
    let ok = |b: bool| b.then_some((false, false));
    match (x, y) {
        (Open, _) | (_, Open) => ok(true),
        (Node { id: a, .. }, Node { id: b, .. }) => ok(a == b),
        (Absent, Absent) => ok(true),
        (Absent, Node { .. }) | (Node { .. }, Absent) => None,
        (Edge(a), Edge(b)) => ok(a.is_some() && a == b),
        (Node { id, .. }, Edge(Some(v))) | (Edge(Some(v)), Node { id, .. }) => ok(id == v),
        (Node { bare, .. }, Edge(None)) | (Edge(None), Node { bare, .. }) => ok(bare),
        (Absent, Edge(None)) => Some((true, false)),
        (Edge(None), Absent) => Some((false, true)),
        (Absent, Edge(Some(_))) | (Edge(Some(_)), Absent) => None,
    }
}

/// Bindings of a descriptor's label part for element `o`, or `None` if the
/// label test fails.
fn label_binding(test: &Option<LabelTest>, o: ObjectId, ctx: &dyn GraphView) -> Option<Option<(Var, ObjectId)>> {
    match test {
        None => Some(None),
        Some(LabelTest::Label(l)) => ctx.labels(o).filter(|ls| ls.contains(l)).map(|_| None),
        Some(LabelTest::Variable(y)) => ctx.lambda(o).map(|l| Some((y.clone(), l))),
    }
}

/// Head binding for an element: its variable and label variable.
fn head_binding(var: &Option<Var>, label: &Option<LabelTest>, o: ObjectId, ctx: &dyn GraphView) -> Option<Binding> {
    let mut b = Binding::new();
    if let Some(x) = var {
        b.insert(x.clone(), o);
    }
    if let Some((y, l)) = label_binding(label, o, ctx)? {
        b = b.extended(&y, BindingValue::Object(l))?;
    }
    Some(b)
}

/// Expands a binding with a property selector `.z`: one binding per
/// property of `o` in the view.
fn with_selector(b: Binding, selector: &Option<Var>, o: ObjectId, ctx: &dyn GraphView) -> Vec<Binding> {
    match selector {
        None => vec![b],
        Some(z) => ctx
            .sigma(o)
            .into_iter()
            .filter_map(|p| b.extended(z, BindingValue::Object(p)))
            .collect(),
    }
}

fn node_matches(p: &Pattern, ctx: &dyn GraphView) -> BTreeSet<PathMatch> {
    let Pattern::Node { descriptor, selector } = p else {
        unreachable!()
    };
    let bare = p.is_bare_node();
    let mut out = BTreeSet::new();
    for n in ctx.nodes() {
        let heads = match descriptor {
            None => vec![Binding::new()],
            Some(d) => {
                let Some(head) = head_binding(&d.var, &d.label, n, ctx) else {
                    continue;
                };
                match &d.meta {
                    None => vec![head],
                    Some(inner) => {
                        let view = ctx.substructure(n).expect("node of the view");
                        eval_pattern(inner, &view)
                            .iter()
                            .filter_map(|ib| join(&head, ib).ok())
                            .collect()
                    }
                }
            }
        };
        for head in heads {
            for binding in with_selector(head, selector, n, ctx) {
                let end = End::Node { id: n, bare };
                out.insert(PathMatch {
                    binding,
                    start: end,
                    end,
                    pending: false,
                });
            }
        }
    }
    if bare {
        out.insert(PathMatch {
            binding: Binding::new(),
            start: End::Absent,
            end: End::Absent,
            pending: true,
        });
    }
    out
}

fn edge_matches(p: &Pattern, ctx: &dyn GraphView) -> BTreeSet<PathMatch> {
    let Pattern::Edge {
        direction,
        descriptor,
        selector,
    } = p
    else {
        unreachable!()
    };
    let mut out = BTreeSet::new();
    for e in ctx.edges() {
        let Some(eta) = ctx.eta(e) else { continue };
        // (start, end) as seen reading the pattern left to right.
        let orientations: Vec<(Option<ObjectId>, Option<ObjectId>)> = match (direction, eta) {
            (Direction::Right, ViewEndpoints::Directed { source, target }) => vec![(source, target)],
            (Direction::Left, ViewEndpoints::Directed { source, target }) => vec![(target, source)],
            (Direction::Undirected, ViewEndpoints::Undirected(a, b)) => vec![(a, b), (b, a)],
            _ => continue,
        };
        let head = match descriptor {
            None => Some(Binding::new()),
            Some(d) => head_binding(&d.var, &d.label, e, ctx),
        };
        let Some(head) = head else { continue };
        for binding in with_selector(head, selector, e, ctx) {
            for &(s, t) in &orientations {
                out.insert(PathMatch {
                    binding: binding.clone(),
                    start: End::Edge(s),
                    end: End::Edge(t),
                    pending: false,
                });
            }
        }
    }
    out
}
