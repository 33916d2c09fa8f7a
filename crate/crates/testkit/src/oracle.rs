//! A brute-force reference evaluator for patterns.
//!
//! It shares no code with the engine beyond the graph views. A pattern is
//! compiled into a constraint problem: every variable, every anonymous atom,
//! every union and every undirected edge gets a slot, and an assignment of
//! the slots is accepted when each atom holds for its object and each pair
//! of neighbouring atoms meets at a common endpoint. Search is plain
//! backtracking with a three-valued check on partial assignments.

use std::collections::{BTreeMap, BTreeSet};

use mpgql_core::eval::{Binding, BindingSet, BindingValue};
use mpgql_core::model::{GraphView, ObjectId, ObjectKind, Value, ViewEndpoints};
use mpgql_core::syntax::{Condition, Constant, Direction, Expression, LabelTest, Pattern, Var};
use thiserror::Error;

/// Graphs above this many objects are refused.
pub const MAX_OBJECTS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has {0} objects, the oracle handles at most {MAX_OBJECTS}")]
    TooLarge(usize),
    #[error("pattern shape not supported by the oracle: {0}")]
    Unsupported(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SVal {
    Null,
    Obj(ObjectId),
    /// A bare node standing for a missing endpoint.
    Bottom,
    Int(u8),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Tri {
    False,
    Unknown,
    True,
}

impl Tri {
    fn and(self, other: Tri) -> Tri {
        self.min(other)
    }
}

impl From<bool> for Tri {
    fn from(b: bool) -> Self {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }
}

enum OLabel {
    Any,
    Const(String),
    Var(usize),
}

enum OAtom {
    Node {
        slot: usize,
        bare: bool,
        label: OLabel,
        meta: Option<Box<OPat>>,
        selector: Option<usize>,
    },
    Edge {
        slot: usize,
        orient: Option<usize>,
        direction: Direction,
        label: OLabel,
        selector: Option<usize>,
    },
    Free {
        slot: usize,
        kind: ObjectKind,
    },
}

impl OAtom {
    fn is_free(&self) -> bool {
        matches!(self, OAtom::Free { .. })
    }
}

enum OPat {
    Path(Vec<OAtom>),
    Union {
        choice: usize,
        a: Box<OPat>,
        b: Box<OPat>,
        only_a: Vec<usize>,
        only_b: Vec<usize>,
    },
    Where {
        inner: Box<OPat>,
        cond: Condition,
        scope: BTreeMap<Var, usize>,
    },
}

#[derive(Default)]
struct Compiler {
    vars: BTreeMap<Var, usize>,
    /// Domain description per slot.
    kinds: Vec<SlotKind>,
}

#[derive(Clone, Debug)]
enum SlotKind {
    Object(BTreeSet<ObjectKind>),
    /// A hidden node slot of a bare `()`: nodes plus ⊥.
    BareNode,
    Flag,
}

impl Compiler {
    fn fresh(&mut self, kind: SlotKind) -> usize {
        self.kinds.push(kind);
        self.kinds.len() - 1
    }

    fn var(&mut self, x: &Var, kind: ObjectKind) -> usize {
        let slot = match self.vars.get(x) {
            Some(&s) => s,
            None => {
                let s = self.fresh(SlotKind::Object(BTreeSet::new()));
                self.vars.insert(x.clone(), s);
                s
            }
        };
        if let SlotKind::Object(ks) = &mut self.kinds[slot] {
            ks.insert(kind);
        }
        slot
    }

    fn object(&mut self, var: &Option<Var>, kind: ObjectKind) -> usize {
        match var {
            Some(x) => self.var(x, kind),
            None => self.fresh(SlotKind::Object(BTreeSet::from([kind]))),
        }
    }

    fn label(&mut self, l: &Option<LabelTest>) -> OLabel {
        match l {
            None => OLabel::Any,
            Some(LabelTest::Label(s)) => OLabel::Const(s.clone()),
            Some(LabelTest::Variable(y)) => OLabel::Var(self.var(y, ObjectKind::LabelSet)),
        }
    }

    fn pattern(&mut self, p: &Pattern) -> Result<OPat, OracleError> {
        match p {
            Pattern::Union(a, b) => {
                let choice = self.fresh(SlotKind::Flag);
                let a = self.pattern(a)?;
                let sa = slots_of(&a);
                let b = self.pattern(b)?;
                let sb = slots_of(&b);
                Ok(OPat::Union {
                    choice,
                    only_a: sa.difference(&sb).copied().collect(),
                    only_b: sb.difference(&sa).copied().collect(),
                    a: Box::new(a),
                    b: Box::new(b),
                })
            }
            Pattern::Where(inner, cond) => {
                let inner = self.pattern(inner)?;
                let inner_vars = p.variables();
                let scope = cond
                    .variables()
                    .into_iter()
                    .filter(|x| inner_vars.contains(x))
                    .map(|x| {
                        let s = self.vars[&x];
                        (x, s)
                    })
                    .collect();
                Ok(OPat::Where {
                    inner: Box::new(inner),
                    cond: cond.clone(),
                    scope,
                })
            }
            _ => {
                let mut flat = Vec::new();
                flatten(p, &mut flat)?;
                let mut atoms = Vec::with_capacity(flat.len());
                for a in flat {
                    atoms.push(self.atom(a)?);
                }
                let positioned: Vec<&OAtom> = atoms.iter().filter(|a| !a.is_free()).collect();
                for w in positioned.windows(2) {
                    let same = matches!(
                        (w[0], w[1]),
                        (OAtom::Node { .. }, OAtom::Node { .. }) | (OAtom::Edge { .. }, OAtom::Edge { .. })
                    );
                    if same {
                        return Err(OracleError::Unsupported("two nodes or two edges in a row".into()));
                    }
                }
                Ok(OPat::Path(atoms))
            }
        }
    }

    fn atom(&mut self, p: &Pattern) -> Result<OAtom, OracleError> {
        Ok(match p {
            Pattern::Node { descriptor, selector } => {
                let bare = p.is_bare_node();
                let slot = match descriptor {
                    _ if bare => self.fresh(SlotKind::BareNode),
                    Some(d) => self.object(&d.var, ObjectKind::Node),
                    None => self.fresh(SlotKind::Object(BTreeSet::from([ObjectKind::Node]))),
                };
                let label = match descriptor {
                    Some(d) => self.label(&d.label),
                    None => OLabel::Any,
                };
                let meta = match descriptor.as_ref().and_then(|d| d.meta.as_ref()) {
                    Some(m) => Some(Box::new(self.pattern(m)?)),
                    None => None,
                };
                let selector = selector.as_ref().map(|z| self.var(z, ObjectKind::Property));
                OAtom::Node {
                    slot,
                    bare,
                    label,
                    meta,
                    selector,
                }
            }
            Pattern::Edge {
                direction,
                descriptor,
                selector,
            } => {
                let slot = self.object(&descriptor.as_ref().and_then(|d| d.var.clone()), ObjectKind::Edge);
                let orient = (*direction == Direction::Undirected).then(|| self.fresh(SlotKind::Flag));
                let label = match descriptor {
                    Some(d) => self.label(&d.label),
                    None => OLabel::Any,
                };
                let selector = selector.as_ref().map(|z| self.var(z, ObjectKind::Property));
                OAtom::Edge {
                    slot,
                    orient,
                    direction: *direction,
                    label,
                    selector,
                }
            }
            Pattern::Property(x) => OAtom::Free {
                slot: self.object(x, ObjectKind::Property),
                kind: ObjectKind::Property,
            },
            Pattern::Label(x) => OAtom::Free {
                slot: self.object(x, ObjectKind::LabelSet),
                kind: ObjectKind::LabelSet,
            },
            _ => unreachable!("flatten only yields atoms"),
        })
    }
}

fn flatten<'p>(p: &'p Pattern, out: &mut Vec<&'p Pattern>) -> Result<(), OracleError> {
    match p {
        Pattern::Concat(a, b) => {
            flatten(a, out)?;
            flatten(b, out)
        }
        Pattern::Union(..) | Pattern::Where(..) => Err(OracleError::Unsupported("union or WHERE inside a path".into())),
        atom => {
            out.push(atom);
            Ok(())
        }
    }
}

/// Every slot mentioned in a compiled pattern.
fn slots_of(p: &OPat) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    collect_slots(p, &mut out);
    out
}

fn collect_label(l: &OLabel, out: &mut BTreeSet<usize>) {
    if let OLabel::Var(s) = l {
        out.insert(*s);
    }
}

fn collect_slots(p: &OPat, out: &mut BTreeSet<usize>) {
    match p {
        OPat::Path(atoms) => {
            for a in atoms {
                match a {
                    OAtom::Node {
                        slot,
                        label,
                        meta,
                        selector,
                        ..
                    } => {
                        out.insert(*slot);
                        collect_label(label, out);
                        out.extend(selector);
                        if let Some(m) = meta {
                            collect_slots(m, out);
                        }
                    }
                    OAtom::Edge {
                        slot,
                        orient,
                        label,
                        selector,
                        ..
                    } => {
                        out.insert(*slot);
                        out.extend(orient);
                        collect_label(label, out);
                        out.extend(selector);
                    }
                    OAtom::Free { slot, .. } => {
                        out.insert(*slot);
                    }
                }
            }
        }
        OPat::Union { choice, a, b, .. } => {
            out.insert(*choice);
            collect_slots(a, out);
            collect_slots(b, out);
        }
        OPat::Where { inner, .. } => collect_slots(inner, out),
    }
}

fn default_of(kind: &SlotKind) -> SVal {
    match kind {
        SlotKind::Flag => SVal::Int(0),
        _ => SVal::Null,
    }
}

struct Search<'a> {
    pattern: OPat,
    domains: Vec<Vec<SVal>>,
    defaults: Vec<SVal>,
    asg: Vec<Option<SVal>>,
    vars: &'a BTreeMap<Var, usize>,
    out: BindingSet,
}

/// Evaluates a pattern against a view by exhaustive search.
pub fn oracle_eval_pattern(p: &Pattern, view: &dyn GraphView) -> Result<BindingSet, OracleError> {
    let g = view.graph();
    if g.object_count() > MAX_OBJECTS {
        return Err(OracleError::TooLarge(g.object_count()));
    }
    let mut c = Compiler::default();
    let pattern = c.pattern(p)?;
    let all = |k: ObjectKind| -> Vec<ObjectId> {
        match k {
            ObjectKind::Node => g.nodes().collect(),
            ObjectKind::Edge => g.edges().collect(),
            ObjectKind::Property => g.properties().collect(),
            ObjectKind::LabelSet => g.label_sets().collect(),
        }
    };
    let domains = c
        .kinds
        .iter()
        .map(|k| match k {
            SlotKind::Flag => vec![SVal::Int(0), SVal::Int(1)],
            SlotKind::BareNode => std::iter::once(SVal::Null)
                .chain(std::iter::once(SVal::Bottom))
                .chain(all(ObjectKind::Node).into_iter().map(SVal::Obj))
                .collect(),
            SlotKind::Object(ks) => std::iter::once(SVal::Null)
                .chain(ks.iter().flat_map(|&k| all(k)).map(SVal::Obj))
                .collect(),
        })
        .collect();
    let defaults = c.kinds.iter().map(default_of).collect();
    let mut s = Search {
        pattern,
        domains,
        defaults,
        asg: vec![None; c.kinds.len()],
        vars: &c.vars,
        out: BindingSet::new(),
    };
    s.search(0, view);
    Ok(s.out)
}

impl Search<'_> {
    fn search(&mut self, i: usize, view: &dyn GraphView) {
        if i == self.asg.len() {
            if eval(&self.pattern, &self.asg, &self.defaults, view) == Tri::True {
                let b: Binding = self
                    .vars
                    .iter()
                    .map(|(x, &s)| {
                        let v = match self.asg[s] {
                            Some(SVal::Obj(o)) => BindingValue::Object(o),
                            _ => BindingValue::Null,
                        };
                        (x.clone(), v)
                    })
                    .collect();
                self.out.insert(b);
            }
            return;
        }
        for k in 0..self.domains[i].len() {
            self.asg[i] = Some(self.domains[i][k]);
            if eval(&self.pattern, &self.asg, &self.defaults, view) != Tri::False {
                self.search(i + 1, view);
            }
        }
        self.asg[i] = None;
    }
}

fn eval(p: &OPat, asg: &[Option<SVal>], defaults: &[SVal], view: &dyn GraphView) -> Tri {
    match p {
        OPat::Path(atoms) => eval_path(atoms, asg, defaults, view),
        OPat::Union {
            choice,
            a,
            b,
            only_a,
            only_b,
        } => {
            let (arm, others) = match asg[*choice] {
                None => return Tri::Unknown,
                Some(SVal::Int(0)) => (a, only_b),
                Some(_) => (b, only_a),
            };
            let mut t = eval(arm, asg, defaults, view);
            for &s in others {
                t = t.and(match asg[s] {
                    None => Tri::Unknown,
                    Some(v) => (v == defaults[s]).into(),
                });
            }
            t
        }
        OPat::Where { inner, cond, scope } => {
            let t = eval(inner, asg, defaults, view);
            if t == Tri::False {
                return t;
            }
            let mut env = BTreeMap::new();
            for (x, &s) in scope {
                match asg[s] {
                    None => return Tri::Unknown,
                    Some(SVal::Obj(o)) => {
                        env.insert(x.clone(), o);
                    }
                    Some(_) => {}
                }
            }
            t.and((cond_value(cond, &env, view) == Some(true)).into())
        }
    }
}

fn get(asg: &[Option<SVal>], s: usize) -> Option<SVal> {
    asg[s]
}

fn object_in(view: &dyn GraphView, v: SVal, kind: ObjectKind) -> Option<ObjectId> {
    match v {
        SVal::Obj(o) if o.kind() == kind && view.includes(o) => Some(o),
        _ => None,
    }
}

fn label_ok(label: &OLabel, o: ObjectId, asg: &[Option<SVal>], view: &dyn GraphView) -> Tri {
    match label {
        OLabel::Any => Tri::True,
        OLabel::Const(l) => {
            let has = view
                .lambda(o)
                .and_then(|ls| view.mu(ls))
                .is_some_and(|labels| labels.contains(l));
            has.into()
        }
        OLabel::Var(s) => match get(asg, *s) {
            None => Tri::Unknown,
            Some(v) => match view.lambda(o) {
                Some(ls) => (v == SVal::Obj(ls)).into(),
                None => Tri::False,
            },
        },
    }
}

fn selector_ok(selector: Option<usize>, o: ObjectId, asg: &[Option<SVal>], view: &dyn GraphView) -> Tri {
    match selector {
        None => Tri::True,
        Some(s) => match get(asg, s) {
            None => Tri::Unknown,
            Some(SVal::Obj(p)) => view.sigma(o).contains(&p).into(),
            Some(_) => Tri::False,
        },
    }
}

/// Endpoints of an assigned edge atom in reading order.
fn edge_ends(
    e: ObjectId,
    direction: Direction,
    orient: Option<usize>,
    asg: &[Option<SVal>],
    view: &dyn GraphView,
) -> Result<(Option<ObjectId>, Option<ObjectId>), Tri> {
    let eta = view.eta(e).ok_or(Tri::False)?;
    match (direction, eta) {
        (Direction::Right, ViewEndpoints::Directed { source, target }) => Ok((source, target)),
        (Direction::Left, ViewEndpoints::Directed { source, target }) => Ok((target, source)),
        (Direction::Undirected, ViewEndpoints::Undirected(a, b)) => {
            match get(asg, orient.expect("undirected edges have an orientation slot")) {
                None => Err(Tri::Unknown),
                Some(SVal::Int(0)) => Ok((a, b)),
                Some(_) => Ok((b, a)),
            }
        }
        _ => Err(Tri::False),
    }
}

fn eval_atom(a: &OAtom, has_neighbour: bool, asg: &[Option<SVal>], defaults: &[SVal], view: &dyn GraphView) -> Tri {
    match a {
        OAtom::Node {
            slot,
            bare,
            label,
            meta,
            selector,
        } => {
            let Some(v) = get(asg, *slot) else {
                return Tri::Unknown;
            };
            if v == SVal::Bottom {
                return (*bare && has_neighbour).into();
            }
            let Some(n) = object_in(view, v, ObjectKind::Node) else {
                return Tri::False;
            };
            let mut t = label_ok(label, n, asg, view).and(selector_ok(*selector, n, asg, view));
            if t != Tri::False {
                if let Some(m) = meta {
                    let sub = view.substructure(n).expect("node of the view");
                    t = t.and(eval(m, asg, defaults, &sub));
                }
            }
            t
        }
        OAtom::Edge {
            slot,
            orient,
            direction,
            label,
            selector,
        } => {
            let Some(v) = get(asg, *slot) else {
                return Tri::Unknown;
            };
            let Some(e) = object_in(view, v, ObjectKind::Edge) else {
                return Tri::False;
            };
            let directed_ok = match view.eta(e) {
                Some(ViewEndpoints::Directed { .. }) => *direction != Direction::Undirected,
                Some(ViewEndpoints::Undirected(..)) => *direction == Direction::Undirected,
                None => false,
            };
            let orient_ok = match orient {
                Some(o) => match get(asg, *o) {
                    None => Tri::Unknown,
                    Some(_) => Tri::True,
                },
                None => Tri::True,
            };
            Tri::from(directed_ok)
                .and(orient_ok)
                .and(label_ok(label, e, asg, view))
                .and(selector_ok(*selector, e, asg, view))
        }
        OAtom::Free { slot, kind } => match get(asg, *slot) {
            None => Tri::Unknown,
            Some(v) => object_in(view, v, *kind).is_some().into(),
        },
    }
}

/// Whether a node atom and the facing end of its neighbouring edge meet.
fn adjacent(node: &OAtom, edge: &OAtom, node_first: bool, asg: &[Option<SVal>], view: &dyn GraphView) -> Tri {
    let (
        OAtom::Node { slot: ns, bare, .. },
        OAtom::Edge {
            slot: es,
            orient,
            direction,
            ..
        },
    ) = (node, edge)
    else {
        unreachable!("paths alternate nodes and edges")
    };
    let (Some(nv), Some(SVal::Obj(e))) = (get(asg, *ns), get(asg, *es)) else {
        return Tri::Unknown;
    };
    let (start, end) = match edge_ends(e, *direction, *orient, asg, view) {
        Ok(ends) => ends,
        Err(t) => return t,
    };
    let facing = if node_first { start } else { end };
    match (nv, facing) {
        (SVal::Bottom, d) => d.is_none().into(),
        (SVal::Obj(n), Some(d)) => (n == d).into(),
        (SVal::Obj(_), None) => (*bare).into(),
        _ => Tri::False,
    }
}

fn eval_path(atoms: &[OAtom], asg: &[Option<SVal>], defaults: &[SVal], view: &dyn GraphView) -> Tri {
    let positioned: Vec<&OAtom> = atoms.iter().filter(|a| !a.is_free()).collect();
    let mut t = Tri::True;
    for a in atoms.iter().filter(|a| a.is_free()) {
        t = t.and(eval_atom(a, false, asg, defaults, view));
        if t == Tri::False {
            return t;
        }
    }
    for (i, a) in positioned.iter().enumerate() {
        let has_neighbour = positioned.len() > 1;
        t = t.and(eval_atom(a, has_neighbour, asg, defaults, view));
        if t == Tri::False {
            return t;
        }
        if i + 1 < positioned.len() {
            let b = positioned[i + 1];
            let adj = match a {
                OAtom::Node { .. } => adjacent(a, b, true, asg, view),
                _ => adjacent(b, a, false, asg, view),
            };
            t = t.and(adj);
            if t == Tri::False {
                return t;
            }
        }
    }
    t
}

#[derive(Clone, Debug, PartialEq)]
enum OVal {
    Null,
    Obj(ObjectId),
    Val(Value),
}

fn expr_value(e: &Expression, env: &BTreeMap<Var, ObjectId>, view: &dyn GraphView) -> OVal {
    let obj = |x: &Var| env.get(x).copied();
    match e {
        Expression::Var(x) => obj(x).map_or(OVal::Null, OVal::Obj),
        Expression::Property { var, key } => {
            let Some(o) = obj(var) else { return OVal::Null };
            if o.kind() != ObjectKind::Node && o.kind() != ObjectKind::Edge {
                return OVal::Null;
            }
            for p in view.sigma(o) {
                if let Some((k, v)) = view.upsilon(p) {
                    if k == key {
                        return OVal::Val(v.clone());
                    }
                }
            }
            OVal::Null
        }
        Expression::Literal(v) => OVal::Val(v.clone()),
        Expression::KeyLiteral(s) | Expression::LabelLiteral(s) => OVal::Val(Value::String(s.clone())),
        Expression::KeyOf(x) => match obj(x).and_then(|p| view.upsilon(p)) {
            Some((k, _)) => OVal::Val(Value::String(k.to_owned())),
            None => OVal::Null,
        },
        Expression::ValOf(x) => match obj(x).and_then(|p| view.upsilon(p)) {
            Some((_, v)) => OVal::Val(v.clone()),
            None => OVal::Null,
        },
    }
}

fn label_set_of<'v>(x: &Var, env: &BTreeMap<Var, ObjectId>, view: &'v dyn GraphView) -> Option<&'v BTreeSet<String>> {
    env.get(x).and_then(|&o| view.mu(o))
}

/// Kleene logic over `Option<bool>`, `None` being unknown.
fn cond_value(c: &Condition, env: &BTreeMap<Var, ObjectId>, view: &dyn GraphView) -> Option<bool> {
    match c {
        Condition::Eq(a, b) => match (expr_value(a, env, view), expr_value(b, env, view)) {
            (OVal::Null, _) | (_, OVal::Null) => None,
            (OVal::Obj(x), OVal::Obj(y)) => Some(x == y),
            (OVal::Val(x), OVal::Val(y)) => Some(x.semantic_eq(&y)),
            _ => Some(false),
        },
        Condition::Lt(a, b) => match (expr_value(a, env, view), expr_value(b, env, view)) {
            (OVal::Val(x), OVal::Val(y)) => x.semantic_cmp(&y).map(|o| o.is_lt()),
            _ => None,
        },
        Condition::HasLabel { var, label } => {
            let o = env
                .get(var)
                .copied()
                .filter(|o| o.kind() == ObjectKind::Node || o.kind() == ObjectKind::Edge)?;
            let ls = view.lambda(o).and_then(|l| view.mu(l))?;
            Some(ls.contains(label))
        }
        Condition::SubsetEq(x, y) => Some(match (label_set_of(x, env, view), label_set_of(y, env, view)) {
            (Some(a), Some(b)) => a.iter().all(|l| b.contains(l)),
            _ => false,
        }),
        Condition::ElementOf { element, set } => {
            let text = match element {
                Constant::Key(s) | Constant::Label(s) => Some(s.as_str()),
                Constant::Value(Value::String(s)) => Some(s.as_str()),
                Constant::Value(_) => None,
            };
            Some(match (text, label_set_of(set, env, view)) {
                (Some(t), Some(ls)) => ls.contains(t),
                _ => false,
            })
        }
        Condition::And(a, b) => match (cond_value(a, env, view), cond_value(b, env, view)) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        },
        Condition::Or(a, b) => match (cond_value(a, env, view), cond_value(b, env, view)) {
            (Some(true), _) | (_, Some(true)) => Some(true),
            (Some(false), Some(false)) => Some(false),
            _ => None,
        },
        Condition::Not(a) => cond_value(a, env, view).map(|b| !b),
    }
}
