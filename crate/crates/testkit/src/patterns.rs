//! Random patterns, conditions and queries drawn from a graph's vocabulary.
//!
//! Every generated AST is in the form the parser produces, so
//! `parse(render(a)) == a` holds for all of them.

use std::collections::BTreeSet;

use mpgql_core::model::{GraphView, MetaPropertyGraph, Value};
use mpgql_core::syntax::{
    Alias, Clause, Condition, Constant, Direction, EdgeDescriptor, Expression, GraphPattern, LabelTest, NodeDescriptor,
    Pattern, Query, ReturnItem, Var,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Labels, keys and values to draw constants from.
#[derive(Clone, Debug, Default)]
pub struct Vocabulary {
    pub labels: Vec<String>,
    pub keys: Vec<String>,
    pub values: Vec<Value>,
}

impl Vocabulary {
    /// Everything used in `g`, plus one label and one key it does not use.
    pub fn of(g: &MetaPropertyGraph) -> Self {
        let mut labels = BTreeSet::new();
        for l in g.label_sets() {
            labels.extend(g.label_set(l).into_iter().flatten().cloned());
        }
        let mut keys = BTreeSet::new();
        let mut values = BTreeSet::new();
        for p in g.properties() {
            if let Some((k, v)) = g.upsilon(p) {
                keys.insert(k.to_owned());
                values.insert(v.clone());
            }
        }
        labels.insert("Unused".to_owned());
        keys.insert("unused".to_owned());
        values.insert(Value::from("absent"));
        Vocabulary {
            labels: labels.into_iter().collect(),
            keys: keys.into_iter().collect(),
            values: values.into_iter().collect(),
        }
    }
}

/// Knobs for pattern generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PatternConfig {
    /// Nesting bound for meta-node patterns and conditions.
    pub max_depth: usize,
    /// Upper bound on node and edge atoms in one path.
    pub max_path_atoms: usize,
    pub seed: u64,
}

impl Default for PatternConfig {
    fn default() -> Self {
        PatternConfig {
            max_depth: 2,
            max_path_atoms: 4,
            seed: 0,
        }
    }
}

const NODE_VARS: [&str; 3] = ["a", "b", "c"];
const EDGE_VARS: [&str; 2] = ["e", "f"];
const PROP_VARS: [&str; 2] = ["p", "q"];
const LABEL_VARS: [&str; 2] = ["l", "m"];

/// Deterministic random generator of ASTs.
pub struct PatternGen {
    rng: ChaCha8Rng,
    vocab: Vocabulary,
    cfg: PatternConfig,
}

impl PatternGen {
    pub fn new(cfg: PatternConfig, vocab: Vocabulary) -> Self {
        let mut vocab = vocab;
        if vocab.labels.is_empty() {
            vocab.labels.push("A".into());
        }
        if vocab.keys.is_empty() {
            vocab.keys.push("k".into());
        }
        if vocab.values.is_empty() {
            vocab.values.push(Value::Integer(0));
        }
        PatternGen {
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            vocab,
            cfg,
        }
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn var(&mut self, pool: &[&str]) -> Var {
        Var::from(*pool.choose(&mut self.rng).expect("non-empty pool"))
    }

    fn label(&mut self) -> String {
        self.vocab.labels.choose(&mut self.rng).expect("non-empty").clone()
    }

    fn key(&mut self) -> String {
        self.vocab.keys.choose(&mut self.rng).expect("non-empty").clone()
    }

    fn value(&mut self) -> Value {
        self.vocab.values.choose(&mut self.rng).expect("non-empty").clone()
    }

    fn label_test(&mut self) -> Option<LabelTest> {
        if !self.chance(0.35) {
            None
        } else if self.chance(0.7) {
            Some(LabelTest::Label(self.label()))
        } else {
            Some(LabelTest::Variable(self.var(&LABEL_VARS)))
        }
    }

    fn node(&mut self, depth: usize) -> Pattern {
        let selector = self.chance(0.15).then(|| self.var(&PROP_VARS));
        if self.chance(0.25) {
            return Pattern::Node {
                descriptor: None,
                selector,
            };
        }
        let var = self.chance(0.75).then(|| self.var(&NODE_VARS));
        let label = self.label_test();
        let meta = (depth > 0 && self.chance(0.15)).then(|| Box::new(self.pattern_at(depth - 1)));
        let descriptor = if var.is_none() && label.is_none() && meta.is_none() {
            None
        } else {
            Some(NodeDescriptor { var, label, meta })
        };
        Pattern::Node { descriptor, selector }
    }

    fn edge(&mut self) -> Pattern {
        let direction = *[Direction::Right, Direction::Left, Direction::Undirected]
            .choose(&mut self.rng)
            .expect("three directions");
        let descriptor = if self.chance(0.75) {
            let mut var = self.chance(0.7).then(|| self.var(&EDGE_VARS));
            let label = self.label_test();
            if var.is_none() && label.is_none() {
                var = Some(self.var(&EDGE_VARS));
            }
            Some(EdgeDescriptor { var, label })
        } else {
            None
        };
        let selector = (descriptor.is_some() && self.chance(0.15)).then(|| self.var(&PROP_VARS));
        Pattern::Edge {
            direction,
            descriptor,
            selector,
        }
    }

    fn free_atom(&mut self) -> Pattern {
        let named = self.chance(0.8);
        if self.chance(0.5) {
            Pattern::Property(named.then(|| self.var(&PROP_VARS)))
        } else {
            Pattern::Label(named.then(|| self.var(&LABEL_VARS)))
        }
    }

    /// An alternating node/edge sequence with free atoms sprinkled in.
    fn path(&mut self, depth: usize) -> Pattern {
        let mut atoms = Vec::new();
        if self.chance(0.05) {
            atoms.push(self.free_atom());
        } else {
            let len = self.rng.gen_range(1..=self.cfg.max_path_atoms.max(1));
            let mut node_turn = self.chance(0.8);
            for _ in 0..len {
                if self.chance(0.1) {
                    atoms.push(self.free_atom());
                }
                atoms.push(if node_turn { self.node(depth) } else { self.edge() });
                node_turn = !node_turn;
            }
            if self.chance(0.1) {
                atoms.push(self.free_atom());
            }
        }
        let mut it = atoms.into_iter().rev();
        let mut acc = it.next().expect("at least one atom");
        for a in it {
            acc = Pattern::concat(a, acc);
        }
        acc
    }

    fn union_chain(&mut self, depth: usize) -> Pattern {
        let mut acc = self.path(depth);
        while self.chance(0.2) {
            let right = self.path(depth);
            acc = Pattern::union(acc, right);
        }
        acc
    }

    fn pattern_at(&mut self, depth: usize) -> Pattern {
        let mut p = self.union_chain(depth);
        while self.chance(0.2) {
            let vars: Vec<Var> = p.variables().into_iter().collect();
            let c = self.condition_over(&vars, self.cfg.max_depth);
            p = p.filtered(c);
        }
        p
    }

    /// A random pattern.
    pub fn pattern(&mut self) -> Pattern {
        self.pattern_at(self.cfg.max_depth)
    }

    fn some_var(&mut self, vars: &[Var]) -> Var {
        if vars.is_empty() || self.chance(0.05) {
            self.var(&NODE_VARS)
        } else {
            vars.choose(&mut self.rng).expect("non-empty").clone()
        }
    }

    fn literal(&mut self) -> Value {
        match self.rng.gen_range(0..6) {
            0 => Value::from(self.label()),
            1 => Value::Integer(self.rng.gen_range(-3..10)),
            2 => Value::decimal(f64::from(self.rng.gen_range(-8..40)) / 4.0),
            _ => self.value(),
        }
    }

    fn expression(&mut self, vars: &[Var]) -> Expression {
        match self.rng.gen_range(0..9) {
            0 => Expression::Var(self.some_var(vars)),
            1 | 2 => Expression::Property {
                var: self.some_var(vars),
                key: self.key(),
            },
            3 | 4 => Expression::Literal(self.literal()),
            5 => Expression::KeyLiteral(self.key()),
            6 => Expression::LabelLiteral(self.label()),
            7 => Expression::KeyOf(self.some_var(vars)),
            _ => Expression::ValOf(self.some_var(vars)),
        }
    }

    fn constant(&mut self) -> Constant {
        match self.rng.gen_range(0..3) {
            0 => Constant::Value(if self.chance(0.7) {
                Value::from(self.label())
            } else {
                self.literal()
            }),
            1 => Constant::Key(self.key()),
            _ => Constant::Label(self.label()),
        }
    }

    /// A random condition over the given variables.
    pub fn condition_over(&mut self, vars: &[Var], depth: usize) -> Condition {
        let connective = if depth > 0 { self.rng.gen_range(0..10) } else { 9 };
        match connective {
            0 | 1 => Condition::and(
                self.condition_over(vars, depth - 1),
                self.condition_over(vars, depth - 1),
            ),
            2 => Condition::or(
                self.condition_over(vars, depth - 1),
                self.condition_over(vars, depth - 1),
            ),
            3 => Condition::negate(self.condition_over(vars, depth - 1)),
            _ => match self.rng.gen_range(0..6) {
                0 | 1 => Condition::Eq(self.expression(vars), self.expression(vars)),
                2 => Condition::Lt(self.expression(vars), self.expression(vars)),
                3 => Condition::HasLabel {
                    var: self.some_var(vars),
                    label: self.label(),
                },
                4 => Condition::SubsetEq(self.some_var(vars), self.some_var(vars)),
                _ => Condition::ElementOf {
                    element: self.constant(),
                    set: self.some_var(vars),
                },
            },
        }
    }

    /// A random query. Its `RETURN` only uses variables the `MATCH`
    /// clauses bind, so it also passes the unbound-variable check.
    pub fn query(&mut self) -> Query {
        let mut clauses = Vec::new();
        let mut bound: BTreeSet<Var> = BTreeSet::new();
        let n = self.rng.gen_range(1..=3);
        for i in 0..n {
            if i > 0 && self.chance(0.3) {
                let vars: Vec<Var> = bound.iter().cloned().collect();
                clauses.push(Clause::Filter(self.condition_over(&vars, 1)));
                continue;
            }
            let k = self.rng.gen_range(1..=2);
            let patterns: Vec<Pattern> = (0..k).map(|_| self.pattern()).collect();
            let pattern = GraphPattern(patterns);
            bound.extend(pattern.variables());
            let vars: Vec<Var> = bound.iter().cloned().collect();
            // A trailing pattern-level WHERE would be read back as the
            // clause filter, so such a clause always gets a filter.
            let needs_filter = matches!(pattern.0.last(), Some(Pattern::Where(..)));
            let filter = (needs_filter || self.chance(0.3)).then(|| self.condition_over(&vars, 1));
            clauses.push(Clause::Match { pattern, filter });
        }
        if bound.is_empty() {
            clauses.push(Clause::Match {
                pattern: GraphPattern(vec![Pattern::node_var("a")]),
                filter: None,
            });
            bound.insert(Var::from("a"));
        }
        let vars: Vec<Var> = bound.into_iter().collect();
        let items = self.rng.gen_range(1..=3);
        let returns = (0..items)
            .map(|i| {
                let expr = loop {
                    let e = self.expression(&vars);
                    if e.variables().iter().all(|v| vars.contains(v)) {
                        break e;
                    }
                };
                let alias = if self.chance(0.2) {
                    Alias::Dynamic(Expression::Property {
                        var: vars.choose(&mut self.rng).expect("non-empty").clone(),
                        key: self.key(),
                    })
                } else if self.chance(0.5) {
                    Alias::Static(format!("col{i}"))
                } else {
                    Alias::Static(format!("column {i}"))
                };
                ReturnItem { expr, alias }
            })
            .collect();
        Query { clauses, returns }
    }
}

/// Convenience: one random pattern for a graph.
pub fn gen_pattern(cfg: PatternConfig, vocab: &Vocabulary) -> Pattern {
    PatternGen::new(cfg, vocab.clone()).pattern()
}

/// Grammar alternatives, used to check that generators and witness lists
/// reach every one of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Production {
    // Node descriptors: which of variable, label (constant or variable) and
    // meta-pattern are present.
    NodeDescriptor { var: bool, label: Option<bool>, meta: bool },
    EdgeDescriptor { var: bool, label: Option<bool> },
    EmptyNode,
    NodeSelector,
    EmptyNodeSelector,
    Edge(DirectionKind, bool),
    EdgeSelector(DirectionKind),
    PropertyAtom(bool),
    LabelAtom(bool),
    Concat,
    Union,
    Where,
    GraphPatternList,
    ExprVar,
    ExprProperty,
    ExprValue,
    ExprKey,
    ExprLabel,
    ExprKeyOf,
    ExprValOf,
    CondEq,
    CondLt,
    CondHasLabel,
    CondSubsetEq,
    CondElementOf,
    CondAnd,
    CondOr,
    CondNot,
    ClauseMatch,
    ClauseMatchWhere,
    ClauseFilter,
    Return,
}

/// Edge direction as a production tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DirectionKind {
    Right,
    Left,
    Undirected,
}

impl From<Direction> for DirectionKind {
    fn from(d: Direction) -> Self {
        match d {
            Direction::Right => DirectionKind::Right,
            Direction::Left => DirectionKind::Left,
            Direction::Undirected => DirectionKind::Undirected,
        }
    }
}

/// Every production the grammar has.
pub fn all_productions() -> BTreeSet<Production> {
    use Production::*;
    let mut out = BTreeSet::new();
    for var in [false, true] {
        for label in [None, Some(false), Some(true)] {
            for meta in [false, true] {
                if var || label.is_some() || meta {
                    out.insert(NodeDescriptor { var, label, meta });
                }
            }
            if var || label.is_some() {
                out.insert(EdgeDescriptor { var, label });
            }
        }
    }
    for d in [DirectionKind::Right, DirectionKind::Left, DirectionKind::Undirected] {
        out.insert(Edge(d, false));
        out.insert(Edge(d, true));
        out.insert(EdgeSelector(d));
    }
    out.extend([
        EmptyNode,
        NodeSelector,
        EmptyNodeSelector,
        PropertyAtom(false),
        PropertyAtom(true),
        LabelAtom(false),
        LabelAtom(true),
        Concat,
        Union,
        Where,
        GraphPatternList,
        ExprVar,
        ExprProperty,
        ExprValue,
        ExprKey,
        ExprLabel,
        ExprKeyOf,
        ExprValOf,
        CondEq,
        CondLt,
        CondHasLabel,
        CondSubsetEq,
        CondElementOf,
        CondAnd,
        CondOr,
        CondNot,
        ClauseMatch,
        ClauseMatchWhere,
        ClauseFilter,
        Return,
    ]);
    out
}

fn label_kind(l: &Option<LabelTest>) -> Option<bool> {
    l.as_ref().map(|l| matches!(l, LabelTest::Variable(_)))
}

/// Productions used by a pattern.
pub fn pattern_productions(p: &Pattern, out: &mut BTreeSet<Production>) {
    use Production::*;
    match p {
        Pattern::Node { descriptor, selector } => match descriptor {
            None => {
                out.insert(if selector.is_some() {
                    EmptyNodeSelector
                } else {
                    EmptyNode
                });
            }
            Some(d) => {
                out.insert(NodeDescriptor {
                    var: d.var.is_some(),
                    label: label_kind(&d.label),
                    meta: d.meta.is_some(),
                });
                if selector.is_some() {
                    out.insert(NodeSelector);
                }
                if let Some(m) = &d.meta {
                    pattern_productions(m, out);
                }
            }
        },
        Pattern::Edge {
            direction,
            descriptor,
            selector,
        } => {
            out.insert(Edge((*direction).into(), descriptor.is_some()));
            if let Some(d) = descriptor {
                out.insert(EdgeDescriptor {
                    var: d.var.is_some(),
                    label: label_kind(&d.label),
                });
            }
            if selector.is_some() {
                out.insert(EdgeSelector((*direction).into()));
            }
        }
        Pattern::Property(v) => {
            out.insert(PropertyAtom(v.is_some()));
        }
        Pattern::Label(v) => {
            out.insert(LabelAtom(v.is_some()));
        }
        Pattern::Concat(a, b) | Pattern::Union(a, b) => {
            out.insert(if matches!(p, Pattern::Concat(..)) {
                Concat
            } else {
                Union
            });
            pattern_productions(a, out);
            pattern_productions(b, out);
        }
        Pattern::Where(inner, c) => {
            out.insert(Where);
            pattern_productions(inner, out);
            condition_productions(c, out);
        }
    }
}

fn expression_productions(e: &Expression, out: &mut BTreeSet<Production>) {
    use Production::*;
    out.insert(match e {
        Expression::Var(_) => ExprVar,
        Expression::Property { .. } => ExprProperty,
        Expression::Literal(_) => ExprValue,
        Expression::KeyLiteral(_) => ExprKey,
        Expression::LabelLiteral(_) => ExprLabel,
        Expression::KeyOf(_) => ExprKeyOf,
        Expression::ValOf(_) => ExprValOf,
    });
}

/// Productions used by a condition.
pub fn condition_productions(c: &Condition, out: &mut BTreeSet<Production>) {
    use Production::*;
    match c {
        Condition::Eq(a, b) | Condition::Lt(a, b) => {
            out.insert(if matches!(c, Condition::Eq(..)) { CondEq } else { CondLt });
            expression_productions(a, out);
            expression_productions(b, out);
        }
        Condition::HasLabel { .. } => {
            out.insert(CondHasLabel);
        }
        Condition::SubsetEq(..) => {
            out.insert(CondSubsetEq);
        }
        Condition::ElementOf { element, .. } => {
            out.insert(CondElementOf);
            expression_productions(&element.to_expression(), out);
        }
        Condition::And(a, b) | Condition::Or(a, b) => {
            out.insert(if matches!(c, Condition::And(..)) {
                CondAnd
            } else {
                CondOr
            });
            condition_productions(a, out);
            condition_productions(b, out);
        }
        Condition::Not(a) => {
            out.insert(CondNot);
            condition_productions(a, out);
        }
    }
}

/// Productions used by a query.
pub fn query_productions(q: &Query) -> BTreeSet<Production> {
    use Production::*;
    let mut out = BTreeSet::new();
    for c in &q.clauses {
        match c {
            Clause::Match { pattern, filter } => {
                out.insert(ClauseMatch);
                if pattern.0.len() > 1 {
                    out.insert(GraphPatternList);
                }
                for p in &pattern.0 {
                    pattern_productions(p, &mut out);
                }
                if let Some(f) = filter {
                    out.insert(ClauseMatchWhere);
                    condition_productions(f, &mut out);
                }
            }
            Clause::Filter(f) => {
                out.insert(ClauseFilter);
                condition_productions(f, &mut out);
            }
        }
    }
    out.insert(Return);
    for r in &q.returns {
        expression_productions(&r.expr, &mut out);
        if let Alias::Dynamic(e) = &r.alias {
            expression_productions(e, &mut out);
        }
    }
    out
}
