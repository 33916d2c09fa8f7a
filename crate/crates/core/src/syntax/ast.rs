use std::collections::BTreeSet;
use std::fmt;

use crate::model::Value;

/// A query variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(String);

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var(s.to_owned())
    }
}

/// The label part of a descriptor: a constant `:ℓ` or a label variable `:?y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelTest {
    Label(String),
    Variable(Var),
}

/// Node descriptor: `x`, `:ℓ`, `:?y`, `::π` and their combinations.
/// A descriptor with every part absent is printed as the empty node `()`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NodeDescriptor {
    pub var: Option<Var>,
    pub label: Option<LabelTest>,
    pub meta: Option<Box<Pattern>>,
}

/// Edge descriptor: `x`, `:ℓ`, `:?y`, `x:ℓ`, `x:?y`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EdgeDescriptor {
    pub var: Option<Var>,
    pub label: Option<LabelTest>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `-[…]->`
    Right,
    /// `<-[…]-`
    Left,
    /// `-[…]-`
    Undirected,
}

/// A pattern π.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    /// `(δ1)`, `()`, `(δ1).z`, `().z`
    Node {
        descriptor: Option<NodeDescriptor>,
        selector: Option<Var>,
    },
    /// The six edge forms; a property selector requires a descriptor.
    Edge {
        direction: Direction,
        descriptor: Option<EdgeDescriptor>,
        selector: Option<Var>,
    },
    /// `{x}` or `{}`
    Property(Option<Var>),
    /// `|x|` or `||`
    Label(Option<Var>),
    /// Juxtaposition `π π`.
    Concat(Box<Pattern>, Box<Pattern>),
    /// `π + π`
    Union(Box<Pattern>, Box<Pattern>),
    /// `π WHERE Φ`
    Where(Box<Pattern>, Condition),
}

impl Pattern {
    pub fn empty_node() -> Self {
        Pattern::Node {
            descriptor: None,
            selector: None,
        }
    }

    pub fn node(descriptor: NodeDescriptor) -> Self {
        Pattern::Node {
            descriptor: Some(descriptor),
            selector: None,
        }
    }

    pub fn node_var(x: &str) -> Self {
        Pattern::node(NodeDescriptor {
            var: Some(Var::from(x)),
            ..Default::default()
        })
    }

    pub fn edge(direction: Direction, descriptor: Option<EdgeDescriptor>) -> Self {
        Pattern::Edge {
            direction,
            descriptor,
            selector: None,
        }
    }

    pub fn concat(a: Pattern, b: Pattern) -> Self {
        Pattern::Concat(Box::new(a), Box::new(b))
    }

    pub fn union(a: Pattern, b: Pattern) -> Self {
        Pattern::Union(Box::new(a), Box::new(b))
    }

    pub fn filtered(self, cond: Condition) -> Self {
        Pattern::Where(Box::new(self), cond)
    }

    /// Whether this is the bare `()` node pattern.
    pub fn is_bare_node(&self) -> bool {
        matches!(
            self,
            Pattern::Node {
                descriptor: None,
                selector: None
            }
        )
    }

    /// Variables this pattern binds: descriptor variables, label variables,
    /// property selectors and variables of nested meta-patterns. Variables
    /// that only occur inside `WHERE` conditions are not included.
    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut BTreeSet<Var>) {
        match self {
            Pattern::Node { descriptor, selector } => {
                if let Some(d) = descriptor {
                    out.extend(d.var.iter().cloned());
                    if let Some(LabelTest::Variable(y)) = &d.label {
                        out.insert(y.clone());
                    }
                    if let Some(m) = &d.meta {
                        m.collect_variables(out);
                    }
                }
                out.extend(selector.iter().cloned());
            }
            Pattern::Edge {
                descriptor, selector, ..
            } => {
                if let Some(d) = descriptor {
                    out.extend(d.var.iter().cloned());
                    if let Some(LabelTest::Variable(y)) = &d.label {
                        out.insert(y.clone());
                    }
                }
                out.extend(selector.iter().cloned());
            }
            Pattern::Property(v) | Pattern::Label(v) => out.extend(v.iter().cloned()),
            Pattern::Concat(a, b) | Pattern::Union(a, b) => {
                a.collect_variables(out);
                b.collect_variables(out);
            }
            Pattern::Where(p, _) => p.collect_variables(out),
        }
    }
}

/// A graph pattern Π: comma-separated patterns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphPattern(pub Vec<Pattern>);

impl GraphPattern {
    pub fn variables(&self) -> BTreeSet<Var> {
        self.0.iter().flat_map(Pattern::variables).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expression {
    Var(Var),
    /// `x.k`
    Property {
        var: Var,
        key: String,
    },
    /// A value constant.
    Literal(Value),
    /// A property-key constant, written `.k`.
    KeyLiteral(String),
    /// A label constant, written `:ℓ`.
    LabelLiteral(String),
    /// `KEY(p)`
    KeyOf(Var),
    /// `VAL(p)`
    ValOf(Var),
}

impl Expression {
    pub fn var(x: &str) -> Self {
        Expression::Var(Var::from(x))
    }

    pub fn prop(x: &str, key: &str) -> Self {
        Expression::Property {
            var: Var::from(x),
            key: key.to_owned(),
        }
    }

    pub fn string(s: &str) -> Self {
        Expression::Literal(Value::from(s))
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        match self {
            Expression::Var(v) | Expression::Property { var: v, .. } | Expression::KeyOf(v) | Expression::ValOf(v) => {
                BTreeSet::from([v.clone()])
            }
            _ => BTreeSet::new(),
        }
    }

    pub(crate) fn as_constant(&self) -> Option<Constant> {
        match self {
            Expression::Literal(v) => Some(Constant::Value(v.clone())),
            Expression::KeyLiteral(k) => Some(Constant::Key(k.clone())),
            Expression::LabelLiteral(l) => Some(Constant::Label(l.clone())),
            _ => None,
        }
    }
}

/// The left operand of `ELEMENTOF`: a key, value or label constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constant {
    Value(Value),
    Key(String),
    Label(String),
}

impl Constant {
    pub fn to_expression(&self) -> Expression {
        match self {
            Constant::Value(v) => Expression::Literal(v.clone()),
            Constant::Key(k) => Expression::KeyLiteral(k.clone()),
            Constant::Label(l) => Expression::LabelLiteral(l.clone()),
        }
    }
}

/// A condition Φ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Condition {
    Eq(Expression, Expression),
    Lt(Expression, Expression),
    /// `x:ℓ`
    HasLabel {
        var: Var,
        label: String,
    },
    /// `SUBSETEQ(x, y)`
    SubsetEq(Var, Var),
    /// `c ELEMENTOF y`
    ElementOf {
        element: Constant,
        set: Var,
    },
    And(Box<Condition>, Box<Condition>),
    Or(Box<Condition>, Box<Condition>),
    Not(Box<Condition>),
}

impl Condition {
    pub fn and(a: Condition, b: Condition) -> Self {
        Condition::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Condition, b: Condition) -> Self {
        Condition::Or(Box::new(a), Box::new(b))
    }

    pub fn negate(a: Condition) -> Self {
        Condition::Not(Box::new(a))
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        match self {
            Condition::Eq(a, b) | Condition::Lt(a, b) => {
                let mut s = a.variables();
                s.extend(b.variables());
                s
            }
            Condition::HasLabel { var, .. } => BTreeSet::from([var.clone()]),
            Condition::SubsetEq(x, y) => BTreeSet::from([x.clone(), y.clone()]),
            Condition::ElementOf { set, .. } => BTreeSet::from([set.clone()]),
            Condition::And(a, b) | Condition::Or(a, b) => {
                let mut s = a.variables();
                s.extend(b.variables());
                s
            }
            Condition::Not(a) => a.variables(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Clause {
    /// `MATCH Π`, optionally followed by a clause-level `WHERE Φ`
    /// (which [`Query::desugar`] turns into a `FILTER`).
    Match {
        pattern: GraphPattern,
        filter: Option<Condition>,
    },
    Filter(Condition),
}

/// Output column name of a `RETURN` item.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Alias {
    Static(String),
    /// Column name computed per binding (e.g. `AS z.Name`). Never a bare
    /// variable or string literal, which denote static names.
    Dynamic(Expression),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReturnItem {
    pub expr: Expression,
    pub alias: Alias,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub clauses: Vec<Clause>,
    pub returns: Vec<ReturnItem>,
}

impl Query {
    /// Moves every clause-level `WHERE Φ` into a `FILTER Φ` right after its
    /// `MATCH`. Pattern-level `WHERE` is left alone.
    pub fn desugar(&self) -> Query {
        let mut clauses = Vec::with_capacity(self.clauses.len());
        for c in &self.clauses {
            match c {
                Clause::Match {
                    pattern,
                    filter: Some(cond),
                } => {
                    clauses.push(Clause::Match {
                        pattern: pattern.clone(),
                        filter: None,
                    });
                    clauses.push(Clause::Filter(cond.clone()));
                }
                other => clauses.push(other.clone()),
            }
        }
        Query {
            clauses,
            returns: self.returns.clone(),
        }
    }

    /// Variables bound by some `MATCH`.
    pub fn bound_variables(&self) -> BTreeSet<Var> {
        self.clauses
            .iter()
            .filter_map(|c| match c {
                Clause::Match { pattern, .. } => Some(pattern.variables()),
                Clause::Filter(_) => None,
            })
            .flatten()
            .collect()
    }
}
