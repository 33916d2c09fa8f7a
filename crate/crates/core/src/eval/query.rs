use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::model::{GraphView, MetaPropertyGraph, ObjectId, Value};
use crate::syntax::{Alias, Clause, Condition, GraphPattern, Query};

use super::binding::{join_sets, Binding, BindingSet, BindingValue};
use super::expr::{eval_condition, eval_expression};
use super::pattern::eval_pattern;
use super::EvalError;

/// A value in a query result. Label-set objects carry their labels so the
/// result can be shown without the graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ResultValue {
    Object(ObjectId),
    LabelSet { id: ObjectId, labels: BTreeSet<String> },
    Value(Value),
    Null,
}

impl ResultValue {
    fn from_binding(v: BindingValue, ctx: &dyn GraphView) -> Self {
        match v {
            BindingValue::Object(o) => match ctx.mu(o) {
                Some(labels) => ResultValue::LabelSet {
                    id: o,
                    labels: labels.clone(),
                },
                None => ResultValue::Object(o),
            },
            BindingValue::Value(v) => ResultValue::Value(v),
            BindingValue::Null => ResultValue::Null,
        }
    }
}

/// Renders `{"A", "B"}` for a label set.
pub fn format_label_set(labels: &BTreeSet<String>) -> String {
    let inner: Vec<String> = labels.iter().map(|l| format!("{l:?}")).collect();
    format!("{{{}}}", inner.join(", "))
}

impl fmt::Display for ResultValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResultValue::Object(o) => write!(f, "{o}"),
            ResultValue::LabelSet { labels, .. } => f.write_str(&format_label_set(labels)),
            ResultValue::Value(Value::String(s)) => f.write_str(s),
            ResultValue::Value(v) => write!(f, "{v}"),
            ResultValue::Null => Ok(()),
        }
    }
}

/// One output binding: column name to value. Rows may have different
/// columns when dynamic aliases are used.
pub type Row = BTreeMap<String, ResultValue>;

/// The result of a query: a set of output bindings plus the union of their
/// columns in `RETURN` order (dynamic columns sorted by name at the
/// position of the item that produced them).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: BTreeSet<Row>,
}

impl ResultTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// The values of one column, over rows that have it.
    pub fn column(&self, name: &str) -> Vec<&ResultValue> {
        self.rows.iter().filter_map(|r| r.get(name)).collect()
    }
}

/// Evaluates a graph pattern `π1, …, πk` as the join of its parts.
pub fn eval_graph_pattern(pattern: &GraphPattern, ctx: &dyn GraphView) -> BindingSet {
    let mut acc = BindingSet::from([Binding::new()]);
    for p in &pattern.0 {
        if acc.is_empty() {
            break;
        }
        acc = join_sets(&acc, &eval_pattern(p, ctx));
    }
    acc
}

fn filter(t: BindingSet, cond: &Condition, ctx: &dyn GraphView) -> BindingSet {
    t.into_iter()
        .filter(|b| eval_condition(cond, b, ctx).is_true())
        .collect()
}

/// Applies one clause to a working table.
pub fn eval_clause(c: &Clause, t: BindingSet, ctx: &dyn GraphView) -> BindingSet {
    match c {
        Clause::Match { pattern, filter: f } => {
            if t.is_empty() {
                return t;
            }
            let joined = join_sets(&t, &eval_graph_pattern(pattern, ctx));
            match f {
                Some(cond) => filter(joined, cond, ctx),
                None => joined,
            }
        }
        Clause::Filter(cond) => filter(t, cond, ctx),
    }
}

/// Checks that `RETURN` only mentions variables some `MATCH` binds.
pub fn check_query(q: &Query) -> Result<(), EvalError> {
    let bound = q.bound_variables();
    for item in &q.returns {
        let mut used = item.expr.variables();
        if let Alias::Dynamic(e) = &item.alias {
            used.extend(e.variables());
        }
        if let Some(x) = used.into_iter().find(|x| !bound.contains(x)) {
            return Err(EvalError::UnboundVariable(x));
        }
    }
    Ok(())
}

fn column_name(v: &ResultValue) -> Option<String> {
    match v {
        ResultValue::Null => None,
        ResultValue::Value(Value::String(s)) => Some(s.clone()),
        other => Some(other.to_string()),
    }
}

/// Runs a query over a graph, starting from the table `{()}`.
pub fn eval_query(q: &Query, g: &MetaPropertyGraph) -> Result<ResultTable, EvalError> {
    check_query(q)?;
    let q = q.desugar();
    let ctx: &dyn GraphView = g;
    let mut t = BindingSet::from([Binding::new()]);
    for c in &q.clauses {
        t = eval_clause(c, t, ctx);
    }

    let mut per_item: Vec<BTreeSet<String>> = vec![BTreeSet::new(); q.returns.len()];
    let mut rows = BTreeSet::new();
    for b in &t {
        let mut row = Row::new();
        for (i, item) in q.returns.iter().enumerate() {
            let name = match &item.alias {
                Alias::Static(s) => s.clone(),
                Alias::Dynamic(e) => {
                    let v = ResultValue::from_binding(eval_expression(e, b, ctx), ctx);
                    match column_name(&v) {
                        Some(n) => n,
                        None => continue,
                    }
                }
            };
            let value = ResultValue::from_binding(eval_expression(&item.expr, b, ctx), ctx);
            per_item[i].insert(name.clone());
            row.insert(name, value);
        }
        rows.insert(row);
    }

    let mut columns: Vec<String> = Vec::new();
    for (item, names) in q.returns.iter().zip(per_item) {
        let names = match &item.alias {
            Alias::Static(s) => vec![s.clone()],
            Alias::Dynamic(_) => names.into_iter().collect(),
        };
        for n in names {
            if !columns.contains(&n) {
                columns.push(n);
            }
        }
    }
    Ok(ResultTable { columns, rows })
}
