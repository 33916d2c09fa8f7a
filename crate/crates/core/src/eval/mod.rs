//! Query evaluation: pattern matching to binding sets, three-valued
//! conditions and the clause pipeline over working tables.

mod binding;
mod expr;
mod pattern;
mod query;
mod truth;

use thiserror::Error;

use crate::model::{GraphView, MetaPropertyGraph, ObjectId, Substructure};
use crate::syntax::Var;

pub use binding::{compatible, join, join_sets, Binding, BindingSet, BindingValue};
pub use expr::{eval_condition, eval_expression};
pub use pattern::eval_pattern;
pub use query::{
    check_query, eval_clause, eval_graph_pattern, eval_query, format_label_set, ResultTable, ResultValue, Row,
};
pub use truth::Truth;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("IncompatibleBindings: the bindings disagree on a shared variable")]
    IncompatibleBindings,
    #[error("UnboundVariable: `{0}` is not bound by any MATCH clause")]
    UnboundVariable(Var),
}

/// The graph a pattern is evaluated against: a whole graph or the
/// substructure of one of its nodes. Evaluation functions accept any
/// [`GraphView`]; this enum is a convenience for holding either.
#[derive(Clone, Debug)]
pub enum GraphContext<'g> {
    Graph(&'g MetaPropertyGraph),
    View(Substructure<'g>),
}

impl GraphView for GraphContext<'_> {
    fn graph(&self) -> &MetaPropertyGraph {
        match self {
            GraphContext::Graph(g) => g,
            GraphContext::View(v) => v.graph(),
        }
    }

    fn includes(&self, id: ObjectId) -> bool {
        match self {
            GraphContext::Graph(g) => g.includes(id),
            GraphContext::View(v) => v.includes(id),
        }
    }
}

impl<'g> From<&'g MetaPropertyGraph> for GraphContext<'g> {
    fn from(g: &'g MetaPropertyGraph) -> Self {
        GraphContext::Graph(g)
    }
}

impl<'g> From<Substructure<'g>> for GraphContext<'g> {
    fn from(v: Substructure<'g>) -> Self {
        GraphContext::View(v)
    }
}
