//! Engine versus oracle.

use mpgql_core::eval::{eval_pattern, Binding, BindingSet};
use mpgql_core::model::GraphView;
use mpgql_core::syntax::Pattern;

use crate::oracle::{oracle_eval_pattern, OracleError};

/// Bindings one side produced and the other did not.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffReport {
    /// Produced by the oracle only.
    pub missing: Vec<Binding>,
    /// Produced by the engine only.
    pub extra: Vec<Binding>,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

/// Runs both evaluators on `p` and reports the difference.
pub fn differential_check(view: &dyn GraphView, p: &Pattern) -> Result<DiffReport, OracleError> {
    let expected = oracle_eval_pattern(p, view)?;
    let actual: BindingSet = eval_pattern(p, view);
    Ok(DiffReport {
        missing: expected.difference(&actual).cloned().collect(),
        extra: actual.difference(&expected).cloned().collect(),
    })
}
