use std::cmp::Ordering;

use crate::model::{GraphView, ObjectId, Value};
use crate::syntax::{Condition, Constant, Expression, Var};

use super::binding::{Binding, BindingValue};
use super::truth::Truth;

fn bound(b: &Binding, x: &Var) -> BindingValue {
    b.get(x).cloned().unwrap_or(BindingValue::Null)
}

fn bound_object(b: &Binding, x: &Var) -> Option<ObjectId> {
    b.get(x).and_then(BindingValue::as_object)
}

/// Evaluates an expression under a binding. Every failure (unbound
/// variable, missing key, wrong kind of object) yields Null.
pub fn eval_expression(e: &Expression, b: &Binding, ctx: &dyn GraphView) -> BindingValue {
    match e {
        Expression::Var(x) => bound(b, x),
        Expression::Property { var, key } => {
            let Some(o) = bound_object(b, var).filter(|o| o.is_element()) else {
                return BindingValue::Null;
            };
            ctx.sigma(o)
                .into_iter()
                .find_map(|p| match ctx.upsilon(p) {
                    Some((k, v)) if k == key => Some(BindingValue::Value(v.clone())),
                    _ => None,
                })
                .unwrap_or(BindingValue::Null)
        }
        Expression::Literal(v) => BindingValue::Value(v.clone()),
        Expression::KeyLiteral(s) | Expression::LabelLiteral(s) => BindingValue::Value(Value::String(s.clone())),
        Expression::KeyOf(p) | Expression::ValOf(p) => {
            let Some((k, v)) = bound_object(b, p).and_then(|p| ctx.upsilon(p)) else {
                return BindingValue::Null;
            };
            BindingValue::Value(match e {
                Expression::KeyOf(_) => Value::String(k.to_owned()),
                _ => v.clone(),
            })
        }
    }
}

fn values_equal(a: &BindingValue, b: &BindingValue) -> Truth {
    match (a, b) {
        (BindingValue::Null, _) | (_, BindingValue::Null) => Truth::Null,
        (BindingValue::Object(x), BindingValue::Object(y)) => (x == y).into(),
        (BindingValue::Value(x), BindingValue::Value(y)) => x.semantic_eq(y).into(),
        _ => Truth::False,
    }
}

fn values_less(a: &BindingValue, b: &BindingValue) -> Truth {
    match (a, b) {
        (BindingValue::Value(x), BindingValue::Value(y)) => match x.semantic_cmp(y) {
            Some(o) => (o == Ordering::Less).into(),
            None => Truth::Null,
        },
        _ => Truth::Null,
    }
}

/// μ of the label-set object bound to `x`, if it is one in this view.
fn bound_label_set<'a>(b: &Binding, x: &Var, ctx: &'a dyn GraphView) -> Option<&'a std::collections::BTreeSet<String>> {
    ctx.mu(bound_object(b, x)?)
}

fn constant_text(c: &Constant) -> Option<&str> {
    match c {
        Constant::Key(s) | Constant::Label(s) => Some(s),
        Constant::Value(v) => v.as_str(),
    }
}

/// Evaluates a condition to True, False or Null.
pub fn eval_condition(c: &Condition, b: &Binding, ctx: &dyn GraphView) -> Truth {
    match c {
        Condition::Eq(x, y) => values_equal(&eval_expression(x, b, ctx), &eval_expression(y, b, ctx)),
        Condition::Lt(x, y) => values_less(&eval_expression(x, b, ctx), &eval_expression(y, b, ctx)),
        Condition::HasLabel { var, label } => match bound_object(b, var).filter(|o| o.is_element()) {
            Some(o) => match ctx.labels(o) {
                Some(ls) => ls.contains(label).into(),
                None => Truth::Null,
            },
            None => Truth::Null,
        },
        Condition::SubsetEq(x, y) => match (bound_label_set(b, x, ctx), bound_label_set(b, y, ctx)) {
            (Some(l1), Some(l2)) => l1.is_subset(l2).into(),
            _ => Truth::False,
        },
        Condition::ElementOf { element, set } => match (constant_text(element), bound_label_set(b, set, ctx)) {
            (Some(s), Some(ls)) => ls.contains(s).into(),
            _ => Truth::False,
        },
        Condition::And(x, y) => eval_condition(x, b, ctx).and(eval_condition(y, b, ctx)),
        Condition::Or(x, y) => eval_condition(x, b, ctx).or(eval_condition(y, b, ctx)),
        Condition::Not(x) => eval_condition(x, b, ctx).not(),
    }
}
