//! Canonical text form of the AST. Parsing the output yields the same
//! tree for every parser-produced AST.

use std::fmt::{self, Write};

use crate::model::Value;

use super::ast::*;
use super::lexer::{is_ident_char, is_ident_start};
use super::parser::is_keyword;

/// Types with a canonical MetaGPML rendering.
pub trait Render {
    fn render_into(&self, out: &mut String);
}

/// Renders a query, one clause per line.
pub fn render(q: &Query) -> String {
    let mut out = String::new();
    q.render_into(&mut out);
    out
}

pub fn render_pattern(p: &Pattern) -> String {
    let mut out = String::new();
    p.render_into(&mut out);
    out
}

pub fn render_condition(c: &Condition) -> String {
    let mut out = String::new();
    c.render_into(&mut out);
    out
}

pub fn render_expression(e: &Expression) -> String {
    let mut out = String::new();
    e.render_into(&mut out);
    out
}

fn is_plain_ident(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(is_ident_start) && cs.all(is_ident_char)
}

fn push_string_literal(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
}

/// A label or key: bare when it lexes as one identifier, quoted otherwise.
fn push_name(out: &mut String, s: &str) {
    if is_plain_ident(s) {
        out.push_str(s);
    } else {
        push_string_literal(out, s);
    }
}

fn push_label_test(out: &mut String, l: &LabelTest) {
    out.push(':');
    match l {
        LabelTest::Label(s) => push_name(out, s),
        LabelTest::Variable(v) => {
            out.push('?');
            out.push_str(v.name());
        }
    }
}

fn push_selector(out: &mut String, sel: &Option<Var>) {
    if let Some(z) = sel {
        out.push('.');
        out.push_str(z.name());
    }
}

impl Render for Pattern {
    fn render_into(&self, out: &mut String) {
        match self {
            Pattern::Node { descriptor, selector } => {
                out.push('(');
                if let Some(d) = descriptor {
                    if let Some(v) = &d.var {
                        out.push_str(v.name());
                    }
                    if let Some(l) = &d.label {
                        push_label_test(out, l);
                    }
                    if let Some(m) = &d.meta {
                        out.push_str("::");
                        m.render_into(out);
                    }
                }
                out.push(')');
                push_selector(out, selector);
            }
            Pattern::Edge {
                direction,
                descriptor,
                selector,
            } => {
                out.push_str(if *direction == Direction::Left { "<-[" } else { "-[" });
                if let Some(d) = descriptor {
                    if let Some(v) = &d.var {
                        out.push_str(v.name());
                    }
                    if let Some(l) = &d.label {
                        push_label_test(out, l);
                    }
                }
                out.push(']');
                push_selector(out, selector);
                out.push_str(if *direction == Direction::Right { "->" } else { "-" });
            }
            Pattern::Property(v) => {
                out.push('{');
                if let Some(v) = v {
                    out.push_str(v.name());
                }
                out.push('}');
            }
            Pattern::Label(v) => {
                out.push('|');
                if let Some(v) = v {
                    out.push_str(v.name());
                }
                out.push('|');
            }
            Pattern::Concat(a, b) => {
                a.render_into(out);
                b.render_into(out);
            }
            Pattern::Union(a, b) => {
                a.render_into(out);
                out.push_str(" + ");
                b.render_into(out);
            }
            Pattern::Where(p, c) => {
                p.render_into(out);
                out.push_str(" WHERE ");
                c.render_into(out);
            }
        }
    }
}

fn push_value(out: &mut String, v: &Value) {
    match v {
        Value::String(s) => push_string_literal(out, s),
        Value::Integer(i) => {
            let _ = write!(out, "{i}");
        }
        Value::Decimal(d) => {
            let _ = write!(out, "{:?}", d.0);
        }
        Value::Boolean(b) => out.push_str(if *b { "TRUE" } else { "FALSE" }),
        Value::Date(d) => {
            let _ = write!(out, "DATE \"{}\"", d.format("%Y-%m-%d"));
        }
    }
}

impl Render for Expression {
    fn render_into(&self, out: &mut String) {
        match self {
            Expression::Var(v) => out.push_str(v.name()),
            Expression::Property { var, key } => {
                out.push_str(var.name());
                out.push('.');
                push_name(out, key);
            }
            Expression::Literal(v) => push_value(out, v),
            Expression::KeyLiteral(k) => {
                out.push('.');
                push_name(out, k);
            }
            Expression::LabelLiteral(l) => {
                out.push(':');
                push_name(out, l);
            }
            Expression::KeyOf(v) => {
                let _ = write!(out, "KEY({v})");
            }
            Expression::ValOf(v) => {
                let _ = write!(out, "VAL({v})");
            }
        }
    }
}

fn precedence(c: &Condition) -> u8 {
    match c {
        Condition::Or(..) => 1,
        Condition::And(..) => 2,
        Condition::Not(..) => 3,
        _ => 4,
    }
}

fn push_operand(out: &mut String, c: &Condition, min: u8) {
    if precedence(c) < min {
        out.push('(');
        c.render_into(out);
        out.push(')');
    } else {
        c.render_into(out);
    }
}

impl Render for Condition {
    fn render_into(&self, out: &mut String) {
        match self {
            Condition::Eq(a, b) | Condition::Lt(a, b) => {
                a.render_into(out);
                out.push_str(if matches!(self, Condition::Eq(..)) {
                    " = "
                } else {
                    " < "
                });
                b.render_into(out);
            }
            Condition::HasLabel { var, label } => {
                out.push_str(var.name());
                out.push(':');
                push_name(out, label);
            }
            Condition::SubsetEq(x, y) => {
                let _ = write!(out, "SUBSETEQ({x}, {y})");
            }
            Condition::ElementOf { element, set } => {
                element.to_expression().render_into(out);
                let _ = write!(out, " ELEMENTOF {set}");
            }
            Condition::And(a, b) | Condition::Or(a, b) => {
                let (p, op) = if matches!(self, Condition::And(..)) {
                    (2, " AND ")
                } else {
                    (1, " OR ")
                };
                push_operand(out, a, p);
                out.push_str(op);
                push_operand(out, b, p + 1);
            }
            Condition::Not(a) => {
                out.push_str("NOT ");
                push_operand(out, a, 3);
            }
        }
    }
}

impl Render for Query {
    fn render_into(&self, out: &mut String) {
        for c in &self.clauses {
            match c {
                Clause::Match { pattern, filter } => {
                    out.push_str("MATCH ");
                    for (i, p) in pattern.0.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        p.render_into(out);
                    }
                    if let Some(f) = filter {
                        out.push_str(" WHERE ");
                        f.render_into(out);
                    }
                }
                Clause::Filter(f) => {
                    out.push_str("FILTER ");
                    f.render_into(out);
                }
            }
            out.push('\n');
        }
        out.push_str("RETURN ");
        for (i, item) in self.returns.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            item.expr.render_into(out);
            out.push_str(" AS ");
            match &item.alias {
                Alias::Static(s) if is_plain_ident(s) && !is_keyword(s) => out.push_str(s),
                Alias::Static(s) => push_string_literal(out, s),
                Alias::Dynamic(e) => e.render_into(out),
            }
        }
    }
}

macro_rules! display_via_render {
    ($($t:ty),*) => {$(
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let mut s = String::new();
                self.render_into(&mut s);
                f.write_str(&s)
            }
        }
    )*};
}

display_via_render!(Pattern, Expression, Condition, Query);
