use crate::model::{parse_date, Value};

use super::ast::*;
use super::lexer::{tokenize, Pos, Tok, Token};
use super::SyntaxError;

const KEYWORDS: &[&str] = &[
    "MATCH",
    "FILTER",
    "WHERE",
    "RETURN",
    "AS",
    "AND",
    "OR",
    "NOT",
    "KEY",
    "VAL",
    "ELEMENTOF",
    "SUBSETEQ",
    "TRUE",
    "FALSE",
    "DATE",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.iter().any(|k| k.eq_ignore_ascii_case(s))
}

/// Parses a complete query: clauses followed by one `RETURN`.
pub fn parse_query(text: &str) -> Result<Query, SyntaxError> {
    let mut p = Parser::new(text)?;
    let q = p.query()?;
    p.expect_eof()?;
    Ok(q)
}

/// Parses a single pattern π.
pub fn parse_pattern(text: &str) -> Result<Pattern, SyntaxError> {
    let mut p = Parser::new(text)?;
    let pat = p.pattern()?;
    p.expect_eof()?;
    Ok(pat)
}

/// Parses a single condition Φ.
pub fn parse_condition(text: &str) -> Result<Condition, SyntaxError> {
    let mut p = Parser::new(text)?;
    let c = p.condition()?;
    p.expect_eof()?;
    Ok(c)
}

/// Which kind of path element a pattern atom is, for the alternation check.
#[derive(Clone, Copy, PartialEq, Eq)]
enum PathRole {
    Node,
    Edge,
    Free,
}

struct Parser {
    toks: Vec<Token>,
    idx: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, SyntaxError> {
        Ok(Parser {
            toks: tokenize(text)?,
            idx: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.idx].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.idx + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.idx].pos
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.idx].tok.clone();
        if self.idx < self.toks.len() - 1 {
            self.idx += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, SyntaxError> {
        let found = self.peek().to_string();
        let message = match expected {
            [] => format!("unexpected {found}"),
            [one] => format!("expected {one}, found {found}"),
            many => format!("expected one of {}, found {found}", many.join(", ")),
        };
        Err(
            SyntaxError::new(message, self.pos(), expected.iter().map(|s| s.to_string()).collect())
                .at_eof(*self.peek() == Tok::Eof),
        )
    }

    fn error_msg<T>(&self, pos: Pos, msg: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError::new(msg, pos, Vec::new()))
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<(), SyntaxError> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.error(&[&format!("`{}`", t.symbol())])
        }
    }

    fn expect_eof(&mut self) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error(&["end of input"])
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s.eq_ignore_ascii_case(kw))
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.at_keyword(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            self.error(&[kw])
        }
    }

    fn at_variable(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if !is_keyword(s))
    }

    fn variable(&mut self) -> Result<Var, SyntaxError> {
        match self.peek() {
            Tok::Ident(s) if !is_keyword(s) => {
                let v = Var::new(s.clone());
                self.bump();
                Ok(v)
            }
            _ => self.error(&["variable"]),
        }
    }

    /// A label or key name: any identifier (keywords included) or a string.
    fn name(&mut self, what: &str) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) | Tok::Str(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.error(&[what]),
        }
    }

    // ---- queries ----

    fn query(&mut self) -> Result<Query, SyntaxError> {
        let mut clauses = Vec::new();
        loop {
            if self.eat_keyword("MATCH") {
                clauses.push(self.match_clause()?);
            } else if self.eat_keyword("FILTER") {
                clauses.push(Clause::Filter(self.condition()?));
            } else if self.eat_keyword("RETURN") {
                let returns = self.return_items()?;
                return Ok(Query { clauses, returns });
            } else {
                return self.error(&["MATCH", "FILTER", "RETURN"]);
            }
        }
    }

    /// `MATCH π, …, π [WHERE Φ]`. A `WHERE` after the last pattern belongs
    /// to the clause; earlier ones belong to their pattern.
    fn match_clause(&mut self) -> Result<Clause, SyntaxError> {
        let mut patterns = Vec::new();
        loop {
            let (pat, mut conds) = self.pattern_with_conditions()?;
            if self.eat(&Tok::Comma) {
                patterns.push(wrap_where(pat, conds));
                continue;
            }
            let filter = conds.pop();
            patterns.push(wrap_where(pat, conds));
            return Ok(Clause::Match {
                pattern: GraphPattern(patterns),
                filter,
            });
        }
    }

    fn return_items(&mut self) -> Result<Vec<ReturnItem>, SyntaxError> {
        let mut items = Vec::new();
        loop {
            let expr = self.expression()?;
            self.expect_keyword("AS")?;
            let alias = self.alias()?;
            items.push(ReturnItem { expr, alias });
            if !self.eat(&Tok::Comma) {
                return Ok(items);
            }
        }
    }

    fn alias(&mut self) -> Result<Alias, SyntaxError> {
        match self.peek().clone() {
            Tok::Str(s) => {
                self.bump();
                Ok(Alias::Static(s))
            }
            Tok::Ident(s) if !is_keyword(&s) && *self.peek_at(1) != Tok::Dot => {
                self.bump();
                Ok(Alias::Static(s))
            }
            _ => Ok(Alias::Dynamic(self.expression()?)),
        }
    }

    // ---- patterns ----

    fn pattern(&mut self) -> Result<Pattern, SyntaxError> {
        let (pat, conds) = self.pattern_with_conditions()?;
        Ok(wrap_where(pat, conds))
    }

    fn pattern_with_conditions(&mut self) -> Result<(Pattern, Vec<Condition>), SyntaxError> {
        let pat = self.union()?;
        let mut conds = Vec::new();
        while self.eat_keyword("WHERE") {
            conds.push(self.condition()?);
        }
        Ok((pat, conds))
    }

    fn union(&mut self) -> Result<Pattern, SyntaxError> {
        let mut left = self.concat()?;
        while self.eat(&Tok::Plus) {
            let right = self.concat()?;
            left = Pattern::union(left, right);
        }
        Ok(left)
    }

    fn at_element(&self) -> bool {
        matches!(
            self.peek(),
            Tok::LParen | Tok::Minus | Tok::LeftArrow | Tok::LBrace | Tok::Pipe
        )
    }

    fn concat(&mut self) -> Result<Pattern, SyntaxError> {
        if !self.at_element() {
            return self.error(&["`(`", "`-`", "`<-`", "`{`", "`|`"]);
        }
        let mut elements = Vec::new();
        let mut last_role = PathRole::Free;
        while self.at_element() {
            let pos = self.pos();
            let (el, role) = self.element()?;
            if role != PathRole::Free {
                if role == last_role {
                    let msg = match role {
                        PathRole::Node => "a node pattern cannot directly follow another node pattern",
                        _ => "an edge pattern cannot directly follow another edge pattern",
                    };
                    return self.error_msg(pos, msg);
                }
                last_role = role;
            }
            elements.push(el);
        }
        let mut it = elements.into_iter().rev();
        let mut acc = it.next().expect("at least one element");
        for el in it {
            acc = Pattern::concat(el, acc);
        }
        Ok(acc)
    }

    fn element(&mut self) -> Result<(Pattern, PathRole), SyntaxError> {
        match self.peek() {
            Tok::LParen => Ok((self.node()?, PathRole::Node)),
            Tok::Minus | Tok::LeftArrow => Ok((self.edge()?, PathRole::Edge)),
            Tok::LBrace => {
                self.bump();
                let v = self.optional_variable();
                self.expect(Tok::RBrace)?;
                Ok((Pattern::Property(v), PathRole::Free))
            }
            Tok::Pipe => {
                self.bump();
                let v = self.optional_variable();
                self.expect(Tok::Pipe)?;
                Ok((Pattern::Label(v), PathRole::Free))
            }
            _ => self.error(&["pattern"]),
        }
    }

    fn optional_variable(&mut self) -> Option<Var> {
        if self.at_variable() {
            self.variable().ok()
        } else {
            None
        }
    }

    fn label_test(&mut self) -> Result<LabelTest, SyntaxError> {
        if self.eat(&Tok::Question) {
            Ok(LabelTest::Variable(self.variable()?))
        } else {
            Ok(LabelTest::Label(self.name("label")?))
        }
    }

    fn selector(&mut self) -> Result<Option<Var>, SyntaxError> {
        if self.eat(&Tok::Dot) {
            Ok(Some(self.variable()?))
        } else {
            Ok(None)
        }
    }

    fn node(&mut self) -> Result<Pattern, SyntaxError> {
        self.expect(Tok::LParen)?;
        let var = self.optional_variable();
        let label = if self.eat(&Tok::Colon) {
            Some(self.label_test()?)
        } else {
            None
        };
        let meta = if self.eat(&Tok::DoubleColon) {
            Some(Box::new(self.pattern()?))
        } else {
            None
        };
        if *self.peek() != Tok::RParen {
            return if var.is_none() && label.is_none() && meta.is_none() {
                self.error(&["variable", "`:`", "`::`", "`)`"])
            } else {
                self.error(&["`)`"])
            };
        }
        self.bump();
        let descriptor = if var.is_none() && label.is_none() && meta.is_none() {
            None
        } else {
            Some(NodeDescriptor { var, label, meta })
        };
        let selector = self.selector()?;
        Ok(Pattern::Node { descriptor, selector })
    }

    fn edge(&mut self) -> Result<Pattern, SyntaxError> {
        let left = matches!(self.bump(), Tok::LeftArrow);
        self.expect(Tok::LBracket)?;
        let var = self.optional_variable();
        let label = if self.eat(&Tok::Colon) {
            Some(self.label_test()?)
        } else {
            None
        };
        self.expect(Tok::RBracket)?;
        let descriptor = if var.is_none() && label.is_none() {
            None
        } else {
            Some(EdgeDescriptor { var, label })
        };
        let sel_pos = self.pos();
        let selector = self.selector()?;
        if selector.is_some() && descriptor.is_none() {
            return self.error_msg(sel_pos, "a property selector needs a non-empty edge descriptor");
        }
        let direction = match (left, self.peek()) {
            (false, Tok::Arrow) => Direction::Right,
            (false, Tok::Minus) => Direction::Undirected,
            (true, Tok::Minus) => Direction::Left,
            (false, _) => return self.error(&["`->`", "`-`"]),
            (true, _) => return self.error(&["`-`"]),
        };
        self.bump();
        Ok(Pattern::Edge {
            direction,
            descriptor,
            selector,
        })
    }

    // ---- conditions ----

    fn condition(&mut self) -> Result<Condition, SyntaxError> {
        let mut left = self.conjunction()?;
        while self.eat_keyword("OR") {
            let right = self.conjunction()?;
            left = Condition::or(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Condition, SyntaxError> {
        let mut left = self.negation()?;
        while self.eat_keyword("AND") {
            let right = self.negation()?;
            left = Condition::and(left, right);
        }
        Ok(left)
    }

    fn negation(&mut self) -> Result<Condition, SyntaxError> {
        if self.eat_keyword("NOT") {
            Ok(Condition::negate(self.negation()?))
        } else {
            self.condition_atom()
        }
    }

    fn condition_atom(&mut self) -> Result<Condition, SyntaxError> {
        if self.eat(&Tok::LParen) {
            let c = self.condition()?;
            self.expect(Tok::RParen)?;
            return Ok(c);
        }
        if self.at_keyword("SUBSETEQ") && *self.peek_at(1) == Tok::LParen {
            self.bump();
            self.bump();
            let x = self.variable()?;
            self.expect(Tok::Comma)?;
            let y = self.variable()?;
            self.expect(Tok::RParen)?;
            return Ok(Condition::SubsetEq(x, y));
        }
        if self.at_variable() && *self.peek_at(1) == Tok::Colon {
            let var = self.variable()?;
            self.bump();
            let label = self.name("label")?;
            return Ok(Condition::HasLabel { var, label });
        }
        let start = self.pos();
        let left = self.expression()?;
        if self.eat_keyword("ELEMENTOF") {
            let Some(element) = left.as_constant() else {
                return self.error_msg(start, "the left operand of ELEMENTOF must be a constant");
            };
            let set = self.variable()?;
            return Ok(Condition::ElementOf { element, set });
        }
        match self.peek() {
            Tok::Eq => {
                self.bump();
                Ok(Condition::Eq(left, self.expression()?))
            }
            Tok::Lt => {
                self.bump();
                Ok(Condition::Lt(left, self.expression()?))
            }
            // `a<-1` lexes as `<-`; read it as `<` followed by a negative number.
            Tok::LeftArrow => {
                self.bump();
                let right = self.number(true)?;
                Ok(Condition::Lt(left, right))
            }
            _ => self.error(&["`=`", "`<`", "ELEMENTOF"]),
        }
    }

    // ---- expressions ----

    fn number(&mut self, negative: bool) -> Result<Expression, SyntaxError> {
        let sign = if negative { -1 } else { 1 };
        match self.peek().clone() {
            Tok::Int(i) => {
                self.bump();
                Ok(Expression::Literal(Value::Integer(sign * i)))
            }
            Tok::Dec(d) => {
                self.bump();
                Ok(Expression::Literal(Value::decimal(sign as f64 * d)))
            }
            _ => self.error(&["number"]),
        }
    }

    fn expression(&mut self) -> Result<Expression, SyntaxError> {
        match self.peek().clone() {
            Tok::Str(s) => {
                self.bump();
                Ok(Expression::Literal(Value::String(s)))
            }
            Tok::Int(_) | Tok::Dec(_) => self.number(false),
            Tok::Minus => {
                self.bump();
                self.number(true)
            }
            Tok::Colon => {
                self.bump();
                Ok(Expression::LabelLiteral(self.name("label")?))
            }
            Tok::Dot => {
                self.bump();
                Ok(Expression::KeyLiteral(self.name("property key")?))
            }
            Tok::Ident(s) if is_keyword(&s) => {
                let kw = s.to_ascii_uppercase();
                let pos = self.pos();
                match kw.as_str() {
                    "KEY" | "VAL" => {
                        self.bump();
                        self.expect(Tok::LParen)?;
                        let v = self.variable()?;
                        self.expect(Tok::RParen)?;
                        Ok(if kw == "KEY" {
                            Expression::KeyOf(v)
                        } else {
                            Expression::ValOf(v)
                        })
                    }
                    "TRUE" | "FALSE" => {
                        self.bump();
                        Ok(Expression::Literal(Value::Boolean(kw == "TRUE")))
                    }
                    "DATE" => {
                        self.bump();
                        match self.bump() {
                            Tok::Str(s) => match parse_date(&s) {
                                Some(d) => Ok(Expression::Literal(Value::Date(d))),
                                None => self.error_msg(pos, format!("invalid date {s:?}")),
                            },
                            Tok::Eof => {
                                Err(SyntaxError::new("expected a date string after DATE", pos, Vec::new()).at_eof(true))
                            }
                            _ => self.error_msg(pos, "expected a date string after DATE"),
                        }
                    }
                    _ => self.error(&["expression"]),
                }
            }
            Tok::Ident(_) => {
                let var = self.variable()?;
                if self.eat(&Tok::Dot) {
                    let key = self.name("property key")?;
                    Ok(Expression::Property { var, key })
                } else {
                    Ok(Expression::Var(var))
                }
            }
            _ => self.error(&["expression"]),
        }
    }
}

fn wrap_where(mut pat: Pattern, conds: Vec<Condition>) -> Pattern {
    for c in conds {
        pat = pat.filtered(c);
    }
    pat
}
