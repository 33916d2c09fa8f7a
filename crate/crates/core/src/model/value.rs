use std::cmp::Ordering;
use std::fmt;

use chrono::NaiveDate;
use ordered_float::OrderedFloat;

/// A property value.
///
/// There is no null variant: null only arises during query evaluation and is
/// represented there by `BindingValue::Null`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    String(String),
    Integer(i64),
    Decimal(OrderedFloat<f64>),
    Boolean(bool),
    Date(NaiveDate),
}

impl Value {
    pub fn string(s: impl Into<String>) -> Self {
        Value::String(s.into())
    }

    pub fn decimal(d: f64) -> Self {
        Value::Decimal(OrderedFloat(d))
    }

    pub fn type_name(&self) -> &'static str {
        match self {
            Value::String(_) => "string",
            Value::Integer(_) => "integer",
            Value::Decimal(_) => "decimal",
            Value::Boolean(_) => "boolean",
            Value::Date(_) => "date",
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::String(s) => Some(s),
            _ => None,
        }
    }

    /// Value equality as used by the `=` condition. Integers and decimals
    /// compare numerically, and a string in `DD-MM-YYYY` or ISO form equals
    /// the date it spells.
    pub fn semantic_eq(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Integer(a), Value::Decimal(b)) | (Value::Decimal(b), Value::Integer(a)) => (*a as f64) == b.0,
            (Value::Date(d), Value::String(s)) | (Value::String(s), Value::Date(d)) => parse_date(s) == Some(*d),
            _ => self == other,
        }
    }

    /// Ordering used by the `<` condition; `None` for incomparable pairs.
    pub fn semantic_cmp(&self, other: &Value) -> Option<Ordering> {
        match (self, other) {
            (Value::Integer(a), Value::Integer(b)) => Some(a.cmp(b)),
            (Value::Decimal(a), Value::Decimal(b)) => Some(a.cmp(b)),
            (Value::Integer(a), Value::Decimal(b)) => (*a as f64).partial_cmp(&b.0),
            (Value::Decimal(a), Value::Integer(b)) => a.0.partial_cmp(&(*b as f64)),
            (Value::String(a), Value::String(b)) => Some(a.cmp(b)),
            (Value::Date(a), Value::Date(b)) => Some(a.cmp(b)),
            (Value::Date(a), Value::String(s)) => parse_date(s).map(|b| a.cmp(&b)),
            (Value::String(s), Value::Date(b)) => parse_date(s).map(|a| a.cmp(b)),
            _ => None,
        }
    }

    /// Rendering for human-facing tables: dates as `DD-MM-YYYY`.
    pub fn display_dmy(&self) -> String {
        match self {
            Value::Date(d) => d.format("%d-%m-%Y").to_string(),
            other => other.to_string(),
        }
    }
}

/// Parses `DD-MM-YYYY` or `YYYY-MM-DD`.
pub fn parse_date(s: &str) -> Option<NaiveDate> {
    NaiveDate::parse_from_str(s, "%d-%m-%Y")
        .or_else(|_| NaiveDate::parse_from_str(s, "%Y-%m-%d"))
        .ok()
        .filter(|_| s.len() == 10)
}

impl fmt::Display for Value {
    /// Plain rendering: strings unquoted, dates ISO-8601.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::String(s) => f.write_str(s),
            Value::Integer(i) => write!(f, "{i}"),
            Value::Decimal(d) => write!(f, "{:?}", d.0),
            Value::Boolean(b) => write!(f, "{b}"),
            Value::Date(d) => write!(f, "{}", d.format("%Y-%m-%d")),
        }
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::String(s.to_owned())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::String(s)
    }
}

impl From<i64> for Value {
    fn from(i: i64) -> Self {
        Value::Integer(i)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Boolean(b)
    }
}

impl From<NaiveDate> for Value {
    fn from(d: NaiveDate) -> Self {
        Value::Date(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dates_parse_in_both_orders() {
        let d = NaiveDate::from_ymd_opt(2024, 11, 5).unwrap();
        assert_eq!(parse_date("05-11-2024"), Some(d));
        assert_eq!(parse_date("2024-11-05"), Some(d));
        assert_eq!(parse_date("5-11-2024"), None);
        assert_eq!(Value::Date(d).display_dmy(), "05-11-2024");
        assert_eq!(Value::Date(d).to_string(), "2024-11-05");
    }

    #[test]
    fn numeric_and_date_coercions() {
        assert!(Value::Integer(2).semantic_eq(&Value::decimal(2.0)));
        assert!(!Value::Integer(2).semantic_eq(&Value::string("2")));
        let d = Value::Date(NaiveDate::from_ymd_opt(2024, 11, 5).unwrap());
        assert!(d.semantic_eq(&Value::string("05-11-2024")));
        assert_eq!(d.semantic_cmp(&Value::string("06-11-2024")), Some(Ordering::Less));
        assert_eq!(Value::Integer(1).semantic_cmp(&Value::string("a")), None);
        assert_eq!(
            Value::string("a").semantic_cmp(&Value::string("b")),
            Some(Ordering::Less)
        );
    }
}
