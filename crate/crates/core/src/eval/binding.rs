use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::model::{ObjectId, Value};
use crate::syntax::Var;

use super::EvalError;

/// What a variable can be bound to: any object (node, edge, property or
/// label set), a plain value, or Null.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BindingValue {
    Object(ObjectId),
    Value(Value),
    Null,
}

impl BindingValue {
    pub fn as_object(&self) -> Option<ObjectId> {
        match self {
            BindingValue::Object(o) => Some(*o),
            _ => None,
        }
    }

    pub fn is_null(&self) -> bool {
        matches!(self, BindingValue::Null)
    }
}

impl From<ObjectId> for BindingValue {
    fn from(o: ObjectId) -> Self {
        BindingValue::Object(o)
    }
}

impl From<Value> for BindingValue {
    fn from(v: Value) -> Self {
        BindingValue::Value(v)
    }
}

impl fmt::Display for BindingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BindingValue::Object(o) => write!(f, "{o}"),
            BindingValue::Value(v) => write!(f, "{v:?}"),
            BindingValue::Null => f.write_str("Null"),
        }
    }
}

/// A finite partial map from variables to values. A variable outside the
/// domain is different from one bound to Null.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Binding(BTreeMap<Var, BindingValue>);

/// A set of bindings; also used as the working table of a query.
pub type BindingSet = BTreeSet<Binding>;

impl Binding {
    /// The empty binding `()`.
    pub fn new() -> Self {
        Binding(BTreeMap::new())
    }

    pub fn get(&self, x: &Var) -> Option<&BindingValue> {
        self.0.get(x)
    }

    pub fn contains(&self, x: &Var) -> bool {
        self.0.contains_key(x)
    }

    pub fn insert(&mut self, x: Var, v: impl Into<BindingValue>) {
        self.0.insert(x, v.into());
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &BindingValue)> {
        self.0.iter()
    }

    /// Binding with `x ↦ v` added, or `None` if `x` is already bound to
    /// something else.
    pub(crate) fn extended(&self, x: &Var, v: BindingValue) -> Option<Binding> {
        match self.0.get(x) {
            Some(old) if *old != v => None,
            Some(_) => Some(self.clone()),
            None => {
                let mut b = self.clone();
                b.0.insert(x.clone(), v);
                Some(b)
            }
        }
    }
}

impl<V: Into<BindingValue>> FromIterator<(Var, V)> for Binding {
    fn from_iter<I: IntoIterator<Item = (Var, V)>>(iter: I) -> Self {
        Binding(iter.into_iter().map(|(k, v)| (k, v.into())).collect())
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k} ↦ {v}")?;
        }
        f.write_str(")")
    }
}

/// Whether two bindings agree on every shared variable.
pub fn compatible(b1: &Binding, b2: &Binding) -> bool {
    let (small, large) = if b1.len() <= b2.len() { (b1, b2) } else { (b2, b1) };
    small.iter().all(|(x, v)| large.get(x).is_none_or(|w| w == v))
}

/// The union of two compatible bindings.
pub fn join(b1: &Binding, b2: &Binding) -> Result<Binding, EvalError> {
    if !compatible(b1, b2) {
        return Err(EvalError::IncompatibleBindings);
    }
    let mut out = b1.clone();
    for (x, v) in b2.iter() {
        out.0.insert(x.clone(), v.clone());
    }
    Ok(out)
}

/// `{β1 ⋈ β2 | β1 ∈ a, β2 ∈ b, β1 ∼ β2}`
pub fn join_sets(a: &BindingSet, b: &BindingSet) -> BindingSet {
    let mut out = BindingSet::new();
    for x in a {
        for y in b {
            if let Ok(j) = join(x, y) {
                out.insert(j);
            }
        }
    }
    out
}
