use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Map, Number};

use crate::model::{
    parse_date, validate, Endpoints, GraphParts, MetaPropertyGraph, ObjectId, ObjectKind, Value, Violation,
};

use super::json::Json;

/// The only document version this crate reads and writes.
pub const FORMAT_VERSION: &str = "1";

/// A validation failure together with where it sits in the document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocatedViolation {
    /// Document path such as `nodes[2].properties.Name` or `rho.n7`.
    pub path: String,
    pub violation: Violation,
}

impl fmt::Display for LocatedViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.violation)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GraphIoError {
    #[error("ParseError: {0}")]
    Parse(String),
    #[error("SchemaError: {path}: {message}")]
    Schema { path: String, message: String },
    #[error("IntegrityError: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Integrity(Vec<LocatedViolation>),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl GraphIoError {
    /// Violation classes of an integrity error, empty for other errors.
    pub fn violation_classes(&self) -> Vec<&'static str> {
        match self {
            GraphIoError::Integrity(vs) => vs.iter().map(|v| v.violation.class()).collect(),
            _ => Vec::new(),
        }
    }
}

fn schema<T>(path: &str, message: impl Into<String>) -> Result<T, GraphIoError> {
    Err(GraphIoError::Schema {
        path: path.to_owned(),
        message: message.into(),
    })
}

fn wrong_type<T>(path: &str, expected: &str, got: &Json) -> Result<T, GraphIoError> {
    schema(path, format!("expected {expected}, found {}", got.type_name()))
}

/// Splits an object into its members, rejecting unknown and repeated fields.
fn fields<'a>(j: &'a Json, path: &str, allowed: &[&str]) -> Result<BTreeMap<&'a str, &'a Json>, GraphIoError> {
    let Json::Object(members) = j else {
        return wrong_type(path, "object", j);
    };
    let mut out = BTreeMap::new();
    for (k, v) in members {
        if !allowed.contains(&k.as_str()) {
            return schema(path, format!("unknown field `{k}`"));
        }
        if out.insert(k.as_str(), v).is_some() {
            return schema(path, format!("duplicate field `{k}`"));
        }
    }
    Ok(out)
}

fn string<'a>(j: &'a Json, path: &str) -> Result<&'a str, GraphIoError> {
    match j {
        Json::Str(s) => Ok(s),
        other => wrong_type(path, "string", other),
    }
}

fn array<'a>(j: &'a Json, path: &str) -> Result<&'a [Json], GraphIoError> {
    match j {
        Json::Array(a) => Ok(a),
        other => wrong_type(path, "array", other),
    }
}

fn required<'a>(f: &BTreeMap<&str, &'a Json>, key: &str, path: &str) -> Result<&'a Json, GraphIoError> {
    match f.get(key) {
        Some(j) => Ok(j),
        None => schema(path, format!("missing field `{key}`")),
    }
}

fn value(j: &Json, path: &str) -> Result<Value, GraphIoError> {
    match j {
        Json::Str(s) => Ok(Value::String(s.clone())),
        Json::Int(i) => Ok(Value::Integer(*i)),
        Json::BigInt => schema(path, "integer out of range"),
        Json::Float(f) => Ok(Value::decimal(*f)),
        Json::Bool(b) => Ok(Value::Boolean(*b)),
        Json::Object(_) => {
            let f = fields(j, path, &["date", "decimal"])?;
            match (f.get("date"), f.get("decimal"), f.len()) {
                (Some(d), None, 1) => {
                    let s = string(d, &format!("{path}.date"))?;
                    match parse_date(s) {
                        Some(d) if s.as_bytes().get(4) == Some(&b'-') => Ok(Value::Date(d)),
                        _ => schema(path, format!("invalid date {s:?}, expected YYYY-MM-DD")),
                    }
                }
                (None, Some(d), 1) => {
                    let s = string(d, &format!("{path}.decimal"))?;
                    match s.parse::<f64>() {
                        Ok(f) => Ok(Value::decimal(f)),
                        Err(_) => schema(path, format!("invalid decimal {s:?}")),
                    }
                }
                _ => schema(path, "expected {\"date\": …} or {\"decimal\": …}"),
            }
        }
        Json::Null => schema(path, "null is not a property value"),
        Json::Array(_) => schema(path, "arrays are not property values"),
    }
}

fn labels(j: Option<&&Json>, path: &str) -> Result<BTreeSet<String>, GraphIoError> {
    let Some(j) = j else { return Ok(BTreeSet::new()) };
    array(j, path)?
        .iter()
        .enumerate()
        .map(|(i, l)| string(l, &format!("{path}[{i}]")).map(str::to_owned))
        .collect()
}

fn json_path_key(k: &str) -> String {
    if !k.is_empty() && k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        k.to_owned()
    } else {
        format!("{k:?}")
    }
}

/// Builds [`GraphParts`] in document order, assigning ids the same way the
/// mutation API would.
struct Builder {
    parts: GraphParts,
    serial: BTreeMap<ObjectKind, u32>,
    names: BTreeMap<String, ObjectId>,
    /// Per element: its label set and its properties by key (first wins).
    label_of: BTreeMap<ObjectId, ObjectId>,
    prop_by_key: BTreeMap<(ObjectId, String), ObjectId>,
    paths: BTreeMap<ObjectId, String>,
    /// Paths of references that resolved to an object of the wrong kind.
    misuse: BTreeMap<ObjectId, String>,
}

impl Builder {
    fn fresh(&mut self, kind: ObjectKind) -> ObjectId {
        let s = self.serial.entry(kind).or_insert(1);
        let id = ObjectId::new(kind, *s);
        *s += 1;
        id
    }

    /// An id for a reference that resolves to nothing.
    fn placeholder(&mut self, kind: ObjectKind, path: String) -> ObjectId {
        let id = self.fresh(kind);
        self.paths.insert(id, path);
        id
    }

    fn element(&mut self, id: ObjectId, f: &BTreeMap<&str, &Json>, path: &str) -> Result<(), GraphIoError> {
        let name = string(required(f, "id", path)?, &format!("{path}.id"))?;
        if self.names.insert(name.to_owned(), id).is_some() {
            return schema(&format!("{path}.id"), format!("duplicate id {name:?}"));
        }
        self.paths.insert(id, path.to_owned());
        let l = self.fresh(ObjectKind::LabelSet);
        let ls = labels(f.get("labels"), &format!("{path}.labels"))?;
        self.parts.label_sets.insert(l);
        self.parts.mu.insert(l, ls);
        self.parts.lambda.insert(id, l);
        self.label_of.insert(id, l);
        self.paths.insert(l, format!("{path}.labels"));
        let mut owned = BTreeSet::new();
        if let Some(props) = f.get("properties") {
            let ppath = format!("{path}.properties");
            let Json::Object(members) = props else {
                return wrong_type(&ppath, "object", props);
            };
            for (k, v) in members {
                let vpath = format!("{ppath}.{}", json_path_key(k));
                let val = value(v, &vpath)?;
                let p = self.fresh(ObjectKind::Property);
                self.parts.properties.insert(p);
                self.parts.upsilon.insert(p, (k.clone(), val));
                self.prop_by_key.entry((id, k.clone())).or_insert(p);
                self.paths.insert(p, vpath);
                owned.insert(p);
            }
        }
        self.parts.sigma.insert(id, owned);
        Ok(())
    }

    fn node_ref(&mut self, j: &Json, path: String) -> Result<ObjectId, GraphIoError> {
        let name = string(j, &path)?;
        match self.names.get(name) {
            Some(&id) => {
                if !id.is_node() {
                    self.misuse.insert(id, path);
                }
                Ok(id)
            }
            None => Ok(self.placeholder(ObjectKind::Node, path)),
        }
    }

    fn element_ref(&mut self, name: &str, path: String) -> ObjectId {
        match self.names.get(name) {
            Some(&id) => id,
            None => self.placeholder(ObjectKind::Node, path),
        }
    }

    fn object_ref(&mut self, j: &Json, path: String) -> Result<ObjectId, GraphIoError> {
        match j {
            Json::Str(name) => Ok(self.element_ref(name, path)),
            Json::Object(_) => {
                let f = fields(j, &path, &["labelset_of", "owner", "key"])?;
                if let Some(owner) = f.get("labelset_of") {
                    if f.len() != 1 {
                        return schema(&path, "`labelset_of` takes no other fields");
                    }
                    let owner = string(owner, &format!("{path}.labelset_of"))?;
                    return Ok(match self.names.get(owner).and_then(|o| self.label_of.get(o)) {
                        Some(&l) => l,
                        None => self.placeholder(ObjectKind::LabelSet, path),
                    });
                }
                let owner = string(required(&f, "owner", &path)?, &format!("{path}.owner"))?;
                let key = string(required(&f, "key", &path)?, &format!("{path}.key"))?;
                let found = self
                    .names
                    .get(owner)
                    .and_then(|&o| self.prop_by_key.get(&(o, key.to_owned())));
                Ok(match found {
                    Some(&p) => p,
                    None => self.placeholder(ObjectKind::Property, path),
                })
            }
            other => wrong_type(&path, "string or object", other),
        }
    }

    fn locate(&self, v: Violation) -> LocatedViolation {
        let lookup = |id: ObjectId| self.paths.get(&id).cloned();
        let path = match &v {
            Violation::KindMismatch { id, .. } => self.misuse.get(id).cloned().or_else(|| lookup(*id)),
            Violation::UnknownObject { id, referrer } => lookup(*id).or_else(|| lookup(*referrer)),
            Violation::DanglingEndpoint { edge, endpoint } => lookup(*endpoint).or_else(|| lookup(*edge)),
            Violation::CyclicReification { node } => Some(format!("rho.{}", self.name_of(*node))),
            other => lookup(other.subject()),
        };
        LocatedViolation {
            path: path.unwrap_or_else(|| "$".to_owned()),
            violation: v,
        }
    }

    fn name_of(&self, id: ObjectId) -> String {
        self.names
            .iter()
            .find(|(_, &v)| v == id)
            .map(|(k, _)| json_path_key(k))
            .unwrap_or_else(|| id.to_string())
    }
}

/// Reads a graph document, checking its schema and then every structural
/// constraint of the model.
pub fn load(text: &str) -> Result<MetaPropertyGraph, GraphIoError> {
    let doc: Json = serde_json::from_str(text).map_err(|e| GraphIoError::Parse(e.to_string()))?;
    let top = fields(&doc, "$", &["format_version", "nodes", "edges", "rho"])?;
    let version = string(required(&top, "format_version", "$")?, "format_version")?;
    if version != FORMAT_VERSION {
        return schema("format_version", format!("unsupported version {version:?}"));
    }
    let mut b = Builder {
        parts: GraphParts::default(),
        serial: BTreeMap::new(),
        names: BTreeMap::new(),
        label_of: BTreeMap::new(),
        prop_by_key: BTreeMap::new(),
        paths: BTreeMap::new(),
        misuse: BTreeMap::new(),
    };

    let empty = Json::Array(Vec::new());
    let nodes = array(top.get("nodes").copied().unwrap_or(&empty), "nodes")?;
    for (i, nj) in nodes.iter().enumerate() {
        let path = format!("nodes[{i}]");
        let f = fields(nj, &path, &["id", "labels", "properties"])?;
        let n = b.fresh(ObjectKind::Node);
        b.parts.nodes.insert(n);
        b.element(n, &f, &path)?;
    }

    let edges = array(top.get("edges").copied().unwrap_or(&empty), "edges")?;
    let mut endpoints = Vec::new();
    for (i, ej) in edges.iter().enumerate() {
        let path = format!("edges[{i}]");
        let f = fields(ej, &path, &["id", "kind", "endpoints", "labels", "properties"])?;
        let directed = match string(required(&f, "kind", &path)?, &format!("{path}.kind"))? {
            "directed" => true,
            "undirected" => false,
            other => return schema(&format!("{path}.kind"), format!("unknown edge kind {other:?}")),
        };
        let ends = array(required(&f, "endpoints", &path)?, &format!("{path}.endpoints"))?;
        if ends.len() != 2 {
            return schema(&format!("{path}.endpoints"), "expected exactly two endpoints");
        }
        let e = b.fresh(ObjectKind::Edge);
        b.parts.edges.insert(e);
        b.element(e, &f, &path)?;
        endpoints.push((e, directed, ends, path));
    }
    for (e, directed, ends, path) in endpoints {
        let a = b.node_ref(&ends[0], format!("{path}.endpoints[0]"))?;
        let c = b.node_ref(&ends[1], format!("{path}.endpoints[1]"))?;
        let ep = if directed {
            Endpoints::directed(a, c)
        } else {
            Endpoints::undirected(a, c)
        };
        b.parts.eta.insert(e, ep);
    }

    if let Some(rho) = top.get("rho") {
        let Json::Object(members) = rho else {
            return wrong_type("rho", "object", rho);
        };
        let mut seen = BTreeSet::new();
        for (name, list) in members {
            let path = format!("rho.{}", json_path_key(name));
            if !seen.insert(name) {
                return schema("rho", format!("duplicate entry {name:?}"));
            }
            let n = match b.names.get(name.as_str()) {
                Some(&id) => {
                    if !id.is_node() {
                        b.misuse.insert(id, path.clone());
                    }
                    id
                }
                None => b.placeholder(ObjectKind::Node, path.clone()),
            };
            let mut set = BTreeSet::new();
            for (i, r) in array(list, &path)?.iter().enumerate() {
                set.insert(b.object_ref(r, format!("{path}[{i}]"))?);
            }
            if !n.is_node() || !b.parts.nodes.contains(&n) {
                // Keep the entry so the validator reports it.
                b.paths.entry(n).or_insert_with(|| path.clone());
            }
            b.parts.rho.insert(n, set);
        }
    }

    let parts = std::mem::take(&mut b.parts);
    let g = MetaPropertyGraph::from_parts_unchecked(parts);
    let violations = validate(&g);
    if violations.is_empty() {
        Ok(g)
    } else {
        Err(GraphIoError::Integrity(
            violations.into_iter().map(|v| b.locate(v)).collect(),
        ))
    }
}

/// Reads a graph document from a file.
pub fn load_file(path: impl AsRef<std::path::Path>) -> Result<MetaPropertyGraph, GraphIoError> {
    let text = std::fs::read_to_string(path)?;
    load(&text)
}

fn value_json(v: &Value) -> serde_json::Value {
    match v {
        Value::String(s) => json!(s),
        Value::Integer(i) => json!(i),
        Value::Decimal(d) => match Number::from_f64(d.0) {
            Some(n) => serde_json::Value::Number(n),
            None => json!({ "decimal": format!("{}", d.0) }),
        },
        Value::Boolean(b) => json!(b),
        Value::Date(d) => json!({ "date": d.format("%Y-%m-%d").to_string() }),
    }
}

/// Sort key for a ρ member: member class, owner rank, property key.
type MemberRank = (u8, (u8, usize), String);

/// Writes the canonical document for a valid graph: nodes and edges are
/// renamed `n1…`, `e1…` in id order, object keys are sorted, indentation
/// is two spaces and the text ends with a newline.
pub fn save(g: &MetaPropertyGraph) -> String {
    let parts = g.parts();
    let mut name: BTreeMap<ObjectId, String> = BTreeMap::new();
    // Canonical rank of each element, used to order ρ members.
    let mut rank: BTreeMap<ObjectId, (u8, usize)> = BTreeMap::new();
    for (i, &n) in parts.nodes.iter().enumerate() {
        name.insert(n, format!("n{}", i + 1));
        rank.insert(n, (0, i));
    }
    for (i, &e) in parts.edges.iter().enumerate() {
        name.insert(e, format!("e{}", i + 1));
        rank.insert(e, (1, i));
    }

    let element = |o: ObjectId| -> Map<String, serde_json::Value> {
        let mut m = Map::new();
        m.insert("id".into(), json!(name[&o]));
        let labels: Vec<&String> = parts
            .lambda
            .get(&o)
            .and_then(|l| parts.mu.get(l))
            .map(|ls| ls.iter().collect())
            .unwrap_or_default();
        m.insert("labels".into(), json!(labels));
        let mut props = Map::new();
        for p in parts.sigma.get(&o).into_iter().flatten() {
            if let Some((k, v)) = parts.upsilon.get(p) {
                props.insert(k.clone(), value_json(v));
            }
        }
        m.insert("properties".into(), serde_json::Value::Object(props));
        m
    };

    let nodes: Vec<serde_json::Value> = parts
        .nodes
        .iter()
        .map(|&n| serde_json::Value::Object(element(n)))
        .collect();
    let edges: Vec<serde_json::Value> = parts
        .edges
        .iter()
        .map(|&e| {
            let mut m = element(e);
            let (kind, ends) = match parts.eta[&e] {
                Endpoints::Directed { source, target } => ("directed", [source, target]),
                Endpoints::Undirected(a, b) => ("undirected", [a, b]),
            };
            m.insert("kind".into(), json!(kind));
            m.insert("endpoints".into(), json!([name[&ends[0]], name[&ends[1]]]));
            serde_json::Value::Object(m)
        })
        .collect();

    let label_owner: BTreeMap<ObjectId, ObjectId> = parts.lambda.iter().map(|(&o, &l)| (l, o)).collect();
    let prop_owner: BTreeMap<ObjectId, ObjectId> = parts
        .sigma
        .iter()
        .flat_map(|(&o, ps)| ps.iter().map(move |&p| (p, o)))
        .collect();
    let mut rho = Map::new();
    for (&n, members) in &parts.rho {
        if members.is_empty() {
            continue;
        }
        let mut refs: Vec<(MemberRank, serde_json::Value)> = members
            .iter()
            .map(|&m| match m.kind() {
                ObjectKind::Node | ObjectKind::Edge => ((0, rank[&m], String::new()), json!(name[&m])),
                ObjectKind::Property => {
                    let owner = prop_owner[&m];
                    let key = parts.upsilon[&m].0.clone();
                    (
                        (1, rank[&owner], key.clone()),
                        json!({ "owner": name[&owner], "key": key }),
                    )
                }
                ObjectKind::LabelSet => {
                    let owner = label_owner[&m];
                    ((2, rank[&owner], String::new()), json!({ "labelset_of": name[&owner] }))
                }
            })
            .collect();
        refs.sort_by(|a, b| a.0.cmp(&b.0));
        rho.insert(
            name[&n].clone(),
            json!(refs.into_iter().map(|r| r.1).collect::<Vec<_>>()),
        );
    }

    let mut doc = Map::new();
    doc.insert("format_version".into(), json!(FORMAT_VERSION));
    doc.insert("nodes".into(), json!(nodes));
    doc.insert("edges".into(), json!(edges));
    if !rho.is_empty() {
        doc.insert("rho".into(), serde_json::Value::Object(rho));
    }
    let mut out = serde_json::to_string_pretty(&serde_json::Value::Object(doc)).expect("JSON values always serialize");
    out.push('\n');
    out
}
