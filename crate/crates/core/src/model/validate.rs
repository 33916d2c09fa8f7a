use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::graph::MetaPropertyGraph;
use super::ids::{ObjectId, ObjectKind};

/// One broken structural constraint. Violations are data: `validate` never fails.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    /// An identifier sits in a component slot reserved for another kind.
    KindMismatch {
        id: ObjectId,
        expected: &'static str,
    },
    /// A component references an identifier that is not in N ∪ E ∪ P ∪ L.
    UnknownObject {
        id: ObjectId,
        referrer: ObjectId,
    },
    /// A node or edge has no label-set object.
    LambdaNotTotal {
        object: ObjectId,
    },
    /// Several nodes/edges share one label-set object.
    LambdaNotInjective {
        label_set: ObjectId,
        owners: Vec<ObjectId>,
    },
    /// A label-set object belongs to no node or edge.
    OrphanLabelSet {
        label_set: ObjectId,
    },
    MuNotTotal {
        label_set: ObjectId,
    },
    UpsilonNotTotal {
        property: ObjectId,
    },
    /// A property is owned by more than one node/edge.
    SharedProperty {
        property: ObjectId,
        owners: Vec<ObjectId>,
    },
    /// A property is owned by no node/edge.
    OrphanProperty {
        property: ObjectId,
    },
    /// Two properties of one owner share a key.
    DuplicateKey {
        owner: ObjectId,
        key: String,
    },
    EtaNotTotal {
        edge: ObjectId,
    },
    /// An edge endpoint is not a node of the graph.
    DanglingEndpoint {
        edge: ObjectId,
        endpoint: ObjectId,
    },
    /// n ∈ ρ*(n).
    CyclicReification {
        node: ObjectId,
    },
}

impl Violation {
    /// Stable class name, used in diagnostics and tests.
    pub fn class(&self) -> &'static str {
        match self {
            Violation::KindMismatch { .. } => "KindMismatch",
            Violation::UnknownObject { .. } => "UnknownObject",
            Violation::LambdaNotTotal { .. } => "LambdaNotTotal",
            Violation::LambdaNotInjective { .. } => "LambdaNotInjective",
            Violation::OrphanLabelSet { .. } => "OrphanLabelSet",
            Violation::MuNotTotal { .. } => "MuNotTotal",
            Violation::UpsilonNotTotal { .. } => "UpsilonNotTotal",
            Violation::SharedProperty { .. } => "SharedProperty",
            Violation::OrphanProperty { .. } => "OrphanProperty",
            Violation::DuplicateKey { .. } => "DuplicateKey",
            Violation::EtaNotTotal { .. } => "EtaNotTotal",
            Violation::DanglingEndpoint { .. } => "DanglingEndpoint",
            Violation::CyclicReification { .. } => "CyclicReification",
        }
    }

    /// The object the violation is reported against.
    pub fn subject(&self) -> ObjectId {
        match *self {
            Violation::KindMismatch { id, .. } => id,
            Violation::UnknownObject { referrer, .. } => referrer,
            Violation::LambdaNotTotal { object } => object,
            Violation::LambdaNotInjective { label_set, .. } => label_set,
            Violation::OrphanLabelSet { label_set } => label_set,
            Violation::MuNotTotal { label_set } => label_set,
            Violation::UpsilonNotTotal { property } => property,
            Violation::SharedProperty { property, .. } => property,
            Violation::OrphanProperty { property } => property,
            Violation::DuplicateKey { owner, .. } => owner,
            Violation::EtaNotTotal { edge } => edge,
            Violation::DanglingEndpoint { edge, .. } => edge,
            Violation::CyclicReification { node } => node,
        }
    }
}

fn list(ids: &[ObjectId]) -> String {
    ids.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.class())?;
        match self {
            Violation::KindMismatch { id, expected } => write!(f, "{id} used where a {expected} is required"),
            Violation::UnknownObject { id, referrer } => write!(f, "{referrer} references missing object {id}"),
            Violation::LambdaNotTotal { object } => write!(f, "{object} has no label-set object"),
            Violation::LambdaNotInjective { label_set, owners } => {
                write!(f, "{label_set} is the label set of {}", list(owners))
            }
            Violation::OrphanLabelSet { label_set } => write!(f, "{label_set} belongs to no node or edge"),
            Violation::MuNotTotal { label_set } => write!(f, "{label_set} has no label assignment"),
            Violation::UpsilonNotTotal { property } => write!(f, "{property} has no key/value"),
            Violation::SharedProperty { property, owners } => {
                write!(f, "{property} is owned by {}", list(owners))
            }
            Violation::OrphanProperty { property } => write!(f, "{property} is owned by no node or edge"),
            Violation::DuplicateKey { owner, key } => write!(f, "{owner} has two properties with key {key:?}"),
            Violation::EtaNotTotal { edge } => write!(f, "{edge} has no endpoints"),
            Violation::DanglingEndpoint { edge, endpoint } => {
                write!(f, "{edge} has endpoint {endpoint} which is not a node of the graph")
            }
            Violation::CyclicReification { node } => write!(f, "{node} is contained in its own reification closure"),
        }
    }
}

/// Checks every structural constraint of a meta-property graph and returns
/// the violations found, sorted. An empty result means the graph is valid.
pub fn validate(g: &MetaPropertyGraph) -> Vec<Violation> {
    let parts = g.parts();
    let mut out = BTreeSet::new();

    let expect = |out: &mut BTreeSet<Violation>, id: ObjectId, kind: ObjectKind, referrer: ObjectId| -> bool {
        if id.kind() != kind {
            out.insert(Violation::KindMismatch {
                id,
                expected: kind.name(),
            });
            false
        } else if !parts.contains(id) {
            out.insert(Violation::UnknownObject { id, referrer });
            false
        } else {
            true
        }
    };
    let expect_element = |out: &mut BTreeSet<Violation>, id: ObjectId, referrer: ObjectId| -> bool {
        if !id.is_element() {
            out.insert(Violation::KindMismatch {
                id,
                expected: "node or edge",
            });
            false
        } else if !parts.contains(id) {
            out.insert(Violation::UnknownObject { id, referrer });
            false
        } else {
            true
        }
    };

    // Identifier sets hold the right kinds.
    for (set, kind) in [
        (&parts.nodes, ObjectKind::Node),
        (&parts.edges, ObjectKind::Edge),
        (&parts.properties, ObjectKind::Property),
        (&parts.label_sets, ObjectKind::LabelSet),
    ] {
        for &id in set {
            if id.kind() != kind {
                out.insert(Violation::KindMismatch {
                    id,
                    expected: kind.name(),
                });
            }
        }
    }

    // λ: total on N ∪ E, bijective onto L.
    let mut owners_of_label: BTreeMap<ObjectId, Vec<ObjectId>> = BTreeMap::new();
    for (&o, &l) in &parts.lambda {
        if !expect_element(&mut out, o, l) {
            continue;
        }
        if expect(&mut out, l, ObjectKind::LabelSet, o) {
            owners_of_label.entry(l).or_default().push(o);
        }
    }
    for &o in parts.nodes.iter().chain(&parts.edges) {
        if !parts.lambda.contains_key(&o) {
            out.insert(Violation::LambdaNotTotal { object: o });
        }
    }
    for &l in &parts.label_sets {
        match owners_of_label.get(&l) {
            None => {
                out.insert(Violation::OrphanLabelSet { label_set: l });
            }
            Some(owners) if owners.len() > 1 => {
                out.insert(Violation::LambdaNotInjective {
                    label_set: l,
                    owners: owners.clone(),
                });
            }
            _ => {}
        }
        if !parts.mu.contains_key(&l) {
            out.insert(Violation::MuNotTotal { label_set: l });
        }
    }
    for &l in parts.mu.keys() {
        if l.kind() == ObjectKind::LabelSet && !parts.label_sets.contains(&l) {
            out.insert(Violation::UnknownObject { id: l, referrer: l });
        }
    }

    // υ total on P.
    for &p in &parts.properties {
        if !parts.upsilon.contains_key(&p) {
            out.insert(Violation::UpsilonNotTotal { property: p });
        }
    }

    // σ: disjoint, covering, key-compatible.
    let mut owners_of_prop: BTreeMap<ObjectId, Vec<ObjectId>> = BTreeMap::new();
    for (&o, props) in &parts.sigma {
        if !expect_element(&mut out, o, o) {
            continue;
        }
        let mut keys: BTreeMap<&str, usize> = BTreeMap::new();
        for &p in props {
            if !expect(&mut out, p, ObjectKind::Property, o) {
                continue;
            }
            owners_of_prop.entry(p).or_default().push(o);
            if let Some((k, _)) = parts.upsilon.get(&p) {
                *keys.entry(k.as_str()).or_default() += 1;
            }
        }
        for (k, count) in keys {
            if count > 1 {
                out.insert(Violation::DuplicateKey {
                    owner: o,
                    key: k.to_owned(),
                });
            }
        }
    }
    for &p in &parts.properties {
        match owners_of_prop.get(&p) {
            None => {
                out.insert(Violation::OrphanProperty { property: p });
            }
            Some(owners) if owners.len() > 1 => {
                out.insert(Violation::SharedProperty {
                    property: p,
                    owners: owners.clone(),
                });
            }
            _ => {}
        }
    }

    // η total on E with node endpoints.
    for (&e, ep) in &parts.eta {
        if !expect(&mut out, e, ObjectKind::Edge, e) {
            continue;
        }
        for n in ep.nodes() {
            if n.kind() != ObjectKind::Node {
                out.insert(Violation::KindMismatch {
                    id: n,
                    expected: ObjectKind::Node.name(),
                });
            } else if !parts.nodes.contains(&n) {
                out.insert(Violation::DanglingEndpoint { edge: e, endpoint: n });
            }
        }
    }
    for &e in &parts.edges {
        if !parts.eta.contains_key(&e) {
            out.insert(Violation::EtaNotTotal { edge: e });
        }
    }

    // ρ: defined on nodes, members exist, well-founded.
    for (&n, members) in &parts.rho {
        if !expect(&mut out, n, ObjectKind::Node, n) {
            continue;
        }
        for &m in members {
            if !parts.contains(m) {
                out.insert(Violation::UnknownObject { id: m, referrer: n });
            }
        }
        if g.rho_closure(n).contains(&n) {
            out.insert(Violation::CyclicReification { node: n });
        }
    }

    out.into_iter().collect()
}
