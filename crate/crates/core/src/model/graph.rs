use std::collections::{BTreeMap, BTreeSet};

use super::error::GraphError;
use super::ids::{ObjectId, ObjectKind};
use super::value::Value;

/// Endpoint assignment of an edge (η).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Endpoints {
    Directed {
        source: ObjectId,
        target: ObjectId,
    },
    /// Unordered pair; stored with the smaller id first. A self-loop repeats the node.
    Undirected(ObjectId, ObjectId),
}

impl Endpoints {
    pub fn directed(source: ObjectId, target: ObjectId) -> Self {
        Endpoints::Directed { source, target }
    }

    pub fn undirected(a: ObjectId, b: ObjectId) -> Self {
        if a <= b {
            Endpoints::Undirected(a, b)
        } else {
            Endpoints::Undirected(b, a)
        }
    }

    pub fn is_directed(&self) -> bool {
        matches!(self, Endpoints::Directed { .. })
    }

    pub fn nodes(&self) -> [ObjectId; 2] {
        match *self {
            Endpoints::Directed { source, target } => [source, target],
            Endpoints::Undirected(a, b) => [a, b],
        }
    }
}

/// The ten components `(N, E, P, L, λ, μ, σ, υ, η, ρ)` spelled out as plain maps.
///
/// A `GraphParts` value is not necessarily a valid graph; it is the raw form
/// that [`validate`](crate::model::validate) inspects and that loaders build
/// before checking.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphParts {
    pub nodes: BTreeSet<ObjectId>,
    pub edges: BTreeSet<ObjectId>,
    pub properties: BTreeSet<ObjectId>,
    pub label_sets: BTreeSet<ObjectId>,
    /// λ: node/edge → label-set object.
    pub lambda: BTreeMap<ObjectId, ObjectId>,
    /// μ: label-set object → labels.
    pub mu: BTreeMap<ObjectId, BTreeSet<String>>,
    /// υ: property → (key, value).
    pub upsilon: BTreeMap<ObjectId, (String, Value)>,
    /// σ: node/edge → owned properties.
    pub sigma: BTreeMap<ObjectId, BTreeSet<ObjectId>>,
    /// η: edge → endpoints.
    pub eta: BTreeMap<ObjectId, Endpoints>,
    /// ρ: node → reified objects. Absent entries mean ∅.
    pub rho: BTreeMap<ObjectId, BTreeSet<ObjectId>>,
}

impl GraphParts {
    pub fn contains(&self, id: ObjectId) -> bool {
        match id.kind() {
            ObjectKind::Node => self.nodes.contains(&id),
            ObjectKind::Edge => self.edges.contains(&id),
            ObjectKind::Property => self.properties.contains(&id),
            ObjectKind::LabelSet => self.label_sets.contains(&id),
        }
    }

    pub fn object_count(&self) -> usize {
        self.nodes.len() + self.edges.len() + self.properties.len() + self.label_sets.len()
    }
}

/// An in-memory meta-property graph.
///
/// Built through the mutation API, the graph maintains every structural
/// constraint: λ is a bijection (one fresh label-set object per node or edge),
/// property ownership partitions P, property sets are key-compatible and ρ is
/// well-founded. Graphs built with [`from_parts_unchecked`](Self::from_parts_unchecked)
/// carry no such guarantee until validated.
#[derive(Clone, Debug, Default)]
pub struct MetaPropertyGraph {
    parts: GraphParts,
    label_owner: BTreeMap<ObjectId, ObjectId>,
    property_owner: BTreeMap<ObjectId, ObjectId>,
    next_serial: [u32; 4],
}

impl PartialEq for MetaPropertyGraph {
    fn eq(&self, other: &Self) -> bool {
        self.parts == other.parts
    }
}

impl Eq for MetaPropertyGraph {}

fn kind_index(kind: ObjectKind) -> usize {
    match kind {
        ObjectKind::Node => 0,
        ObjectKind::Edge => 1,
        ObjectKind::Property => 2,
        ObjectKind::LabelSet => 3,
    }
}

fn check_distinct_keys<K: AsRef<str>>(owner: Option<ObjectId>, keys: &[K]) -> Result<(), GraphError> {
    let mut seen = BTreeSet::new();
    for k in keys {
        if !seen.insert(k.as_ref()) {
            return Err(GraphError::DuplicateKey {
                owner,
                key: k.as_ref().to_owned(),
            });
        }
    }
    Ok(())
}

impl MetaPropertyGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Wraps raw components without checking them. Owner indexes are built
    /// from σ and λ; when an object is claimed by several owners the smallest
    /// owner wins. Use [`validate`](crate::model::validate) to inspect the result.
    pub fn from_parts_unchecked(parts: GraphParts) -> Self {
        let mut label_owner = BTreeMap::new();
        for (&o, &l) in &parts.lambda {
            label_owner.entry(l).or_insert(o);
        }
        let mut property_owner = BTreeMap::new();
        for (&o, ps) in &parts.sigma {
            for &p in ps {
                property_owner.entry(p).or_insert(o);
            }
        }
        let mut next_serial = [1u32; 4];
        let mut bump = |id: ObjectId| {
            let slot = &mut next_serial[kind_index(id.kind())];
            *slot = (*slot).max(id.serial() + 1);
        };
        for set in [&parts.nodes, &parts.edges, &parts.properties, &parts.label_sets] {
            set.iter().copied().for_each(&mut bump);
        }
        for (&o, &l) in &parts.lambda {
            bump(o);
            bump(l);
        }
        MetaPropertyGraph {
            parts,
            label_owner,
            property_owner,
            next_serial,
        }
    }

    /// Wraps raw components, rejecting them unless they form a valid graph.
    pub fn from_parts(parts: GraphParts) -> Result<Self, Vec<super::Violation>> {
        let g = Self::from_parts_unchecked(parts);
        let violations = super::validate(&g);
        if violations.is_empty() {
            Ok(g)
        } else {
            Err(violations)
        }
    }

    pub fn parts(&self) -> &GraphParts {
        &self.parts
    }

    pub fn into_parts(self) -> GraphParts {
        self.parts
    }

    fn fresh(&mut self, kind: ObjectKind) -> ObjectId {
        let slot = &mut self.next_serial[kind_index(kind)];
        if *slot == 0 {
            *slot = 1;
        }
        let id = ObjectId::new(kind, *slot);
        *slot += 1;
        id
    }

    fn attach_labels_and_props(&mut self, owner: ObjectId, labels: BTreeSet<String>, props: Vec<(String, Value)>) {
        let l = self.fresh(ObjectKind::LabelSet);
        self.parts.label_sets.insert(l);
        self.parts.mu.insert(l, labels);
        self.parts.lambda.insert(owner, l);
        self.label_owner.insert(l, owner);
        let mut owned = BTreeSet::new();
        for (k, v) in props {
            let p = self.fresh(ObjectKind::Property);
            self.parts.properties.insert(p);
            self.parts.upsilon.insert(p, (k, v));
            self.property_owner.insert(p, owner);
            owned.insert(p);
        }
        self.parts.sigma.insert(owner, owned);
    }

    /// Adds a node with a fresh label-set object and freshly owned properties.
    pub fn add_node<L, K>(
        &mut self,
        labels: impl IntoIterator<Item = L>,
        props: impl IntoIterator<Item = (K, Value)>,
    ) -> Result<ObjectId, GraphError>
    where
        L: Into<String>,
        K: Into<String>,
    {
        let labels: BTreeSet<String> = labels.into_iter().map(Into::into).collect();
        let props: Vec<(String, Value)> = props.into_iter().map(|(k, v)| (k.into(), v)).collect();
        let keys: Vec<&str> = props.iter().map(|(k, _)| k.as_str()).collect();
        check_distinct_keys(None, &keys)?;
        let n = self.fresh(ObjectKind::Node);
        self.parts.nodes.insert(n);
        self.attach_labels_and_props(n, labels, props);
        Ok(n)
    }

    /// Adds a directed or undirected edge between existing nodes.
    pub fn add_edge<L, K>(
        &mut self,
        endpoints: Endpoints,
        labels: impl IntoIterator<Item = L>,
        props: impl IntoIterator<Item = (K, Value)>,
    ) -> Result<ObjectId, GraphError>
    where
        L: Into<String>,
        K: Into<String>,
    {
        for n in endpoints.nodes() {
            if !self.parts.nodes.contains(&n) {
                return Err(GraphError::UnknownEndpoint(n));
            }
        }
        let endpoints = match endpoints {
            Endpoints::Undirected(a, b) => Endpoints::undirected(a, b),
            d => d,
        };
        let labels: BTreeSet<String> = labels.into_iter().map(Into::into).collect();
        let props: Vec<(String, Value)> = props.into_iter().map(|(k, v)| (k.into(), v)).collect();
        let keys: Vec<&str> = props.iter().map(|(k, _)| k.as_str()).collect();
        check_distinct_keys(None, &keys)?;
        let e = self.fresh(ObjectKind::Edge);
        self.parts.edges.insert(e);
        self.parts.eta.insert(e, endpoints);
        self.attach_labels_and_props(e, labels, props);
        Ok(e)
    }

    /// Adds one property to an existing node or edge.
    pub fn add_property(
        &mut self,
        owner: ObjectId,
        key: impl Into<String>,
        value: Value,
    ) -> Result<ObjectId, GraphError> {
        self.expect_element(owner)?;
        let key = key.into();
        if self.property_by_key(owner, &key).is_some() {
            return Err(GraphError::DuplicateKey {
                owner: Some(owner),
                key,
            });
        }
        let p = self.fresh(ObjectKind::Property);
        self.parts.properties.insert(p);
        self.parts.upsilon.insert(p, (key, value));
        self.parts.sigma.entry(owner).or_default().insert(p);
        self.property_owner.insert(p, owner);
        Ok(p)
    }

    /// Renames a property key; the owner's property set must stay key-compatible.
    pub fn set_property_key(&mut self, p: ObjectId, key: impl Into<String>) -> Result<(), GraphError> {
        self.expect_kind(p, ObjectKind::Property)?;
        let key = key.into();
        let owner = self.property_owner[&p];
        if let Some(other) = self.property_by_key(owner, &key) {
            if other != p {
                return Err(GraphError::DuplicateKey {
                    owner: Some(owner),
                    key,
                });
            }
        }
        self.parts.upsilon.get_mut(&p).expect("property has a key").0 = key;
        Ok(())
    }

    pub fn set_property_value(&mut self, p: ObjectId, value: Value) -> Result<(), GraphError> {
        self.expect_kind(p, ObjectKind::Property)?;
        self.parts.upsilon.get_mut(&p).expect("property has a value").1 = value;
        Ok(())
    }

    /// Replaces the label set of a node or edge (the label-set object keeps its id).
    pub fn set_labels<L: Into<String>>(
        &mut self,
        owner: ObjectId,
        labels: impl IntoIterator<Item = L>,
    ) -> Result<(), GraphError> {
        let l = self.label_id_of(owner)?;
        self.parts.mu.insert(l, labels.into_iter().map(Into::into).collect());
        Ok(())
    }

    /// Replaces ρ(n). Rejects the update if it would make `n` reachable from itself.
    pub fn set_rho(&mut self, n: ObjectId, members: impl IntoIterator<Item = ObjectId>) -> Result<(), GraphError> {
        self.expect_kind(n, ObjectKind::Node)?;
        let members: BTreeSet<ObjectId> = members.into_iter().collect();
        for &m in &members {
            if !self.parts.contains(m) {
                return Err(GraphError::UnknownObject(m));
            }
        }
        // The graph was well-founded before the update, so any new cycle passes through n.
        if self.reaches(&members, n) {
            return Err(GraphError::CyclicReification(n));
        }
        if members.is_empty() {
            self.parts.rho.remove(&n);
        } else {
            self.parts.rho.insert(n, members);
        }
        Ok(())
    }

    fn reaches(&self, start: &BTreeSet<ObjectId>, target: ObjectId) -> bool {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<ObjectId> = start.iter().copied().filter(|o| o.is_node()).collect();
        while let Some(m) = stack.pop() {
            if m == target {
                return true;
            }
            if !seen.insert(m) {
                continue;
            }
            if let Some(next) = self.parts.rho.get(&m) {
                stack.extend(next.iter().copied().filter(|o| o.is_node()));
            }
        }
        false
    }

    /// ρ*(n): the closure of ρ(n) through contained nodes. Terminates on cyclic raw graphs.
    pub fn rho_closure(&self, n: ObjectId) -> BTreeSet<ObjectId> {
        let mut closure: BTreeSet<ObjectId> = self.rho_of_unchecked(n).clone();
        let mut frontier: Vec<ObjectId> = closure.iter().copied().filter(|o| o.is_node()).collect();
        let mut expanded = BTreeSet::new();
        while let Some(m) = frontier.pop() {
            if !expanded.insert(m) {
                continue;
            }
            for &o in self.rho_of_unchecked(m) {
                if closure.insert(o) && o.is_node() {
                    frontier.push(o);
                }
            }
        }
        closure
    }

    fn referenced_by(&self, id: ObjectId) -> Option<ObjectId> {
        self.parts
            .rho
            .iter()
            .find(|(_, members)| members.contains(&id))
            .map(|(&n, _)| n)
    }

    fn ensure_unreferenced(&self, id: ObjectId) -> Result<(), GraphError> {
        match self.referenced_by(id) {
            Some(by) => Err(GraphError::ReferencedObject { id, by }),
            None => Ok(()),
        }
    }

    pub fn remove_property(&mut self, p: ObjectId) -> Result<(), GraphError> {
        self.expect_kind(p, ObjectKind::Property)?;
        self.ensure_unreferenced(p)?;
        let owner = self.property_owner.remove(&p).expect("owned property");
        if let Some(s) = self.parts.sigma.get_mut(&owner) {
            s.remove(&p);
        }
        self.parts.upsilon.remove(&p);
        self.parts.properties.remove(&p);
        Ok(())
    }

    fn remove_element(&mut self, o: ObjectId) -> Result<(), GraphError> {
        self.ensure_unreferenced(o)?;
        let l = self.parts.lambda[&o];
        self.ensure_unreferenced(l)?;
        let props = self.parts.sigma.get(&o).cloned().unwrap_or_default();
        for &p in &props {
            self.ensure_unreferenced(p)?;
        }
        for p in props {
            self.property_owner.remove(&p);
            self.parts.upsilon.remove(&p);
            self.parts.properties.remove(&p);
        }
        self.parts.sigma.remove(&o);
        self.parts.lambda.remove(&o);
        self.parts.mu.remove(&l);
        self.parts.label_sets.remove(&l);
        self.label_owner.remove(&l);
        Ok(())
    }

    /// Removes an edge together with its label set and properties. Objects
    /// referenced from some ρ(n) cannot be removed.
    pub fn remove_edge(&mut self, e: ObjectId) -> Result<(), GraphError> {
        self.expect_kind(e, ObjectKind::Edge)?;
        self.remove_element(e)?;
        self.parts.eta.remove(&e);
        self.parts.edges.remove(&e);
        Ok(())
    }

    /// Removes a node with no incident edges, together with its label set,
    /// properties and its own ρ entry.
    pub fn remove_node(&mut self, n: ObjectId) -> Result<(), GraphError> {
        self.expect_kind(n, ObjectKind::Node)?;
        if self.parts.eta.values().any(|ep| ep.nodes().contains(&n)) {
            return Err(GraphError::IncidentEdges(n));
        }
        self.remove_element(n)?;
        self.parts.rho.remove(&n);
        self.parts.nodes.remove(&n);
        Ok(())
    }

    // ---- read side ----

    pub fn contains(&self, id: ObjectId) -> bool {
        self.parts.contains(id)
    }

    pub fn object_count(&self) -> usize {
        self.parts.object_count()
    }

    fn expect_kind(&self, id: ObjectId, kind: ObjectKind) -> Result<(), GraphError> {
        if id.kind() != kind {
            return Err(GraphError::KindMismatch {
                id,
                expected: kind.name(),
            });
        }
        if !self.contains(id) {
            return Err(GraphError::UnknownObject(id));
        }
        Ok(())
    }

    fn expect_element(&self, id: ObjectId) -> Result<(), GraphError> {
        if !id.is_element() {
            return Err(GraphError::KindMismatch {
                id,
                expected: "node or edge",
            });
        }
        if !self.contains(id) {
            return Err(GraphError::UnknownObject(id));
        }
        Ok(())
    }

    pub fn nodes(&self) -> impl Iterator<Item = ObjectId> + '_ {
        self.parts.nodes.iter().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = ObjectId> + '_ {
        self.parts.edges.iter().copied()
    }

    pub fn properties(&self) -> impl Iterator<Item = ObjectId> + '_ {
        self.parts.properties.iter().copied()
    }

    pub fn label_sets(&self) -> impl Iterator<Item = ObjectId> + '_ {
        self.parts.label_sets.iter().copied()
    }

    /// λ(o).
    pub fn label_id_of(&self, o: ObjectId) -> Result<ObjectId, GraphError> {
        self.expect_element(o)?;
        self.parts.lambda.get(&o).copied().ok_or(GraphError::UnknownObject(o))
    }

    /// μ(λ(o)).
    pub fn labels_of(&self, o: ObjectId) -> Result<&BTreeSet<String>, GraphError> {
        let l = self.label_id_of(o)?;
        self.label_set(l)
    }

    /// μ(l).
    pub fn label_set(&self, l: ObjectId) -> Result<&BTreeSet<String>, GraphError> {
        self.expect_kind(l, ObjectKind::LabelSet)?;
        self.parts.mu.get(&l).ok_or(GraphError::UnknownObject(l))
    }

    /// σ(o).
    pub fn props_of(&self, o: ObjectId) -> Result<&BTreeSet<ObjectId>, GraphError> {
        static EMPTY: BTreeSet<ObjectId> = BTreeSet::new();
        self.expect_element(o)?;
        Ok(self.parts.sigma.get(&o).unwrap_or(&EMPTY))
    }

    pub fn key_of(&self, p: ObjectId) -> Result<&str, GraphError> {
        self.expect_kind(p, ObjectKind::Property)?;
        Ok(self.parts.upsilon[&p].0.as_str())
    }

    pub fn val_of(&self, p: ObjectId) -> Result<&Value, GraphError> {
        self.expect_kind(p, ObjectKind::Property)?;
        Ok(&self.parts.upsilon[&p].1)
    }

    pub fn endpoints(&self, e: ObjectId) -> Result<Endpoints, GraphError> {
        self.expect_kind(e, ObjectKind::Edge)?;
        self.parts.eta.get(&e).copied().ok_or(GraphError::UnknownObject(e))
    }

    /// ρ(n).
    pub fn rho_of(&self, n: ObjectId) -> Result<&BTreeSet<ObjectId>, GraphError> {
        self.expect_kind(n, ObjectKind::Node)?;
        Ok(self.rho_of_unchecked(n))
    }

    pub(crate) fn rho_of_unchecked(&self, n: ObjectId) -> &BTreeSet<ObjectId> {
        static EMPTY: BTreeSet<ObjectId> = BTreeSet::new();
        self.parts.rho.get(&n).unwrap_or(&EMPTY)
    }

    /// The node or edge owning a property or a label-set object.
    pub fn owner_of(&self, id: ObjectId) -> Option<ObjectId> {
        match id.kind() {
            ObjectKind::Property => self.property_owner.get(&id).copied(),
            ObjectKind::LabelSet => self.label_owner.get(&id).copied(),
            _ => None,
        }
    }

    /// The property of `owner` with key `key`, if any.
    pub fn property_by_key(&self, owner: ObjectId, key: &str) -> Option<ObjectId> {
        self.parts
            .sigma
            .get(&owner)?
            .iter()
            .copied()
            .find(|p| self.parts.upsilon.get(p).is_some_and(|(k, _)| k == key))
    }
}
