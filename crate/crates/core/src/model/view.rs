//! Read-only views over a graph: the whole graph, or the substructure
//! induced by a node's reification set.
//!
//! A view is characterised by the set of objects it includes. Every
//! function of the graph is restricted to that set: a label set, an edge
//! endpoint or a property outside the set is simply undefined in the view.

use std::collections::BTreeSet;

use super::error::GraphError;
use super::graph::{Endpoints, MetaPropertyGraph};
use super::ids::ObjectId;
use super::value::Value;

/// Endpoints of an edge as seen through a view. An endpoint outside the
/// view is `None`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViewEndpoints {
    Directed {
        source: Option<ObjectId>,
        target: Option<ObjectId>,
    },
    /// The two positions of the stored unordered pair, each filtered by membership.
    Undirected(Option<ObjectId>, Option<ObjectId>),
}

impl ViewEndpoints {
    /// For undirected edges, the set `η_u(e) ∩ view`.
    pub fn undirected_set(&self) -> Option<BTreeSet<ObjectId>> {
        match *self {
            ViewEndpoints::Undirected(a, b) => Some(a.into_iter().chain(b).collect()),
            ViewEndpoints::Directed { .. } => None,
        }
    }
}

/// Uniform read access to a graph or one of its substructures.
pub trait GraphView {
    fn graph(&self) -> &MetaPropertyGraph;

    /// Whether `id` belongs to this view's object set.
    fn includes(&self, id: ObjectId) -> bool;

    fn nodes(&self) -> Vec<ObjectId> {
        self.graph().nodes().filter(|&o| self.includes(o)).collect()
    }

    fn edges(&self) -> Vec<ObjectId> {
        self.graph().edges().filter(|&o| self.includes(o)).collect()
    }

    fn properties(&self) -> Vec<ObjectId> {
        self.graph().properties().filter(|&o| self.includes(o)).collect()
    }

    fn label_sets(&self) -> Vec<ObjectId> {
        self.graph().label_sets().filter(|&o| self.includes(o)).collect()
    }

    /// λ restricted to the view: defined when both the object and its
    /// label-set object are included.
    fn lambda(&self, o: ObjectId) -> Option<ObjectId> {
        if !o.is_element() || !self.includes(o) {
            return None;
        }
        let l = *self.graph().parts().lambda.get(&o)?;
        self.includes(l).then_some(l)
    }

    /// μ restricted to the view's label-set objects.
    fn mu(&self, l: ObjectId) -> Option<&BTreeSet<String>> {
        if !self.includes(l) {
            return None;
        }
        self.graph().parts().mu.get(&l)
    }

    /// μ(λ(o)) in the view.
    fn labels(&self, o: ObjectId) -> Option<&BTreeSet<String>> {
        self.mu(self.lambda(o)?)
    }

    /// σ(o) ∩ view, empty for objects outside the view.
    fn sigma(&self, o: ObjectId) -> Vec<ObjectId> {
        if !o.is_element() || !self.includes(o) {
            return Vec::new();
        }
        match self.graph().parts().sigma.get(&o) {
            Some(ps) => ps.iter().copied().filter(|&p| self.includes(p)).collect(),
            None => Vec::new(),
        }
    }

    /// υ restricted to the view's properties.
    fn upsilon(&self, p: ObjectId) -> Option<(&str, &Value)> {
        if !self.includes(p) {
            return None;
        }
        self.graph().parts().upsilon.get(&p).map(|(k, v)| (k.as_str(), v))
    }

    fn eta(&self, e: ObjectId) -> Option<ViewEndpoints> {
        if !self.includes(e) {
            return None;
        }
        let keep = |n: ObjectId| self.includes(n).then_some(n);
        Some(match *self.graph().parts().eta.get(&e)? {
            Endpoints::Directed { source, target } => ViewEndpoints::Directed {
                source: keep(source),
                target: keep(target),
            },
            Endpoints::Undirected(a, b) => ViewEndpoints::Undirected(keep(a), keep(b)),
        })
    }

    /// ρ restricted to the view.
    fn rho(&self, n: ObjectId) -> BTreeSet<ObjectId> {
        if !n.is_node() || !self.includes(n) {
            return BTreeSet::new();
        }
        self.graph()
            .rho_of_unchecked(n)
            .iter()
            .copied()
            .filter(|&o| self.includes(o))
            .collect()
    }

    /// The substructure induced by node `n` of this view (its object set is
    /// this view's ρ(n)). `None` if `n` is not a node of the view.
    fn substructure(&self, n: ObjectId) -> Option<Substructure<'_>> {
        if !n.is_node() || !self.includes(n) {
            return None;
        }
        Some(Substructure {
            graph: self.graph(),
            node: n,
            included: self.rho(n),
        })
    }
}

impl GraphView for MetaPropertyGraph {
    fn graph(&self) -> &MetaPropertyGraph {
        self
    }

    fn includes(&self, id: ObjectId) -> bool {
        self.contains(id)
    }
}

/// The substructure `G_n` induced by a node `n`: every component of the
/// parent restricted to the objects of ρ(n).
///
/// Edges whose endpoints fall outside ρ(n) stay in the view with those
/// endpoints undefined. Views borrow the graph, so they cannot outlive a
/// mutation.
#[derive(Clone, Debug)]
pub struct Substructure<'g> {
    graph: &'g MetaPropertyGraph,
    node: ObjectId,
    included: BTreeSet<ObjectId>,
}

impl<'g> Substructure<'g> {
    /// The node whose reification set induces this view.
    pub fn node(&self) -> ObjectId {
        self.node
    }

    /// The included object set, equal to ρ(n) (intersected with the parent
    /// view for nested substructures).
    pub fn included(&self) -> &BTreeSet<ObjectId> {
        &self.included
    }

    pub fn is_empty(&self) -> bool {
        self.included.is_empty()
    }
}

impl GraphView for Substructure<'_> {
    fn graph(&self) -> &MetaPropertyGraph {
        self.graph
    }

    fn includes(&self, id: ObjectId) -> bool {
        self.included.contains(&id)
    }
}

/// `G_n` for a node of the full graph.
pub fn substructure(g: &MetaPropertyGraph, n: ObjectId) -> Result<Substructure<'_>, GraphError> {
    if !n.is_node() {
        return Err(GraphError::KindMismatch {
            id: n,
            expected: "node",
        });
    }
    g.substructure(n).ok_or(GraphError::UnknownObject(n))
}
