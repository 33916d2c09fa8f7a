//! The meta-property graph data model.
//!
//! Labels and properties are objects in their own right: every node and
//! edge owns exactly one label-set object and a key-compatible set of
//! property objects, and any node may reify a set of other objects (ρ).

mod error;
mod graph;
mod ids;
mod validate;
mod value;
mod view;

pub use error::GraphError;
pub use graph::{Endpoints, GraphParts, MetaPropertyGraph};
pub use ids::{ObjectId, ObjectKind};
pub use validate::{validate, Violation};
pub use value::{parse_date, Value};
pub use view::{substructure, GraphView, Substructure, ViewEndpoints};

/// Typed empty property list, for `add_node(labels, NO_PROPS)`.
pub const NO_PROPS: [(&str, Value); 0] = [];
/// Typed empty label list.
pub const NO_LABELS: [&str; 0] = [];
