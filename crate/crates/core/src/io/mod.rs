//! The `.mpg.json` document format and the example graph.
//!
//! A document lists nodes and edges with their labels and properties, plus
//! an optional `rho` map from node ids to reified objects. Nodes and edges
//! are referenced by id, label sets as `{"labelset_of": owner}` and
//! properties as `{"owner": owner, "key": key}`. Values are JSON strings,
//! numbers and booleans, or `{"date": "YYYY-MM-DD"}`.

mod document;
mod fixture;
mod json;

pub use document::{load, load_file, save, GraphIoError, LocatedViolation, FORMAT_VERSION};
pub use fixture::example_graph;
