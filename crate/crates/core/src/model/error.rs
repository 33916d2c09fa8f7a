use thiserror::Error;

use super::ids::ObjectId;

/// Errors raised by graph mutations and typed accessors.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("DuplicateKey: key {key:?} appears twice{}", owner.map(|o| format!(" on {o}")).unwrap_or_default())]
    DuplicateKey { owner: Option<ObjectId>, key: String },
    #[error("UnknownEndpoint: {0} is not a node of this graph")]
    UnknownEndpoint(ObjectId),
    #[error("UnknownObject: {0} does not exist")]
    UnknownObject(ObjectId),
    #[error("KindMismatch: {id} is not a {expected}")]
    KindMismatch { id: ObjectId, expected: &'static str },
    #[error("CyclicReification: {0} would reify itself")]
    CyclicReification(ObjectId),
    #[error("ReferencedObject: {id} is reified by {by}")]
    ReferencedObject { id: ObjectId, by: ObjectId },
    #[error("IncidentEdges: node {0} still has incident edges")]
    IncidentEdges(ObjectId),
}
