//! Meta-property graphs: the data model, the MetaGPML pattern language
//! and its evaluator, and a JSON document format. The guide in `book/`
//! walks through each part; its examples run as doctests of this crate.

pub mod eval;
pub mod io;
pub mod model;
pub mod syntax;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
pub mod book_introduction {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/model.md")]
pub mod book_model {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/substructures.md")]
pub mod book_substructures {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/patterns.md")]
pub mod book_patterns {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/conditions.md")]
pub mod book_conditions {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/queries.md")]
pub mod book_queries {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/documents.md")]
pub mod book_documents {}
