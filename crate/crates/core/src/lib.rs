//! Social welfare functions satisfying independence of irrelevant
//! alternatives: checking, canonical decomposition, enumeration, exhaustive
//! search and exact counting.

pub mod acceptance;
pub mod axioms;
pub mod cli;
pub mod construct;
pub mod count;
pub mod decompose;
pub mod error;
pub mod oracle;
pub mod swf;
pub mod weak_orders;

pub use error::{Error, Result};
