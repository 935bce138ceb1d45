//! Behavioural equivalences derived from reduction semantics, for CCS,
//! asynchronous CCS and the communication-free fragment of mobile ambients.

pub mod congruence;
pub mod corpus;
pub mod dump;
pub mod equivalence;
pub mod error;
pub mod lts;
pub mod reduction;
pub mod suite;
pub mod terms;

pub use error::{Error, Result};
