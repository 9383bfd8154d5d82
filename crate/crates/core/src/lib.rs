//! Abstract machines for a lambda calculus with multi-argument binders and
//! tuple applications.
//!
//! Three machines compute weak-head normal forms under call-by-name:
//! push/enter ([`machine::pe`]), eval/apply ([`machine::ea`]) and an
//! STG-like machine ([`machine::stg`]). [`derivation`] replays, as runnable
//! code, the program transformations that turn the first into the second,
//! and [`harness`] checks all of them against each other and against an
//! independent reducer.

pub mod derivation;
pub mod harness;
pub mod machine;
pub mod stack;
pub mod syntax;

pub use syntax::{parse, print, Ident, Term};
