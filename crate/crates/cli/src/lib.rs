//! Command-line front end: the set-expression language, verdict documents,
//! the command surface with its `check` validator and the oracle harness.

pub mod cert;
pub mod check;
pub mod commands;
pub mod doc;
pub mod oracle;
pub mod parse;

pub use commands::{run, Outcome};
