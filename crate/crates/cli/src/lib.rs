//! Library surface of the statcat CLI: document parsing, certificate
//! rendering and command execution, kept separate from argument parsing so
//! the test suites can drive everything in-process.

pub mod certificate;
pub mod document;
pub mod error;
pub mod run;

pub use error::CliError;
pub use run::{execute, Command, Outcome};
