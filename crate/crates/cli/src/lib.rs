//! Library surface of the CLI harness: file formats, report schema, and the
//! command implementations, kept separate from the binary so tests can call
//! them directly.

pub mod commands;
pub mod formats;
pub mod report;
