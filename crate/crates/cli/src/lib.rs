//! Corpus ingestion, command dispatch, and report emission for the
//! covolume toolkit. The binary is a thin wrapper over [`commands::run`],
//! which is also the entry point for the integration tests.

pub mod commands;
pub mod corpus;
pub mod report;

pub use commands::{run, Outcome, EXIT_CHAIN_FAILURE, EXIT_HARD_ERROR, EXIT_OK, EXIT_VALIDATION};
