//! The `hopt` checker: a small DSL for declaring finite models and running
//! law suites against them, with deterministic JSON and text reports.

pub mod cli;
pub mod dsl;
pub mod output;
pub mod program;
pub mod suites;
