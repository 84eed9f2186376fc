//! IO companion to the `metabelian` crate: JSON/CSV renderings of analysis
//! results, the matrix JSON input format, and the seeded parallel Monte
//! Carlo experiment harness behind the `metabelian` CLI.

pub mod experiment;
pub mod formats;
