//! Library surface of the `fdsic` binary: run-configuration parsing and
//! CSV serialization, shared between the executable and its integration
//! tests.

pub mod config;
pub mod csv;
