//! IO, file formats, generators, statistical suites, and the command-line
//! interface over the solver core.

pub mod cli;
pub mod formats;
pub mod gen;
pub mod json;
pub mod parexec;
pub mod suites;

pub use lllmt_core as core;
