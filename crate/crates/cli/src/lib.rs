//! Front end for the tail-space workbench: file formats, seeded instance
//! generation, property suites and their reports.

pub mod eval;
pub mod gen;
pub mod io;
pub mod report;
pub mod suites;

pub use io::{parse_entity, parse_str, Entity, ParseError};
pub use report::{CheckReport, Verdict, Witness};
pub use suites::{run_suite, run_suite_with, Config, Deciders, SUITES};
