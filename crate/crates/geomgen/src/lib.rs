//! File formats, resources and command-line plumbing around `geomgen-core`.

pub mod cli;
pub mod dataset;
pub mod eval;
pub mod fsio;
pub mod problem;
pub mod resources;
pub mod table_io;
