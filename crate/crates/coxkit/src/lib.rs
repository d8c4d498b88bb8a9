//! Command line front end and file formats for `coxkit-core`.

pub mod cli;
pub mod format;
