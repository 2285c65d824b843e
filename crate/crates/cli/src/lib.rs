//! Library side of the `cpslab` command-line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod csvio;
pub mod presets;
pub mod query;
pub mod sweep;
