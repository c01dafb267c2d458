//! Command-line front end for `unimodal-core`.

pub mod commands;
pub mod config;
pub mod table;
