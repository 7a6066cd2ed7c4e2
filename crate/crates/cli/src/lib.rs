//! Command-line front end for `povmkit`.

pub mod args;
pub mod batch;
pub mod commands;
pub mod document;
pub mod error;
pub mod report;
