//! Command line and HTTP front ends for `boxcluster`.

pub mod api;
pub mod cli;
pub mod session;
