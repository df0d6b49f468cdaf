//! Exact combinatorics for cluster structures of quantum affine algebras: Q-data, admissible
//! sequences, chains of i-boxes, GLS/HL quivers, Laurent-polynomial seeds and T-systems.

pub mod adm_seq;
pub mod cluster_engine;
pub mod error;
pub mod invariants_a;
pub mod iboxes;
pub mod laurent;
pub mod presets;
pub mod qdatum;
pub mod quivers;
pub mod root_data;
pub mod suites;
pub mod tsystem_seed;

pub use error::{Error, Result};
