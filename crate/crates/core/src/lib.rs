//! Particle filtering with compact path storage.
//!
//! A bootstrap particle filter produces a genealogy that coalesces quickly
//! under resampling. This crate stores that genealogy in a slot buffer that
//! keeps only the nodes with surviving descendants
//! ([`tree::AncestryStore`]), drives it from a generic filter ([`smc`]) over
//! a few reference models ([`models`]), and provides the combinatorial and
//! Monte Carlo tools used to check how large the tree gets
//! ([`theory`]). [`experiments`] turns all of this into reproducible CSV
//! tables.

pub mod experiments;
pub mod models;
pub mod primitives;
pub mod rng;
pub mod smc;
pub mod theory;
pub mod tree;

pub use models::StateSpaceModel;
pub use smc::{run_filter, ParticleSystem, ResamplingScheme};
pub use tree::{AncestryStore, TreeStats};
