//! Multi-Frey modular method machinery for the equations x^r + y^r = d·z^p, r ∈ {5, 13}.
//!
//! The crate is organised bottom-up: exact number-field arithmetic, local data at
//! prime ideals, elliptic-curve invariants and point counts, the five Frey
//! families, newform data ingestion, and the elimination sieve. The `cli`
//! module drives the theorem pipelines and renders proof traces.

pub mod arith;
pub mod numfield;
pub mod localfield;
pub mod ellcurve;
pub mod freycurves;
pub mod newformdb;
pub mod sieve;
pub mod cli;
