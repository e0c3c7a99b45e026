//! Exact computations on log smooth surface pairs `(S, D)`.
//!
//! The crate works entirely in exact rational arithmetic over Picard lattices
//! of rational surface models: intersection numbers and adjunction
//! ([`lattice`]), weighted dual graphs and their rods, twigs and forks
//! ([`dualgraph`]), barks and almost minimal models ([`peeling`]),
//! Zariski decompositions relative to a finite set of curves ([`zariski`]),
//! logarithmic Chern invariants ([`invariants`]), adjoint pencils
//! ([`pencil`]) and the parameter search over blown-up Hirzebruch surfaces
//! ([`search`]). Worked configurations live in [`catalog`], and
//! [`selftest`] runs the acceptance checks.

pub mod error;
pub mod rational;
pub mod matrix;
pub mod lattice;
pub mod dualgraph;
pub mod peeling;
pub mod zariski;
pub mod invariants;
pub mod pencil;
pub mod search;
pub mod catalog;
pub mod selftest;

pub use dualgraph::{DualGraph, Edge, SegmentReport, Vertex};
pub use error::{Error, Result};
pub use invariants::LogInvariants;
pub use lattice::{DivisorClass, HodgeData, SurfaceModel};
pub use matrix::{is_negative_definite, QMatrix};
pub use pencil::{ExtractionPolicy, PencilReport};
pub use peeling::BarkResult;
pub use rational::Q;
pub use search::{Example4Instance, SearchSpec};
pub use zariski::ZariskiDecomposition;
