//! Diversity-based parent selection for the simple evolutionary
//! multi-objective optimisers SEMO, GSEMO and the L-dominant modified GSEMO,
//! on the bi-objective benchmarks OneMinMax and LOTZ.
//!
//! The crate is layered bottom-up:
//!
//! - [`fitness`]: bitstrings, benchmark objectives, dominance.
//! - [`archive`]: the mutually non-dominated population.
//! - [`diversity`]: hypervolume and crowding distance contributions.
//! - [`selection`]: uniform, rank-based, tournament, HDC and NMUAR parent selection.
//! - [`engine`]: mutation operators and the generation loop.
//! - [`harness`]: seeded batches, aggregation, scaling fits, CSV/markdown output.

pub mod archive;
pub mod diversity;
pub mod engine;
mod error;
pub mod fitness;
pub mod harness;
pub mod rng;
pub mod selection;

pub use archive::{Archive, Individual, InsertOutcome};
pub use diversity::{DiversityMetric, DiversityScore, RefPolicy, ReferencePoint};
pub use engine::{AlgorithmKind, InitPolicy, Outcome, RunConfig, RunResult, Snapshot};
pub use error::{Error, Result};
pub use fitness::{BitString, DominanceRelation, ObjectiveVector, Problem, ProblemKind};
pub use rng::RngStream;
pub use selection::SelectionScheme;
