//! Information-theoretic models of scout-to-forager communication.
//!
//! A goal position in a maze is an information source. The scout encodes it
//! as a code word, and the scout-forager contact lasts `a * length + b`
//! seconds. The crate covers the pieces needed to simulate that channel and to
//! re-run the statistics behind it:
//!
//! - [`maze`]: binary-tree and comb ("counting") mazes, routes, chance models.
//! - [`coding`]: unitary, period-compressed, anchor-offset and optimal prefix
//!   codes, entropy bounds and the transmission-time model.
//! - [`simulation`]: seeded scout/forager trials and multi-stage experiments.
//! - [`stats`]: binomial tails, ordering permutation tests, rank-sum tests,
//!   least-squares fits and transmission rates.
//! - [`data`]: embedded reference tables and CSV ingestion.
//! - [`cli`]: the batch commands behind the `formicode` binary.
//!
//! Runnable walkthroughs live in `examples/`; see the README for the list.

pub mod cli;
pub mod coding;
pub mod data;
mod error;
pub mod maze;
pub mod simulation;
pub mod stats;

pub use error::{Error, Result};
