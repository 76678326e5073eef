//! Topology statistics for directed graphs, plus a nonparametric pipeline for
//! comparing many datasets statistic-by-statistic.
//!
//! The library has two halves:
//!
//! * **Per-dataset statistics.** Starting from a raw edge list, [`graph`]
//!   builds a preprocessed CSR graph (self-loops removed, duplicate edges
//!   collapsed, isolated nodes dropped). On top of that, [`bowtie`] computes
//!   the weakly-connected-component field decomposition (in-field / core /
//!   out-field), [`degree`] computes degree distributions, power-law tail
//!   fits and degree-mixing coefficients, [`clustering`] computes three
//!   clustering-coefficient variants and their mixing, and [`distance`]
//!   estimates hop plots and effective diameters with Flajolet-Martin
//!   neighbourhood sketches. [`profile`] bundles everything into a single
//!   serializable [`profile::StatProfile`].
//!
//! * **Cross-dataset comparison.** [`compare`] takes a datasets x statistics
//!   matrix, computes externally studentized residuals, screens statistic
//!   pairs for rank correlation (Spearman + Fisher z), runs the Friedman
//!   test over dataset ranks, and derives Nemenyi critical-difference groups.
//!   [`report`] renders the outcome as JSON, CSV and an SVG
//!   critical-difference diagram.
//!
//! All estimators are deterministic for a fixed seed: random number streams
//! are seeded explicitly and every floating-point reduction runs in a fixed
//! order, so builds with and without the `parallel` feature (rayon) produce
//! byte-identical output.

pub mod bowtie;
pub mod clustering;
pub mod compare;
pub mod degree;
pub mod distance;
pub mod error;
mod exec;
pub mod graph;
pub mod profile;
pub mod report;

pub use error::{Error, Result};
