//! Secondary frequency control of multi-area power systems with a dynamic
//! virtual power plant of deloaded wind turbines taking part in AGC.
//!
//! The modules build on each other: [`blocks`] integrates the transfer
//! functions, [`generators`], [`dvpp`] and [`gde`] model the units and the
//! rest of the grid, [`agc`] and [`network`] close the secondary loop across
//! areas, and [`config`], [`scenario`], [`sim`], [`summary`] and [`output`]
//! run and report experiments.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod agc;
pub mod blocks;
pub mod config;
pub mod dvpp;
pub mod error;
pub mod gde;
pub mod generators;
pub mod network;
pub mod output;
pub mod scenario;
pub mod sim;
pub mod summary;

pub use config::SimConfig;
pub use error::{Error, Result};
pub use sim::{run, SimOutput};
