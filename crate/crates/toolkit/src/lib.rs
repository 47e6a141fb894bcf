//! File formats, experiment configuration and the command-line driver for
//! [`anisofilter_core`].

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod plot;

pub use anisofilter_core as core;
pub use commands::{run, Command, Figure, Report};
pub use config::ExperimentConfig;
pub use error::{Result, ToolError};
