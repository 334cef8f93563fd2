//! File formats, synthetic data, pipeline orchestration and the `polarnet`
//! command line on top of [`polarnet_core`].

pub mod config;
pub mod error;
pub mod formats;
pub mod output;
pub mod pipeline;
pub mod synth;

pub use config::PipelineConfig;
pub use error::{Error, Result};
pub use pipeline::{run_report, Manifest};
