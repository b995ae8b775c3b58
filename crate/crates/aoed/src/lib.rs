//! Problem generation, model files and result files for `aoed-core`.
//!
//! The `aoed` binary in this crate is the command-line front end.

mod error;
mod files;

pub mod model_io;
pub mod problems;
pub mod report;

pub use error::{Error, Result};
pub use model_io::{load_model, save_model, Manifest, FORMAT_VERSION};
pub use problems::{
    calibrate_noise, generate, reference_problem, Family, GridParams, Noise, ProblemSpec,
    REFERENCE_SEED,
};
