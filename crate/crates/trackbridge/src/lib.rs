//! Configuration, file formats and reports around `trackbridge-core`.

pub mod benchmark;
pub mod config;
mod error;
pub mod oracle;
pub mod output;
pub mod profile_file;
pub mod verify;

pub use error::{Error, Result};
