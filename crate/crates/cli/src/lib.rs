//! Command-line companion to `flatpencil-core`: file formats, the staged
//! pipeline, report rendering, and the subcommand drivers.
//!
//! The core crate works on in-memory values only; everything that touches
//! the filesystem, the environment, or a serialization format lives here.

pub mod commands;
pub mod format;
pub mod pipeline;
pub mod report;
pub mod spec;
