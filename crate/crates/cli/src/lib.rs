//! Library half of the `hamburger` command-line tool: file formats,
//! subcommand implementations and the SVG renderer.

pub mod commands;
pub mod files;
pub mod render;

use thiserror::Error;

/// Errors that map to a specific exit status.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Failure {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    Verification(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Input(_) => 2,
            Failure::NotFound(_) => 3,
        }
    }
}

/// Exit status for an error chain; anything unclassified counts as bad input.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    err.chain().find_map(|e| e.downcast_ref::<Failure>()).map_or(2, Failure::exit_code)
}
