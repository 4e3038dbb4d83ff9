//! Continuous version: finite measures built from balls and grid cells,
//! the map `u ↦ f(u)` from the sphere to halfspace masses, and a solver
//! for hyperplanes whose both sides are balanced.

mod model;
mod solver;
mod target;

use thiserror::Error;

pub use model::{eval_f, ColorMeasure, Halfspace, MeasureModel, SphereParam};
pub use solver::{
    solve_hamburger, solve_hamburger_with, verify_measure_cut, verify_measure_cut_with, MeasureCutReport,
    MeasureSolution, SolverOptions, DEFAULT_VERIFY_SAMPLES,
};
pub use target::{in_truncated_target, target_spec, Scalar, TargetSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("invalid measure model: {0}")]
    InvalidModel(String),
    #[error("grid measures are supported up to dimension 3, not {0}")]
    UnsupportedGridDimension(usize),
    #[error("expected {expected} colors, found {found}")]
    WrongColorCount { expected: usize, found: usize },
    #[error("masses sum to {0}, not 1")]
    NotNormalized(String),
    #[error("color {color} has mass {mass}, more than 1/d of the total")]
    Unbalanced { color: usize, mass: String },
    #[error("sphere parameter must be a nonzero finite vector of the model's dimension plus one")]
    InvalidSphereParam,
    #[error("no start converged; best residual {best_residual:e} over {starts} starts")]
    ConvergenceFailure { best_residual: f64, starts: usize },
}
