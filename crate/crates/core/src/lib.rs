//! Hamburger cuts: balanced hyperplane cuts of `d+1` colored point sets in
//! `R^d`, recursive rainbow partitions built from them, and the continuous
//! analogue for finite measures.
//!
//! Combinatorial predicates run in exact rational arithmetic. The measure
//! solver is numeric and reports residuals instead of certificates.

pub mod balance;
pub mod cuts;
pub mod geometry;
pub mod instances;
pub mod measures;
pub mod oracle;
pub mod partition;

pub use balance::{halfspace_tally, is_balanced, CountVector, HalfspaceTally};
pub use cuts::{
    enumerate_candidates, hamburger_cut, realize_strict_separator, valid_cut_bipartitions, verify_cut, Bipartition,
    Candidate, CutError, CutResult, SideAssignment, SpanningCertificate,
};
pub use geometry::{
    format_rational, hyperplane_through, orientation, parse_rational, side_of, validate_general_position,
    ColoredInstance, ColoredPoint, GeneralPositionReport, GeometryError, PointD, Rational, RationalHyperplane, Sign,
};
pub use measures::{
    eval_f, in_truncated_target, solve_hamburger, solve_hamburger_with, target_spec, verify_measure_cut,
    ColorMeasure, Halfspace, MeasureCutReport, MeasureError, MeasureModel, MeasureSolution, SolverOptions,
    SphereParam, TargetSpec,
};
pub use partition::{
    merge_color_classes_2d, noncrossing_matching, rainbow_partition, verify_partition, ColoredMatching, CutTree,
    MatchingEdge, MergedClasses, PartitionError, PartitionFailure, PartitionReport, PartitionResult,
    RainbowSimplex,
};
