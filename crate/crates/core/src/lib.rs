pub mod assembly;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod lsq;
pub mod numfmt;
pub mod oracle;
pub mod position;
pub mod report;
pub mod search;
pub mod segmentation;

pub use assembly::{assemble, classify_knots, intersect_in_gap, Candidate, KnotKind};
pub use dataset::{load_csv, load_csv_auto, medical_to_dataset, save_csv, DataSet, MedicalSeries};
pub use error::{Error, Result};
pub use lsq::{
    divided_differences, fit_breakpoints, fit_fixed_knots, residual_norm, BrokenLine, Line,
    SegmentFit,
};
pub use oracle::{
    anchored_family_residual, grid_oracle, grid_oracle_with_budget, nonuniqueness_family_residual,
    GridSpec,
};
pub use position::{
    count_regular, count_superset, decode, encode, enumerate_regular, is_regular,
    theorem12_features_abcd, KnotPlacement, KnotPosition, PositionVector, RegularVectors,
};
pub use report::{plot_csv, FitReport, KnotReport, PieceReport, StatsReport};
pub use search::{
    evaluate_vector, prioritize_order, run_search, FitResult, Prioritizer, SearchOptions,
    SearchStats,
};
pub use segmentation::{segmentize, Segment, Segmentation};
