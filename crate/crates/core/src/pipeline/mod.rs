//! Classification and fusion pipelines.

pub mod classify;
pub mod dataset;
pub mod fusion;

pub use classify::{
    accuracy_sweep, cbba_from_sample, cbba_under_class, class_stats, select_optimal, select_optimal_mass, split,
    train, Aggregation, AttrStats, ClassStats, ClassifierConfig, FocalMode, Model, SweepConfig, SweepRow,
};
pub use dataset::{ingest_csv, two_gaussians, Dataset};
pub use fusion::{fuse_until_decision, DecisionTrace, FusionConfig, Outcome, TraceStep, Verdict};
