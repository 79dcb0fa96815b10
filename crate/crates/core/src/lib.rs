//! Synthetic time-series benchmark toolkit.

pub mod describe;
pub mod error;
pub mod eval;
pub mod formats;
pub mod numeric;
pub mod run;
pub mod sample;
pub mod seed;
pub mod series;
pub mod solvers;
pub mod store;
pub mod synth;
pub mod tasks;
pub mod taxonomy;

pub use error::{Error, Result};
pub use eval::{EvalReport, TaskResult};
pub use formats::WireFormat;
pub use sample::AnnotatedSample;
pub use series::{Frequency, Quadrant, TimeSeries};
pub use solvers::{Solver, SolverConfig, SolverKind};
pub use store::Manifest;
pub use tasks::{GroundTruth, PromptStyle, TaskInstance, TaskKind};
pub use taxonomy::{DatasetKind, Feature, FeatureLabel, Split, SubFeature};
