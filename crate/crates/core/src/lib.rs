//! Viewpoint quality evaluation for 3D node-link graph layouts.
//!
//! A layout is projected through a pinhole camera from viewpoints on a
//! sphere, the projection is scored with 21 readability measures, and the
//! scores are normalized per graph so they can be compared with viewpoints
//! chosen by people.

pub mod analysis;
pub mod error;
pub mod fitting;
pub mod iso;
pub mod measures;
pub mod model;
pub mod overlap;
pub mod pipeline;
pub mod projection;

pub use error::{Error, Result};
pub use fitting::{combined_score, fit_logistic, select_subset, solve_max_separation, FitMethod, FitReport, LabeledSample, WeightVector};
pub use measures::{MeasureId, RawMeasure, MEASURE_COUNT, REGISTRY_VERSION};
pub use model::{Graph, GraphBundle, Layout3D, Pose, StudyDataset, Vec3};
pub use pipeline::{evaluate_raw, normalize, sample_landscape, sample_ranges, EvalSettings, RangeTable, RawVector, ScoreVector};
pub use projection::{fibonacci_viewpoints, Camera, CameraConfig, ProjectedDrawing};
