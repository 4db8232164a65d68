//! Wall-normal derivatives and skin friction from cell-centered data on
//! irregular, anisotropic triangular grids.
//!
//! The pipeline is: [`gridgen`] builds a boundary-layer mesh, [`fields`]
//! samples an analytic flow at cell centroids, [`gradient`] reconstructs
//! least-squares gradients, [`wallnormal`] turns them into wall-normal
//! derivatives by one of eight methods, and [`report`] converts those into
//! skin-friction curves and smoothness metrics. [`experiment`] wires the
//! stages together from a config file.

pub mod error;
pub mod experiment;
pub mod fields;
pub mod gradient;
pub mod gridgen;
pub mod mesh;
pub mod report;
pub mod wallnormal;

pub use error::{Error, Result};
pub use experiment::{ConfigError, ExperimentConfig, ExperimentResult};
pub use fields::{AnalyticField, BlasiusTable, CellField, FlowParams, NoSlip, Poly2, WallBc};
pub use gradient::{CellGradientField, CellGradientMethod, LsqOptions, NodalGradientField};
pub use gridgen::{DiagonalMode, GridSpec, FAR_TAG, WALL_TAG};
pub use mesh::{BFace, MeshId, Point, TriMesh, Vec2};
pub use report::{FrictionMode, NoiseReport, SkinFrictionCurve};
pub use wallnormal::{Method, StepKind, StepRule, WallSample};
