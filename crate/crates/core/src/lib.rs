//! Quasihyperbolic geometry of planar domains.
//!
//! Domains are described by boundary primitives ([`geometry::Domain`]).
//! Distances are computed on Whitney-adaptive graphs
//! ([`discretize::NavGraph`]) and used to measure Gromov hyperbolicity,
//! the Gehring–Hayman inequality, ball separation and LLC-2.

pub mod conditions;
pub mod discretize;
pub mod error;
pub mod gallery;
pub mod geometry;
pub mod hyperbolicity;
pub mod metrics;
pub mod output;

pub use error::{Error, Result};
pub use geometry::{Domain, Path, Point2, Primitive, Rect};
