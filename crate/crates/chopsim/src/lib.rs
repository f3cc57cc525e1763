//! chopsim — a deterministic 2D simulator of an autonomous cutting-board
//! pipeline: simulated perception with label-guided mask fusion, a library of
//! stochastic action primitives (cut / disturb / push), a sequencing loop
//! that composes them toward per-class piece-count goals, and a seeded
//! experiment harness that reproduces component- and task-level success
//! statistics.
//!
//! Everything is a pure function of its inputs plus an explicit RNG stream,
//! so any run is reproducible from its seed.

pub mod config;
pub mod geometry;
pub mod harness;
pub mod perception;
pub mod planner;
pub mod primitives;
pub mod rng;
pub mod scene;

pub use geometry::{Chord, GeometryError, Line, OrientedRect, Point2, Polygon, RasterMask, Rect};
