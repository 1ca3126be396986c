//! Straight-line drawings of planar graphs in which a smooth convex curve
//! crosses every face.
//!
//! The library provides:
//! - embedded planar graphs with rotation systems ([`plane_graph`]),
//!   augmentation to maximal planar ([`augment`]) and canonical orderings
//!   ([`canonical`]);
//! - a catalog of smooth convex curve models ([`curve`]);
//! - the incremental drawing construction ([`drawer`]) that keeps every
//!   intermediate disk adequate with respect to the curve;
//! - an independent geometric verifier ([`verifier`]);
//! - built-in and random graph generators plus falsification experiments
//!   ([`gallery`], [`experiment`]);
//! - SVG rendering and JSON certificates ([`render`], [`certificate`]),
//!   wired together by the `facestab` CLI ([`cli`]).

pub mod augment;
pub mod canonical;
pub mod certificate;
pub mod cli;
pub mod curve;
pub mod drawer;
pub mod experiment;
pub mod gallery;
pub mod geom;
pub mod plane_graph;
pub mod render;
pub mod verifier;

pub use augment::{augment_to_maximal, AugmentationRecord};
pub use canonical::{canonical_ordering, CanonicalOrdering, OrderingStep, StepKind, TieBreak};
pub use curve::{ArcInterval, ConvexCurveModel, CurveSpec, HullSide};
// drawer/verifier re-exports restored as modules land
pub use geom::Point;
pub use plane_graph::{parse_plane_graph, GraphError, PlaneGraph};

