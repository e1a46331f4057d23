//! Constructions with a single kind of crossing and the crossing counters.
//!
//! * [`construct_a00`]: edge-edge crossings only, from a convex placement.
//! * [`construct_0b0`]: edge-region crossings only, from a spanning tree 𝒯
//!   whose restriction to every cluster is connected.
//! * [`count_crossings_geometric`]: exact counts on a straight-line drawing.
//! * [`recount`]: re-derives the totals of a serialized plan.

mod beta;
mod convex;
mod geometry;
mod plan;
mod svg;
mod tree;

use thiserror::Error;

pub use beta::{construct_0b0, construct_0b0_on, BetaPlan, DualRoute};
pub use convex::{cluster_order, construct_a00};
pub use geometry::{count_crossings_geometric, Crossing, CrossingReport, GeometricDrawing, Point};
pub use plan::{recount, Totals};
pub use svg::{er_svg, rr_svg, to_svg};
pub use tree::{cluster_spanning_tree, ClusterSpanningTree, TreeEdge, TreeMode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DrawError {
    #[error("clustered graph is not c-connected")]
    NotCConnected,
    #[error("graph is not planar")]
    NonPlanar,
    #[error("drawing stays degenerate after {attempts} attempts")]
    DegeneratePosition { attempts: usize },
    #[error("malformed plan: {0}")]
    MalformedPlan(String),
}
