//! Solvers, verifiers, and instance generators for minimum-cost
//! nowhere-zero k-flows and k-cut-balanced orientations on
//! 2-edge-connected multigraphs.
//!
//! The main entry points are:
//!
//! * [`approx::wnzf_bicriteria`] — (6,6)-approximation for the weighted
//!   nowhere-zero k-flow problem,
//! * [`approx::wcbo_bicriteria`] — (k,6)-approximation for the weighted
//!   k-cut-balanced orientation problem,
//! * [`approx::swnzf_local_search`] — 3-approximation for symmetric costs,
//! * [`nz6::nz6_flow`] — constructive nowhere-zero 6-flow,
//! * [`verify`] — independent checkers for every solution concept,
//! * [`gadgets`] — SAT / NAE3SAT hardness-instance generators.

pub mod approx;
pub mod circulation;
pub mod corpus;
pub mod flow;
pub mod gadgets;
pub mod graph;
pub mod io;
pub mod lp;
pub mod nz6;
pub mod rational;
pub mod verify;

pub use flow::Flow;
pub use graph::{
    ArcRef, CostFunction, Direction, Graph, Orientation, PartialOrientation, VertexSet,
};
pub use rational::Rational;
