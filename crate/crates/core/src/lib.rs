//! Structural controllability analysis for directed networks with driver
//! vertices.
//!
//! - [`graph`]: the network model, file format and DOT export.
//! - [`matching`]: maximum matching and the minimum number of drivers.
//! - [`lin`]: accessibility, dilations, and cactus covers.
//! - [`planner`]: edge additions that make a connected network controllable
//!   from one driver, and cycle contraction into a supervertex.
//! - [`kalman`]: randomized rank test of the controllability matrix over a
//!   prime field.
//! - [`cli`]: the command-line front end.

mod bipartite;
pub mod cli;
pub mod kalman;
pub mod planner;

pub mod graph;

pub mod lin;
pub mod matching;

pub use graph::{parse_network, to_dot, EdgeKind, GraphBuilder, QDigraph, VertexId};
pub use kalman::{generic_rank_check, ControllabilityCertificate};
pub use lin::{lin_check, LinReport};
pub use matching::{maximum_matching, minimum_drivers, DriverAssignment, Matching};
pub use planner::{apply_plan, contract_supervertex, plan_augmentation, AugmentationPlan};
