//! Coordinated-market clearing engine for multi-product supply chains.
//!
//! A supply chain of independent stakeholders (suppliers, consumers, transport
//! providers, processing technologies) is cleared as a coordinated market: a
//! linear program allocates physical flows to maximize social welfare, and the
//! dual of the balance constraints yields nodal prices from which stakeholder
//! remuneration and profits follow. On top of the clearing engine the crate
//! provides a product-based stakeholder graph (components, paths, technology
//! cycles), break-even bid computation for market activation, and a bundled
//! municipal-solid-waste case study with a scenario runner.
//!
//! The numeric kernel (LP types and the simplex solver, path-yield algebra) is
//! generic over a floating-point scalar; the model layer instantiates it at
//! [`Real`].

pub mod bids;
pub mod clearing;
pub mod graph;
pub mod lp;
pub mod model;
pub mod report;
pub mod scalar;

pub mod casestudy;

#[doc(hidden)]
pub mod fixtures;

/// Default scalar used by the model layer and the case study.
pub type Real = f64;

/// Linear program over the default scalar.
pub type LinearProgram = lp::LinearProgram<Real>;
/// LP solution over the default scalar.
pub type LpSolution = lp::LpSolution<Real>;

pub use clearing::{clear, clear_forced, verify_theorems, ClearingSolution};
pub use graph::StakeholderGraph;
pub use model::{load_model, SupplyChainModel};
