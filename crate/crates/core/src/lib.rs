//! Upper bounds on the number of `t`-cliques in graphs and uniform hypergraphs
//! whose degree sequence has bounded `ℓᵖ`-norm.
//!
//! The crate is organised bottom-up:
//!
//! - [`realmath`]: real-argument binomials, the objective functions whose
//!   maximisers govern the supercritical regime, and bisection solvers.
//! - [`graph`] / [`hypergraph`]: bitset graphs, `r`-uniform hypergraphs,
//!   degree norms, exact clique counting, extremal constructions, and
//!   exhaustive enumeration of small instances.
//! - [`bounds`]: the closed-form clique bounds with regime dispatch.
//! - [`entropy`]: exact entropy chains of uniformly ordered set families and
//!   the inequality diagnostics evaluated on concrete instances.
//! - [`harness`]: exhaustive and randomised verification of every bound.
//! - [`io`]: text formats for graphs and hypergraphs.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod entropy;
pub mod error;
pub mod graph;
pub mod harness;
pub mod hypergraph;
pub mod io;
pub mod realmath;

pub use bounds::{BoundResult, Regime};
pub use error::{Error, Result};
pub use graph::{DegreeSequence, Graph};
pub use hypergraph::Hypergraph;
