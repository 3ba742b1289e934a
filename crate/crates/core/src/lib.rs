//! Reliability polynomials of two-terminal gadgets.
//!
//! The crate evaluates the all-terminal reliability `R(G;p)` and the split
//! reliability `S(G;p)` exactly over the Gaussian rationals, composes gadgets
//! in series and parallel, studies the Möbius maps that their edge
//! interactions induce, samples zero and activity loci, and simulates the
//! reduction that recovers exact reliabilities from coarse approximations.
//!
//! Module map:
//!
//! - [`numeric`]: Gaussian rationals, big floats and balls, polynomials,
//!   root finding, rational reconstruction.
//! - [`graph`]: multigraphs, two-terminal graphs, the series-parallel
//!   expression language and gadget substitution.
//! - [`reliability`]: brute force, deletion-contraction, series-parallel
//!   recursion, symbolic and multivariate evaluation.
//! - [`interactions`]: effective and virtual interactions, Möbius maps,
//!   fixed points, the pentagon template.
//! - [`constructor`]: building gadgets with a prescribed effective interaction.
//! - [`reduction`]: approximate oracles, box shrinking, ratios, telescoping.
//! - [`locus`]: activity scans, zero atlases, root-of-unity certificates.
//! - [`cli`]: the `rel` command line front end.

pub mod cli;
pub mod constructor;
pub mod graph;
pub mod interactions;
pub mod locus;
pub mod numeric;
pub mod reduction;
pub mod reliability;


pub use graph::{Multigraph, SPExpr, TwoTerminal};
pub use numeric::{GaussianRational, RatPoly};
pub use reliability::RelPair;

