//! Vertex-minors of graph states.
//!
//! The crate decides whether one graph state can be turned into another by
//! local Clifford operations, Pauli measurements and classical communication,
//! which at the graph level is the vertex-minor relation. Alongside the
//! decision procedure it provides:
//!
//! - the local-complementation calculus on labeled graphs ([`graph`]),
//! - cut-rank and exact rank-width ([`gf2`], [`rankwidth`]),
//! - LC orbits and the three-way branching search ([`vertex_minor`]),
//! - one-round measurement plans with Z corrections ([`extraction`]),
//! - monadic second-order formulas with a brute-force evaluator, Eulerian
//!   vectors and switchings ([`mslogic`]),
//! - a dense statevector oracle used to check every graph rule ([`sim`]).

pub mod error;
pub mod extraction;
pub mod gf2;
pub mod graph;
pub mod mslogic;
pub mod rankwidth;
pub mod sim;
pub mod vertex_minor;

pub use error::{Error, Result};
pub use graph::{Graph, GraphDigest, LcSequence, Vertex, MAX_VERTICES};
