//! Exact Newton-polytope machinery for monotone ReLU networks and input
//! convex neural networks.
//!
//! Convex, positively homogeneous piecewise-linear functions are support
//! functions of polytopes. This crate computes both sides of that dictionary
//! exactly: ReLU networks and the polytope circuits that build their Newton
//! polytopes, planar synthesis and decomposition, and the triangular-lattice
//! coloring game used to bound ICNN depth.
//!
//! All computation is over an exact ordered field. The core is generic over
//! [`Scalar`]; [`Rat`] (arbitrary precision rationals) is the default.

pub mod cpwl;
pub mod geometry;
pub mod lattice;
pub mod lp;
pub mod network;
pub mod sampling;
pub mod scalar;
pub mod synthesis;
pub mod vector;

pub use cpwl::{set_leq, AffineMax, CpwlFn};
pub use geometry::{convex_hull, EdgeOrientation, FaceLattice, GeometryError, OrientedEdgeSet, Polytope};
pub use network::{eval_circuit, net_to_circuit, circuit_to_net, PolytopeCircuit, ReluNetwork, NetKind};
pub use scalar::Scalar;
pub use vector::Vector;

/// Arbitrary precision rational, the default scalar.
pub type Rat = num_rational::BigRational;

/// Exact rational coordinate vector.
pub type RatVec = Vector<Rat>;
