//! ReLU networks as DAGs of affine and ReLU gates, and the polytope circuits
//! that build their Newton polytopes.
//!
//! Node ids: inputs are `0..input_dim`, gate `i` is node `input_dim + i`.

mod circuit;
mod wire;

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use circuit::{
    circuit_to_net, eval_circuit, net_to_circuit, CircuitGate, CircuitKind, CircuitViolation, GateTrace,
    PolytopeCircuit,
};

use crate::cpwl::AffineMax;
use crate::sampling;
use crate::scalar::Scalar;
use crate::vector::Vector;
use crate::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetKind {
    General,
    Monotone,
    Icnn,
}

impl fmt::Display for NetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NetKind::General => "general",
            NetKind::Monotone => "monotone",
            NetKind::Icnn => "icnn",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate<S: Scalar = Rat> {
    Affine { incoming: Vec<(usize, S)>, bias: S },
    Relu { source: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReluNetwork<S: Scalar = Rat> {
    pub input_dim: usize,
    pub kind: NetKind,
    pub gates: Vec<Gate<S>>,
    pub output: usize,
}

/// A rule broken by a network, located at a node id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Violation {
    /// A gate reads a node that is not earlier in topological order.
    NotTopological { node: usize, source: usize },
    /// Negative weight where the network kind forbids it.
    NegativeWeight { node: usize, source: usize, weight: String },
    /// The output id does not name a gate.
    BadOutput { output: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotTopological { node, source } => write!(f, "node {node} reads node {source}, which is not earlier"),
            Violation::NegativeWeight { node, source, weight } => {
                write!(f, "node {node} has weight {weight} on node {source}")
            }
            Violation::BadOutput { output } => write!(f, "output {output} is not a gate"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("invalid network: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("invalid circuit: {}", join(.0))]
    InvalidCircuit(Vec<CircuitViolation>),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("gate at node {node} has a non-zero bias; strip biases first")]
    NonZeroBias { node: usize },
    #[error("node {node} gives a negative weight to gate {from}")]
    NegativeInnerWeight { node: usize, from: usize },
    #[error("network is not homogeneous: stripping biases changes the value at {at}")]
    NotHomogeneous { at: String },
    #[error("operation needs a {needed} network, got {got}")]
    WrongKind { needed: NetKind, got: NetKind },
    #[error("{0}")]
    Geometry(#[from] crate::geometry::GeometryError),
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

impl<S: Scalar> ReluNetwork<S> {
    pub fn node_count(&self) -> usize {
        self.input_dim + self.gates.len()
    }

    pub fn is_input(&self, node: usize) -> bool {
        node < self.input_dim
    }

    pub fn gate(&self, node: usize) -> Option<&Gate<S>> {
        node.checked_sub(self.input_dim).and_then(|i| self.gates.get(i))
    }

    /// Every rule broken: topological order, the weight discipline of
    /// `kind`, and a valid output.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, g) in self.gates.iter().enumerate() {
            let node = self.input_dim + i;
            match g {
                Gate::Affine { incoming, .. } => {
                    for (src, w) in incoming {
                        if *src >= node {
                            out.push(Violation::NotTopological { node, source: *src });
                        }
                        let restricted = match self.kind {
                            NetKind::General => false,
                            NetKind::Monotone => true,
                            NetKind::Icnn => !self.is_input(*src),
                        };
                        if restricted && w.is_negative() {
                            out.push(Violation::NegativeWeight { node, source: *src, weight: w.to_string() });
                        }
                    }
                }
                Gate::Relu { source } => {
                    if *source >= node {
                        out.push(Violation::NotTopological { node, source: *source });
                    }
                }
            }
        }
        if self.output < self.input_dim || self.output >= self.node_count() {
            out.push(Violation::BadOutput { output: self.output });
        }
        out
    }

    fn ensure_valid(&self) -> Result<(), NetworkError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(NetworkError::Invalid(v))
        }
    }

    /// Values of every node at `x`.
    pub fn eval_all(&self, x: &Vector<S>) -> Result<Vec<S>, NetworkError> {
        if x.dim() != self.input_dim {
            return Err(NetworkError::DimensionMismatch { expected: self.input_dim, found: x.dim() });
        }
        let mut vals: Vec<S> = x.coords().to_vec();
        vals.reserve(self.gates.len());
        for (i, g) in self.gates.iter().enumerate() {
            let node = self.input_dim + i;
            let v = match g {
                Gate::Affine { incoming, bias } => {
                    let mut acc = bias.clone();
                    for (src, w) in incoming {
                        if *src >= node {
                            return Err(NetworkError::Invalid(vec![Violation::NotTopological { node, source: *src }]));
                        }
                        acc = acc + w.clone() * vals[*src].clone();
                    }
                    acc
                }
                Gate::Relu { source } => {
                    if *source >= node {
                        return Err(NetworkError::Invalid(vec![Violation::NotTopological { node, source: *source }]));
                    }
                    vals[*source].clone().max(S::zero())
                }
            };
            vals.push(v);
        }
        Ok(vals)
    }

    pub fn eval(&self, x: &Vector<S>) -> Result<S, NetworkError> {
        if self.output >= self.node_count() {
            return Err(NetworkError::Invalid(vec![Violation::BadOutput { output: self.output }]));
        }
        let mut vals = self.eval_all(x)?;
        Ok(vals.swap_remove(self.output))
    }

    /// Largest number of ReLU gates on a path into the output.
    pub fn depth(&self) -> usize {
        let mut d = vec![0usize; self.node_count()];
        for (i, g) in self.gates.iter().enumerate() {
            let node = self.input_dim + i;
            d[node] = match g {
                Gate::Affine { incoming, .. } => incoming.iter().map(|(s, _)| d[*s]).max().unwrap_or(0),
                Gate::Relu { source } => d[*source] + 1,
            };
        }
        d.get(self.output).copied().unwrap_or(0)
    }

    pub fn has_biases(&self) -> bool {
        self.gates.iter().any(|g| matches!(g, Gate::Affine { bias, .. } if !bias.is_zero()))
    }

    /// Same network with every bias set to zero. The result must agree with
    /// the input on `samples` random points, which holds exactly when the
    /// function is homogeneous (up to sampling).
    pub fn strip_bias<R: Rng + ?Sized>(&self, rng: &mut R, samples: usize) -> Result<Self, NetworkError> {
        self.ensure_valid()?;
        let mut out = self.clone();
        for g in &mut out.gates {
            if let Gate::Affine { bias, .. } = g {
                *bias = S::zero();
            }
        }
        let mut probes = vec![Vector::zeros(self.input_dim)];
        probes.extend((0..samples).map(|_| sampling::vector(rng, self.input_dim, -6, 6, 8)));
        for x in probes {
            if self.eval(&x)? != out.eval(&x)? {
                return Err(NetworkError::NotHomogeneous { at: x.to_string() });
            }
        }
        Ok(out)
    }

    /// A threshold `r >= 1` such that on `[r, ∞)^n` every ReLU gate is either
    /// active or constantly zero, so the network is affine there.
    ///
    /// Pre-activations of a monotone network are monotone, so their minimum
    /// over `[t, ∞)^n` is at the corner `(t, .., t)`. Along that diagonal each
    /// node is tracked as `slope * t + intercept`, valid past a running
    /// threshold.
    pub fn affine_horizon(&self) -> Result<S, NetworkError> {
        if self.kind != NetKind::Monotone {
            return Err(NetworkError::WrongKind { needed: NetKind::Monotone, got: self.kind });
        }
        self.ensure_valid()?;
        // (threshold, slope, intercept)
        let mut diag: Vec<(S, S, S)> = (0..self.input_dim).map(|_| (S::zero(), S::one(), S::zero())).collect();
        for g in &self.gates {
            let next = match g {
                Gate::Affine { incoming, bias } => {
                    let mut tau = S::zero();
                    let mut slope = S::zero();
                    let mut icpt = bias.clone();
                    for (src, w) in incoming {
                        let (t, s, c) = &diag[*src];
                        tau = tau.max(t.clone());
                        slope = slope + w.clone() * s.clone();
                        icpt = icpt + w.clone() * c.clone();
                    }
                    (tau, slope, icpt)
                }
                Gate::Relu { source } => {
                    let (t, s, c) = diag[*source].clone();
                    if s.is_positive() {
                        let root = -c.clone() / s.clone();
                        (t.max(root), s, c)
                    } else if c.is_negative() {
                        // Constant and negative on the whole orthant corner.
                        (t, S::zero(), S::zero())
                    } else {
                        (t, s, c)
                    }
                }
            };
            diag.push(next);
        }
        Ok(diag[self.output].0.clone().max(S::one()))
    }

    /// The function as a maximum of affine pieces. Biases are moved onto an
    /// extra input fixed at 1, which leaves inner weights untouched, so any
    /// network whose gate-to-gate weights are non-negative qualifies.
    pub fn to_affine_max(&self) -> Result<AffineMax<S>, NetworkError> {
        self.ensure_valid()?;
        let n = self.input_dim;
        let shift = |id: usize| if id < n { id } else { id + 1 };
        let gates = self
            .gates
            .iter()
            .map(|g| match g {
                Gate::Affine { incoming, bias } => {
                    let mut inc: Vec<(usize, S)> = incoming.iter().map(|(s, w)| (shift(*s), w.clone())).collect();
                    if !bias.is_zero() {
                        inc.push((n, bias.clone()));
                    }
                    Gate::Affine { incoming: inc, bias: S::zero() }
                }
                Gate::Relu { source } => Gate::Relu { source: shift(*source) },
            })
            .collect();
        let homog = ReluNetwork { input_dim: n + 1, kind: NetKind::Icnn, gates, output: shift(self.output) };
        let poly = eval_circuit(&net_to_circuit(&homog)?)?.output().clone();
        let pieces = poly
            .vertices()
            .iter()
            .map(|v| crate::cpwl::AffinePiece { grad: Vector::new(v.coords()[..n].to_vec()), bias: v[n].clone() })
            .collect();
        Ok(AffineMax::new(n, pieces).expect("a polytope has vertices"))
    }
}

pub fn eval_net<S: Scalar>(net: &ReluNetwork<S>, x: &Vector<S>) -> Result<S, NetworkError> {
    net.eval(x)
}

/// Incremental construction of a [`ReluNetwork`].
#[derive(Debug, Clone)]
pub struct NetBuilder<S: Scalar = Rat> {
    input_dim: usize,
    kind: NetKind,
    gates: Vec<Gate<S>>,
}

impl<S: Scalar> NetBuilder<S> {
    pub fn new(input_dim: usize, kind: NetKind) -> Self {
        NetBuilder { input_dim, kind, gates: Vec::new() }
    }

    pub fn input(&self, i: usize) -> usize {
        assert!(i < self.input_dim);
        i
    }

    pub fn affine(&mut self, incoming: Vec<(usize, S)>, bias: S) -> usize {
        self.gates.push(Gate::Affine { incoming, bias });
        self.input_dim + self.gates.len() - 1
    }

    /// `<w, x>` over the inputs, skipping zero weights.
    pub fn linear(&mut self, w: &Vector<S>) -> usize {
        let inc = w.coords().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect();
        self.affine(inc, S::zero())
    }

    pub fn relu(&mut self, source: usize) -> usize {
        self.gates.push(Gate::Relu { source });
        self.input_dim + self.gates.len() - 1
    }

    pub fn finish(self, output: usize) -> ReluNetwork<S> {
        ReluNetwork { input_dim: self.input_dim, kind: self.kind, gates: self.gates, output }
    }
}

/// `max(x_1, .., x_4)` as `max(max(x1, x2), max(x3, x4))` with
/// `max(a, b) = b + relu(a - b)`; depth 2, negative inner weights.
pub fn max4_general<S: Scalar>() -> ReluNetwork<S> {
    let one = S::one;
    let mut b = NetBuilder::new(4, NetKind::General);
    let pair = |b: &mut NetBuilder<S>, i: usize, j: usize| {
        let d = b.affine(vec![(i, one()), (j, -one())], S::zero());
        let r = b.relu(d);
        b.affine(vec![(j, one()), (r, one())], S::zero())
    };
    let m12 = pair(&mut b, 0, 1);
    let m34 = pair(&mut b, 2, 3);
    let d = b.affine(vec![(m12, one()), (m34, -one())], S::zero());
    let r = b.relu(d);
    let out = b.affine(vec![(m34, one()), (r, one())], S::zero());
    b.finish(out)
}
