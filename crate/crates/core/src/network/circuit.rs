//! Polytope circuits: Point, positive Minkowski Sum, and AddPoint gates.
//!
//! Gate ids are plain indices into `gates`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Gate, NetBuilder, NetKind, NetworkError, ReluNetwork};
use crate::geometry::Polytope;
use crate::scalar::Scalar;
use crate::vector::Vector;
use crate::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CircuitKind {
    /// Points in the non-negative orthant; AddPoint only adds the origin.
    Monotone,
    /// Arbitrary points.
    Icnn,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CircuitGate<S: Scalar = Rat> {
    Point { q: Vector<S> },
    /// `sum_j a_j P_j` with every `a_j > 0`.
    Sum { terms: Vec<(usize, S)> },
    /// `conv(P ∪ {q})`.
    AddPoint { source: usize, q: Vector<S> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopeCircuit<S: Scalar = Rat> {
    pub dim: usize,
    pub kind: CircuitKind,
    pub gates: Vec<CircuitGate<S>>,
    pub output: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum CircuitViolation {
    NotTopological { gate: usize, source: usize },
    NonPositiveCoefficient { gate: usize },
    EmptySum { gate: usize },
    WrongDimension { gate: usize },
    /// A negative coordinate or a non-zero added point in a monotone circuit.
    NotMonotone { gate: usize },
    BadOutput { output: usize },
}

impl fmt::Display for CircuitViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircuitViolation::NotTopological { gate, source } => write!(f, "gate {gate} reads later gate {source}"),
            CircuitViolation::NonPositiveCoefficient { gate } => write!(f, "gate {gate} has a non-positive coefficient"),
            CircuitViolation::EmptySum { gate } => write!(f, "gate {gate} sums nothing"),
            CircuitViolation::WrongDimension { gate } => write!(f, "gate {gate} has a point of the wrong dimension"),
            CircuitViolation::NotMonotone { gate } => write!(f, "gate {gate} breaks the monotone discipline"),
            CircuitViolation::BadOutput { output } => write!(f, "output {output} is not a gate"),
        }
    }
}

/// The polytope built at every gate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateTrace<S: Scalar = Rat> {
    pub polytopes: Vec<Polytope<S>>,
    pub output: usize,
}

impl<S: Scalar> GateTrace<S> {
    pub fn output(&self) -> &Polytope<S> {
        &self.polytopes[self.output]
    }
}

impl<S: Scalar> PolytopeCircuit<S> {
    pub fn validate(&self) -> Vec<CircuitViolation> {
        let mut out = Vec::new();
        let monotone = self.kind == CircuitKind::Monotone;
        for (gate, g) in self.gates.iter().enumerate() {
            match g {
                CircuitGate::Point { q } => {
                    if q.dim() != self.dim {
                        out.push(CircuitViolation::WrongDimension { gate });
                    } else if monotone && !q.is_nonneg() {
                        out.push(CircuitViolation::NotMonotone { gate });
                    }
                }
                CircuitGate::Sum { terms } => {
                    if terms.is_empty() {
                        out.push(CircuitViolation::EmptySum { gate });
                    }
                    for (src, a) in terms {
                        if *src >= gate {
                            out.push(CircuitViolation::NotTopological { gate, source: *src });
                        }
                        if !a.is_positive() {
                            out.push(CircuitViolation::NonPositiveCoefficient { gate });
                        }
                    }
                }
                CircuitGate::AddPoint { source, q } => {
                    if *source >= gate {
                        out.push(CircuitViolation::NotTopological { gate, source: *source });
                    }
                    if q.dim() != self.dim {
                        out.push(CircuitViolation::WrongDimension { gate });
                    } else if monotone && !q.is_zero() {
                        out.push(CircuitViolation::NotMonotone { gate });
                    }
                }
            }
        }
        if self.output >= self.gates.len() {
            out.push(CircuitViolation::BadOutput { output: self.output });
        }
        out
    }

    fn ensure_valid(&self) -> Result<(), NetworkError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(NetworkError::InvalidCircuit(v))
        }
    }

    /// Largest number of AddPoint gates on a path into the output.
    pub fn depth(&self) -> usize {
        let mut d = vec![0usize; self.gates.len()];
        for (i, g) in self.gates.iter().enumerate() {
            d[i] = match g {
                CircuitGate::Point { .. } => 0,
                CircuitGate::Sum { terms } => terms.iter().map(|(s, _)| d[*s]).max().unwrap_or(0),
                CircuitGate::AddPoint { source, .. } => d[*source] + 1,
            };
        }
        d.get(self.output).copied().unwrap_or(0)
    }

    pub fn push(&mut self, g: CircuitGate<S>) -> usize {
        self.gates.push(g);
        self.gates.len() - 1
    }

    /// Gates that feed the output.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.gates.len()];
        if self.output < seen.len() {
            seen[self.output] = true;
        }
        for i in (0..self.gates.len()).rev() {
            if !seen[i] {
                continue;
            }
            match &self.gates[i] {
                CircuitGate::Point { .. } => {}
                CircuitGate::Sum { terms } => terms.iter().for_each(|(s, _)| seen[*s] = true),
                CircuitGate::AddPoint { source, .. } => seen[*source] = true,
            }
        }
        seen
    }
}

pub fn eval_circuit<S: Scalar>(c: &PolytopeCircuit<S>) -> Result<GateTrace<S>, NetworkError> {
    c.ensure_valid()?;
    let mut polytopes: Vec<Polytope<S>> = Vec::with_capacity(c.gates.len());
    for g in &c.gates {
        let p = match g {
            CircuitGate::Point { q } => Polytope::point(q.clone()),
            CircuitGate::Sum { terms } => {
                Polytope::weighted_sum(c.dim, terms.iter().map(|(s, a)| (a, &polytopes[*s])))?
            }
            CircuitGate::AddPoint { source, q } => polytopes[*source].conv_with_point(q)?,
        };
        polytopes.push(p);
    }
    Ok(GateTrace { polytopes, output: c.output })
}

/// Gate-by-gate image of a bias-free network whose gate-to-gate weights are
/// non-negative: affine gates become Sum gates (their input terms folded into
/// one Point), ReLU gates become AddPoint gates adding the origin.
pub fn net_to_circuit<S: Scalar>(net: &ReluNetwork<S>) -> Result<PolytopeCircuit<S>, NetworkError> {
    net.ensure_valid()?;
    let n = net.input_dim;
    let kind = if net.kind == NetKind::Monotone { CircuitKind::Monotone } else { CircuitKind::Icnn };
    let mut c = PolytopeCircuit { dim: n, kind, gates: Vec::new(), output: 0 };
    // Circuit gate of each network node; inputs get a Point gate on demand.
    let mut map: Vec<Option<usize>> = vec![None; net.node_count()];
    for (i, g) in net.gates.iter().enumerate() {
        let node = n + i;
        let id = match g {
            Gate::Affine { incoming, bias } => {
                if !bias.is_zero() {
                    return Err(NetworkError::NonZeroBias { node });
                }
                let mut lin = vec![S::zero(); n];
                let mut terms = Vec::new();
                for (src, w) in incoming {
                    if *src < n {
                        lin[*src] = lin[*src].clone() + w.clone();
                    } else if w.is_negative() {
                        return Err(NetworkError::NegativeInnerWeight { node, from: *src });
                    } else if w.is_positive() {
                        terms.push((map[*src].expect("earlier gate"), w.clone()));
                    }
                }
                let lin = Vector::new(lin);
                if terms.is_empty() {
                    c.push(CircuitGate::Point { q: lin })
                } else {
                    if !lin.is_zero() {
                        let p = c.push(CircuitGate::Point { q: lin });
                        terms.push((p, S::one()));
                    }
                    c.push(CircuitGate::Sum { terms })
                }
            }
            Gate::Relu { source } => {
                let src = match map[*source] {
                    Some(s) => s,
                    None => {
                        let p = c.push(CircuitGate::Point { q: Vector::unit(n, *source) });
                        map[*source] = Some(p);
                        p
                    }
                };
                c.push(CircuitGate::AddPoint { source: src, q: Vector::zeros(n) })
            }
        };
        map[node] = Some(id);
    }
    c.output = map[net.output].expect("output is a gate");
    Ok(c)
}

/// The network whose support function each gate computes. AddPoint with
/// `q != 0` uses `conv(P ∪ {q}) = conv((P - q) ∪ {0}) + q`: one ReLU between
/// two affine gates that read `q` from the inputs.
pub fn circuit_to_net<S: Scalar>(c: &PolytopeCircuit<S>) -> Result<ReluNetwork<S>, NetworkError> {
    c.ensure_valid()?;
    let kind = match c.kind {
        CircuitKind::Monotone => NetKind::Monotone,
        CircuitKind::Icnn => NetKind::Icnn,
    };
    let mut b = NetBuilder::new(c.dim, kind);
    let mut map = Vec::with_capacity(c.gates.len());
    let coords = |q: &Vector<S>, sign: bool| -> Vec<(usize, S)> {
        q.coords()
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, if sign { v.clone() } else { -v.clone() }))
            .collect()
    };
    for g in &c.gates {
        let id = match g {
            CircuitGate::Point { q } => b.affine(coords(q, true), S::zero()),
            CircuitGate::Sum { terms } => b.affine(terms.iter().map(|(s, a)| (map[*s], a.clone())).collect(), S::zero()),
            CircuitGate::AddPoint { source, q } => {
                if q.is_zero() {
                    b.relu(map[*source])
                } else {
                    let mut inc = vec![(map[*source], S::one())];
                    inc.extend(coords(q, false));
                    let shifted = b.affine(inc, S::zero());
                    let r = b.relu(shifted);
                    let mut back = vec![(r, S::one())];
                    back.extend(coords(q, true));
                    b.affine(back, S::zero())
                }
            }
        };
        map.push(id);
    }
    Ok(b.finish(map[c.output]))
}
