//! JSON forms of networks and circuits.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{CircuitGate, CircuitKind, Gate, NetKind, PolytopeCircuit, ReluNetwork};
use crate::scalar::Scalar;
use crate::vector::{ExactValue, Vector};

fn text<S: Scalar>(v: &S) -> ExactValue {
    ExactValue::Text(v.to_string())
}

fn zero() -> ExactValue {
    ExactValue::Int(0)
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
enum GateWire {
    Affine {
        #[serde(rename = "in")]
        incoming: Vec<(usize, ExactValue)>,
        #[serde(default = "zero")]
        bias: ExactValue,
    },
    Relu {
        #[serde(rename = "in")]
        source: usize,
    },
}

#[derive(Serialize, Deserialize)]
struct NetWire {
    input_dim: usize,
    kind: NetKind,
    gates: Vec<GateWire>,
    output: usize,
}

impl<S: Scalar> Serialize for ReluNetwork<S> {
    fn serialize<Z: Serializer>(&self, ser: Z) -> Result<Z::Ok, Z::Error> {
        let gates = self
            .gates
            .iter()
            .map(|g| match g {
                Gate::Affine { incoming, bias } => GateWire::Affine {
                    incoming: incoming.iter().map(|(s, w)| (*s, text(w))).collect(),
                    bias: text(bias),
                },
                Gate::Relu { source } => GateWire::Relu { source: *source },
            })
            .collect();
        NetWire { input_dim: self.input_dim, kind: self.kind, gates, output: self.output }.serialize(ser)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for ReluNetwork<S> {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = NetWire::deserialize(de)?;
        let mut gates = Vec::with_capacity(raw.gates.len());
        for g in raw.gates {
            gates.push(match g {
                GateWire::Affine { incoming, bias } => Gate::Affine {
                    incoming: incoming
                        .into_iter()
                        .map(|(s, w)| w.parse().map(|w| (s, w)))
                        .collect::<Result<_, _>>()
                        .map_err(D::Error::custom)?,
                    bias: bias.parse().map_err(D::Error::custom)?,
                },
                GateWire::Relu { source } => Gate::Relu { source },
            });
        }
        Ok(ReluNetwork { input_dim: raw.input_dim, kind: raw.kind, gates, output: raw.output })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
enum CircuitGateWire {
    Point {
        q: Vec<ExactValue>,
    },
    Sum {
        #[serde(rename = "in")]
        terms: Vec<(usize, ExactValue)>,
    },
    AddPoint {
        #[serde(rename = "in")]
        source: usize,
        q: Vec<ExactValue>,
    },
}

#[derive(Serialize, Deserialize)]
struct CircuitWire {
    dim: usize,
    kind: CircuitKind,
    gates: Vec<CircuitGateWire>,
    output: usize,
}

fn vec_text<S: Scalar>(v: &Vector<S>) -> Vec<ExactValue> {
    v.coords().iter().map(text).collect()
}

fn vec_parse<S: Scalar>(v: &[ExactValue]) -> Result<Vector<S>, String> {
    v.iter().map(|c| c.parse()).collect::<Result<Vec<S>, _>>().map(Vector::new)
}

impl<S: Scalar> Serialize for PolytopeCircuit<S> {
    fn serialize<Z: Serializer>(&self, ser: Z) -> Result<Z::Ok, Z::Error> {
        let gates = self
            .gates
            .iter()
            .map(|g| match g {
                CircuitGate::Point { q } => CircuitGateWire::Point { q: vec_text(q) },
                CircuitGate::Sum { terms } => {
                    CircuitGateWire::Sum { terms: terms.iter().map(|(s, a)| (*s, text(a))).collect() }
                }
                CircuitGate::AddPoint { source, q } => CircuitGateWire::AddPoint { source: *source, q: vec_text(q) },
            })
            .collect();
        CircuitWire { dim: self.dim, kind: self.kind, gates, output: self.output }.serialize(ser)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for PolytopeCircuit<S> {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = CircuitWire::deserialize(de)?;
        let mut gates = Vec::with_capacity(raw.gates.len());
        for g in raw.gates {
            gates.push(match g {
                CircuitGateWire::Point { q } => CircuitGate::Point { q: vec_parse(&q).map_err(D::Error::custom)? },
                CircuitGateWire::Sum { terms } => CircuitGate::Sum {
                    terms: terms
                        .into_iter()
                        .map(|(s, a)| a.parse().map(|a| (s, a)))
                        .collect::<Result<_, _>>()
                        .map_err(D::Error::custom)?,
                },
                CircuitGateWire::AddPoint { source, q } => {
                    CircuitGate::AddPoint { source, q: vec_parse(&q).map_err(D::Error::custom)? }
                }
            });
        }
        Ok(PolytopeCircuit { dim: raw.dim, kind: raw.kind, gates, output: raw.output })
    }
}
