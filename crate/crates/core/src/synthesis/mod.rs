//! Network and circuit builders.

mod decompose;

use thiserror::Error;

pub use decompose::{decompose_polygon, Decomposition, DecompositionPart};

use crate::cpwl::{isotonic_check, CpwlError, CpwlFn, IsotonicWitness, Isotonicity};
use crate::geometry::{convex_hull, GeometryError, Polytope};
use crate::lp;
use crate::network::{circuit_to_net, eval_circuit, CircuitGate, CircuitKind, NetBuilder, NetKind, NetworkError, PolytopeCircuit, ReluNetwork};
use crate::scalar::Scalar;
use crate::vector::Vector;
use crate::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError<S: Scalar = Rat> {
    #[error("expected a planar input, got dimension {0}")]
    NotPlanar(usize),
    #[error("generators must be non-negative")]
    NotMonotone,
    #[error("subgradient map is not isotonic")]
    NotIsotonic(Box<IsotonicWitness<S>>),
    #[error("{0}")]
    BadArgument(String),
    #[error("{0}")]
    Cpwl(#[from] CpwlError),
    #[error("{0}")]
    Network(#[from] NetworkError),
    #[error("{0}")]
    Geometry(#[from] GeometryError),
}

/// Depth-2 monotone network for a planar homogeneous `F` whose Newton
/// polygon has positive edges.
///
/// `N(F)` is split into segments and triangles. A segment `[0, s]` is
/// `relu(<s, x>)`; a triangle `0 <= w2 <= w3` is
/// `relu(<w2, x> + relu(<w3 - w2, x>))`. The translation comes back as a
/// linear term in the output gate.
pub fn synthesize_depth2_planar<S: Scalar>(f: &CpwlFn<S>) -> Result<ReluNetwork<S>, SynthesisError<S>> {
    if f.dim() != 2 {
        return Err(SynthesisError::NotPlanar(f.dim()));
    }
    if !f.has_nonneg_gradients() {
        return Err(SynthesisError::NotMonotone);
    }
    if let Isotonicity::Violated(w) = isotonic_check(f)? {
        return Err(SynthesisError::NotIsotonic(w));
    }
    let dec = decompose_polygon(&f.newton_polytope())?;
    let one = S::one;
    let mut b = NetBuilder::new(2, NetKind::Monotone);
    let mut out: Vec<(usize, S)> =
        dec.offset.coords().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect();
    for part in &dec.parts {
        let vs = part.polytope().vertices();
        let top = match part {
            DecompositionPart::Segment(_) => {
                let l = b.linear(&vs[1]);
                b.relu(l)
            }
            DecompositionPart::Triangle(_) => {
                let (w2, w3) = (&vs[1], &vs[2]);
                let l = b.linear(&(w3 - w2));
                let r = b.relu(l);
                let mut inc = vec![(r, one())];
                inc.extend(w2.coords().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())));
                let e = b.affine(inc, S::zero());
                b.relu(e)
            }
        };
        out.push((top, one()));
    }
    let o = b.affine(out, S::zero());
    Ok(b.finish(o))
}

/// `m_1 = relu(x_1)`, `m_k = relu(x_k + m_{k-1})`.
pub fn build_m_n<S: Scalar>(n: usize) -> Result<ReluNetwork<S>, SynthesisError<S>> {
    if n < 1 {
        return Err(SynthesisError::BadArgument("m_n needs n >= 1".into()));
    }
    let mut b = NetBuilder::new(n, NetKind::Monotone);
    let mut prev = b.relu(0);
    for i in 1..n {
        let a = b.affine(vec![(i, S::one()), (prev, S::one())], S::zero());
        prev = b.relu(a);
    }
    Ok(b.finish(prev))
}

/// Direct evaluation of the `m_n` recursion.
pub fn m_n_value<S: Scalar>(x: &Vector<S>) -> S {
    x.coords().iter().fold(S::zero(), |acc, xi| (xi.clone() + acc).max(S::zero()))
}

/// `max(x_1, .., x_n)` as an ICNN circuit of depth `n` and its network.
pub fn build_max_icnn<S: Scalar>(n: usize) -> Result<(PolytopeCircuit<S>, ReluNetwork<S>), SynthesisError<S>> {
    if n < 2 {
        return Err(SynthesisError::BadArgument("MAX_n needs n >= 2".into()));
    }
    let simplex = convex_hull(&(0..n).map(|i| Vector::unit(n, i)).collect::<Vec<_>>(), n)?;
    let c = build_polytope_icnn(&simplex);
    let net = circuit_to_net(&c)?;
    Ok((c, net))
}

/// A circuit of depth `m` for a polytope with `m` vertices.
///
/// Starts from the lexicographically first vertex and adds every vertex in
/// lexicographic order. Adding `q` is `conv((P - q) ∪ {0}) + q`, so every
/// AddPoint gate adds the origin.
pub fn build_polytope_icnn<S: Scalar>(p: &Polytope<S>) -> PolytopeCircuit<S> {
    let dim = p.dim();
    let mut c = PolytopeCircuit { dim, kind: CircuitKind::Icnn, gates: Vec::new(), output: 0 };
    let vs = p.vertices();
    let mut cur = c.push(CircuitGate::Point { q: vs[0].clone() });
    if vs.len() == 1 {
        return c;
    }
    for q in vs {
        let back = c.push(CircuitGate::Point { q: q.clone() });
        let neg = c.push(CircuitGate::Point { q: -q });
        let shifted = c.push(CircuitGate::Sum { terms: vec![(cur, S::one()), (neg, S::one())] });
        let with0 = c.push(CircuitGate::AddPoint { source: shifted, q: Vector::zeros(dim) });
        cur = c.push(CircuitGate::Sum { terms: vec![(with0, S::one()), (back, S::one())] });
    }
    c.output = cur;
    c
}

/// The square pyramid `conv{0, e1, e2, e1+e2, e1+e2+e3}` and its support
/// function.
pub fn pyramid_fixture<S: Scalar>() -> (Polytope<S>, CpwlFn<S>) {
    let pts: Vec<Vector<S>> =
        [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0], [1, 1, 1]].iter().map(|c| Vector::from_ints(c)).collect();
    let p = convex_hull(&pts, 3).expect("five points in R^3");
    let f = CpwlFn::support_of(&p);
    (p, f)
}

/// Dimension of the space of edge scalings `λ_e` under which every 2-face
/// still closes up.
///
/// A summand of `P` has the edge directions of `P` with lengths `λ_e |e|`,
/// and around each 2-face the scaled edges must sum to zero. Dimension 1
/// means only homothets, so `P` is indecomposable.
pub fn edge_scaling_dimension<S: Scalar>(p: &Polytope<S>) -> Result<usize, GeometryError> {
    let faces = p.faces().ok_or(GeometryError::FacesUnavailable(p.dim()))?;
    let edges = if p.affine_dim() == 1 { vec![(0, 1)] } else { faces.edges.clone() };
    let col = |a: usize, b: usize| edges.binary_search(&(a.min(b), a.max(b))).expect("polygon sides are edges");
    let mut rows = Vec::new();
    for cycle in &faces.polygons {
        let mut block = vec![vec![S::zero(); edges.len()]; p.dim()];
        for k in 0..cycle.len() {
            let (a, b) = (cycle[k], cycle[(k + 1) % cycle.len()]);
            let d = &p.vertices()[b] - &p.vertices()[a];
            let e = col(a, b);
            for (row, c) in block.iter_mut().zip(d.coords()) {
                row[e] = c.clone();
            }
        }
        rows.extend(block);
    }
    Ok(edges.len() - lp::rank(&rows))
}

/// Circuit for `P_u - (h(P, u) / |u|^2) u`, the face in direction `u` moved
/// into `u^⊥`, built gate by gate.
///
/// An AddPoint gate `conv(Q ∪ {q})` keeps only `Q'` when `q` lies below the
/// supporting hyperplane of `Q`, only `q'` when above, and both on a tie.
pub fn restrict_circuit_to_face<S: Scalar>(c: &PolytopeCircuit<S>, u: &Vector<S>) -> Result<PolytopeCircuit<S>, SynthesisError<S>> {
    if u.dim() != c.dim {
        return Err(GeometryError::DimensionMismatch { expected: c.dim, found: u.dim() }.into());
    }
    if u.is_zero() {
        return Err(GeometryError::ZeroDirection.into());
    }
    let trace = eval_circuit(c)?;
    let uu = u.dot(u);
    let proj = |q: &Vector<S>| q - &u.scale(&(q.dot(u) / uu.clone()));
    let mut out = PolytopeCircuit { dim: c.dim, kind: c.kind, gates: Vec::new(), output: 0 };
    let mut map = Vec::with_capacity(c.gates.len());
    for g in &c.gates {
        let id = match g {
            CircuitGate::Point { q } => out.push(CircuitGate::Point { q: proj(q) }),
            CircuitGate::Sum { terms } => {
                out.push(CircuitGate::Sum { terms: terms.iter().map(|(s, a)| (map[*s], a.clone())).collect() })
            }
            CircuitGate::AddPoint { source, q } => {
                let h = trace.polytopes[*source].max_dot(u);
                let hq = q.dot(u);
                if h > hq {
                    map[*source]
                } else if h == hq {
                    out.push(CircuitGate::AddPoint { source: map[*source], q: proj(q) })
                } else {
                    out.push(CircuitGate::Point { q: proj(q) })
                }
            }
        };
        map.push(id);
    }
    out.output = map[c.output];
    if out.kind == CircuitKind::Monotone && !out.validate().is_empty() {
        out.kind = CircuitKind::Icnn;
    }
    Ok(out)
}
