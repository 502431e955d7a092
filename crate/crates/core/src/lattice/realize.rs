//! The polytope `P_r` and the circuit-to-strategy reduction.
//!
//! Plane points are lifted to the unit sphere by the inverse stereographic
//! map `p -> (2ρp, |p|^2 - ρ^2) / (|p|^2 + ρ^2)`, which is rational. Lattice
//! triangles become faces exactly when the embedded triangulation is
//! Delaunay, and that is certified triangle by triangle.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::game::TreeBuilder;
use super::{GameTree, LatticeBall, LatticeError, TriangleChain, VertexSet};
use crate::geometry::{convex_hull, Polytope};
use crate::network::{eval_circuit, CircuitGate, GateTrace, PolytopeCircuit};
use crate::scalar::Scalar;
use crate::vector::Vector;
use crate::Rat;

fn cross<S: Scalar>(a: &Vector<S>, b: &Vector<S>) -> Vector<S> {
    let c = |i: usize, j: usize| a[i].clone() * b[j].clone() - a[j].clone() * b[i].clone();
    Vector::new(vec![c(1, 2), c(2, 0), c(0, 1)])
}

pub fn lift<S: Scalar>(g: &LatticeBall) -> Vec<Vector<S>> {
    let rho = S::from_int(g.r.max(1) as i64);
    let rho2 = rho.clone() * rho.clone();
    (0..g.vertex_count())
        .map(|v| {
            let p = g.embedding::<S>(v);
            let n2 = p.dot(&p);
            let den = n2.clone() + rho2.clone();
            let two_rho = S::from_int(2) * rho.clone();
            Vector::new(vec![
                two_rho.clone() * p[0].clone() / den.clone(),
                two_rho * p[1].clone() / den.clone(),
                (n2 - rho2.clone()) / den,
            ])
        })
        .collect()
}

/// Whether `conv{x, y, z}` is a 2-face of `q`: all three are vertices and
/// every other vertex lies strictly on one side of their plane.
pub fn is_two_face<S: Scalar>(q: &Polytope<S>, x: &Vector<S>, y: &Vector<S>, z: &Vector<S>) -> bool {
    if q.dim() != 3 || [x, y, z].iter().any(|p| q.vertex_index(p).is_none()) {
        return false;
    }
    let n = cross(&(y - x), &(z - x));
    if n.is_zero() {
        return false;
    }
    let (mut pos, mut neg) = (false, false);
    for w in q.vertices() {
        if w == x || w == y || w == z {
            continue;
        }
        let s = n.dot(&(w - x));
        if s.is_zero() {
            return false;
        }
        pos |= s.is_positive();
        neg |= s.is_negative();
    }
    !(pos && neg)
}

/// `λ > 0` and `t` with `λ T + t` a union of 2-faces of `q`, for the lifted
/// triangles `T` of `chain`.
///
/// The first edge of the first triangle fixes `λ` and `t` for each candidate
/// pair of vertices; every other corner and triangle is then checked.
pub fn find_chain<S: Scalar>(q: &Polytope<S>, chain: &TriangleChain, pos: &[Vector<S>]) -> Option<(S, Vector<S>)> {
    if chain.is_empty() {
        return Some((S::one(), Vector::zeros(q.dim())));
    }
    let verts = chain.vertices();
    if q.dim() != 3 || q.vertices().len() < verts.len() {
        return None;
    }
    let [a, b, _] = chain.triangles[0];
    let e = &pos[b] - &pos[a];
    let k = (0..3).find(|&k| !e[k].is_zero())?;
    for x in q.vertices() {
        for y in q.vertices() {
            let d = y - x;
            let lam = d[k].clone() / e[k].clone();
            if !lam.is_positive() || d != e.scale(&lam) {
                continue;
            }
            let t = x - &pos[a].scale(&lam);
            let image = |v: usize| &pos[v].scale(&lam) + &t;
            if verts.iter().all(|&v| q.vertex_index(&image(v)).is_some())
                && chain.triangles.iter().all(|tr| is_two_face(q, &image(tr[0]), &image(tr[1]), &image(tr[2])))
            {
                return Some((lam, t));
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceCertificate {
    pub vertices: usize,
    pub hull_vertices: usize,
    pub triangles: usize,
    /// Triangles passing the supporting-plane test.
    pub certified: usize,
    /// Triangles that also appear among the hull's own 2-faces.
    pub in_face_lattice: usize,
    pub failures: Vec<[usize; 3]>,
}

impl FaceCertificate {
    pub fn passed(&self) -> bool {
        self.hull_vertices == self.vertices && self.certified == self.triangles && self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Realization<S: Scalar = Rat> {
    pub lifted: Vec<Vector<S>>,
    pub polytope: Polytope<S>,
    pub certificate: FaceCertificate,
}

pub fn realize_polytope<S: Scalar>(g: &LatticeBall) -> Result<Realization<S>, LatticeError> {
    if g.r == 0 {
        return Err(LatticeError::RadiusTooSmall(1));
    }
    let lifted = lift::<S>(g);
    let polytope = convex_hull(&lifted, 3).map_err(|e| LatticeError::Certificate(e.to_string()))?;
    let hull_index: Vec<Option<usize>> = lifted.iter().map(|p| polytope.vertex_index(p)).collect();
    let hull_tris: Vec<Vec<usize>> = polytope
        .faces()
        .map(|f| {
            f.polygons
                .iter()
                .filter(|c| c.len() == 3)
                .map(|c| {
                    let mut c = c.clone();
                    c.sort_unstable();
                    c
                })
                .collect()
        })
        .unwrap_or_default();
    let mut certified = 0;
    let mut in_face_lattice = 0;
    let mut failures = Vec::new();
    for t in &g.triangles {
        if is_two_face(&polytope, &lifted[t[0]], &lifted[t[1]], &lifted[t[2]]) {
            certified += 1;
        } else {
            failures.push(*t);
        }
        let idx: Option<Vec<usize>> = t.iter().map(|&v| hull_index[v]).collect();
        if let Some(mut idx) = idx {
            idx.sort_unstable();
            if hull_tris.contains(&idx) {
                in_face_lattice += 1;
            }
        }
    }
    let certificate = FaceCertificate {
        vertices: g.vertex_count(),
        hull_vertices: polytope.vertices().len(),
        triangles: g.triangles.len(),
        certified,
        in_face_lattice,
        failures,
    };
    Ok(Realization { lifted, polytope, certificate })
}

struct Extraction<'a, S: Scalar> {
    c: &'a PolytopeCircuit<S>,
    trace: GateTrace<S>,
    g: &'a LatticeBall,
    pos: Vec<Vector<S>>,
    at: HashMap<Vector<S>, usize>,
}

impl<S: Scalar> Extraction<'_, S> {
    fn run(&self, mut gate: usize, set: &VertexSet, path: &mut Vec<usize>, tb: &mut TreeBuilder) -> Result<usize, LatticeError> {
        let id = tb.open(set, path);
        let n = set.count_ones(..);
        if n == 0 {
            return Ok(id);
        }
        let chain = self.g.triangle_set(set);
        let missing = |gate: usize| LatticeError::Certificate(format!("chain of {} triangles not found at gate {gate}", chain.len()));
        let mut found = find_chain(&self.trace.polytopes[gate], &chain, &self.pos).ok_or_else(|| missing(gate))?;
        if n == 1 {
            tb.nodes[id].cost = 1;
            return Ok(id);
        }
        loop {
            match &self.c.gates[gate] {
                CircuitGate::Point { .. } => return Err(missing(gate)),
                CircuitGate::Sum { terms } => {
                    let hit = terms
                        .iter()
                        .find_map(|(s, _)| find_chain(&self.trace.polytopes[*s], &chain, &self.pos).map(|f| (*s, f)));
                    let (s, f) = hit.ok_or_else(|| missing(gate))?;
                    gate = s;
                    found = f;
                }
                CircuitGate::AddPoint { source, q } => {
                    let (lam, t) = &found;
                    let pre = (q - t).scale(&(S::one() / lam.clone()));
                    let w = self.at.get(&pre).copied().filter(|w| chain.vertices().binary_search(w).is_ok());
                    let Some(w) = w else {
                        gate = *source;
                        found = find_chain(&self.trace.polytopes[gate], &chain, &self.pos).ok_or_else(|| missing(gate))?;
                        continue;
                    };
                    let mut rest = set.clone();
                    rest.difference_with(&self.g.ball1(w));
                    path.push(w);
                    let mut worst = 0;
                    let mut children = Vec::new();
                    for comp in self.g.components(&rest) {
                        let ch = self.run(*source, &comp, path, tb)?;
                        worst = worst.max(tb.nodes[ch].cost);
                        children.push(ch);
                    }
                    path.pop();
                    let node = &mut tb.nodes[id];
                    node.selected = Some(w);
                    node.selected_white = !set.contains(w);
                    node.children = children;
                    node.cost = 1 + worst;
                    return Ok(id);
                }
            }
        }
    }
}

/// The strategy read off a circuit whose output contains the chain
/// `𝒯(set)` of `P_r`.
///
/// Walking down from the output: a Sum descends into a summand that still
/// carries the chain, an AddPoint whose point is not a chain corner descends
/// into its source, and one whose point is a chain corner `w` selects `w`
/// and continues on every component separately.
pub fn extract_strategy_from_circuit<S: Scalar>(
    c: &PolytopeCircuit<S>,
    g: &LatticeBall,
    set: &VertexSet,
) -> Result<GameTree, LatticeError> {
    if c.dim != 3 {
        return Err(LatticeError::Certificate(format!("circuit lives in dimension {}, not 3", c.dim)));
    }
    let trace = eval_circuit(c).map_err(|e| LatticeError::Certificate(e.to_string()))?;
    let pos = lift::<S>(g);
    let at = pos.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let ex = Extraction { c, trace, g, pos, at };
    let mut tb = TreeBuilder { nodes: Vec::new() };
    ex.run(c.output, set, &mut Vec::new(), &mut tb)?;
    let tree = GameTree { nodes: tb.nodes };
    tree.verify_claims(g)?;
    Ok(tree)
}
