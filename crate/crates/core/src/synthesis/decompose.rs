//! Minkowski decomposition of polygons into segments and triangles.
//!
//! A polygon is determined up to translation by its counter-clockwise edge
//! vectors, and a Minkowski sum merges edge sequences by angle. So peeling a
//! summand off means shortening edges. Two rules are applied until only a
//! triangle or a segment is left:
//!
//! - an antiparallel pair of edges sheds a segment the length of the shorter
//!   one;
//! - otherwise a triangle with sides along an edge `a_1` and the two edges at
//!   the vertex farthest from `a_1` is scaled until one of those sides is
//!   used up.

use serde::{Deserialize, Serialize};

use super::SynthesisError;
use crate::geometry::{convex_hull, Polytope};
use crate::lp;
use crate::scalar::Scalar;
use crate::vector::Vector;
use crate::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", content = "polytope", rename_all = "lowercase", bound = "")]
pub enum DecompositionPart<S: Scalar = Rat> {
    Segment(Polytope<S>),
    Triangle(Polytope<S>),
}

impl<S: Scalar> DecompositionPart<S> {
    pub fn polytope(&self) -> &Polytope<S> {
        match self {
            DecompositionPart::Segment(p) | DecompositionPart::Triangle(p) => p,
        }
    }
}

/// `P = offset + sum(parts)`, each part with its lexicographically smallest
/// vertex at the origin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Decomposition<S: Scalar = Rat> {
    pub parts: Vec<DecompositionPart<S>>,
    pub offset: Vector<S>,
}

impl<S: Scalar> Decomposition<S> {
    pub fn resum(&self) -> Polytope<S> {
        let one = S::one();
        let sum = Polytope::weighted_sum(2, self.parts.iter().map(|p| (&one, p.polytope()))).expect("planar parts");
        sum.translate(&self.offset)
    }
}

fn cross<S: Scalar>(a: &Vector<S>, b: &Vector<S>) -> S {
    a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone()
}

fn chain_polytope<S: Scalar>(edges: &[Vector<S>]) -> Polytope<S> {
    let mut pts = vec![Vector::zeros(2)];
    for e in &edges[..edges.len() - 1] {
        let next = pts.last().expect("non-empty") + e;
        pts.push(next);
    }
    let p = convex_hull(&pts, 2).expect("planar points");
    p.normalized_translation()
}

pub fn decompose_polygon<S: Scalar>(p: &Polytope<S>) -> Result<Decomposition<S>, SynthesisError<S>> {
    if p.dim() != 2 {
        return Err(SynthesisError::NotPlanar(p.dim()));
    }
    let mut edges: Vec<Vector<S>> = match p.affine_dim() {
        0 => Vec::new(),
        1 => {
            let d = &p.vertices()[1] - &p.vertices()[0];
            vec![d.clone(), -&d]
        }
        _ => {
            let cycle = &p.faces().expect("planar polytopes carry faces").polygons[0];
            let n = cycle.len();
            (0..n).map(|k| &p.vertices()[cycle[(k + 1) % n]] - &p.vertices()[cycle[k]]).collect()
        }
    };
    let mut parts = Vec::new();
    loop {
        edges.retain(|e| !e.is_zero());
        match edges.len() {
            0 => break,
            2 => {
                parts.push(DecompositionPart::Segment(chain_polytope(&edges)));
                break;
            }
            3 => {
                parts.push(DecompositionPart::Triangle(chain_polytope(&edges)));
                break;
            }
            _ => {}
        }
        if let Some((i, j)) = antiparallel_pair(&edges) {
            // e_j = -λ e_i; remove the shorter one from both.
            let k = (0..2).find(|&k| !edges[i][k].is_zero()).expect("non-zero edge");
            let lambda = -edges[j][k].clone() / edges[i][k].clone();
            let short = if lambda >= S::one() { edges[i].clone() } else { edges[j].clone() };
            parts.push(DecompositionPart::Segment(chain_polytope(&[short.clone(), -&short])));
            if lambda >= S::one() {
                edges[j] = &edges[j] + &short;
                edges[i] = Vector::zeros(2);
            } else {
                edges[i] = &edges[i] + &short;
                edges[j] = Vector::zeros(2);
            }
        } else {
            let (idx, alpha) = spanning_triple(&edges);
            let mu = alpha.iter().map(|a| S::one() / a.clone()).min().expect("three sides");
            let sides: Vec<Vector<S>> =
                idx.iter().zip(&alpha).map(|(&i, a)| edges[i].scale(&(mu.clone() * a.clone()))).collect();
            for (&i, s) in idx.iter().zip(&sides) {
                edges[i] = &edges[i] - s;
            }
            parts.push(DecompositionPart::Triangle(chain_polytope(&sides)));
        }
    }
    let mut out = Decomposition { parts, offset: Vector::zeros(2) };
    let sum = out.resum();
    out.offset = &p.vertices()[0] - &sum.vertices()[0];
    Ok(out)
}

fn antiparallel_pair<S: Scalar>(edges: &[Vector<S>]) -> Option<(usize, usize)> {
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            if cross(&edges[i], &edges[j]).is_zero() && edges[i].dot(&edges[j]).is_negative() {
                return Some((i, j));
            }
        }
    }
    None
}

/// Three edges, in cycle order, with `sum alpha_i e_i = 0` and every
/// `alpha_i > 0`.
///
/// The first choice is the lexicographically smallest edge together with the
/// two edges meeting at the vertex farthest from its line. Any positive
/// triple is accepted as a fallback, and one always exists because the edges
/// sum to zero.
fn spanning_triple<S: Scalar>(edges: &[Vector<S>]) -> ([usize; 3], [S; 3]) {
    let m = edges.len();
    let mut pos = vec![Vector::zeros(2)];
    for e in edges {
        let next = pos.last().expect("non-empty") + e;
        pos.push(next);
    }
    let key = |k: usize| {
        let (a, b) = (&pos[k], &pos[k + 1]);
        if a <= b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        }
    };
    let a1 = (0..m).min_by_key(|&k| key(k)).expect("edges");
    let far = (0..m).max_by_key(|&w| cross(&edges[a1], &(&pos[w] - &pos[a1]))).expect("vertices");
    let incoming = (far + m - 1) % m;
    let mut first = [a1, incoming, far];
    first.sort_unstable();
    if let Some(alpha) = positive_dependency(edges, first) {
        return (first, alpha);
    }
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                if let Some(alpha) = positive_dependency(edges, [i, j, k]) {
                    return ([i, j, k], alpha);
                }
            }
        }
    }
    unreachable!("edge vectors of a polygon always admit a positive triple")
}

fn positive_dependency<S: Scalar>(edges: &[Vector<S>], idx: [usize; 3]) -> Option<[S; 3]> {
    let [i, j, k] = idx;
    if i == j || j == k {
        return None;
    }
    // alpha_j e_j + alpha_k e_k = -e_i
    let a = vec![vec![edges[j][0].clone(), edges[k][0].clone()], vec![edges[j][1].clone(), edges[k][1].clone()]];
    let b = vec![-edges[i][0].clone(), -edges[i][1].clone()];
    let sol = lp::solve_square(&a, &b)?;
    (sol[0].is_positive() && sol[1].is_positive()).then(|| [S::one(), sol[0].clone(), sol[1].clone()])
}
