//! The triangular lattice ball `B_r`, its triangle chains, and the coloring
//! game that bounds ICNN depth from below.

mod game;
mod iso;
mod realize;

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use game::{
    component_split_check, optimal_cost, play, GameNode, GameTree, GreedyStrategy, OptimalSearch, SeparatorStrategy, Strategy,
    OPTIMAL_SIZE_LIMIT,
};
pub use iso::{boundary, isoperimetry_scan, IsoMode, IsoReport};
pub use realize::{extract_strategy_from_circuit, find_chain, is_two_face, lift, realize_polytope, FaceCertificate, Realization};

use crate::scalar::Scalar;
use crate::vector::Vector;

/// Vertex subsets of a ball, indexed like [`LatticeBall::coords`].
pub type VertexSet = FixedBitSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("vertex {0} is not in the current black set")]
    NotMember(usize),
    #[error("vertex {0} is out of range")]
    BadVertex(usize),
    #[error("exhaustive search over {size} vertices refused (limit {limit})")]
    SizeGuard { size: usize, limit: usize },
    #[error("radius must be at least {0}")]
    RadiusTooSmall(usize),
    #[error("claim violated: {0}")]
    ClaimViolated(String),
    #[error("certificate failure: {0}")]
    Certificate(String),
}

/// The six axial neighbour offsets.
pub const STENCIL: [(i64, i64); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];

/// Height of a lattice row in the plane embedding, a rational stand-in for
/// `sqrt(3) / 2`.
pub const ROW_HEIGHT: (i64, i64) = (7, 8);

pub fn hex_norm((a, b): (i64, i64)) -> i64 {
    a.abs().max(b.abs()).max((a + b).abs())
}

/// Parsing rebuilds the ball from `r` and rejects any other content.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BallWire")]
pub struct LatticeBall {
    pub r: usize,
    /// Axial coordinates; vertex 0 is the origin.
    pub coords: Vec<(i64, i64)>,
    pub adjacency: Vec<Vec<usize>>,
    /// `(i, j)` with `i < j`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// Sorted vertex triples, sorted.
    pub triangles: Vec<[usize; 3]>,
    #[serde(skip)]
    index: HashMap<(i64, i64), usize>,
}

#[derive(Deserialize)]
struct BallWire {
    r: usize,
    coords: Vec<(i64, i64)>,
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    triangles: Vec<[usize; 3]>,
}

impl TryFrom<BallWire> for LatticeBall {
    type Error = String;

    fn try_from(w: BallWire) -> Result<Self, String> {
        let g = build_ball(w.r);
        if g.coords != w.coords || g.adjacency != w.adjacency || g.edges != w.edges || g.triangles != w.triangles {
            return Err(format!("not the canonical ball of radius {}", w.r));
        }
        Ok(g)
    }
}

/// Breadth-first ball of radius `r` around the origin.
pub fn build_ball(r: usize) -> LatticeBall {
    let ri = r as i64;
    let mut coords = vec![(0, 0)];
    let mut index = HashMap::from([((0, 0), 0)]);
    let mut queue = VecDeque::from([((0i64, 0i64), 0usize)]);
    while let Some((p, d)) = queue.pop_front() {
        if d == r {
            continue;
        }
        for (da, db) in STENCIL {
            let n = (p.0 + da, p.1 + db);
            if let std::collections::hash_map::Entry::Vacant(e) = index.entry(n) {
                e.insert(coords.len());
                coords.push(n);
                queue.push_back((n, d + 1));
            }
        }
    }
    debug_assert!(coords.iter().all(|&c| hex_norm(c) <= ri));
    let mut adjacency = vec![Vec::new(); coords.len()];
    let mut edges = Vec::new();
    for (i, &(a, b)) in coords.iter().enumerate() {
        for (da, db) in STENCIL {
            if let Some(&j) = index.get(&(a + da, b + db)) {
                adjacency[i].push(j);
                if i < j {
                    edges.push((i, j));
                }
            }
        }
        adjacency[i].sort_unstable();
    }
    edges.sort_unstable();
    let mut triangles = Vec::new();
    for &(a, b) in &coords {
        for [(x1, y1), (x2, y2)] in [[(1, 0), (0, 1)], [(1, 0), (1, -1)]] {
            if let (Some(&j), Some(&k)) = (index.get(&(a + x1, b + y1)), index.get(&(a + x2, b + y2))) {
                let mut t = [index[&(a, b)], j, k];
                t.sort_unstable();
                triangles.push(t);
            }
        }
    }
    triangles.sort_unstable();
    LatticeBall { r, coords, adjacency, edges, triangles, index }
}

impl LatticeBall {
    pub fn vertex_count(&self) -> usize {
        self.coords.len()
    }

    pub fn origin(&self) -> usize {
        0
    }

    pub fn vertex_at(&self, c: (i64, i64)) -> Option<usize> {
        self.index.get(&c).copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn empty_set(&self) -> VertexSet {
        FixedBitSet::with_capacity(self.vertex_count())
    }

    pub fn full_set(&self) -> VertexSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    pub fn set_of(&self, vs: &[usize]) -> Result<VertexSet, LatticeError> {
        let mut s = self.empty_set();
        for &v in vs {
            if v >= self.vertex_count() {
                return Err(LatticeError::BadVertex(v));
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// `B_1(U)`: `U` and every neighbour of `U`.
    pub fn closed_neighborhood(&self, u: &VertexSet) -> VertexSet {
        let mut out = u.clone();
        for v in u.ones() {
            for &w in &self.adjacency[v] {
                out.insert(w);
            }
        }
        out
    }

    pub fn ball1(&self, q: usize) -> VertexSet {
        let mut s = self.empty_set();
        s.insert(q);
        self.closed_neighborhood(&s)
    }

    /// Connected components of the graph induced by `set`, each listed in
    /// breadth-first order from its smallest vertex.
    pub fn components(&self, set: &VertexSet) -> Vec<VertexSet> {
        let mut seen = self.empty_set();
        let mut out = Vec::new();
        for s in set.ones() {
            if seen.contains(s) {
                continue;
            }
            let mut comp = self.empty_set();
            let mut queue = VecDeque::from([s]);
            seen.insert(s);
            while let Some(v) = queue.pop_front() {
                comp.insert(v);
                for &w in &self.adjacency[v] {
                    if set.contains(w) && !seen.contains(w) {
                        seen.insert(w);
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self, set: &VertexSet) -> bool {
        self.components(set).len() <= 1
    }

    /// Plane position `a (1, 0) + b (1/2, h)`.
    pub fn embedding<S: Scalar>(&self, v: usize) -> Vector<S> {
        let (a, b) = self.coords[v];
        let h = S::from_int(ROW_HEIGHT.0) / S::from_int(ROW_HEIGHT.1);
        let x = S::from_int(a) + S::from_int(b) / S::from_int(2);
        Vector::new(vec![x, S::from_int(b) * h])
    }

    /// `𝒯(U)`: lattice triangles with all corners in `B_1(U)`.
    pub fn triangle_set(&self, u: &VertexSet) -> TriangleChain {
        let nb = self.closed_neighborhood(u);
        TriangleChain { triangles: self.triangles.iter().filter(|t| t.iter().all(|&v| nb.contains(v))).copied().collect() }
    }
}

/// Whether removing any two vertices (or fewer) leaves `adjacency`
/// connected. Graphs on at most three vertices only need to be complete.
pub fn check_3_connected(adjacency: &[Vec<usize>]) -> bool {
    let n = adjacency.len();
    if n <= 3 {
        return (0..n).all(|v| adjacency[v].len() == n - 1);
    }
    let connected_without = |a: usize, b: usize| {
        let start = (0..n).find(|&v| v != a && v != b).expect("n > 3");
        let mut seen = vec![false; n];
        seen[a] = true;
        seen[b] = true;
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n - if a == b { 1 } else { 2 }
    };
    (0..n).all(|a| (a..n).all(|b| connected_without(a, b)))
}

/// A set of lattice triangles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleChain {
    pub triangles: Vec<[usize; 3]>,
}

impl TriangleChain {
    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.triangles.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn edge_incidence(&self) -> HashMap<(usize, usize), Vec<usize>> {
        let mut m: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (i, t) in self.triangles.iter().enumerate() {
            for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                m.entry((a, b)).or_default().push(i);
            }
        }
        m
    }

    /// Edge-connected, with every edge in at most two triangles. The empty
    /// collection counts.
    pub fn is_pseudomanifold(&self) -> bool {
        let inc = self.edge_incidence();
        if inc.values().any(|ts| ts.len() > 2) {
            return false;
        }
        if self.triangles.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.triangles.len()];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            let t = self.triangles[i];
            for e in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                for &j in &inc[&e] {
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}
