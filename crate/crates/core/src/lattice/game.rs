//! The coloring game: pick a black vertex `q`, whiten `B_1(q)`, recurse on
//! each black component. The cost is `1 + max` over the components, and a
//! set of at most one vertex costs its size.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{LatticeBall, LatticeError, VertexSet};

/// Largest set [`optimal_cost`] will search.
pub const OPTIMAL_SIZE_LIMIT: usize = 24;

pub trait Strategy {
    /// A member of `set`, which holds at least two vertices.
    fn select(&mut self, g: &LatticeBall, set: &VertexSet) -> usize;
}

impl<F: FnMut(&LatticeBall, &VertexSet) -> usize> Strategy for F {
    fn select(&mut self, g: &LatticeBall, set: &VertexSet) -> usize {
        self(g, set)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameNode {
    pub set: Vec<usize>,
    pub selected: Option<usize>,
    /// The selection was a white vertex next to the set. Only circuit
    /// extraction produces these.
    pub selected_white: bool,
    pub children: Vec<usize>,
    /// `L`: selections on the path from the root, this node excluded.
    pub path: Vec<usize>,
    pub cost: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameTree {
    /// Node 0 is the root.
    pub nodes: Vec<GameNode>,
}

impl GameTree {
    pub fn cost(&self) -> usize {
        self.nodes.first().map_or(0, |n| n.cost)
    }

    pub fn max_branching(&self) -> usize {
        self.nodes.iter().map(|n| n.children.len()).max().unwrap_or(0)
    }

    /// Checks that every split has at most six parts and that every node's
    /// boundary lies in the root's boundary plus `B_1(L)`.
    pub fn verify_claims(&self, g: &LatticeBall) -> Result<(), LatticeError> {
        let Some(root) = self.nodes.first() else { return Ok(()) };
        let root_boundary = super::boundary(g, &g.set_of(&root.set)?);
        for (i, node) in self.nodes.iter().enumerate() {
            if node.children.len() > 6 {
                return Err(LatticeError::ClaimViolated(format!("node {i} splits into {} components", node.children.len())));
            }
            let cover = g.closed_neighborhood(&g.set_of(&node.path)?);
            let bd = super::boundary(g, &g.set_of(&node.set)?);
            if let Some(v) = bd.ones().find(|&v| !cover.contains(v) && !root_boundary.contains(v)) {
                return Err(LatticeError::ClaimViolated(format!("boundary vertex {v} of node {i} is not covered by B_1(L)")));
            }
        }
        Ok(())
    }
}

pub(crate) struct TreeBuilder {
    pub nodes: Vec<GameNode>,
}

impl TreeBuilder {
    pub fn open(&mut self, set: &VertexSet, path: &[usize]) -> usize {
        self.nodes.push(GameNode {
            set: set.ones().collect(),
            selected: None,
            selected_white: false,
            children: Vec::new(),
            path: path.to_vec(),
            cost: 0,
        });
        self.nodes.len() - 1
    }
}

fn play_rec<St: Strategy + ?Sized>(
    g: &LatticeBall,
    st: &mut St,
    set: &VertexSet,
    path: &mut Vec<usize>,
    tb: &mut TreeBuilder,
) -> Result<usize, LatticeError> {
    let id = tb.open(set, path);
    let n = set.count_ones(..);
    if n <= 1 {
        tb.nodes[id].cost = n;
        return Ok(id);
    }
    let q = st.select(g, set);
    if q >= g.vertex_count() || !set.contains(q) {
        return Err(LatticeError::NotMember(q));
    }
    let mut rest = set.clone();
    rest.difference_with(&g.ball1(q));
    path.push(q);
    let mut worst = 0;
    let mut children = Vec::new();
    for comp in g.components(&rest) {
        let c = play_rec(g, st, &comp, path, tb)?;
        worst = worst.max(tb.nodes[c].cost);
        children.push(c);
    }
    path.pop();
    let node = &mut tb.nodes[id];
    node.selected = Some(q);
    node.children = children;
    node.cost = 1 + worst;
    Ok(id)
}

/// Runs `strategy` on `set` and checks both structural claims on the
/// resulting tree.
pub fn play<St: Strategy + ?Sized>(g: &LatticeBall, strategy: &mut St, set: &VertexSet) -> Result<GameTree, LatticeError> {
    let mut tb = TreeBuilder { nodes: Vec::new() };
    play_rec(g, strategy, set, &mut Vec::new(), &mut tb)?;
    let tree = GameTree { nodes: tb.nodes };
    tree.verify_claims(g)?;
    Ok(tree)
}

/// Number of black components after whitening `B_1(q)`.
pub fn component_split_check(g: &LatticeBall, set: &VertexSet, q: usize) -> Result<usize, LatticeError> {
    if q >= g.vertex_count() || !set.contains(q) {
        return Err(LatticeError::NotMember(q));
    }
    let mut rest = set.clone();
    rest.difference_with(&g.ball1(q));
    let k = g.components(&rest).len();
    if k > 6 {
        return Err(LatticeError::ClaimViolated(format!("whitening B_1({q}) leaves {k} components")));
    }
    Ok(k)
}

/// Memoised minimum over all strategies.
#[derive(Debug, Default)]
pub struct OptimalSearch {
    memo: HashMap<VertexSet, usize>,
}

impl OptimalSearch {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn states(&self) -> usize {
        self.memo.len()
    }

    /// Best first move and the resulting cost.
    fn best(&mut self, g: &LatticeBall, set: &VertexSet) -> (Option<usize>, usize) {
        let n = set.count_ones(..);
        if n <= 1 {
            return (None, n);
        }
        let mut cands: Vec<(usize, usize)> = set
            .ones()
            .map(|q| {
                let mut b = g.ball1(q);
                b.intersect_with(set);
                (q, b.count_ones(..))
            })
            .collect();
        cands.sort_by_key(|&(q, k)| (std::cmp::Reverse(k), q));
        let mut best = (None, usize::MAX);
        for (q, covered) in cands {
            if covered == n {
                return (Some(q), 1);
            }
            let mut rest = set.clone();
            rest.difference_with(&g.ball1(q));
            let mut comps = g.components(&rest);
            comps.sort_by_key(|c| std::cmp::Reverse(c.count_ones(..)));
            let mut worst = 0;
            for c in &comps {
                worst = worst.max(self.cost(g, c));
                if 1 + worst >= best.1 {
                    break;
                }
            }
            if 1 + worst < best.1 {
                best = (Some(q), 1 + worst);
                if best.1 == 2 {
                    break;
                }
            }
        }
        best
    }

    fn cost(&mut self, g: &LatticeBall, set: &VertexSet) -> usize {
        if let Some(&c) = self.memo.get(set) {
            return c;
        }
        let c = self.best(g, set).1;
        self.memo.insert(set.clone(), c);
        c
    }
}

impl Strategy for OptimalSearch {
    fn select(&mut self, g: &LatticeBall, set: &VertexSet) -> usize {
        self.best(g, set).0.expect("at least two vertices")
    }
}

pub fn optimal_cost(g: &LatticeBall, set: &VertexSet) -> Result<usize, LatticeError> {
    let size = set.count_ones(..);
    if size > OPTIMAL_SIZE_LIMIT {
        return Err(LatticeError::SizeGuard { size, limit: OPTIMAL_SIZE_LIMIT });
    }
    Ok(OptimalSearch::new().cost(g, set))
}

fn line_coords((a, b): (i64, i64)) -> [i64; 3] {
    [a, b, a + b]
}

/// Cuts the widest direction along its middle lattice line, one vertex in
/// three so that consecutive balls just meet.
#[derive(Debug, Default, Clone, Copy)]
pub struct SeparatorStrategy;

impl Strategy for SeparatorStrategy {
    fn select(&mut self, g: &LatticeBall, set: &VertexSet) -> usize {
        let mut lo = [i64::MAX; 3];
        let mut hi = [i64::MIN; 3];
        for v in set.ones() {
            for (k, c) in line_coords(g.coords[v]).into_iter().enumerate() {
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
            }
        }
        let k = (0..3).max_by_key(|&k| (hi[k] - lo[k], std::cmp::Reverse(k))).expect("three directions");
        let mid = (lo[k] + hi[k]).div_euclid(2);
        // Position along the line and the step to the next vertex on it.
        let (along, step): (fn((i64, i64)) -> i64, (i64, i64)) = match k {
            0 => (|c| c.1, (0, 1)),
            1 => (|c| c.0, (1, 0)),
            _ => (|c| c.0, (1, -1)),
        };
        let first = set
            .ones()
            .filter(|&v| line_coords(g.coords[v])[k] == mid)
            .min_by_key(|&v| along(g.coords[v]))
            .expect("a connected set meets every line between its extremes");
        let (a, b) = g.coords[first];
        match g.vertex_at((a + step.0, b + step.1)) {
            Some(next) if set.contains(next) => next,
            _ => first,
        }
    }
}

/// Whitens as many black vertices as possible, lowest index on ties.
#[derive(Debug, Default, Clone, Copy)]
pub struct GreedyStrategy;

impl Strategy for GreedyStrategy {
    fn select(&mut self, g: &LatticeBall, set: &VertexSet) -> usize {
        set.ones()
            .max_by_key(|&q| {
                let mut b = g.ball1(q);
                b.intersect_with(set);
                (b.count_ones(..), std::cmp::Reverse(q))
            })
            .expect("non-empty set")
    }
}
