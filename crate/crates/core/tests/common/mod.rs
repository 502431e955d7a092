//! Independent oracles and fixture generators shared by the integration
//! tests and the acceptance run.
#![allow(dead_code)]

use std::collections::HashMap;

use newton_forge::geometry::convex_hull;
use newton_forge::network::Gate;
use newton_forge::sampling::SampleRng;
use newton_forge::{Polytope, Rat, ReluNetwork, Vector};
use num_traits::{Signed, Zero};
use rand::Rng;

pub fn q(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

pub fn v(c: &[i64]) -> Vector {
    Vector::from_ints(c)
}

type P3 = [i64; 3];

fn sub(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: P3, b: P3) -> P3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: P3, b: P3) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn on_segment(p: P3, a: P3, b: P3) -> bool {
    let d = sub(b, a);
    let w = sub(p, a);
    cross(d, w) == [0; 3] && dot(w, d) >= 0 && dot(w, d) <= dot(d, d)
}

fn in_triangle(p: P3, a: P3, b: P3, c: P3) -> bool {
    let n = cross(sub(b, a), sub(c, a));
    if dot(n, sub(p, a)) != 0 {
        return false;
    }
    [(a, b), (b, c), (c, a)].iter().all(|&(x, y)| dot(cross(sub(y, x), sub(p, x)), n) >= 0)
}

fn in_tetrahedron(p: P3, t: [P3; 4]) -> bool {
    let vol = |a: P3, b: P3, c: P3, d: P3| dot(cross(sub(b, a), sub(c, a)), sub(d, a));
    let full = vol(t[0], t[1], t[2], t[3]);
    let s = full.signum();
    (0..4).all(|i| {
        let mut u = t;
        u[i] = p;
        vol(u[0], u[1], u[2], u[3]).signum() * s >= 0
    })
}

/// Extreme points of distinct integer points in dimension at most 3, by
/// Carathéodory: a point is redundant exactly when it lies in a segment, a
/// non-degenerate triangle or a non-degenerate tetrahedron of the others.
pub fn brute_extreme(points: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let pts: Vec<P3> = points
        .iter()
        .map(|p| {
            let mut a = [0; 3];
            a[..p.len()].copy_from_slice(p);
            a
        })
        .collect();
    let mut out = Vec::new();
    for (i, &p) in pts.iter().enumerate() {
        let others: Vec<P3> = pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
        let m = others.len();
        let mut inside = false;
        'search: for a in 0..m {
            for b in a + 1..m {
                if on_segment(p, others[a], others[b]) {
                    inside = true;
                    break 'search;
                }
                for c in b + 1..m {
                    let n = cross(sub(others[b], others[a]), sub(others[c], others[a]));
                    if n == [0; 3] {
                        continue;
                    }
                    if in_triangle(p, others[a], others[b], others[c]) {
                        inside = true;
                        break 'search;
                    }
                    for d in c + 1..m {
                        let t = [others[a], others[b], others[c], others[d]];
                        if dot(n, sub(t[3], t[0])) != 0 && in_tetrahedron(p, t) {
                            inside = true;
                            break 'search;
                        }
                    }
                }
            }
        }
        if !inside {
            out.push(points[i].clone());
        }
    }
    out.sort();
    out
}

/// Distinct random integer points in `[-range, range]^dim`, at most as many
/// as the box holds.
pub fn int_points(rng: &mut SampleRng, n: usize, dim: usize, range: i64) -> Vec<Vec<i64>> {
    let room = (2 * range as usize + 1).pow(dim as u32);
    let n = n.min(room);
    let mut out: Vec<Vec<i64>> = Vec::new();
    while out.len() < n {
        let p: Vec<i64> = (0..dim).map(|_| rng.random_range(-range..=range)).collect();
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

pub fn to_rat(points: &[Vec<i64>]) -> Vec<Vector> {
    points.iter().map(|p| Vector::from_ints(p)).collect()
}

pub fn as_ints(p: &Polytope) -> Vec<Vec<i64>> {
    p.vertices()
        .iter()
        .map(|v| v.coords().iter().map(|c| i64::try_from(c.to_integer()).expect("integral")).collect())
        .collect()
}

/// Vertices of `A + B` from all pairwise sums, filtered by [`brute_extreme`].
pub fn brute_minkowski(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut sums: Vec<Vec<i64>> = Vec::new();
    for x in a {
        for y in b {
            let s: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
            if !sums.contains(&s) {
                sums.push(s);
            }
        }
    }
    brute_extreme(&sums)
}

/// Evaluates a network by recursion from the output node, reading only the
/// gate list.
pub fn interpret(net: &ReluNetwork, x: &Vector) -> Rat {
    fn node(net: &ReluNetwork, x: &Vector, id: usize, memo: &mut HashMap<usize, Rat>) -> Rat {
        if id < net.input_dim {
            return x[id].clone();
        }
        if let Some(v) = memo.get(&id) {
            return v.clone();
        }
        let val = match &net.gates[id - net.input_dim] {
            Gate::Affine { incoming, bias } => {
                let mut s = bias.clone();
                for (src, w) in incoming {
                    s += w * node(net, x, *src, memo);
                }
                s
            }
            Gate::Relu { source } => {
                let a = node(net, x, *source, memo);
                if a.is_negative() {
                    Rat::zero()
                } else {
                    a
                }
            }
        };
        memo.insert(id, val.clone());
        val
    }
    node(net, x, net.output, &mut HashMap::new())
}

/// `h(P, x)` straight from the vertex list.
pub fn support_brute(p: &Polytope, x: &Vector) -> Rat {
    p.vertices().iter().map(|w| w.dot(x)).max().expect("non-empty")
}

fn small_nonneg(rng: &mut SampleRng, dim: usize, hi: i64) -> Vector {
    Vector::new((0..dim).map(|_| q(rng.random_range(0..=hi * 4), 4)).collect())
}

/// A planar Newton polygon with positive edges: an offset plus 1 to 5
/// segments `[0, s]` and triangles `conv{0, w2, w3}` with `0 <= w2 <= w3`.
pub fn positive_polygon(rng: &mut SampleRng) -> Polytope {
    let mut acc = Polytope::point(small_nonneg(rng, 2, 3));
    for _ in 0..rng.random_range(1..=5) {
        let part = if rng.random_bool(0.5) {
            let s = small_nonneg(rng, 2, 3);
            convex_hull(&[Vector::zeros(2), s], 2).unwrap()
        } else {
            let w2 = small_nonneg(rng, 2, 2);
            let w3 = &w2 + &small_nonneg(rng, 2, 2);
            convex_hull(&[Vector::zeros(2), w2, w3], 2).unwrap()
        };
        acc = acc.minkowski_sum(&part).unwrap();
    }
    acc
}

/// A random rational polygon with at most `max_vertices` vertices. Half of
/// the draws scatter lattice points, which gives parallel sides; the other
/// half put points on the rational parametrisation of a circle, which gives
/// many vertices and rarely parallel sides.
pub fn random_polygon(rng: &mut SampleRng, max_vertices: usize) -> Polytope {
    loop {
        let pts: Vec<Vector> = if rng.random_bool(0.5) {
            let n = rng.random_range(1..=max_vertices + 4);
            let den = rng.random_range(1..=4);
            (0..n).map(|_| Vector::new(vec![q(rng.random_range(-12..=12), den), q(rng.random_range(-12..=12), den)])).collect()
        } else {
            let n = rng.random_range(1..=max_vertices);
            (0..n)
                .map(|_| {
                    let t = q(rng.random_range(-40..=40), rng.random_range(1..=9));
                    let one = q(1, 1);
                    let d = &one + &t * &t;
                    Vector::new(vec![(&one - &t * &t) / &d, (&t + &t) / &d])
                })
                .collect()
        };
        let p = convex_hull(&pts, 2).unwrap();
        if p.vertices().len() <= max_vertices {
            return p;
        }
    }
}

/// Coordinates of `p - lexmin(p)`.
pub fn normalized(p: &Polytope) -> Vec<Vector> {
    p.normalized_translation().vertices().to_vec()
}

pub fn is_nonneg_rat(x: &Rat) -> bool {
    !x.is_negative()
}

/// A random general-kind network: affine gates over 1 to 3 earlier nodes
/// and ReLU gates, output at the last gate.
pub fn random_net(rng: &mut SampleRng, input_dim: usize, gates: usize) -> ReluNetwork {
    use newton_forge::network::NetKind;
    let mut gs = Vec::with_capacity(gates);
    for i in 0..gates {
        let nodes = input_dim + i;
        let g = if i == 0 || rng.random_bool(0.6) {
            let k = rng.random_range(1..=3.min(nodes));
            let incoming = (0..k)
                .map(|_| (rng.random_range(0..nodes), q(rng.random_range(-9..=9), rng.random_range(1..=3))))
                .collect();
            Gate::Affine { incoming, bias: q(rng.random_range(-6..=6), rng.random_range(1..=4)) }
        } else {
            Gate::Relu { source: rng.random_range(0..nodes) }
        };
        gs.push(g);
    }
    ReluNetwork { input_dim, kind: NetKind::General, gates: gs, output: input_dim + gates - 1 }
}
