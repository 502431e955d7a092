//! Exact convex hulls.
//!
//! The point set is first reduced to its affine hull (by projecting onto a
//! set of pivot coordinates, which is injective on that hull). Affine
//! dimension 1, 2 and 3 get dedicated algorithms that also produce the face
//! lattice; higher dimensions fall back to LP vertex filtering.

use std::collections::{HashMap, HashSet};

use super::{FaceLattice, GeometryError, Polytope};
use crate::lp;
use crate::scalar::Scalar;
use crate::vector::Vector;

/// Convex hull of `points` in `S^dim`.
///
/// The result lists exactly the extreme points in lexicographic order and
/// does not depend on input order or duplicates.
pub fn convex_hull<S: Scalar>(points: &[Vector<S>], dim: usize) -> Result<Polytope<S>, GeometryError> {
    if dim == 0 {
        return Err(GeometryError::ZeroDimension);
    }
    if points.is_empty() {
        return Err(GeometryError::Empty);
    }
    if let Some(p) = points.iter().find(|p| p.dim() != dim) {
        return Err(GeometryError::DimensionMismatch { expected: dim, found: p.dim() });
    }
    let mut pts: Vec<Vector<S>> = points.to_vec();
    pts.sort();
    pts.dedup();
    Ok(hull_of_distinct(pts, dim))
}

/// `pts` must be sorted, deduplicated and of dimension `dim`.
pub(crate) fn hull_of_distinct<S: Scalar>(pts: Vec<Vector<S>>, dim: usize) -> Polytope<S> {
    if pts.len() == 1 {
        return Polytope::from_parts(dim, pts, 0, Some(FaceLattice::default()));
    }
    let (pivots, projected) = affine_chart(&pts);
    let k = pivots.len();

    let (mut keep, faces): (Vec<usize>, Option<FaceLattice>) = match k {
        1 => {
            let (lo, hi) = extremes_1d(&projected);
            (vec![lo, hi], Some(FaceLattice { edges: vec![(lo, hi)], polygons: vec![] }))
        }
        2 => {
            let cycle = hull_2d(&projected);
            let edges = cycle_edges(&cycle);
            (cycle.clone(), Some(FaceLattice { edges, polygons: vec![cycle] }))
        }
        3 => {
            let facets = hull_3d(&projected);
            let mut verts: Vec<usize> = facets.iter().flatten().copied().collect();
            verts.sort_unstable();
            verts.dedup();
            let mut edges: Vec<(usize, usize)> = facets.iter().flat_map(|c| cycle_edges(c)).collect();
            edges.sort_unstable();
            edges.dedup();
            (verts, Some(FaceLattice { edges, polygons: facets }))
        }
        _ => {
            let verts = lp_extreme_points(&projected);
            let faces = (verts.len() == k + 1).then(|| simplex_faces(&verts));
            (verts, faces)
        }
    };

    keep.sort_unstable();
    keep.dedup();
    // `pts` is sorted, so the kept subsequence is already canonical.
    let remap: HashMap<usize, usize> = keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let vertices: Vec<Vector<S>> = keep.iter().map(|&i| pts[i].clone()).collect();
    let faces = faces.map(|f| f.remapped(&remap));
    Polytope::from_parts(dim, vertices, k, faces)
}

/// Pivot coordinates of the affine hull and the points projected onto them.
fn affine_chart<S: Scalar>(pts: &[Vector<S>]) -> (Vec<usize>, Vec<Vec<S>>) {
    let base = &pts[0];
    let mut diffs: Vec<Vec<S>> = pts[1..].iter().map(|p| (p - base).into_coords()).collect();
    let pivots = lp::row_reduce(&mut diffs);
    let projected = pts.iter().map(|p| p.select(&pivots).into_coords()).collect();
    (pivots, projected)
}

fn extremes_1d<S: Scalar>(pts: &[Vec<S>]) -> (usize, usize) {
    let lo = (0..pts.len()).min_by(|&a, &b| pts[a][0].cmp(&pts[b][0])).unwrap();
    let hi = (0..pts.len()).max_by(|&a, &b| pts[a][0].cmp(&pts[b][0])).unwrap();
    (lo.min(hi), lo.max(hi))
}

fn cross2<S: Scalar>(o: &[S], a: &[S], b: &[S]) -> S {
    (a[0].clone() - o[0].clone()) * (b[1].clone() - o[1].clone())
        - (a[1].clone() - o[1].clone()) * (b[0].clone() - o[0].clone())
}

/// Andrew's monotone chain; strictly convex counter-clockwise cycle.
pub(crate) fn hull_2d<S: Scalar>(pts: &[Vec<S>]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| pts[a].cmp(&pts[b]));
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2
            && !cross2(&pts[lower[lower.len() - 2]], &pts[lower[lower.len() - 1]], &pts[i]).is_positive()
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2
            && !cross2(&pts[upper[upper.len() - 2]], &pts[upper[upper.len() - 1]], &pts[i]).is_positive()
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn sub3<S: Scalar>(a: &[S], b: &[S]) -> [S; 3] {
    [a[0].clone() - b[0].clone(), a[1].clone() - b[1].clone(), a[2].clone() - b[2].clone()]
}

fn cross3<S: Scalar>(u: &[S; 3], v: &[S; 3]) -> [S; 3] {
    [
        u[1].clone() * v[2].clone() - u[2].clone() * v[1].clone(),
        u[2].clone() * v[0].clone() - u[0].clone() * v[2].clone(),
        u[0].clone() * v[1].clone() - u[1].clone() * v[0].clone(),
    ]
}

fn dot3<S: Scalar>(u: &[S; 3], v: &[S]) -> S {
    u[0].clone() * v[0].clone() + u[1].clone() * v[1].clone() + u[2].clone() * v[2].clone()
}

/// Sign of the volume of `(b-a, c-a, d-a)`; positive means `d` lies above
/// the oriented triangle `abc`.
fn orient<S: Scalar>(a: &[S], b: &[S], c: &[S], d: &[S]) -> S {
    let n = cross3(&sub3(b, a), &sub3(c, a));
    dot3(&n, &sub3(d, a))
}

/// Facets of a full-dimensional 3D point set, each a counter-clockwise
/// (seen from outside) cycle of point indices.
fn hull_3d<S: Scalar>(pts: &[Vec<S>]) -> Vec<Vec<usize>> {
    let n = pts.len();
    let i0 = 0;
    let i1 = 1;
    let d01 = sub3(&pts[i1], &pts[i0]);
    let i2 = (2..n)
        .find(|&i| cross3(&d01, &sub3(&pts[i], &pts[i0])).iter().any(|c| !c.is_zero()))
        .expect("affine dimension 3");
    let i3 = (2..n)
        .find(|&i| i != i2 && !orient(&pts[i0], &pts[i1], &pts[i2], &pts[i]).is_zero())
        .expect("affine dimension 3");

    let tet = [i0, i1, i2, i3];
    let mut tris: Vec<[usize; 3]> = Vec::new();
    for skip in 0..4 {
        let face: Vec<usize> = (0..4).filter(|&k| k != skip).map(|k| tet[k]).collect();
        let (a, b, c) = (face[0], face[1], face[2]);
        if orient(&pts[a], &pts[b], &pts[c], &pts[tet[skip]]).is_negative() {
            tris.push([a, b, c]);
        } else {
            tris.push([a, c, b]);
        }
    }

    for p in 0..n {
        if tet.contains(&p) {
            continue;
        }
        let visible: Vec<bool> =
            tris.iter().map(|t| orient(&pts[t[0]], &pts[t[1]], &pts[t[2]], &pts[p]).is_positive()).collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut vis_edges: HashSet<(usize, usize)> = HashSet::new();
        for (t, _) in tris.iter().zip(&visible).filter(|(_, &v)| v) {
            for k in 0..3 {
                vis_edges.insert((t[k], t[(k + 1) % 3]));
            }
        }
        let mut next: Vec<[usize; 3]> = Vec::with_capacity(tris.len() + 4);
        let mut horizon: Vec<(usize, usize)> = Vec::new();
        for (t, &v) in tris.iter().zip(&visible) {
            if !v {
                next.push(*t);
                continue;
            }
            for k in 0..3 {
                let (u, w) = (t[k], t[(k + 1) % 3]);
                if !vis_edges.contains(&(w, u)) {
                    horizon.push((u, w));
                }
            }
        }
        for (u, w) in horizon {
            next.push([u, w, p]);
        }
        tris = next;
    }

    // Merge coplanar triangles into polygonal facets.
    let mut planes: Vec<([S; 3], S)> = Vec::new();
    let mut seen: HashSet<Vec<S>> = HashSet::new();
    for t in &tris {
        let normal = cross3(&sub3(&pts[t[1]], &pts[t[0]]), &sub3(&pts[t[2]], &pts[t[0]]));
        let lead = normal.iter().find(|c| !c.is_zero()).expect("non-degenerate facet").abs();
        let normal = [normal[0].clone() / lead.clone(), normal[1].clone() / lead.clone(), normal[2].clone() / lead];
        let offset = dot3(&normal, &pts[t[0]]);
        let mut key: Vec<S> = normal.to_vec();
        key.push(offset.clone());
        if seen.insert(key) {
            planes.push((normal, offset));
        }
    }

    let mut facets = Vec::with_capacity(planes.len());
    for (normal, offset) in planes {
        let on_plane: Vec<usize> = (0..n).filter(|&i| dot3(&normal, &pts[i]) == offset).collect();
        let drop = (0..3).find(|&c| !normal[c].is_zero()).unwrap();
        let keep: Vec<usize> = (0..3).filter(|&c| c != drop).collect();
        let flat: Vec<Vec<S>> = on_plane.iter().map(|&i| keep.iter().map(|&c| pts[i][c].clone()).collect()).collect();
        let mut cycle: Vec<usize> = hull_2d(&flat).into_iter().map(|j| on_plane[j]).collect();
        let (a, b, c) = (&pts[cycle[0]], &pts[cycle[1]], &pts[cycle[2]]);
        let nrm = cross3(&sub3(b, a), &sub3(c, a));
        if !dot3(&nrm, &normal.to_vec()).is_positive() {
            cycle.reverse();
        }
        facets.push(cycle);
    }
    facets
}

fn cycle_edges(cycle: &[usize]) -> Vec<(usize, usize)> {
    let m = cycle.len();
    let mut edges: Vec<(usize, usize)> = (0..m)
        .map(|k| {
            let (a, b) = (cycle[k], cycle[(k + 1) % m]);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    edges
}

fn simplex_faces(verts: &[usize]) -> FaceLattice {
    let mut edges = Vec::new();
    let mut polygons = Vec::new();
    for (a, &i) in verts.iter().enumerate() {
        for (b, &j) in verts.iter().enumerate().skip(a + 1) {
            edges.push((i, j));
            for &k in &verts[b + 1..] {
                polygons.push(vec![i, j, k]);
            }
        }
    }
    FaceLattice { edges, polygons }
}

/// Indices of extreme points, each decided by an exact feasibility test
/// against the points that are still candidates.
fn lp_extreme_points<S: Scalar>(pts: &[Vec<S>]) -> Vec<usize> {
    let mut alive: Vec<usize> = (0..pts.len()).collect();
    let mut i = 0;
    while i < alive.len() {
        let target = alive[i];
        let others: Vec<usize> = alive.iter().copied().filter(|&j| j != target).collect();
        if in_hull_of(&pts[target], others.iter().map(|&j| &pts[j])) {
            alive.remove(i);
        } else {
            i += 1;
        }
    }
    alive
}

/// Whether `p` is a convex combination of `pts`.
pub(crate) fn in_hull_of<'a, S: Scalar>(p: &[S], pts: impl Iterator<Item = &'a Vec<S>>) -> bool {
    let cols: Vec<&Vec<S>> = pts.collect();
    if cols.is_empty() {
        return false;
    }
    let d = p.len();
    let mut a: Vec<Vec<S>> = (0..d).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    a.push(vec![S::one(); cols.len()]);
    let mut b: Vec<S> = p.to_vec();
    b.push(S::one());
    lp::nonneg_solution(&a, &b).is_some()
}
