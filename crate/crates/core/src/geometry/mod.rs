//! Exact convex geometry: V-polytopes, support functions, Minkowski sums,
//! faces and edge orientation.

mod hull;

use std::collections::HashMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use hull::convex_hull;
pub(crate) use hull::in_hull_of;


use crate::scalar::Scalar;
use crate::vector::Vector;
use crate::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty point set")]
    Empty,
    #[error("ambient dimension must be positive")]
    ZeroDimension,
    #[error("direction must be non-zero")]
    ZeroDirection,
    #[error("face lattice unavailable for a polytope of affine dimension {0}")]
    FacesUnavailable(usize),
}

/// Edges and 2-faces, as indices into the owning polytope's vertex list.
///
/// Edges are `(i, j)` with `i < j`. Each polygon is a cycle; in the plane it
/// runs counter-clockwise, on a 3-polytope counter-clockwise seen from
/// outside.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FaceLattice {
    pub edges: Vec<(usize, usize)>,
    pub polygons: Vec<Vec<usize>>,
}

impl FaceLattice {
    fn remapped(self, map: &HashMap<usize, usize>) -> Self {
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .into_iter()
            .map(|(a, b)| {
                let (a, b) = (map[&a], map[&b]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        let mut polygons: Vec<Vec<usize>> = self
            .polygons
            .into_iter()
            .map(|c| {
                let mut c: Vec<usize> = c.into_iter().map(|i| map[&i]).collect();
                let start = (0..c.len()).min_by_key(|&k| c[k]).unwrap_or(0);
                c.rotate_left(start);
                c
            })
            .collect();
        polygons.sort();
        FaceLattice { edges, polygons }
    }
}

/// A convex polytope given by its extreme points.
///
/// Vertices are distinct and sorted lexicographically, so two polytopes are
/// equal exactly when their vertex lists are.
#[derive(Debug, Clone)]
pub struct Polytope<S: Scalar = Rat> {
    dim: usize,
    vertices: Vec<Vector<S>>,
    affine_dim: usize,
    faces: Option<FaceLattice>,
}

impl<S: Scalar> PartialEq for Polytope<S> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl<S: Scalar> Eq for Polytope<S> {}

/// Result of orienting the edges of a polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeOrientation<S: Scalar = Rat> {
    /// Every edge `(tail, head)` has `head - tail >= 0`.
    Positive(OrientedEdgeSet<S>),
    /// An edge `[p, q]` along which `p - q` has entries of both signs.
    Mixed { p: Vector<S>, q: Vector<S> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct OrientedEdgeSet<S: Scalar = Rat> {
    pub edges: Vec<(Vector<S>, Vector<S>)>,
}

impl<S: Scalar> Polytope<S> {
    pub(crate) fn from_parts(dim: usize, vertices: Vec<Vector<S>>, affine_dim: usize, faces: Option<FaceLattice>) -> Self {
        Polytope { dim, vertices, affine_dim, faces }
    }

    pub fn point(p: Vector<S>) -> Self {
        let dim = p.dim();
        Polytope { dim, vertices: vec![p], affine_dim: 0, faces: Some(FaceLattice::default()) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector<S>] {
        &self.vertices
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    /// Available when the affine dimension is at most 3, and for simplices.
    pub fn faces(&self) -> Option<&FaceLattice> {
        self.faces.as_ref()
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn vertex_index(&self, v: &Vector<S>) -> Option<usize> {
        self.vertices.binary_search(v).ok()
    }

    fn check_dim(&self, d: usize) -> Result<(), GeometryError> {
        if d == self.dim {
            Ok(())
        } else {
            Err(GeometryError::DimensionMismatch { expected: self.dim, found: d })
        }
    }

    /// `h(P, u) = max <v, u>` over the vertices.
    pub fn support_value(&self, u: &Vector<S>) -> Result<S, GeometryError> {
        self.check_dim(u.dim())?;
        if u.is_zero() {
            return Err(GeometryError::ZeroDirection);
        }
        Ok(self.max_dot(u))
    }

    pub(crate) fn max_dot(&self, u: &Vector<S>) -> S {
        self.vertices.iter().map(|v| v.dot(u)).max().expect("non-empty polytope")
    }

    /// The face of `P` maximizing `<., u>`.
    pub fn support_face(&self, u: &Vector<S>) -> Result<Polytope<S>, GeometryError> {
        let h = self.support_value(u)?;
        Ok(self.face_at_level(u, &h))
    }

    pub(crate) fn face_at_level(&self, u: &Vector<S>, h: &S) -> Polytope<S> {
        let tied: Vec<Vector<S>> = self.vertices.iter().filter(|v| v.dot(u) == *h).cloned().collect();
        if tied.len() == self.vertices.len() {
            return self.clone();
        }
        // Vertices of a face stay extreme, so only the face lattice is rebuilt.
        hull::hull_of_distinct(tied, self.dim)
    }

    pub fn translate(&self, b: &Vector<S>) -> Polytope<S> {
        Polytope {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| v + b).collect(),
            affine_dim: self.affine_dim,
            faces: self.faces.clone(),
        }
    }

    /// `a P` for `a >= 0`; `a = 0` collapses to the origin.
    pub fn scale(&self, a: &S) -> Polytope<S> {
        assert!(!a.is_negative(), "negative scaling");
        if a.is_zero() {
            return Polytope::point(Vector::zeros(self.dim));
        }
        Polytope {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| v.scale(a)).collect(),
            affine_dim: self.affine_dim,
            faces: self.faces.clone(),
        }
    }

    pub fn minkowski_sum(&self, other: &Polytope<S>) -> Result<Polytope<S>, GeometryError> {
        self.check_dim(other.dim)?;
        if other.is_point() {
            return Ok(self.translate(&other.vertices[0]));
        }
        if self.is_point() {
            return Ok(other.translate(&self.vertices[0]));
        }
        let mut sums = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for p in &self.vertices {
            for q in &other.vertices {
                sums.push(p + q);
            }
        }
        convex_hull(&sums, self.dim)
    }

    /// `conv(P ∪ {q})`.
    pub fn conv_with_point(&self, q: &Vector<S>) -> Result<Polytope<S>, GeometryError> {
        self.check_dim(q.dim())?;
        if self.vertex_index(q).is_some() {
            return Ok(self.clone());
        }
        let mut pts = self.vertices.clone();
        pts.push(q.clone());
        convex_hull(&pts, self.dim)
    }

    /// Exact membership test.
    pub fn contains(&self, p: &Vector<S>) -> bool {
        if p.dim() != self.dim {
            return false;
        }
        let cols: Vec<Vec<S>> = self.vertices.iter().map(|v| v.coords().to_vec()).collect();
        in_hull_of(p.coords(), cols.iter())
    }

    /// Returns `(a, b)` with `self = a * other + b`, `a >= 0`, if one exists.
    pub fn homothetic_to(&self, other: &Polytope<S>) -> Option<(S, Vector<S>)> {
        if self.dim != other.dim {
            return None;
        }
        if self.is_point() {
            return Some((S::zero(), self.vertices[0].clone()));
        }
        if other.is_point() || self.vertices.len() != other.vertices.len() {
            return None;
        }
        // Positive scaling and translation preserve lexicographic order, so
        // vertex lists must correspond index by index.
        let (p0, p1) = (&self.vertices[0], &self.vertices[1]);
        let (q0, q1) = (&other.vertices[0], &other.vertices[1]);
        let dq = q1 - q0;
        let k = (0..self.dim).find(|&i| !dq[i].is_zero())?;
        let a = (p1[k].clone() - p0[k].clone()) / dq[k].clone();
        if !a.is_positive() {
            return None;
        }
        let b = p0 - &q0.scale(&a);
        let ok = self.vertices.iter().zip(&other.vertices).all(|(p, q)| *p == &q.scale(&a) + &b);
        ok.then_some((a, b))
    }

    /// Orients every edge into the non-negative orthant, or reports an edge
    /// whose direction has mixed signs.
    pub fn positive_edges(&self) -> Result<EdgeOrientation<S>, GeometryError> {
        let faces = self.faces.as_ref().ok_or(GeometryError::FacesUnavailable(self.affine_dim))?;
        let mut oriented = Vec::with_capacity(faces.edges.len());
        for &(i, j) in &faces.edges {
            let (a, b) = (&self.vertices[i], &self.vertices[j]);
            let d = b - a;
            if d.is_nonneg() {
                oriented.push((a.clone(), b.clone()));
            } else if (-&d).is_nonneg() {
                oriented.push((b.clone(), a.clone()));
            } else {
                return Ok(EdgeOrientation::Mixed { p: b.clone(), q: a.clone() });
            }
        }
        oriented.sort();
        Ok(EdgeOrientation::Positive(OrientedEdgeSet { edges: oriented }))
    }

    /// Translates so the lexicographically smallest vertex is the origin.
    pub fn normalized_translation(&self) -> Polytope<S> {
        self.translate(&-&self.vertices[0])
    }

    pub fn equal_up_to_translation(&self, other: &Polytope<S>) -> bool {
        self.dim == other.dim
            && self.vertices.len() == other.vertices.len()
            && self.normalized_translation() == other.normalized_translation()
    }

    /// `sum_j a_j P_j` for positive `a_j`.
    pub fn weighted_sum<'a>(dim: usize, terms: impl IntoIterator<Item = (&'a S, &'a Polytope<S>)>) -> Result<Polytope<S>, GeometryError> {
        let mut acc = Polytope::point(Vector::zeros(dim));
        for (a, p) in terms {
            acc = acc.minkowski_sum(&p.scale(a))?;
        }
        Ok(acc)
    }
}

#[derive(Serialize, Deserialize)]
struct PolytopeJson<S: Scalar> {
    dim: usize,
    #[serde(bound = "")]
    vertices: Vec<Vector<S>>,
}

impl<S: Scalar> Serialize for Polytope<S> {
    fn serialize<Z: Serializer>(&self, ser: Z) -> Result<Z::Ok, Z::Error> {
        PolytopeJson { dim: self.dim, vertices: self.vertices.clone() }.serialize(ser)
    }
}

/// Parsing re-runs the hull, so any point list is accepted.
impl<'de, S: Scalar> Deserialize<'de> for Polytope<S> {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = PolytopeJson::<S>::deserialize(de)?;
        convex_hull(&raw.vertices, raw.dim).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[i64]) -> Vector {
        Vector::from_ints(c)
    }

    fn hull(points: &[&[i64]]) -> Polytope {
        let pts: Vec<Vector> = points.iter().map(|p| v(p)).collect();
        convex_hull(&pts, pts[0].dim()).unwrap()
    }

    fn unit_square() -> Polytope {
        hull(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])
    }

    fn pyramid() -> Polytope {
        hull(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 0], &[1, 1, 1]])
    }

    #[test]
    fn hull_drops_interior_point() {
        let half = Rat::from_ratio(1, 2);
        let mut pts: Vec<Vector> = [[0, 0], [1, 0], [0, 1], [1, 1]].iter().map(|p| v(p)).collect();
        pts.push(Vector::new(vec![half.clone(), half]));
        let p = convex_hull(&pts, 2).unwrap();
        assert_eq!(p.vertices(), unit_square().vertices());
        assert_eq!(p.faces().unwrap().edges.len(), 4);
        assert_eq!(p.faces().unwrap().polygons.len(), 1);
    }

    #[test]
    fn single_point_and_errors() {
        let p = hull(&[&[0, 0, 0]]);
        assert!(p.is_point());
        assert_eq!(p.affine_dim(), 0);
        assert_eq!(convex_hull::<Rat>(&[], 2), Err(GeometryError::Empty));
        assert!(matches!(
            convex_hull(&[v(&[0, 0]), v(&[0, 0, 1])], 2),
            Err(GeometryError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn collinear_points_give_a_segment() {
        let p = hull(&[&[0, 0, 0], &[2, 2, 2], &[1, 1, 1], &[3, 3, 3]]);
        assert_eq!(p.vertices(), &[v(&[0, 0, 0]), v(&[3, 3, 3])]);
        assert_eq!(p.faces().unwrap().edges, vec![(0, 1)]);
    }

    #[test]
    fn cube_has_six_square_facets() {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(v(&[x, y, z]));
                }
            }
        }
        pts.push(Vector::new(vec![Rat::from_ratio(1, 2); 3]));
        pts.push(v(&[1, 1, 0]));
        let c = convex_hull(&pts, 3).unwrap();
        let f = c.faces().unwrap();
        assert_eq!(c.vertices().len(), 8);
        assert_eq!(f.edges.len(), 12);
        assert_eq!(f.polygons.len(), 6);
        assert!(f.polygons.iter().all(|p| p.len() == 4));
    }

    #[test]
    fn flat_polygon_in_space() {
        let p = hull(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1], &[1, 0, 1]]);
        assert_eq!(p.affine_dim(), 2);
        assert_eq!(p.faces().unwrap().edges.len(), 4);
    }

    #[test]
    fn high_dimensional_simplex_gets_faces() {
        let pts: Vec<Vector> = (0..5).map(|i| Vector::unit(5, i)).collect();
        let s = convex_hull(&pts, 5).unwrap();
        assert_eq!(s.affine_dim(), 4);
        assert_eq!(s.faces().unwrap().edges.len(), 10);
        let mut with_center = pts.clone();
        with_center.push(Vector::new(vec![Rat::from_ratio(1, 5); 5]));
        assert_eq!(convex_hull(&with_center, 5).unwrap(), s);
        // A 4-cube is not a simplex: vertices only.
        let mut cube = Vec::new();
        for m in 0..16i64 {
            cube.push(v(&[m & 1, (m >> 1) & 1, (m >> 2) & 1, (m >> 3) & 1]));
        }
        cube.push(Vector::new(vec![Rat::from_ratio(1, 2); 4]));
        let c = convex_hull(&cube, 4).unwrap();
        assert_eq!(c.vertices().len(), 16);
        assert!(c.faces().is_none());
    }

    #[test]
    fn support_value_and_face() {
        let sq = unit_square();
        assert_eq!(sq.support_value(&v(&[1, 1])).unwrap(), Rat::from_int(2));
        assert_eq!(sq.support_value(&v(&[0, 0])), Err(GeometryError::ZeroDirection));
        let top = pyramid().support_face(&v(&[0, 0, 1])).unwrap();
        assert_eq!(top.vertices(), &[v(&[1, 1, 1])]);
        let base = pyramid().support_face(&v(&[0, 0, -1])).unwrap();
        assert_eq!(base.vertices(), unit_square_in_3d().vertices());
    }

    fn unit_square_in_3d() -> Polytope {
        hull(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 0]])
    }

    #[test]
    fn segments_sum_to_square() {
        let a = hull(&[&[0, 0], &[1, 0]]);
        let b = hull(&[&[0, 0], &[0, 1]]);
        assert_eq!(a.minkowski_sum(&b).unwrap(), unit_square());
        let t = unit_square().minkowski_sum(&Polytope::point(v(&[2, 3]))).unwrap();
        assert_eq!(t, unit_square().translate(&v(&[2, 3])));
    }

    #[test]
    fn add_point_to_square_base() {
        let p = unit_square_in_3d().conv_with_point(&v(&[1, 1, 1])).unwrap();
        assert_eq!(p, pyramid());
        let inner = Vector::new(vec![Rat::from_ratio(1, 3), Rat::from_ratio(1, 3)]);
        assert_eq!(unit_square().conv_with_point(&inner).unwrap(), unit_square());
    }

    #[test]
    fn homothety_detection() {
        let t = hull(&[&[0, 0], &[2, 0], &[0, 1]]);
        let p = t.scale(&Rat::from_int(2)).translate(&v(&[1, 1]));
        assert_eq!(p.homothetic_to(&t), Some((Rat::from_int(2), v(&[1, 1]))));
        let other = hull(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(other.homothetic_to(&t), None);
        let pt = Polytope::point(v(&[5, 5]));
        assert_eq!(pt.homothetic_to(&t), Some((Rat::from_int(0), v(&[5, 5]))));
        // Reflection is not a positive homothety.
        let flipped = t.scale(&Rat::from_int(1)).translate(&v(&[0, 0]));
        let neg = convex_hull(&flipped.vertices().iter().map(|x| -x).collect::<Vec<_>>(), 2).unwrap();
        assert_eq!(neg.homothetic_to(&t), None);
    }

    #[test]
    fn edge_orientation() {
        let seg = hull(&[&[1, 0], &[0, 1]]);
        match seg.positive_edges().unwrap() {
            EdgeOrientation::Mixed { p, q } => assert_eq!(&p - &q, v(&[1, -1])),
            other => panic!("expected mixed edge, got {other:?}"),
        }
        let EdgeOrientation::Positive(set) = pyramid().positive_edges().unwrap() else {
            panic!("pyramid has positive edges");
        };
        assert_eq!(set.edges.len(), 8);
        assert!(matches!(Polytope::point(v(&[1, 2])).positive_edges(), Ok(EdgeOrientation::Positive(_))));
    }

    #[test]
    fn json_is_canonical() {
        let sq = hull(&[&[1, 1], &[0, 0], &[1, 0], &[0, 1]]);
        let s = serde_json::to_string(&sq).unwrap();
        assert_eq!(s, r#"{"dim":2,"vertices":[["0","0"],["0","1"],["1","0"],["1","1"]]}"#);
        let back: Polytope = serde_json::from_str(&s).unwrap();
        assert_eq!(back, sq);
    }

    #[test]
    fn works_over_machine_rationals() {
        use num_rational::Rational64;
        let pts: Vec<Vector<Rational64>> =
            [[0, 0], [4, 0], [0, 4], [1, 1]].iter().map(|p| Vector::from_ints(p)).collect();
        let p = convex_hull(&pts, 2).unwrap();
        assert_eq!(p.vertices().len(), 3);
    }
}
