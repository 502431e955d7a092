//! Convex piecewise-linear functions and their Newton polytopes.
//!
//! A homogeneous convex CPWL function `F(x) = max_i <v_i, x>` is the support
//! function of `N(F) = conv{v_i}`. Subgradients are faces of `N(F)`, and
//! isotonicity of the subgradient map is decided on the edges of `N(F)`.

mod affine;
mod integrate;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use affine::{slope_witness_1d, AffineMax, AffinePiece, Pwl1d, SlopeWitness};
pub use integrate::{integrate_abs_diff, integrate_affine, polygon_area, Polygon, Rect};

use crate::geometry::{convex_hull, EdgeOrientation, GeometryError, OrientedEdgeSet, Polytope};
use crate::lp;
use crate::scalar::Scalar;
use crate::vector::{ExactValue, Vector};
use crate::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CpwlError {
    #[error("a CPWL function needs at least one generator")]
    NoGenerators,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("edge data unavailable for a Newton polytope of affine dimension {0}")]
    FacesUnavailable(usize),
    #[error("function is not convex")]
    NonConvex,
    #[error("integration box must have positive area")]
    EmptyBox,
    #[error("breakpoints must increase from 0 to 1")]
    BadKnots,
    #[error("{0}")]
    Geometry(#[from] GeometryError),
}

/// `F(x) = max_i <v_i, x>`, stored by its distinct generators in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CpwlFn<S: Scalar = Rat> {
    dim: usize,
    generators: Vec<Vector<S>>,
}

/// `∂F(x)`, the face of `N(F)` selected by `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgradientSet<S: Scalar = Rat> {
    pub carrier: Polytope<S>,
}

impl<S: Scalar> CpwlFn<S> {
    pub fn new(dim: usize, mut generators: Vec<Vector<S>>) -> Result<Self, CpwlError> {
        if generators.is_empty() {
            return Err(CpwlError::NoGenerators);
        }
        if let Some(g) = generators.iter().find(|g| g.dim() != dim) {
            return Err(CpwlError::DimensionMismatch { expected: dim, found: g.dim() });
        }
        generators.sort();
        generators.dedup();
        Ok(CpwlFn { dim, generators })
    }

    /// `MAX_n(x) = max_i x_i`.
    pub fn max_n(n: usize) -> Self {
        CpwlFn { dim: n, generators: (0..n).map(|i| Vector::unit(n, i)).collect() }
    }

    /// The support function of `p`.
    pub fn support_of(p: &Polytope<S>) -> Self {
        CpwlFn { dim: p.dim(), generators: p.vertices().to_vec() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vector<S>] {
        &self.generators
    }

    pub fn eval(&self, x: &Vector<S>) -> Result<S, CpwlError> {
        if x.dim() != self.dim {
            return Err(CpwlError::DimensionMismatch { expected: self.dim, found: x.dim() });
        }
        Ok(self.generators.iter().map(|g| g.dot(x)).max().expect("non-empty"))
    }

    pub fn newton_polytope(&self) -> Polytope<S> {
        convex_hull(&self.generators, self.dim).expect("generators are non-empty and share a dimension")
    }

    pub fn subgradient(&self, x: &Vector<S>) -> Result<SubgradientSet<S>, CpwlError> {
        if x.dim() != self.dim {
            return Err(CpwlError::DimensionMismatch { expected: self.dim, found: x.dim() });
        }
        let n = self.newton_polytope();
        let carrier = if x.is_zero() { n } else { n.support_face(x)? };
        Ok(SubgradientSet { carrier })
    }

    /// `F + G`, whose generators are pairwise sums.
    pub fn sum(&self, other: &CpwlFn<S>) -> Result<Self, CpwlError> {
        if other.dim != self.dim {
            return Err(CpwlError::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let p = self.newton_polytope().minkowski_sum(&other.newton_polytope())?;
        Ok(CpwlFn::support_of(&p))
    }

    /// `a F` for `a >= 0`.
    pub fn scaled(&self, a: &S) -> Self {
        CpwlFn::support_of(&self.newton_polytope().scale(a))
    }

    /// All subgradients lie in the non-negative orthant.
    pub fn has_nonneg_gradients(&self) -> bool {
        self.generators.iter().all(|g| g.is_nonneg())
    }
}

/// The order `A <= B`: every point of `A` lies below some point of `B`, and
/// every point of `B` lies above some point of `A`.
///
/// Both conditions are convex in the tested point, so only vertices are
/// checked, each by one dominance LP.
pub fn set_leq<S: Scalar>(a: &Polytope<S>, b: &Polytope<S>) -> Result<bool, GeometryError> {
    if a.dim() != b.dim() {
        return Err(GeometryError::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let up = a.vertices().iter().all(|v| dominated_by(v, b.vertices(), true));
    Ok(up && b.vertices().iter().all(|w| dominated_by(w, a.vertices(), false)))
}

/// With `below`, is there `c in conv(pts)` with `x <= c`; otherwise one with
/// `c <= x`.
fn dominated_by<S: Scalar>(x: &Vector<S>, pts: &[Vector<S>], below: bool) -> bool {
    let fits = |p: &Vector<S>| if below { x.le_componentwise(p) } else { p.le_componentwise(x) };
    if pts.iter().any(fits) {
        return true;
    }
    let n = x.dim();
    let m = pts.len();
    let slack_sign = if below { -S::one() } else { S::one() };
    let mut rows = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut row: Vec<S> = pts.iter().map(|p| p[i].clone()).collect();
        row.extend((0..n).map(|k| if k == i { slack_sign.clone() } else { S::zero() }));
        rows.push(row);
    }
    let mut ones = vec![S::one(); m];
    ones.extend(std::iter::repeat_n(S::zero(), n));
    rows.push(ones);
    let mut rhs = x.coords().to_vec();
    rhs.push(S::one());
    lp::nonneg_solution(&rows, &rhs).is_some()
}

/// Outcome of [`isotonic_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Isotonicity<S: Scalar = Rat> {
    Isotonic(OrientedEdgeSet<S>),
    Violated(Box<IsotonicWitness<S>>),
}

impl<S: Scalar> Isotonicity<S> {
    pub fn is_isotonic(&self) -> bool {
        matches!(self, Isotonicity::Isotonic(_))
    }
}

/// `x <= y` whose subgradients `{q}` and `{p}` are incomparable, built from
/// the edge `[p, q]` of `N(F)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct IsotonicWitness<S: Scalar = Rat> {
    pub p: Vector<S>,
    pub q: Vector<S>,
    pub x: Vector<S>,
    pub y: Vector<S>,
    pub grad_x: Polytope<S>,
    pub grad_y: Polytope<S>,
}

/// Decides whether `∂F` is isotonic by orienting the edges of `N(F)`.
///
/// On failure the witness pair is constructed explicitly: take `z` normal to
/// the offending edge only, a direction `v > 0` with `<v, p - q> > 0`, and
/// step to `z ± δv`.
pub fn isotonic_check<S: Scalar>(f: &CpwlFn<S>) -> Result<Isotonicity<S>, CpwlError> {
    let poly = f.newton_polytope();
    let (p, q) = match poly.positive_edges() {
        Ok(EdgeOrientation::Positive(set)) => return Ok(Isotonicity::Isotonic(set)),
        Ok(EdgeOrientation::Mixed { p, q }) => (p, q),
        Err(GeometryError::FacesUnavailable(d)) => return Err(CpwlError::FacesUnavailable(d)),
        Err(e) => return Err(e.into()),
    };
    let d = &p - &q;
    let z = edge_normal(&poly, &p, &q).expect("every edge has a relatively open normal cone");

    // v' > 0 with <v', d> = 0, then v = d + αv' > 0.
    let pos: S = d.coords().iter().filter(|c| c.is_positive()).cloned().fold(S::zero(), |a, b| a + b);
    let neg: S = d.coords().iter().filter(|c| c.is_negative()).map(|c| -c.clone()).fold(S::zero(), |a, b| a + b);
    let v_prime = d.map(|c| {
        if c.is_positive() {
            neg.clone()
        } else if c.is_negative() {
            pos.clone()
        } else {
            S::one()
        }
    });
    let worst = d.coords().iter().map(|c| c.abs()).max().unwrap_or_else(S::zero);
    let smallest = v_prime.coords().iter().min().cloned().expect("positive dimension");
    let alpha = (worst + S::one()) / smallest;
    let v = &d + &v_prime.scale(&alpha);

    let mut spread = S::zero();
    for w in poly.vertices() {
        spread = spread.max((&p - w).dot(&v).abs()).max((&q - w).dot(&v).abs());
    }
    let delta = S::one() / (S::from_int(2) * (S::one() + spread));
    let step = v.scale(&delta);
    let x = &z - &step;
    let y = &z + &step;
    let grad_x = f.subgradient(&x)?.carrier;
    let grad_y = f.subgradient(&y)?.carrier;
    debug_assert_eq!(grad_x.vertices(), &[q.clone()]);
    debug_assert_eq!(grad_y.vertices(), &[p.clone()]);
    debug_assert!(x.le_componentwise(&y) && !set_leq(&grad_x, &grad_y).unwrap_or(true));
    Ok(Isotonicity::Violated(Box::new(IsotonicWitness { p, q, x, y, grad_x, grad_y })))
}

/// A direction `z` with `<z, p> = <z, q> >= <z, w> + 1` for every other
/// vertex `w`.
fn edge_normal<S: Scalar>(poly: &Polytope<S>, p: &Vector<S>, q: &Vector<S>) -> Option<Vector<S>> {
    let n = poly.dim();
    let others: Vec<&Vector<S>> = poly.vertices().iter().filter(|w| *w != p && *w != q).collect();
    let cols = 2 * n + others.len();
    let mut rows = Vec::with_capacity(others.len() + 1);
    let mut rhs = Vec::with_capacity(others.len() + 1);
    let signed = |d: &Vector<S>| -> Vec<S> {
        let mut row: Vec<S> = d.coords().to_vec();
        row.extend(d.coords().iter().map(|c| -c.clone()));
        row.resize(cols, S::zero());
        row
    };
    rows.push(signed(&(p - q)));
    rhs.push(S::zero());
    for (k, w) in others.iter().enumerate() {
        let mut row = signed(&(p - *w));
        row[2 * n + k] = -S::one();
        rows.push(row);
        rhs.push(S::one());
    }
    let sol = lp::nonneg_solution(&rows, &rhs)?;
    Some(Vector::new((0..n).map(|i| sol[i].clone() - sol[n + i].clone()).collect()))
}

#[derive(Serialize, Deserialize)]
struct CpwlJson {
    dim: usize,
    generators: Vec<Vec<ExactValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    biases: Option<Vec<ExactValue>>,
}

fn parse_rows<S: Scalar>(rows: &[Vec<ExactValue>]) -> Result<Vec<Vector<S>>, String> {
    rows.iter()
        .map(|r| r.iter().map(|c| c.parse()).collect::<Result<Vec<S>, _>>().map(Vector::new))
        .collect()
}

fn text_rows<S: Scalar>(rows: &[Vector<S>]) -> Vec<Vec<ExactValue>> {
    rows.iter()
        .map(|v| v.coords().iter().map(|c| ExactValue::Text(c.to_string())).collect())
        .collect()
}

/// `{"dim": n, "generators": [[..], ..]}`; a `biases` field must be all zero.
impl<S: Scalar> Serialize for CpwlFn<S> {
    fn serialize<Z: Serializer>(&self, ser: Z) -> Result<Z::Ok, Z::Error> {
        CpwlJson { dim: self.dim, generators: text_rows(&self.generators), biases: None }.serialize(ser)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for CpwlFn<S> {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = CpwlJson::deserialize(de)?;
        let gens = parse_rows::<S>(&raw.generators).map_err(D::Error::custom)?;
        if let Some(b) = &raw.biases {
            for c in b {
                if !c.parse::<S>().map_err(D::Error::custom)?.is_zero() {
                    return Err(D::Error::custom("non-zero bias in a homogeneous function; load it as an affine max"));
                }
            }
        }
        CpwlFn::new(raw.dim, gens).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn v(c: &[i64]) -> Vector {
        Vector::from_ints(c)
    }

    fn square_fn() -> CpwlFn {
        CpwlFn::new(2, vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1]), v(&[0, 0])]).unwrap()
    }

    fn m3() -> CpwlFn {
        CpwlFn::new(3, vec![v(&[0, 0, 0]), v(&[0, 0, 1]), v(&[0, 1, 1]), v(&[1, 1, 1])]).unwrap()
    }

    #[test]
    fn evaluation() {
        assert_eq!(CpwlFn::max_n(2).eval(&v(&[3, 5])).unwrap(), Rat::from_int(5));
        assert_eq!(square_fn().eval(&v(&[-1, -1])).unwrap(), Rat::from_int(0));
        assert_eq!(m3().eval(&v(&[1, 1, 1])).unwrap(), Rat::from_int(3));
        assert!(matches!(square_fn().eval(&v(&[1])), Err(CpwlError::DimensionMismatch { .. })));
        assert_eq!(CpwlFn::<Rat>::new(2, vec![]), Err(CpwlError::NoGenerators));
    }

    #[test]
    fn subgradients() {
        let s = square_fn();
        assert_eq!(s.subgradient(&v(&[0, 0])).unwrap().carrier, s.newton_polytope());
        let max2 = CpwlFn::max_n(2);
        assert_eq!(max2.subgradient(&v(&[1, 2])).unwrap().carrier.vertices(), &[v(&[0, 1])]);
        assert_eq!(max2.subgradient(&v(&[1, 1])).unwrap().carrier.vertices().len(), 2);
    }

    #[test]
    fn set_order_basics() {
        let origin = Polytope::point(v(&[0, 0]));
        let sq = square_fn().newton_polytope();
        assert!(set_leq(&origin, &sq).unwrap());
        assert!(!set_leq(&sq, &origin).unwrap());
        let a = Polytope::point(v(&[1, 0]));
        let b = Polytope::point(v(&[0, 1]));
        assert!(!set_leq(&a, &b).unwrap());
        assert!(!set_leq(&b, &a).unwrap());
        // Domination by a convex combination that no vertex achieves.
        let seg = convex_hull(&[v(&[2, 0]), v(&[0, 2])], 2).unwrap();
        let diag = convex_hull(&[v(&[0, 0]), v(&[1, 1])], 2).unwrap();
        assert!(set_leq(&diag, &seg).unwrap());
        assert!(!set_leq(&Polytope::point(v(&[1, 1])), &seg).unwrap());
    }

    #[test]
    fn max2_is_not_isotonic() {
        let Isotonicity::Violated(w) = isotonic_check(&CpwlFn::<Rat>::max_n(2)).unwrap() else {
            panic!("MAX_2 has a mixed edge");
        };
        assert!(w.x.le_componentwise(&w.y));
        assert!(!set_leq(&w.grad_x, &w.grad_y).unwrap());
        // The witness pair straddles the diagonal.
        assert!((w.x[0].clone() - w.x[1].clone()).signum() != (w.y[0].clone() - w.y[1].clone()).signum());
    }

    #[test]
    fn monotone_examples_are_isotonic() {
        assert!(isotonic_check(&m3()).unwrap().is_isotonic());
        assert!(isotonic_check(&square_fn()).unwrap().is_isotonic());
    }

    #[test]
    fn max4_fails_in_dimension_four() {
        // N(MAX_4) is a simplex, so its edges are known in any dimension.
        let res = isotonic_check(&CpwlFn::<Rat>::max_n(4)).unwrap();
        let Isotonicity::Violated(w) = res else { panic!() };
        assert!(!set_leq(&w.grad_x, &w.grad_y).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let f = m3();
        let s = serde_json::to_string(&f).unwrap();
        let g: CpwlFn = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
        let biased = r#"{"dim":1,"generators":[[1]],"biases":["1/2"]}"#;
        assert!(serde_json::from_str::<CpwlFn>(biased).is_err());
    }
}
