//! Non-homogeneous convex CPWL functions: maxima of affine pieces in any
//! dimension, and knot lists on `[0, 1]`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{parse_rows, text_rows, CpwlError, CpwlFn, CpwlJson};
use crate::geometry::{convex_hull, Polytope};
use crate::scalar::Scalar;
use crate::vector::{ExactValue, Vector};
use crate::Rat;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffinePiece<S: Scalar = Rat> {
    pub grad: Vector<S>,
    pub bias: S,
}

impl<S: Scalar> AffinePiece<S> {
    pub fn eval(&self, x: &Vector<S>) -> S {
        self.grad.dot(x) + self.bias.clone()
    }
}

/// `F(x) = max_i (<g_i, x> + c_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMax<S: Scalar = Rat> {
    dim: usize,
    pieces: Vec<AffinePiece<S>>,
}

impl<S: Scalar> AffineMax<S> {
    pub fn new(dim: usize, mut pieces: Vec<AffinePiece<S>>) -> Result<Self, CpwlError> {
        if pieces.is_empty() {
            return Err(CpwlError::NoGenerators);
        }
        if let Some(p) = pieces.iter().find(|p| p.grad.dim() != dim) {
            return Err(CpwlError::DimensionMismatch { expected: dim, found: p.grad.dim() });
        }
        pieces.sort();
        pieces.dedup();
        Ok(AffineMax { dim, pieces })
    }

    pub fn from_parts(dim: usize, parts: &[(&[i64], S)]) -> Result<Self, CpwlError> {
        let pieces = parts.iter().map(|(g, c)| AffinePiece { grad: Vector::from_ints(g), bias: c.clone() }).collect();
        AffineMax::new(dim, pieces)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[AffinePiece<S>] {
        &self.pieces
    }

    pub fn eval(&self, x: &Vector<S>) -> Result<S, CpwlError> {
        if x.dim() != self.dim {
            return Err(CpwlError::DimensionMismatch { expected: self.dim, found: x.dim() });
        }
        Ok(self.pieces.iter().map(|p| p.eval(x)).max().expect("non-empty"))
    }

    /// Convex hull of the gradients of the pieces attaining the max at `x`.
    pub fn subgradient(&self, x: &Vector<S>) -> Result<Polytope<S>, CpwlError> {
        let top = self.eval(x)?;
        let grads: Vec<Vector<S>> =
            self.pieces.iter().filter(|p| p.eval(x) == top).map(|p| p.grad.clone()).collect();
        Ok(convex_hull(&grads, self.dim)?)
    }

    /// `max(<g, x> + c * t)` as a homogeneous function of `(x, t)`.
    pub fn homogenized(&self) -> CpwlFn<S> {
        let gens = self
            .pieces
            .iter()
            .map(|p| {
                let mut c = p.grad.coords().to_vec();
                c.push(p.bias.clone());
                Vector::new(c)
            })
            .collect();
        CpwlFn::new(self.dim + 1, gens).expect("non-empty")
    }

    /// Gradients pairwise comparable in the componentwise order. This makes
    /// the subgradient map isotonic: when the active piece changes from `i`
    /// at `x` to `j` at `y >= x`, a strictly smaller `g_j` would force a
    /// strict decrease of `F_j - F_i` along `y - x`.
    pub fn has_chain_gradients(&self) -> bool {
        let g: Vec<&Vector<S>> = self.pieces.iter().map(|p| &p.grad).collect();
        g.iter().enumerate().all(|(i, a)| g[i + 1..].iter().all(|b| a.le_componentwise(b) || b.le_componentwise(a)))
    }

    pub fn has_nonneg_gradients(&self) -> bool {
        self.pieces.iter().all(|p| p.grad.is_nonneg())
    }

    /// The restriction `t -> F(base + t * dir)` as a function of one variable.
    pub fn restrict(&self, base: &Vector<S>, dir: &Vector<S>) -> Vec<(S, S)> {
        self.pieces.iter().map(|p| (p.grad.dot(dir), p.eval(base))).collect()
    }
}

impl<S: Scalar> From<&CpwlFn<S>> for AffineMax<S> {
    fn from(f: &CpwlFn<S>) -> Self {
        let pieces = f.generators().iter().map(|g| AffinePiece { grad: g.clone(), bias: S::zero() }).collect();
        AffineMax::new(f.dim(), pieces).expect("non-empty")
    }
}

/// Same schema as a homogeneous function, with an optional `biases` list.
impl<S: Scalar> Serialize for AffineMax<S> {
    fn serialize<Z: Serializer>(&self, ser: Z) -> Result<Z::Ok, Z::Error> {
        let grads: Vec<Vector<S>> = self.pieces.iter().map(|p| p.grad.clone()).collect();
        let biases = self.pieces.iter().map(|p| ExactValue::Text(p.bias.to_string())).collect();
        CpwlJson { dim: self.dim, generators: text_rows(&grads), biases: Some(biases) }.serialize(ser)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for AffineMax<S> {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = CpwlJson::deserialize(de)?;
        let grads = parse_rows::<S>(&raw.generators).map_err(D::Error::custom)?;
        let biases: Vec<S> = match &raw.biases {
            Some(b) => b.iter().map(|c| c.parse()).collect::<Result<_, _>>().map_err(D::Error::custom)?,
            None => vec![S::zero(); grads.len()],
        };
        if biases.len() != grads.len() {
            return Err(D::Error::custom("biases and generators differ in length"));
        }
        let pieces = grads.into_iter().zip(biases).map(|(grad, bias)| AffinePiece { grad, bias }).collect();
        AffineMax::new(raw.dim, pieces).map_err(D::Error::custom)
    }
}

/// A continuous piecewise-affine function on `[0, 1]` given by its knots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pwl1d<S: Scalar = Rat> {
    knots: Vec<(S, S)>,
}

impl<S: Scalar> Pwl1d<S> {
    /// Knots `(x, f(x))` with `x` strictly increasing from 0 to 1.
    pub fn from_knots(knots: Vec<(S, S)>) -> Result<Self, CpwlError> {
        let ok = knots.len() >= 2
            && knots[0].0.is_zero()
            && knots.last().is_some_and(|k| k.0.is_one())
            && knots.windows(2).all(|w| w[0].0 < w[1].0);
        if !ok {
            return Err(CpwlError::BadKnots);
        }
        Ok(Pwl1d { knots })
    }

    /// Upper envelope of the lines `slope * t + intercept` on `[0, 1]`.
    pub fn from_max_affine(lines: &[(S, S)]) -> Result<Self, CpwlError> {
        if lines.is_empty() {
            return Err(CpwlError::NoGenerators);
        }
        let mut xs = vec![S::zero(), S::one()];
        for (i, (a1, b1)) in lines.iter().enumerate() {
            for (a2, b2) in &lines[i + 1..] {
                if a1 != a2 {
                    let t = (b2.clone() - b1.clone()) / (a1.clone() - a2.clone());
                    if t.is_positive() && t < S::one() {
                        xs.push(t);
                    }
                }
            }
        }
        xs.sort();
        xs.dedup();
        let env = |t: &S| lines.iter().map(|(a, b)| a.clone() * t.clone() + b.clone()).max().expect("non-empty");
        let mut knots: Vec<(S, S)> = Vec::with_capacity(xs.len());
        for t in xs {
            let y = env(&t);
            // Drop knots interior to a straight run.
            if knots.len() >= 2 {
                let (x0, y0) = &knots[knots.len() - 2];
                let (x1, y1) = &knots[knots.len() - 1];
                let s1 = (y1.clone() - y0.clone()) / (x1.clone() - x0.clone());
                let s2 = (y.clone() - y1.clone()) / (t.clone() - x1.clone());
                if s1 == s2 {
                    knots.pop();
                }
            }
            knots.push((t, y));
        }
        Pwl1d::from_knots(knots)
    }

    pub fn knots(&self) -> &[(S, S)] {
        &self.knots
    }

    pub fn slopes(&self) -> Vec<S> {
        self.knots
            .windows(2)
            .map(|w| (w[1].1.clone() - w[0].1.clone()) / (w[1].0.clone() - w[0].0.clone()))
            .collect()
    }

    pub fn is_convex(&self) -> bool {
        self.slopes().windows(2).all(|w| w[0] <= w[1])
    }

    /// `∫_0^1 |f(t) - (a t + b)| dt`, exactly.
    pub fn abs_diff_integral(&self, a: &S, b: &S) -> S {
        let two = S::from_int(2);
        let mut total = S::zero();
        for w in self.knots.windows(2) {
            let (u, fu) = &w[0];
            let (v, fv) = &w[1];
            let du = fu.clone() - (a.clone() * u.clone() + b.clone());
            let dv = fv.clone() - (a.clone() * v.clone() + b.clone());
            let len = v.clone() - u.clone();
            if du.signum() * dv.signum() >= S::zero() {
                total = total + (du + dv).abs() * len / two.clone();
            } else {
                // Split at the root; each side is a triangle.
                let root = len.clone() * du.abs() / (du.abs() + dv.abs());
                total = total + du.abs() * root.clone() / two.clone() + dv.abs() * (len - root) / two.clone();
            }
        }
        total
    }
}

/// Points whose slopes meet the two one-sided bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct SlopeWitness<S: Scalar = Rat> {
    #[serde(with = "crate::vector::exact")]
    pub x: S,
    #[serde(with = "crate::vector::exact")]
    pub g_x: S,
    #[serde(with = "crate::vector::exact")]
    pub x_prime: S,
    #[serde(with = "crate::vector::exact")]
    pub g_x_prime: S,
    #[serde(with = "crate::vector::exact")]
    pub integral: S,
    /// `8 * integral`.
    #[serde(with = "crate::vector::exact")]
    pub bound: S,
    #[serde(with = "crate::vector::exact")]
    pub a: S,
}

impl<S: Scalar> SlopeWitness<S> {
    /// `g_x <= a + bound` and `g_x' >= a - bound`.
    pub fn holds(&self) -> bool {
        self.g_x <= self.a.clone() + self.bound.clone() && self.g_x_prime >= self.a.clone() - self.bound.clone()
    }
}

/// For convex `f` on `[0, 1]` and the line `a t + b`, finds `x` with a slope
/// at most `a + 8I` and `x'` with a slope at least `a - 8I`, where `I` is the
/// mean absolute gap. The returned points are midpoints of the flattest and
/// steepest pieces, which are the best candidates for either bound.
pub fn slope_witness_1d<S: Scalar>(f: &Pwl1d<S>, a: &S, b: &S) -> Result<SlopeWitness<S>, CpwlError> {
    if !f.is_convex() {
        return Err(CpwlError::NonConvex);
    }
    let slopes = f.slopes();
    let integral = f.abs_diff_integral(a, b);
    let bound = S::from_int(8) * integral.clone();
    let mid = |k: usize| (f.knots[k].0.clone() + f.knots[k + 1].0.clone()) / S::from_int(2);
    // Convexity puts the flattest piece first and the steepest last.
    let last = slopes.len() - 1;
    Ok(SlopeWitness {
        x: mid(0),
        g_x: slopes[0].clone(),
        x_prime: mid(last),
        g_x_prime: slopes[last].clone(),
        integral,
        bound,
        a: a.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rat {
        Rat::from_ratio(n, d)
    }

    #[test]
    fn affine_max_eval_and_subgradient() {
        let f = AffineMax::from_parts(2, &[(&[1, 0], q(0, 1)), (&[0, 1], q(0, 1)), (&[0, 0], q(1, 1))]).unwrap();
        assert_eq!(f.eval(&Vector::from_ints(&[3, 2])).unwrap(), q(3, 1));
        assert_eq!(f.eval(&Vector::from_ints(&[0, 0])).unwrap(), q(1, 1));
        let tie = f.subgradient(&Vector::from_ints(&[1, 1])).unwrap();
        assert_eq!(tie.vertices().len(), 3);
        assert!(!f.has_chain_gradients());
        let g = AffineMax::from_parts(2, &[(&[0, 0], q(0, 1)), (&[1, 1], q(-1, 2)), (&[2, 1], q(-1, 1))]).unwrap();
        assert!(g.has_chain_gradients());
    }

    #[test]
    fn knot_validation() {
        assert_eq!(Pwl1d::from_knots(vec![(q(0, 1), q(0, 1))]), Err(CpwlError::BadKnots));
        assert_eq!(Pwl1d::from_knots(vec![(q(0, 1), q(0, 1)), (q(1, 2), q(0, 1))]), Err(CpwlError::BadKnots));
    }

    #[test]
    fn envelope_of_lines() {
        // |t - 1/2| = max(t - 1/2, 1/2 - t)
        let f = Pwl1d::from_max_affine(&[(q(1, 1), q(-1, 2)), (q(-1, 1), q(1, 2))]).unwrap();
        assert_eq!(f.knots().len(), 3);
        assert_eq!(f.slopes(), vec![q(-1, 1), q(1, 1)]);
        // A redundant line does not add knots.
        let g = Pwl1d::from_max_affine(&[(q(1, 1), q(0, 1)), (q(1, 2), q(-5, 1))]).unwrap();
        assert_eq!(g.knots().len(), 2);
    }

    #[test]
    fn exact_line_has_zero_gap() {
        let f = Pwl1d::from_max_affine(&[(q(3, 1), q(1, 1))]).unwrap();
        let w = slope_witness_1d(&f, &q(3, 1), &q(1, 1)).unwrap();
        assert_eq!(w.integral, q(0, 1));
        assert_eq!(w.g_x, q(3, 1));
        assert!(w.holds());
    }

    #[test]
    fn absolute_value_example() {
        let f = Pwl1d::from_max_affine(&[(q(1, 1), q(-1, 2)), (q(-1, 1), q(1, 2))]).unwrap();
        let w = slope_witness_1d(&f, &q(0, 1), &q(1, 4)).unwrap();
        assert_eq!(w.integral, q(1, 8));
        assert!(w.holds());
        assert!(w.g_x >= q(-1, 1) && w.g_x_prime <= q(1, 1));
    }

    #[test]
    fn non_convex_rejected() {
        let f = Pwl1d::from_knots(vec![(q(0, 1), q(0, 1)), (q(1, 2), q(1, 1)), (q(1, 1), q(0, 1))]).unwrap();
        assert_eq!(slope_witness_1d(&f, &q(0, 1), &q(0, 1)), Err(CpwlError::NonConvex));
    }

    #[test]
    fn json_with_biases() {
        let f = AffineMax::from_parts(2, &[(&[1, 0], q(1, 2)), (&[0, 1], q(0, 1))]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        let g: AffineMax = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
        let plain: AffineMax = serde_json::from_str(r#"{"dim":2,"generators":[[1,0],[0,1]]}"#).unwrap();
        assert_eq!(plain, AffineMax::from(&CpwlFn::max_n(2)));
    }
}
