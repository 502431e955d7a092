//! Exact integration of `|F - G|` for planar affine maxima.
//!
//! The box is cut into the linear regions of `F`, each of those into the
//! regions of `G`, and each overlay cell along the zero line of `F - G`.
//! Every piece is then a convex polygon carrying an affine integrand.

use super::{AffineMax, AffinePiece, CpwlError};
use crate::scalar::Scalar;
use crate::Rat;

/// A convex polygon as a cycle of points.
pub type Polygon<S = Rat> = Vec<(S, S)>;

/// `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rect<S: Scalar = Rat> {
    pub x0: S,
    pub x1: S,
    pub y0: S,
    pub y1: S,
}

impl<S: Scalar> Rect<S> {
    pub fn new(x0: S, x1: S, y0: S, y1: S) -> Self {
        Rect { x0, x1, y0, y1 }
    }

    pub fn unit() -> Self {
        Rect::new(S::zero(), S::one(), S::zero(), S::one())
    }

    /// `[lo, hi]^2`.
    pub fn square(lo: S, hi: S) -> Self {
        Rect::new(lo.clone(), hi.clone(), lo, hi)
    }

    pub fn area(&self) -> S {
        (self.x1.clone() - self.x0.clone()) * (self.y1.clone() - self.y0.clone())
    }

    pub fn polygon(&self) -> Polygon<S> {
        vec![
            (self.x0.clone(), self.y0.clone()),
            (self.x1.clone(), self.y0.clone()),
            (self.x1.clone(), self.y1.clone()),
            (self.x0.clone(), self.y1.clone()),
        ]
    }
}

/// The affine function `a x + b y + c`.
#[derive(Debug, Clone)]
struct Affine2<S> {
    a: S,
    b: S,
    c: S,
}

impl<S: Scalar> Affine2<S> {
    fn of(p: &AffinePiece<S>) -> Self {
        Affine2 { a: p.grad[0].clone(), b: p.grad[1].clone(), c: p.bias.clone() }
    }

    fn at(&self, p: &(S, S)) -> S {
        self.a.clone() * p.0.clone() + self.b.clone() * p.1.clone() + self.c.clone()
    }

    fn minus(&self, o: &Self) -> Self {
        Affine2 { a: self.a.clone() - o.a.clone(), b: self.b.clone() - o.b.clone(), c: self.c.clone() - o.c.clone() }
    }

    fn neg(&self) -> Self {
        Affine2 { a: -self.a.clone(), b: -self.b.clone(), c: -self.c.clone() }
    }
}

/// Keeps the part of `poly` where `h >= 0`.
fn clip<S: Scalar>(poly: &Polygon<S>, h: &Affine2<S>) -> Polygon<S> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let p = &poly[i];
        let q = &poly[(i + 1) % n];
        let (hp, hq) = (h.at(p), h.at(q));
        if !hp.is_negative() {
            out.push(p.clone());
        }
        if (hp.is_negative() && hq.is_positive()) || (hp.is_positive() && hq.is_negative()) {
            let t = hp.clone() / (hp - hq);
            out.push((
                p.0.clone() + t.clone() * (q.0.clone() - p.0.clone()),
                p.1.clone() + t * (q.1.clone() - p.1.clone()),
            ));
        }
    }
    out.dedup();
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

/// Fan triangles from the lexicographically smallest vertex.
fn fan<S: Scalar>(poly: &Polygon<S>) -> Vec<[(S, S); 3]> {
    if poly.len() < 3 {
        return Vec::new();
    }
    let start = (0..poly.len()).min_by(|&i, &j| poly[i].cmp(&poly[j])).expect("non-empty");
    let n = poly.len();
    let o = poly[start].clone();
    (1..n - 1)
        .map(|k| [o.clone(), poly[(start + k) % n].clone(), poly[(start + k + 1) % n].clone()])
        .collect()
}

fn tri_area<S: Scalar>(t: &[(S, S); 3]) -> S {
    let [a, b, c] = t;
    let cross = (b.0.clone() - a.0.clone()) * (c.1.clone() - a.1.clone())
        - (b.1.clone() - a.1.clone()) * (c.0.clone() - a.0.clone());
    cross.abs() / S::from_int(2)
}

pub fn polygon_area<S: Scalar>(poly: &Polygon<S>) -> S {
    fan(poly).iter().map(tri_area).fold(S::zero(), |a, b| a + b)
}

/// `∫_poly (a x + b y + c)`.
pub fn integrate_affine<S: Scalar>(poly: &Polygon<S>, a: &S, b: &S, c: &S) -> S {
    let h = Affine2 { a: a.clone(), b: b.clone(), c: c.clone() };
    fan(poly).iter().fold(S::zero(), |acc, t| {
        let mean = (h.at(&t[0]) + h.at(&t[1]) + h.at(&t[2])) / S::from_int(3);
        acc + tri_area(t) * mean
    })
}

/// Linear regions of `f` inside `region`, with the active piece.
fn regions<S: Scalar>(f: &AffineMax<S>, region: &Polygon<S>) -> Vec<(Polygon<S>, Affine2<S>)> {
    let lines: Vec<Affine2<S>> = f.pieces().iter().map(Affine2::of).collect();
    let mut out = Vec::new();
    for (i, li) in lines.iter().enumerate() {
        let mut cell = region.clone();
        for (j, lj) in lines.iter().enumerate() {
            if i != j && cell.len() >= 3 {
                cell = clip(&cell, &li.minus(lj));
            }
        }
        if cell.len() >= 3 && !polygon_area(&cell).is_zero() {
            out.push((cell, li.clone()));
        }
    }
    out
}

/// Mean of `|F - G|` over `rect`, exactly.
pub fn integrate_abs_diff<S: Scalar>(f: &AffineMax<S>, g: &AffineMax<S>, rect: &Rect<S>) -> Result<S, CpwlError> {
    for h in [f, g] {
        if h.dim() != 2 {
            return Err(CpwlError::DimensionMismatch { expected: 2, found: h.dim() });
        }
    }
    if !rect.area().is_positive() {
        return Err(CpwlError::EmptyBox);
    }
    let mut total = S::zero();
    for (cell_f, lf) in regions(f, &rect.polygon()) {
        for (cell, lg) in regions(g, &cell_f) {
            let d = lf.minus(&lg);
            if d.a.is_zero() && d.b.is_zero() && d.c.is_zero() {
                continue;
            }
            let pos = clip(&cell, &d);
            let neg_d = d.neg();
            let neg = clip(&cell, &neg_d);
            total = total + integrate_affine(&pos, &d.a, &d.b, &d.c) + integrate_affine(&neg, &neg_d.a, &neg_d.b, &neg_d.c);
        }
    }
    Ok(total / rect.area())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpwl::CpwlFn;

    fn q(n: i64, d: i64) -> Rat {
        Rat::from_ratio(n, d)
    }

    fn max2() -> AffineMax {
        AffineMax::from(&CpwlFn::max_n(2))
    }

    fn zero() -> AffineMax {
        AffineMax::from_parts(2, &[(&[0, 0], q(0, 1))]).unwrap()
    }

    #[test]
    fn identical_functions_integrate_to_zero() {
        assert_eq!(integrate_abs_diff(&max2(), &max2(), &Rect::unit()).unwrap(), q(0, 1));
    }

    #[test]
    fn mean_of_max_on_unit_square() {
        // ∫∫ max(x, y) = 2 ∫_0^1 x^2 dx
        assert_eq!(integrate_abs_diff(&zero(), &max2(), &Rect::unit()).unwrap(), q(2, 3));
    }

    #[test]
    fn max_versus_mean() {
        let mean = AffineMax::new(2, vec![AffinePiece { grad: crate::Vector::new(vec![q(1, 2), q(1, 2)]), bias: q(0, 1) }]).unwrap();
        // |max - mean| = |x - y| / 2, and E|x - y| = 1/3.
        assert_eq!(integrate_abs_diff(&mean, &max2(), &Rect::unit()).unwrap(), q(1, 6));
    }

    #[test]
    fn sign_change_inside_a_cell() {
        let f = AffineMax::from_parts(2, &[(&[1, 0], q(-1, 2))]).unwrap();
        // E|x - 1/2| = 1/4
        assert_eq!(integrate_abs_diff(&f, &zero(), &Rect::unit()).unwrap(), q(1, 4));
        assert_eq!(integrate_abs_diff(&zero(), &f, &Rect::unit()).unwrap(), q(1, 4));
    }

    #[test]
    fn degenerate_box_rejected() {
        let r = Rect::new(q(0, 1), q(0, 1), q(0, 1), q(1, 1));
        assert_eq!(integrate_abs_diff(&zero(), &max2(), &r), Err(CpwlError::EmptyBox));
    }

    #[test]
    fn polygon_integrals() {
        let sq = Rect::<Rat>::unit().polygon();
        assert_eq!(polygon_area(&sq), q(1, 1));
        assert_eq!(integrate_affine(&sq, &q(1, 1), &q(0, 1), &q(0, 1)), q(1, 2));
        let half = clip(&sq, &Affine2 { a: q(-1, 1), b: q(1, 1), c: q(0, 1) });
        assert_eq!(polygon_area(&half), q(1, 2));
    }
}
