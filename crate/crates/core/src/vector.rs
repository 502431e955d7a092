//! Exact coordinate vectors.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::Scalar;
use crate::Rat;

/// A point or direction in `S^n`. Ordering is lexicographic, which is the
/// canonical vertex order used throughout the crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vector<S = Rat>(Vec<S>);

impl<S: Scalar> Vector<S> {
    pub fn new(coords: Vec<S>) -> Self {
        Vector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![S::zero(); dim])
    }

    /// The standard basis vector `e_i` (0-based).
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = S::one();
        v
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Vector(coords.iter().map(|&c| S::from_int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<S> {
        self.0
    }

    pub fn dot(&self, other: &Self) -> S {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn scale(&self, a: &S) -> Self {
        Vector(self.0.iter().map(|c| c.clone() * a.clone()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// Every coordinate `>= 0`.
    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|c| !c.is_negative())
    }

    /// Componentwise `self <= other`.
    pub fn le_componentwise(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Vector(self.0.iter().map(f).collect())
    }

    /// Keeps the coordinates listed in `keep`, in that order.
    pub fn select(&self, keep: &[usize]) -> Self {
        Vector(keep.iter().map(|&i| self.0[i].clone()).collect())
    }
}

impl<S> Index<usize> for Vector<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

impl<S: Scalar> Add for &Vector<S> {
    type Output = Vector<S>;
    fn add(self, rhs: Self) -> Vector<S> {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a.clone() + b.clone()).collect())
    }
}

impl<S: Scalar> Sub for &Vector<S> {
    type Output = Vector<S>;
    fn sub(self, rhs: Self) -> Vector<S> {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a.clone() - b.clone()).collect())
    }
}

impl<S: Scalar> Neg for &Vector<S> {
    type Output = Vector<S>;
    fn neg(self) -> Vector<S> {
        Vector(self.0.iter().map(|a| -a.clone()).collect())
    }
}

impl<S: Scalar> fmt::Debug for Vector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<S: Scalar> fmt::Display for Vector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Serialized as a list of `"p/q"` strings.
impl<S: Scalar> Serialize for Vector<S> {
    fn serialize<Z: Serializer>(&self, ser: Z) -> Result<Z::Ok, Z::Error> {
        let strings: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        strings.serialize(ser)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for Vector<S> {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = Vec::<ExactValue>::deserialize(de)?;
        raw.into_iter()
            .map(|v| v.parse::<S>().map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()
            .map(Vector)
    }
}

/// A rational on the wire: either a `"p/q"` string or a bare JSON integer.
#[derive(Serialize, Deserialize, Clone)]
#[serde(untagged)]
pub(crate) enum ExactValue {
    Text(String),
    Int(i64),
}

impl ExactValue {
    pub(crate) fn parse<S: Scalar>(&self) -> Result<S, String> {
        match self {
            ExactValue::Text(s) => S::parse_exact(s).ok_or_else(|| format!("not a rational: {s:?}")),
            ExactValue::Int(i) => Ok(S::from_int(*i)),
        }
    }
}

/// serde helpers for a single rational field.
pub(crate) mod exact {
    use super::*;

    pub fn serialize<S: Scalar, Z: Serializer>(v: &S, ser: Z) -> Result<Z::Ok, Z::Error> {
        ser.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, S: Scalar, D: Deserializer<'de>>(de: D) -> Result<S, D::Error> {
        ExactValue::deserialize(de)?.parse().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_order() {
        let a: Vector = Vector::from_ints(&[0, 5]);
        let b: Vector = Vector::from_ints(&[1, 0]);
        assert!(a < b);
    }

    #[test]
    fn json_uses_rational_strings() {
        let v: Vector = Vector::new(vec![Rat::from_ratio(1, 2), Rat::from_int(3)]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["1/2","3"]"#);
        let back: Vector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        let ints: Vector = serde_json::from_str("[1, -2]").unwrap();
        assert_eq!(ints, Vector::from_ints(&[1, -2]));
    }
}
