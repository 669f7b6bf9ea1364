//! Vertex coordinates for binary painted trees and the facet hyperplanes.
//!
//! Trivalent node `i` (1-based) sits between leaves `i - 1` and `i`. Its
//! coordinate is `L_i R_i`, the product of the leaf-weight sums of its left
//! and right subtrees, further scaled by `q` when the node is unpainted.
//! Color-change nodes contribute nothing.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::painted_trees::{Branch, BinaryPaintedTree, FacetTree};
use crate::rational::{self, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RealizationError {
    #[error("q = {0} must lie strictly between 0 and 1")]
    ParameterOutOfRange(String),
    #[error("boundary parameter q = {0} must be 0 or 1")]
    NotBoundary(String),
    #[error("weight {index} is {value}; weights must be positive integers")]
    NonPositiveWeight { index: usize, value: i64 },
    #[error("{got} weights given for {expected} leaves")]
    WeightCount { expected: usize, got: usize },
}

/// Positive integer leaf weights `w_0, …, w_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Weights(Vec<i64>);

impl Weights {
    pub fn new(values: Vec<i64>) -> Result<Self, RealizationError> {
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, &w)| w <= 0) {
            return Err(RealizationError::NonPositiveWeight { index, value });
        }
        Ok(Weights(values))
    }

    pub fn unit(n: usize) -> Self {
        Weights(vec![1; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&w| w == 1)
    }

    /// `sum_{i<j} w_i w_j` over the leaves `range`.
    pub fn pair_sum(&self, range: std::ops::Range<usize>) -> Q {
        let w = &self.0[range];
        let total: i64 = w.iter().sum();
        let squares: i64 = w.iter().map(|x| x * x).sum();
        Q::from_integer(BigInt::from((total * total - squares) / 2))
    }

    fn check_len(&self, n: usize) -> Result<(), RealizationError> {
        if self.0.len() != n {
            return Err(RealizationError::WeightCount { expected: n, got: self.0.len() });
        }
        Ok(())
    }
}

impl TryFrom<Vec<i64>> for Weights {
    type Error = RealizationError;
    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        Weights::new(v)
    }
}

impl From<Weights> for Vec<i64> {
    fn from(w: Weights) -> Self {
        w.0
    }
}

impl fmt::Display for Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|w| w.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// A point of `R^{n-1}` with exact coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RationalPoint(#[serde(with = "rational::serde_q_vec")] pub Vec<Q>);

impl RationalPoint {
    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn sum(&self) -> Q {
        self.0.iter().fold(Q::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", rational::render_all(&self.0).join(", "))
    }
}

pub fn default_q() -> Q {
    rational::ratio(1, 2)
}

fn check_open(q: &Q) -> Result<(), RealizationError> {
    if *q <= Q::zero() || *q >= Q::one() {
        return Err(RealizationError::ParameterOutOfRange(rational::render(q)));
    }
    Ok(())
}

fn node_coordinates(tree: &BinaryPaintedTree, q: &Q, w: &Weights) -> RationalPoint {
    // Returns the weight sum of the branch; writes x_i for every trivalent node.
    fn walk(b: &Branch, first: usize, q: &Q, w: &[i64], out: &mut [Q]) -> i64 {
        match b.children() {
            [] => w[first],
            [only] => walk(only, first, q, w, out),
            [left, right] => {
                let split = first + left.leaf_count();
                let l = walk(left, first, q, w, out);
                let r = walk(right, split, q, w, out);
                let mut x = Q::from_integer(BigInt::from(l * r));
                if !b.is_painted() {
                    x *= q;
                }
                out[split - 1] = x;
                l + r
            }
            _ => unreachable!("binary trees have at most two branches per node"),
        }
    }
    let n = tree.leaf_count();
    let mut out = vec![Q::zero(); n.saturating_sub(1)];
    walk(tree.tree().root(), 0, q, w.values(), &mut out);
    RationalPoint(out)
}

/// `M_q(t)` with unit weights.
pub fn coordinates(tree: &BinaryPaintedTree, q: &Q) -> Result<RationalPoint, RealizationError> {
    coordinates_weighted(tree, q, &Weights::unit(tree.leaf_count()))
}

/// `M^w_q(t)`: `x_i = q L_i R_i` at unpainted nodes, `L_i R_i` at painted ones.
pub fn coordinates_weighted(tree: &BinaryPaintedTree, q: &Q, w: &Weights) -> Result<RationalPoint, RealizationError> {
    check_open(q)?;
    w.check_len(tree.leaf_count())?;
    Ok(node_coordinates(tree, q, w))
}

/// The same formula at the closed ends `q = 0` or `q = 1`, where distinct
/// trees can share a point.
pub fn coordinates_at_boundary(tree: &BinaryPaintedTree, q: &Q, w: &Weights) -> Result<RationalPoint, RealizationError> {
    if !(q.is_zero() || q.is_one()) {
        return Err(RealizationError::NotBoundary(rational::render(q)));
    }
    w.check_len(tree.leaf_count())?;
    Ok(node_coordinates(tree, q, w))
}

/// Which side of a facet hyperplane the polytope lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    /// All points satisfy `coeffs . x >= rhs` (lower facets).
    BoundsBelow,
    /// All points satisfy `coeffs . x <= rhs` (upper facets).
    BoundsAbove,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hyperplane {
    #[serde(with = "rational::serde_q_vec")]
    pub coeffs: Vec<Q>,
    #[serde(with = "rational::serde_q")]
    pub rhs: Q,
    pub sense: Sense,
    pub facet: FacetTree,
}

impl Hyperplane {
    pub fn lhs(&self, p: &RationalPoint) -> Q {
        self.coeffs
            .iter()
            .zip(p.coords())
            .filter(|(c, _)| !c.is_zero())
            .fold(Q::zero(), |acc, (c, x)| acc + c * x)
    }

    pub fn contains(&self, p: &RationalPoint) -> bool {
        self.lhs(p) == self.rhs
    }

    /// True when `p` is on the polytope side (or on the hyperplane).
    pub fn admits(&self, p: &RationalPoint) -> bool {
        let lhs = self.lhs(p);
        match self.sense {
            Sense::BoundsBelow => lhs >= self.rhs,
            Sense::BoundsAbove => lhs <= self.rhs,
        }
    }

    /// Indices of the coordinates with coefficient one (1-based, like `x_i`).
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Equation in `<=` form: `(coeffs, rhs)` negated for lower facets.
    pub fn as_upper_inequality(&self) -> (Vec<Q>, Q) {
        match self.sense {
            Sense::BoundsAbove => (self.coeffs.clone(), self.rhs.clone()),
            Sense::BoundsBelow => (self.coeffs.iter().map(|c| -c).collect(), -self.rhs.clone()),
        }
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.support().iter().map(|i| format!("x{i}")).collect();
        let op = match self.sense {
            Sense::BoundsBelow => ">=",
            Sense::BoundsAbove => "<=",
        };
        write!(f, "{}: {} {op} {}", self.facet, terms.join(" + "), rational::render(&self.rhs))
    }
}

/// The bounding hyperplane of a facet.
///
/// `l(k,s)`: `x_k + … + x_{k+s-2} = q sum_{k-1 <= i < j <= k+s-2} w_i w_j`.
/// `u(t; r)`: `x_{r_1} + x_{r_1+r_2} + … + x_{r_1+…+r_{t-1}} = sum_{i<j} R_i R_j`
/// with `R_i` the weight of block `i`.
pub fn hyperplane(f: &FacetTree, q: &Q, w: &Weights) -> Result<Hyperplane, RealizationError> {
    let n = f.leaf_count();
    w.check_len(n)?;
    let mut coeffs = vec![Q::zero(); n - 1];
    let (rhs, sense) = match f {
        FacetTree::Lower { k, s, .. } => {
            for c in &mut coeffs[k - 1..k + s - 2] {
                *c = Q::one();
            }
            (q * w.pair_sum(k - 1..k + s - 1), Sense::BoundsBelow)
        }
        FacetTree::Upper { parts } => {
            let mut blocks = Vec::with_capacity(parts.len());
            let mut start = 0;
            for (i, &r) in parts.iter().enumerate() {
                blocks.push(w.values()[start..start + r].iter().sum::<i64>());
                start += r;
                if i + 1 < parts.len() {
                    coeffs[start - 1] = Q::one();
                }
            }
            let total: i64 = blocks.iter().sum();
            let squares: i64 = blocks.iter().map(|b| b * b).sum();
            (Q::from_integer(BigInt::from((total * total - squares) / 2)), Sense::BoundsAbove)
        }
    };
    Ok(Hyperplane { coeffs, rhs, sense, facet: f.clone() })
}

/// Loday's associahedron vertices for weighted leaves, generated directly by
/// splitting leaf ranges (no painted trees involved).
pub fn loday_vertices(w: &Weights) -> Vec<RationalPoint> {
    fn points(w: &[i64], first: usize, n: usize) -> Vec<Vec<(usize, i64)>> {
        if n == 1 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for a in 1..n {
            let l: i64 = w[first..first + a].iter().sum();
            let r: i64 = w[first + a..first + n].iter().sum();
            for left in points(w, first, a) {
                for right in points(w, first + a, n - a) {
                    let mut p = left.clone();
                    p.push((first + a, l * r));
                    p.extend(right.iter().copied());
                    out.push(p);
                }
            }
        }
        out
    }
    let n = w.len();
    if n == 0 {
        return Vec::new();
    }
    points(w.values(), 0, n)
        .into_iter()
        .map(|entries| {
            let mut coords = vec![Q::zero(); n - 1];
            for (i, v) in entries {
                coords[i - 1] = Q::from_integer(BigInt::from(v));
            }
            RationalPoint(coords)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::painted_trees::enumerate_binary;
    use crate::rational::{int, ratio};

    fn b(s: &str) -> BinaryPaintedTree {
        s.parse().unwrap()
    }

    fn pt(v: &[Q]) -> RationalPoint {
        RationalPoint(v.to_vec())
    }

    #[test]
    fn four_leaf_example() {
        // unpainted node over leaves 0,1 and painted node over leaves 2,3,
        // joined by a painted root node
        let t = b("=(=((x x)) =(=(x) =(x)))");
        let q = ratio(1, 3);
        assert_eq!(coordinates(&t, &q).unwrap(), pt(&[q.clone(), int(4), int(1)]));
        let w = Weights::new(vec![2, 3, 5, 7]).unwrap();
        // (q w0 w1, (w0+w1)(w2+w3), w2 w3)
        assert_eq!(
            coordinates_weighted(&t, &q, &w).unwrap(),
            pt(&[ratio(6, 3), int(60), int(35)])
        );
    }

    #[test]
    fn three_leaf_points() {
        let q = ratio(1, 2);
        let mut got: Vec<RationalPoint> =
            enumerate_binary(3).iter().map(|t| coordinates(t, &q).unwrap()).collect();
        got.sort();
        let mut expected = vec![
            pt(&[int(1), int(2)]),
            pt(&[int(2), int(1)]),
            pt(&[ratio(1, 2), int(2)]),
            pt(&[int(2), ratio(1, 2)]),
            pt(&[ratio(1, 2), int(1)]),
            pt(&[int(1), ratio(1, 2)]),
        ];
        expected.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn two_leaf_points() {
        let q = ratio(1, 2);
        assert_eq!(coordinates(&b("=(=(x) =(x))"), &q).unwrap(), pt(&[int(1)]));
        assert_eq!(coordinates(&b("=((x x))"), &q).unwrap(), pt(std::slice::from_ref(&q)));
        assert_eq!(coordinates(&b("=(x)"), &q).unwrap(), pt(&[]));
    }

    #[test]
    fn parameter_and_weight_errors() {
        let t = b("=((x x))");
        assert!(matches!(coordinates(&t, &int(1)), Err(RealizationError::ParameterOutOfRange(_))));
        assert!(matches!(coordinates(&t, &int(0)), Err(RealizationError::ParameterOutOfRange(_))));
        assert!(matches!(
            Weights::new(vec![1, 0]),
            Err(RealizationError::NonPositiveWeight { index: 1, value: 0 })
        ));
        let w = Weights::unit(3);
        assert!(matches!(
            coordinates_weighted(&t, &ratio(1, 2), &w),
            Err(RealizationError::WeightCount { expected: 2, got: 3 })
        ));
        assert!(coordinates_at_boundary(&t, &ratio(1, 2), &Weights::unit(2)).is_err());
        assert_eq!(coordinates_at_boundary(&t, &int(1), &Weights::unit(2)).unwrap(), pt(&[int(1)]));
    }

    #[test]
    fn hyperplane_examples() {
        let q = ratio(1, 2);
        let h = hyperplane(&FacetTree::lower(1, 3, 3).unwrap(), &q, &Weights::unit(3)).unwrap();
        assert_eq!(h.coeffs, vec![int(1), int(1)]);
        assert_eq!(h.rhs, ratio(3, 2));
        assert_eq!(h.sense, Sense::BoundsBelow);

        let h = hyperplane(&FacetTree::upper(vec![1; 5]).unwrap(), &q, &Weights::unit(5)).unwrap();
        assert_eq!(h.coeffs, vec![int(1); 4]);
        assert_eq!(h.rhs, int(10));
        assert_eq!(h.sense, Sense::BoundsAbove);

        let h = hyperplane(&FacetTree::upper(vec![2, 2]).unwrap(), &q, &Weights::unit(4)).unwrap();
        assert_eq!(h.coeffs, vec![int(0), int(1), int(0)]);
        assert_eq!(h.rhs, int(4));
        assert_eq!(h.to_string(), "u(2;2,2): x2 <= 4");

        // unit-weight reductions: (q/2) s(s-1) and (n(n-1) - sum r_i(r_i-1)) / 2
        let h = hyperplane(&FacetTree::lower(2, 3, 5).unwrap(), &q, &Weights::unit(5)).unwrap();
        assert_eq!(h.support(), vec![2, 3]);
        assert_eq!(h.rhs, ratio(3, 2));
        let h = hyperplane(&FacetTree::upper(vec![2, 1, 2]).unwrap(), &q, &Weights::unit(5)).unwrap();
        assert_eq!(h.support(), vec![2, 3]);
        assert_eq!(h.rhs, int((20 - 2 - 2) / 2));
    }

    #[test]
    fn loday_small() {
        let mut pts = loday_vertices(&Weights::unit(3));
        pts.sort();
        assert_eq!(pts, vec![pt(&[int(1), int(2)]), pt(&[int(2), int(1)])]);
        assert_eq!(loday_vertices(&Weights::unit(5)).len(), 14);
    }
}
