//! Painted metric trees: interior edge lengths in `[0, 1]` tied together by
//! one averaging equation per adjacent pair of branches at every painted
//! node of type (2) or (5).
//!
//! For a painted node with branches `1..j`, let `S_i` be the total length of
//! the painted interior edges in branch `i` (its own edge included) and
//! `p_i` its leaf count. The equations are `S_i / p_i = S_{i+1} / p_{i+1}`.
//! Edge lengths are indexed by [`PaintedTree::interior_edges`] order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::lp::{self, LpOutcome};
use crate::painted_trees::{BinaryPaintedTree, Branch, Edge, FacetTree, PaintedTree, TreeError};
use crate::rational::{self, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("{got} lengths given for {expected} interior edges")]
    LengthCount { expected: usize, got: usize },
    #[error("length of edge {edge} is {value}, outside [0, 1]")]
    OutOfRange { edge: usize, value: String },
    #[error("lengths violate `{0}`")]
    Unbalanced(String),
    #[error("bad length `{0}`")]
    BadLength(String),
}

/// `(sum of left) / left_leaves = (sum of right) / right_leaves`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub left: Vec<usize>,
    pub left_leaves: usize,
    pub right: Vec<usize>,
    pub right_leaves: usize,
}

impl Equation {
    /// Coefficient row over `edges` variables, with zero right-hand side.
    pub fn row(&self, edges: usize) -> Vec<Q> {
        let mut row = vec![Q::zero(); edges];
        for &e in &self.left {
            row[e] += rational::ratio(1, self.left_leaves as i64);
        }
        for &e in &self.right {
            row[e] -= rational::ratio(1, self.right_leaves as i64);
        }
        row
    }

    pub fn holds(&self, lengths: &[Q]) -> bool {
        let sum = |ix: &[usize]| ix.iter().fold(Q::zero(), |acc, &e| acc + &lengths[e]);
        sum(&self.left) * Q::from_integer(BigInt::from(self.right_leaves))
            == sum(&self.right) * Q::from_integer(BigInt::from(self.left_leaves))
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |ix: &[usize], p: usize| {
            let terms: Vec<String> = ix.iter().map(|e| format!("e{e}")).collect();
            format!("({})/{p}", terms.join(" + "))
        };
        write!(f, "{} = {}", side(&self.left, self.left_leaves), side(&self.right, self.right_leaves))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricConstraintSystem {
    pub edges: Vec<Edge>,
    pub equations: Vec<Equation>,
}

impl MetricConstraintSystem {
    pub fn matrix(&self) -> Vec<Vec<Q>> {
        self.equations.iter().map(|e| e.row(self.edges.len())).collect()
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.matrix())
    }

    pub fn free_variables(&self) -> usize {
        self.edges.len() - self.rank()
    }

    /// Equations plus the box `[0, 1]`.
    pub fn is_satisfied(&self, lengths: &[Q]) -> bool {
        lengths.len() == self.edges.len()
            && lengths.iter().all(|v| !v.is_negative() && *v <= Q::one())
            && self.equations.iter().all(|e| e.holds(lengths))
    }

    /// Exact `[min, max]` of each edge length over the feasible region.
    pub fn edge_bounds(&self) -> Vec<(Q, Q)> {
        let k = self.edges.len();
        // Variables: lengths, then slacks with length + slack = 1.
        let mut a: Vec<Vec<Q>> = self
            .matrix()
            .into_iter()
            .map(|mut r| {
                r.extend(std::iter::repeat_n(Q::zero(), k));
                r
            })
            .collect();
        let mut b = vec![Q::zero(); a.len()];
        for e in 0..k {
            let mut r = vec![Q::zero(); 2 * k];
            r[e] = Q::one();
            r[k + e] = Q::one();
            a.push(r);
            b.push(Q::one());
        }
        (0..k)
            .map(|e| {
                let mut up = vec![Q::zero(); 2 * k];
                up[e] = Q::one();
                let mut down = up.clone();
                down[e] = -Q::one();
                let solve = |c: &[Q]| match lp::maximize(c, &a, &b) {
                    LpOutcome::Optimal { value, .. } => value,
                    other => unreachable!("bounded and feasible by construction: {other:?}"),
                };
                (-solve(&down), solve(&up))
            })
            .collect()
    }
}

/// The averaging equations of `tree` (which must be valid).
pub fn constraint_system(tree: &PaintedTree) -> MetricConstraintSystem {
    // Returns the indices of painted interior edges at or above `b`'s edge.
    fn walk(b: &Branch, own: Option<usize>, next: &mut usize, eqs: &mut Vec<Equation>) -> Vec<usize> {
        let mut branches = Vec::with_capacity(b.children().len());
        for c in b.children() {
            if c.is_leaf() {
                branches.push((Vec::new(), 1));
                continue;
            }
            let index = *next;
            *next += 1;
            branches.push((walk(c, Some(index), next, eqs), c.leaf_count()));
        }
        let painted_node = b.is_painted() && b.children().iter().all(Branch::is_painted);
        if painted_node {
            for pair in branches.windows(2) {
                eqs.push(Equation {
                    left: pair[0].0.clone(),
                    left_leaves: pair[0].1,
                    right: pair[1].0.clone(),
                    right_leaves: pair[1].1,
                });
            }
        }
        let mut painted: Vec<usize> = Vec::new();
        if b.is_painted() {
            painted.extend(own);
            for (ix, _) in branches {
                painted.extend(ix);
            }
            painted.sort_unstable();
        }
        painted
    }
    let mut equations = Vec::new();
    if !tree.root().is_leaf() {
        walk(tree.root(), None, &mut 0, &mut equations);
    }
    MetricConstraintSystem { edges: tree.interior_edges(), equations }
}

/// Dimension of the solution space of the averaging equations.
pub fn dimension(tree: &BinaryPaintedTree) -> usize {
    constraint_system(tree.tree()).free_variables()
}

/// A valid painted tree with admissible edge lengths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MetricRepr", into = "MetricRepr")]
pub struct MetricPaintedTree {
    tree: PaintedTree,
    lengths: Vec<Q>,
}

#[derive(Serialize, Deserialize)]
struct MetricRepr {
    tree: String,
    lengths: BTreeMap<usize, String>,
}

impl TryFrom<MetricRepr> for MetricPaintedTree {
    type Error = MetricError;

    fn try_from(r: MetricRepr) -> Result<Self, MetricError> {
        let tree: PaintedTree = r.tree.parse()?;
        let expected = tree.interior_edges().len();
        if r.lengths.len() != expected || r.lengths.keys().enumerate().any(|(i, &k)| i != k) {
            return Err(MetricError::LengthCount { expected, got: r.lengths.len() });
        }
        let lengths = r
            .lengths
            .values()
            .map(|t| rational::parse_rational(t).map_err(|_| MetricError::BadLength(t.clone())))
            .collect::<Result<_, _>>()?;
        MetricPaintedTree::new(tree, lengths)
    }
}

impl From<MetricPaintedTree> for MetricRepr {
    fn from(m: MetricPaintedTree) -> Self {
        MetricRepr {
            tree: m.tree.to_canonical_string(),
            lengths: m.lengths.iter().map(rational::render).enumerate().collect(),
        }
    }
}

impl MetricPaintedTree {
    pub fn new(tree: PaintedTree, lengths: Vec<Q>) -> Result<Self, MetricError> {
        tree.validate().map_err(TreeError::from)?;
        let system = constraint_system(&tree);
        if lengths.len() != system.edges.len() {
            return Err(MetricError::LengthCount { expected: system.edges.len(), got: lengths.len() });
        }
        if let Some(edge) = lengths.iter().position(|v| v.is_negative() || *v > Q::one()) {
            return Err(MetricError::OutOfRange { edge, value: rational::render(&lengths[edge]) });
        }
        if let Some(eq) = system.equations.iter().find(|e| !e.holds(&lengths)) {
            return Err(MetricError::Unbalanced(eq.to_string()));
        }
        Ok(MetricPaintedTree { tree, lengths })
    }

    pub fn tree(&self) -> &PaintedTree {
        &self.tree
    }

    pub fn lengths(&self) -> &[Q] {
        &self.lengths
    }
}

impl fmt::Display for MetricPaintedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.tree, rational::render_all(&self.lengths).join(", "))
    }
}

/// A point with every length in `(0, 1/2]`: unpainted edges get `1/2`;
/// painted ones are assigned from the root up. A branch of `p` leaves over a
/// painted node whose own edge has denominator `d` (`2n` at the root) gets
/// `p/d` on its edge when that is its only painted edge, and `p/(2d)`
/// otherwise. Denominators are tracked unreduced.
pub fn interior_point(tree: &BinaryPaintedTree) -> MetricPaintedTree {
    fn walk(b: &Branch, d: u64, next: &mut usize, out: &mut Vec<Q>) {
        for c in b.children() {
            if c.is_leaf() {
                continue;
            }
            let index = *next;
            *next += 1;
            out.push(Q::zero());
            let p = c.leaf_count() as u64;
            let child_d = if !c.is_painted() {
                out[index] = rational::ratio(1, 2);
                d
            } else if c.children().iter().all(Branch::is_painted) {
                out[index] = Q::new(BigInt::from(p), BigInt::from(2 * d));
                2 * d
            } else {
                out[index] = Q::new(BigInt::from(p), BigInt::from(d));
                d
            };
            walk(c, child_d, next, out);
        }
    }
    let t = tree.tree();
    let mut lengths = Vec::new();
    if !t.root().is_leaf() {
        walk(t.root(), 2 * t.leaf_count() as u64, &mut 0, &mut lengths);
    }
    MetricPaintedTree::new(t.clone(), lengths).expect("interior point satisfies its own equations")
}

/// Shrinks every zero-length edge to a point; other lengths are kept.
pub fn collapse_zero_edges(m: &MetricPaintedTree) -> MetricPaintedTree {
    let zero: BTreeSet<usize> = m.lengths.iter().enumerate().filter(|(_, v)| v.is_zero()).map(|(i, _)| i).collect();
    let tree = m.tree.collapse(&zero);
    let lengths = m
        .lengths
        .iter()
        .enumerate()
        .filter(|(i, _)| !zero.contains(i))
        .map(|(_, v)| v.clone())
        .collect();
    MetricPaintedTree::new(tree, lengths).expect("collapsing zero edges of an admissible tree stays admissible")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxLengthPoint {
    pub metric: MetricPaintedTree,
    /// Interior edge set to length one.
    pub edge: usize,
    /// Several edges qualified; the leftmost was taken.
    pub tie: bool,
}

/// The facet tree with its distinguished edge at length one. Lower trees
/// have a single unpainted edge. Upper trees put `1` on the branch with the
/// most leaves and `r_j / r_max` on the others.
pub fn max_length_point(f: &FacetTree) -> MaxLengthPoint {
    let tree = f.realize();
    let (lengths, edge, tie) = match f {
        FacetTree::Lower { .. } => (vec![Q::one()], 0, false),
        FacetTree::Upper { parts } => {
            let max = *parts.iter().max().expect("upper trees have parts");
            let edge = parts.iter().position(|&r| r == max).unwrap();
            let tie = parts.iter().filter(|&&r| r == max).count() > 1;
            let lengths = parts.iter().map(|&r| rational::ratio(r as i64, max as i64)).collect();
            (lengths, edge, tie)
        }
    };
    let metric = MetricPaintedTree::new(tree, lengths).expect("facet lengths satisfy the equations");
    MaxLengthPoint { metric, edge, tie }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::painted_trees::enumerate_binary;
    use crate::rational::{int, ratio};

    fn t(s: &str) -> PaintedTree {
        s.parse().unwrap()
    }

    fn b(s: &str) -> BinaryPaintedTree {
        s.parse().unwrap()
    }

    #[test]
    fn left_comb_equations() {
        // edges: e0 = c (two leaves), e1 = a, e2 = b, e3 = d
        let sys = constraint_system(&t("=(=(=(x) =(x)) =(x))"));
        let eq: Vec<String> = sys.equations.iter().map(ToString::to_string).collect();
        assert_eq!(eq, ["(e1)/1 = (e2)/1", "(e0 + e1 + e2)/2 = (e3)/1"]);
        assert_eq!(sys.rank(), 2);
        assert_eq!(sys.free_variables(), 2);
    }

    #[test]
    fn five_edge_example() {
        // u over two leaves with an unpainted x above; v, y, z on the right
        let tree = t("=(=((x x)) =(=(x) =(x)))");
        let sys = constraint_system(&tree);
        assert_eq!(sys.edges.len(), 5);
        let eq: Vec<String> = sys.equations.iter().map(ToString::to_string).collect();
        assert_eq!(eq, ["(e3)/1 = (e4)/1", "(e0)/2 = (e2 + e3 + e4)/2"]);
        assert!(!sys.edges[1].painted);
    }

    #[test]
    fn corolla_has_no_equations() {
        let sys = constraint_system(&PaintedTree::painted_corolla(4));
        assert!(sys.edges.is_empty() && sys.equations.is_empty());
        assert_eq!(sys.free_variables(), 0);
    }

    #[test]
    fn dimensions() {
        for n in 1..=5 {
            for tree in enumerate_binary(n) {
                assert_eq!(dimension(&tree), n - 1, "{tree}");
            }
        }
        assert_eq!(dimension(&b("=(=(x) =(x))")), 1);
        assert_eq!(dimension(&b("=(x)")), 0);
    }

    #[test]
    fn worked_interior_point() {
        let m = interior_point(&b("=(=(x) =(=(x) =(x)))"));
        assert_eq!(m.lengths(), &[ratio(1, 6), ratio(2, 12), ratio(1, 12), ratio(1, 12)]);
        let m = interior_point(&b("=(=(x) =(x))"));
        assert_eq!(m.lengths(), &[ratio(1, 4), ratio(1, 4)]);
    }

    #[test]
    fn interior_points_are_strict() {
        for n in 1..=5 {
            for tree in enumerate_binary(n) {
                let m = interior_point(&tree);
                assert!(m.lengths().iter().all(|v| v.is_positive() && *v <= ratio(1, 2)), "{m}");
            }
        }
    }

    #[test]
    fn collapse_zero() {
        let tree = t("=(=(=(x) =(x)) =(x))");
        let zero = MetricPaintedTree::new(tree.clone(), vec![Q::zero(); 4]).unwrap();
        assert_eq!(collapse_zero_edges(&zero).tree(), &PaintedTree::painted_corolla(3));

        let q = ratio(1, 4);
        let m = MetricPaintedTree::new(tree, vec![Q::zero(), q.clone(), q.clone(), q.clone()]).unwrap();
        let c = collapse_zero_edges(&m);
        assert_eq!(c.tree(), &t("=(=(x) =(x) =(x))"));
        assert_eq!(c.lengths(), &[q.clone(), q.clone(), q]);
        assert_eq!(collapse_zero_edges(&c), c);
    }

    #[test]
    fn rejects_bad_lengths() {
        let tree = t("=(=(x) =(x))");
        assert!(matches!(
            MetricPaintedTree::new(tree.clone(), vec![int(1)]),
            Err(MetricError::LengthCount { .. })
        ));
        assert!(matches!(
            MetricPaintedTree::new(tree.clone(), vec![int(2), int(2)]),
            Err(MetricError::OutOfRange { edge: 0, .. })
        ));
        assert!(matches!(
            MetricPaintedTree::new(tree, vec![int(1), ratio(1, 2)]),
            Err(MetricError::Unbalanced(_))
        ));
    }

    #[test]
    fn max_length_points() {
        let p = max_length_point(&FacetTree::lower(1, 2, 3).unwrap());
        assert_eq!(p.metric.lengths(), &[int(1)]);
        let p = max_length_point(&FacetTree::upper(vec![2, 1]).unwrap());
        assert_eq!(p.metric.lengths(), &[int(1), ratio(1, 2)]);
        assert!(!p.tie);
        let p = max_length_point(&FacetTree::upper(vec![1, 1, 1]).unwrap());
        assert_eq!(p.metric.lengths(), &[int(1), int(1), int(1)]);
        assert!(p.tie && p.edge == 0);
    }

    #[test]
    fn bounds() {
        // u = v on two leaves: both range over [0, 1]
        let sys = constraint_system(&t("=(=(x) =(x))"));
        assert_eq!(sys.edge_bounds(), vec![(int(0), int(1)); 2]);
        // c + a + b = 2d with a = b
        let sys = constraint_system(&t("=(=(=(x) =(x)) =(x))"));
        let bounds = sys.edge_bounds();
        assert_eq!(bounds[1], (int(0), int(1)));
        assert_eq!(bounds[3], (int(0), int(1)));
        let sys = constraint_system(&t("=(=(x) =(=(x) =(x)))"));
        assert_eq!(sys.edge_bounds()[0], (int(0), int(1)));
    }

    #[test]
    fn json_round_trip() {
        let m = interior_point(&b("=(=(x) =(=(x) =(x)))"));
        let text = serde_json::to_string(&m).unwrap();
        assert!(text.contains("\"1/12\""));
        let back: MetricPaintedTree = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }
}
