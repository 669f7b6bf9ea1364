//! Independent checks that the realized points form the multiplihedron:
//! supporting hyperplanes and their incidences, a brute-force facet oracle,
//! extremality of every point, and the face poset of painted trees.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::counting;
use crate::linalg;
use crate::lp;
use crate::metric_trees::constraint_system;
use crate::painted_trees::{enumerate_binary, enumerate_faces, facet_trees, refines, BinaryPaintedTree, FacetTree, PaintedTree};
use crate::rational::{self, Q};
use crate::realization::{coordinates_weighted, hyperplane, Hyperplane, RationalPoint, RealizationError, Weights};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HullError {
    #[error("no points")]
    Empty,
    #[error("points have differing dimensions")]
    RaggedInput,
    #[error("scaled coordinates exceed 128-bit integers")]
    Overflow,
}

/// Divides by the absolute value of the first nonzero coefficient.
pub fn canonical_inequality(normal: &[Q], rhs: &Q) -> (Vec<Q>, Q) {
    match normal.iter().find(|c| !c.is_zero()) {
        Some(lead) => {
            let s = lead.abs();
            (normal.iter().map(|c| c / &s).collect(), rhs / &s)
        }
        None => (normal.to_vec(), rhs.clone()),
    }
}

/// A facet found by the oracle: `normal . x <= rhs` for every point, with
/// equality exactly on `incident`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullFacet {
    #[serde(with = "rational::serde_q_vec")]
    pub normal: Vec<Q>,
    #[serde(with = "rational::serde_q")]
    pub rhs: Q,
    pub incident: Vec<usize>,
}

impl HullFacet {
    /// Same half-space as `h` up to positive scaling.
    pub fn matches(&self, h: &Hyperplane) -> bool {
        let (c, r) = h.as_upper_inequality();
        canonical_inequality(&c, &r) == (self.normal.clone(), self.rhs.clone())
    }
}

impl fmt::Display for HullFacet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .normal
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{}*x{}", rational::render(c), i + 1))
            .collect();
        write!(f, "{} <= {}", terms.join(" + "), rational::render(&self.rhs))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hull {
    /// Dimension of the affine span of the input.
    pub span_dimension: usize,
    /// Facets relative to the span, sorted by canonical inequality. When the
    /// span is not full-dimensional, normals live on the span's pivot
    /// coordinates.
    pub facets: Vec<HullFacet>,
}

fn det(mut m: Vec<Vec<i128>>) -> Result<i128, HullError> {
    // Fraction-free Bareiss elimination.
    let k = m.len();
    if k == 0 {
        return Ok(1);
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for p in 0..k {
        if m[p][p] == 0 {
            let Some(swap) = (p + 1..k).find(|&i| m[i][p] != 0) else {
                return Ok(0);
            };
            m.swap(p, swap);
            sign = -sign;
        }
        for i in p + 1..k {
            for j in p + 1..k {
                let a = m[i][j].checked_mul(m[p][p]).ok_or(HullError::Overflow)?;
                let b = m[i][p].checked_mul(m[p][j]).ok_or(HullError::Overflow)?;
                m[i][j] = a.checked_sub(b).ok_or(HullError::Overflow)? / prev;
            }
        }
        prev = m[p][p];
    }
    Ok(sign * m[k - 1][k - 1])
}

/// Normal of the hyperplane through `k` points in `Z^k`: the generalized
/// cross product of the differences.
fn normal_through(pts: &[&Vec<i128>]) -> Result<Vec<i128>, HullError> {
    let k = pts[0].len();
    let base = pts[0];
    let diffs: Vec<Vec<i128>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    (0..k)
        .map(|skip| {
            let minor: Vec<Vec<i128>> = diffs
                .iter()
                .map(|r| r.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, v)| *v).collect())
                .collect();
            let d = det(minor)?;
            Ok(if skip % 2 == 0 { d } else { -d })
        })
        .collect()
}

fn dot(a: &[i128], b: &[i128]) -> Result<i128, HullError> {
    a.iter().zip(b).try_fold(0i128, |acc, (x, y)| {
        x.checked_mul(*y).and_then(|v| acc.checked_add(v)).ok_or(HullError::Overflow)
    })
}

/// Gcd-reduced `(normal, rhs)` with the first nonzero coefficient positive,
/// mapped to the orientation (`1` or `-1`) that puts every point below.
type FacetMap = BTreeMap<(Vec<i128>, i128), i128>;

/// Facets of a full-dimensional integer point set in `Z^k`, as
/// `(normal, rhs)` with `normal . p <= rhs`, reduced by their gcd.
fn integer_facets(pts: &[Vec<i128>], k: usize) -> Result<Vec<(Vec<i128>, i128)>, HullError> {
    let m = pts.len();
    let found: Result<Vec<FacetMap>, HullError> = (0..m)
        .into_par_iter()
        .map(|i0| {
            let mut local = FacetMap::new();
            for rest in (i0 + 1..m).combinations(k - 1) {
                let chosen: Vec<&Vec<i128>> = std::iter::once(&pts[i0]).chain(rest.iter().map(|&i| &pts[i])).collect();
                let mut normal = normal_through(&chosen)?;
                let Some(lead) = normal.iter().copied().find(|&c| c != 0) else {
                    continue;
                };
                let mut rhs = dot(&normal, &pts[i0])?;
                let g = normal.iter().fold(rhs.abs(), |g, &c| g.gcd(&c.abs()));
                let s = if lead < 0 { -g } else { g };
                normal.iter_mut().for_each(|c| *c /= s);
                rhs /= s;
                let key = (normal, rhs);
                if local.contains_key(&key) {
                    continue;
                }
                let (mut above, mut below) = (false, false);
                for p in pts {
                    match dot(&key.0, p)?.cmp(&key.1) {
                        std::cmp::Ordering::Greater => above = true,
                        std::cmp::Ordering::Less => below = true,
                        std::cmp::Ordering::Equal => {}
                    }
                    if above && below {
                        break;
                    }
                }
                if !(above && below) {
                    local.insert(key, if above { -1 } else { 1 });
                }
            }
            Ok(local)
        })
        .collect();
    let mut merged = BTreeMap::new();
    for local in found? {
        merged.extend(local);
    }
    Ok(merged
        .into_iter()
        .map(|((normal, rhs), orient)| (normal.into_iter().map(|c| c * orient).collect(), rhs * orient))
        .collect())
}

/// Every facet of the convex hull of `points`, found by testing the
/// hyperplane through each affinely independent `d`-subset for
/// one-sidedness. Lower-dimensional input is handled inside its affine span.
pub fn brute_force_hull(points: &[RationalPoint]) -> Result<Hull, HullError> {
    let first = points.first().ok_or(HullError::Empty)?;
    let d = first.dim();
    if points.iter().any(|p| p.dim() != d) {
        return Err(HullError::RaggedInput);
    }
    let scale = rational::common_denominator(points.iter().flat_map(|p| p.coords()));
    let scale_q = Q::from_integer(scale.clone());
    let ints: Vec<Vec<i128>> = points
        .iter()
        .map(|p| {
            p.coords()
                .iter()
                .map(|c| (c * &scale_q).to_integer().to_i128().ok_or(HullError::Overflow))
                .collect()
        })
        .collect::<Result<_, _>>()?;

    let rows: Vec<Vec<Q>> = points.iter().map(|p| p.coords().to_vec()).collect();
    let mut diffs = linalg::differences(&rows);
    let pivots = linalg::row_reduce(&mut diffs);
    let k = pivots.len();
    if k == 0 {
        return Ok(Hull { span_dimension: 0, facets: Vec::new() });
    }
    let projected: Vec<Vec<i128>> = ints.iter().map(|p| pivots.iter().map(|&c| p[c]).collect()).collect();

    let mut facets: Vec<HullFacet> = integer_facets(&projected, k)?
        .into_iter()
        .map(|(normal, rhs)| {
            let incident = projected
                .iter()
                .enumerate()
                .filter(|(_, p)| dot(&normal, p).map(|v| v == rhs).unwrap_or(false))
                .map(|(i, _)| i)
                .collect();
            let mut full = vec![Q::zero(); d];
            for (&c, v) in pivots.iter().zip(&normal) {
                full[c] = Q::from_integer(BigInt::from(*v));
            }
            let (normal, rhs) = canonical_inequality(&full, &(Q::from_integer(BigInt::from(rhs)) / &scale_q));
            HullFacet { normal, rhs, incident }
        })
        .collect();
    facets.sort_by(|a, b| (&a.normal, &a.rhs).cmp(&(&b.normal, &b.rhs)));
    Ok(Hull { span_dimension: k, facets })
}

/// Exact test that `points[index]` is not a convex combination of the others.
pub fn is_extreme(points: &[RationalPoint], index: usize) -> bool {
    let others: Vec<Vec<Q>> = points
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != index)
        .map(|(_, p)| p.coords().to_vec())
        .collect();
    !lp::in_convex_hull(&others, points[index].coords())
}

/// A vertex certificate: the normals of the valid inequalities tight at the
/// point span the space. Falls back to the exact hull-membership test.
fn extremal_flags(points: &[RationalPoint], tight_normals: &[Vec<Vec<Q>>], d: usize, trust_normals: bool) -> Vec<bool> {
    (0..points.len())
        .into_par_iter()
        .map(|i| (trust_normals && linalg::rank(&tight_normals[i]) == d) || is_extreme(points, i))
        .collect()
}

/// A named reason verification failed.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Failure {
    #[error("{found} points, expected {expected}")]
    VertexCount { expected: u64, found: usize },
    #[error("{found} facet trees, expected {expected}")]
    FacetCount { expected: u64, found: usize },
    #[error("affine span has dimension {found}, expected {expected}")]
    SpanDimension { expected: usize, found: usize },
    #[error("point {point} ({tree}) violates the hyperplane of {facet}")]
    NotSupporting { facet: String, point: usize, tree: String },
    #[error("{facet}: incident points {found:?}, refinements {expected:?}")]
    IncidenceMismatch { facet: String, expected: Vec<usize>, found: Vec<usize> },
    #[error("{facet}: {found} incident points, product formula gives {expected}")]
    ProductCount { facet: String, expected: u64, found: usize },
    #[error("brute-force hull misses the hyperplane of {facet}")]
    MissingFacet { facet: String },
    #[error("brute-force hull has an unpredicted facet {inequality}")]
    ExtraFacet { inequality: String },
    #[error("point {point} ({tree}) is not a vertex")]
    NotExtremal { point: usize, tree: String },
    #[error("brute-force hull failed: {0}")]
    Oracle(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetCheck {
    pub facet: FacetTree,
    pub hyperplane: Hyperplane,
    pub incident: Vec<usize>,
    pub product_count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteForceCheck {
    pub facets_found: Vec<HullFacet>,
    /// Predicted facet trees whose hyperplanes the oracle did not find.
    pub missing: Vec<FacetTree>,
    /// Oracle facets that match no predicted hyperplane.
    pub extra: Vec<HullFacet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullReport {
    pub n: usize,
    #[serde(with = "rational::serde_q")]
    pub q: Q,
    pub weights: Weights,
    pub vertex_count: usize,
    pub facet_count: usize,
    pub span_dimension: usize,
    pub trees: Vec<String>,
    pub points: Vec<RationalPoint>,
    pub facets: Vec<FacetCheck>,
    pub brute_force: Option<BruteForceCheck>,
    pub extremal: Vec<bool>,
    pub failures: Vec<Failure>,
}

impl HullReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Incidence sets of the predicted facets, in facet-tree order.
    pub fn incidence_pattern(&self) -> Vec<Vec<usize>> {
        self.facets.iter().map(|f| f.incident.clone()).collect()
    }
}

impl fmt::Display for HullReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} vertices, {} facets, ", self.vertex_count, self.facet_count)?;
        if self.passed() {
            write!(f, "OK")
        } else {
            write!(f, "FAILED ({} problems)", self.failures.len())
        }
    }
}

/// Realizes every binary painted tree with `n` leaves and checks the result
/// against the predicted facets. With `brute_force`, the facets are also
/// recomputed from the points alone.
pub fn verify_realization(n: usize, q: &Q, w: &Weights, brute_force: bool) -> Result<HullReport, RealizationError> {
    let trees: Vec<BinaryPaintedTree> = enumerate_binary(n);
    let points: Vec<RationalPoint> = trees
        .iter()
        .map(|t| coordinates_weighted(t, q, w))
        .collect::<Result<_, _>>()?;
    let labels: Vec<String> = trees.iter().map(ToString::to_string).collect();
    let d = n.saturating_sub(1);
    let mut failures = Vec::new();

    let expected_vertices = counting::vertex_count_recursive(n).to_u64().unwrap_or(u64::MAX);
    if points.len() as u64 != expected_vertices {
        failures.push(Failure::VertexCount { expected: expected_vertices, found: points.len() });
    }
    let rows: Vec<Vec<Q>> = points.iter().map(|p| p.coords().to_vec()).collect();
    let span_dimension = linalg::affine_dimension(&rows).unwrap_or(0);
    if span_dimension != d {
        failures.push(Failure::SpanDimension { expected: d, found: span_dimension });
    }

    let fts = facet_trees(n);
    let expected_facets = counting::facet_count(n).to_u64().unwrap_or(u64::MAX);
    if fts.len() as u64 != expected_facets {
        failures.push(Failure::FacetCount { expected: expected_facets, found: fts.len() });
    }

    let checked: Vec<(FacetCheck, Vec<Failure>)> = fts
        .par_iter()
        .map(|f| {
            let h = hyperplane(f, q, w).expect("weights already checked");
            let face = f.realize();
            let mut fails = Vec::new();
            let mut incident = Vec::new();
            let mut expected = Vec::new();
            for (j, (p, t)) in points.iter().zip(&trees).enumerate() {
                if !h.admits(p) {
                    fails.push(Failure::NotSupporting { facet: f.to_string(), point: j, tree: labels[j].clone() });
                }
                if h.contains(p) {
                    incident.push(j);
                }
                if refines(t.tree(), &face).expect("same leaf count") {
                    expected.push(j);
                }
            }
            if incident != expected {
                fails.push(Failure::IncidenceMismatch { facet: f.to_string(), expected, found: incident.clone() });
            }
            let product_count = counting::facet_vertex_count(f).to_u64().unwrap_or(u64::MAX);
            if incident.len() as u64 != product_count {
                fails.push(Failure::ProductCount { facet: f.to_string(), expected: product_count, found: incident.len() });
            }
            (FacetCheck { facet: f.clone(), hyperplane: h, incident, product_count }, fails)
        })
        .collect();
    let mut facets = Vec::with_capacity(checked.len());
    for (check, fails) in checked {
        facets.push(check);
        failures.extend(fails);
    }
    let supporting = !failures.iter().any(|f| matches!(f, Failure::NotSupporting { .. }));

    let mut tight: Vec<Vec<Vec<Q>>> = vec![Vec::new(); points.len()];
    let mut oracle = None;
    if brute_force && !points.is_empty() {
        match brute_force_hull(&points) {
            Ok(hull) => {
                let missing: Vec<FacetTree> = facets
                    .iter()
                    .filter(|c| !hull.facets.iter().any(|h| h.matches(&c.hyperplane)))
                    .map(|c| c.facet.clone())
                    .collect();
                let extra: Vec<HullFacet> = hull
                    .facets
                    .iter()
                    .filter(|h| !facets.iter().any(|c| h.matches(&c.hyperplane)))
                    .cloned()
                    .collect();
                failures.extend(missing.iter().map(|f| Failure::MissingFacet { facet: f.to_string() }));
                failures.extend(extra.iter().map(|h| Failure::ExtraFacet { inequality: h.to_string() }));
                for h in &hull.facets {
                    for &j in &h.incident {
                        tight[j].push(h.normal.clone());
                    }
                }
                oracle = Some(BruteForceCheck { facets_found: hull.facets, missing, extra });
            }
            Err(e) => failures.push(Failure::Oracle(e.to_string())),
        }
    } else {
        for c in &facets {
            for &j in &c.incident {
                tight[j].push(c.hyperplane.coeffs.clone());
            }
        }
    }
    let trust = oracle.is_some() || (!brute_force && supporting);
    let extremal = extremal_flags(&points, &tight, d, trust);
    for (j, ok) in extremal.iter().enumerate() {
        if !ok {
            failures.push(Failure::NotExtremal { point: j, tree: labels[j].clone() });
        }
    }

    Ok(HullReport {
        n,
        q: q.clone(),
        weights: w.clone(),
        vertex_count: points.len(),
        facet_count: fts.len(),
        span_dimension,
        trees: labels,
        points,
        facets,
        brute_force: oracle,
        extremal,
        failures,
    })
}

/// Painted trees with `n` leaves ordered by refinement. The rank of a tree
/// is `n - 1` minus the number of free lengths of its metric system, which
/// is the dimension of the face it indexes.
#[derive(Clone, Debug)]
pub struct FacePoset {
    n: usize,
    elements: Vec<PaintedTree>,
    ranks: Vec<usize>,
    below: Vec<Vec<bool>>,
}

impl FacePoset {
    pub fn new(n: usize) -> Self {
        let elements = enumerate_faces(n);
        let ranks = elements
            .iter()
            .map(|t| n - 1 - constraint_system(t).free_variables())
            .collect();
        let below = elements
            .par_iter()
            .map(|t| elements.iter().map(|u| refines(t, u).expect("same leaf count")).collect())
            .collect();
        FacePoset { n, elements, ranks, below }
    }

    pub fn leaf_count(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[PaintedTree] {
        &self.elements
    }

    pub fn rank(&self, i: usize) -> usize {
        self.ranks[i]
    }

    /// `elements[i]` refines `elements[j]`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.below[i][j]
    }

    pub fn maximum(&self) -> Option<usize> {
        let len = self.elements.len();
        let tops: Vec<usize> = (0..len).filter(|&j| (0..len).all(|i| self.below[i][j])).collect();
        (tops.len() == 1).then(|| tops[0])
    }

    pub fn minima(&self) -> Vec<usize> {
        let len = self.elements.len();
        (0..len)
            .filter(|&j| (0..len).all(|i| i == j || !self.below[i][j]))
            .collect()
    }

    /// Strict refinements raise the rank, and every cover raises it by one.
    pub fn is_graded(&self) -> bool {
        let len = self.elements.len();
        (0..len).all(|i| {
            (0..len).all(|j| {
                if i == j || !self.below[i][j] {
                    return true;
                }
                let (ri, rj) = (self.ranks[i], self.ranks[j]);
                if rj <= ri {
                    return false;
                }
                rj == ri + 1 || (0..len).any(|k| k != i && k != j && self.below[i][k] && self.below[k][j])
            })
        })
    }

    /// Number of elements of each rank `0..=n-1`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.n];
        for &r in &self.ranks {
            f[r] += 1;
        }
        f
    }
}

/// Face counts of `J(n)` by dimension, the polytope itself last.
pub fn f_vector(n: usize) -> Vec<usize> {
    FacePoset::new(n).f_vector()
}

/// `sum_i (-1)^i f_i` over all faces, the polytope included.
pub fn euler_sum(f: &[usize]) -> i64 {
    f.iter()
        .enumerate()
        .map(|(i, &v)| if i % 2 == 0 { v as i64 } else { -(v as i64) })
        .sum()
}

/// The facet trees a binary tree lies on, by refinement.
pub fn facets_of(tree: &BinaryPaintedTree) -> Vec<FacetTree> {
    facet_trees(tree.leaf_count())
        .into_iter()
        .filter(|f| refines(tree.tree(), &f.realize()).expect("same leaf count"))
        .collect()
}
