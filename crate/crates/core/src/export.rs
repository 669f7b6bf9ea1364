//! Point-set export (polymake `POINTS`, OFF, JSON) and deduplication at the
//! boundary values `q = 0` and `q = 1`.
//!
//! JSON carries every rational exactly as a string (`"3/2"`), under the
//! schema tag `multiplihedra/1`. OFF is lossy: coordinates are printed as
//! decimals with 17 significant digits.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::counting;
use crate::hull_verify::{verify_realization, HullReport};
use crate::painted_trees::enumerate_binary;
use crate::rational::{self, Q};
use crate::realization::{coordinates_at_boundary, coordinates_weighted, hyperplane, Hyperplane, RationalPoint, RealizationError, Weights};

pub const SCHEMA: &str = "multiplihedra/1";
pub const OFF_DIGITS: usize = 17;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error(transparent)]
    Realization(#[from] RealizationError),
    #[error("malformed JSON bundle: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema `{0}`, expected `{SCHEMA}`")]
    Schema(String),
    #[error("unknown format `{0}` (expected polymake, off or json)")]
    UnknownFormat(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Polymake,
    Off,
    Json,
}

impl FromStr for Format {
    type Err = ExportError;

    fn from_str(s: &str) -> Result<Self, ExportError> {
        match s {
            "polymake" => Ok(Format::Polymake),
            "off" => Ok(Format::Off),
            "json" => Ok(Format::Json),
            other => Err(ExportError::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledPoint {
    pub tree: String,
    pub point: RationalPoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportBundle {
    pub schema: String,
    pub n: usize,
    #[serde(with = "rational::serde_q")]
    pub q: Q,
    pub weights: Weights,
    pub format: Format,
    /// In binary-tree enumeration order.
    pub points: Vec<LabeledPoint>,
    pub hyperplanes: Vec<Hyperplane>,
    pub hull: Option<HullReport>,
}

impl ExportBundle {
    /// Points and facet hyperplanes; with `with_hull`, also the verification
    /// report (needed for OFF faces).
    pub fn build(n: usize, q: &Q, w: &Weights, format: Format, with_hull: bool) -> Result<Self, ExportError> {
        let points = enumerate_binary(n)
            .iter()
            .map(|t| {
                Ok(LabeledPoint { tree: t.to_string(), point: coordinates_weighted(t, q, w)? })
            })
            .collect::<Result<Vec<_>, RealizationError>>()?;
        let hyperplanes = crate::painted_trees::facet_trees(n)
            .iter()
            .map(|f| hyperplane(f, q, w))
            .collect::<Result<Vec<_>, _>>()?;
        let hull = if with_hull { Some(verify_realization(n, q, w, false)?) } else { None };
        Ok(ExportBundle {
            schema: SCHEMA.to_string(),
            n,
            q: q.clone(),
            weights: w.clone(),
            format,
            points,
            hyperplanes,
            hull,
        })
    }

    pub fn render(&self) -> Result<String, ExportError> {
        Ok(match self.format {
            Format::Polymake => export_polymake(self),
            Format::Off => export_off(self),
            Format::Json => export_json(self)?,
        })
    }
}

/// `POINTS`, then one homogeneous row `1 x_1 … x_{n-1}` per point.
pub fn export_polymake(bundle: &ExportBundle) -> String {
    let mut out = String::from("POINTS\n");
    for p in &bundle.points {
        out.push('1');
        for c in p.point.coords() {
            out.push(' ');
            out.push_str(&rational::render(c));
        }
        out.push('\n');
    }
    out
}

/// Parses a `POINTS` block back into points.
pub fn parse_polymake(text: &str) -> Result<Vec<RationalPoint>, rational::ParseRationalError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && *l != "POINTS")
        .map(|l| {
            let mut fields = l.split_whitespace().map(rational::parse_rational);
            let _homogenizing = fields.next().transpose()?;
            Ok(RationalPoint(fields.collect::<Result<_, _>>()?))
        })
        .collect()
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn cross(a: &[Q], b: &[Q]) -> Vec<Q> {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// Walks the cycle through `vertices` given its edges.
fn cycle(vertices: &[usize], edges: &[(usize, usize)]) -> Vec<usize> {
    let Some(&start) = vertices.first() else {
        return Vec::new();
    };
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = edges.iter().find_map(|&(a, b)| {
            if a == cur && b != prev {
                Some(b)
            } else if b == cur && a != prev {
                Some(a)
            } else {
                None
            }
        });
        match next {
            Some(v) if v != start => {
                order.push(v);
                prev = cur;
                cur = v;
            }
            _ => break,
        }
    }
    order
}

/// Vertex lists of the 2-dimensional faces, counter-clockwise seen from
/// outside, and the edge list.
fn polygons(bundle: &ExportBundle, hull: &HullReport) -> (Vec<Vec<usize>>, Vec<(usize, usize)>) {
    let d = bundle.n.saturating_sub(1);
    let incident: Vec<&Vec<usize>> = hull.facets.iter().map(|f| &f.incident).collect();
    match d {
        2 => {
            let edges: Vec<(usize, usize)> = incident.iter().map(|s| (s[0], s[1])).collect();
            let all: Vec<usize> = (0..bundle.points.len()).collect();
            let mut poly = cycle(&all, &edges);
            let p = |i: usize| bundle.points[poly[i]].point.coords().to_vec();
            if poly.len() >= 3 {
                let (a, b) = (sub(&p(1), &p(0)), sub(&p(2), &p(1)));
                if (&a[0] * &b[1] - &a[1] * &b[0]).is_negative() {
                    poly.reverse();
                }
            }
            (vec![poly], edges)
        }
        3 => {
            let mut all_edges = Vec::new();
            for (i, f) in incident.iter().enumerate() {
                for g in &incident[i + 1..] {
                    let common: Vec<usize> = f.iter().filter(|v| g.contains(v)).copied().collect();
                    if common.len() == 2 {
                        all_edges.push((common[0], common[1]));
                    }
                }
            }
            all_edges.sort_unstable();
            let faces = hull
                .facets
                .iter()
                .map(|f| {
                    let local: Vec<(usize, usize)> = all_edges
                        .iter()
                        .filter(|(a, b)| f.incident.contains(a) && f.incident.contains(b))
                        .copied()
                        .collect();
                    let mut poly = cycle(&f.incident, &local);
                    let p = |i: usize| bundle.points[poly[i]].point.coords().to_vec();
                    let turn = cross(&sub(&p(1), &p(0)), &sub(&p(2), &p(1)));
                    let (outward, _) = f.hyperplane.as_upper_inequality();
                    if dot(&turn, &outward).is_negative() {
                        poly.reverse();
                    }
                    poly
                })
                .collect();
            (faces, all_edges)
        }
        _ => (Vec::new(), Vec::new()),
    }
}

/// OFF for dimensions up to three (shorter points padded with zeros), with
/// polygon faces when hull data is present; `nOFF` with vertices only above.
pub fn export_off(bundle: &ExportBundle) -> String {
    let d = bundle.n.saturating_sub(1);
    let (faces, edges) = match &bundle.hull {
        Some(hull) => polygons(bundle, hull),
        None => (Vec::new(), Vec::new()),
    };
    let mut out = String::new();
    let width = if d <= 3 {
        out.push_str("OFF\n");
        3
    } else {
        let _ = writeln!(out, "nOFF\n{d}");
        d
    };
    let _ = writeln!(out, "{} {} {}", bundle.points.len(), faces.len(), edges.len());
    for p in &bundle.points {
        let mut fields: Vec<String> = p.point.coords().iter().map(|c| rational::render_decimal(c, OFF_DIGITS)).collect();
        fields.resize(width, "0".to_string());
        let _ = writeln!(out, "{}", fields.join(" "));
    }
    for f in &faces {
        let ix: Vec<String> = f.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "{} {}", f.len(), ix.join(" "));
    }
    out
}

pub fn export_json(bundle: &ExportBundle) -> Result<String, ExportError> {
    let mut text = serde_json::to_string_pretty(bundle)?;
    text.push('\n');
    Ok(text)
}

pub fn import_json(text: &str) -> Result<ExportBundle, ExportError> {
    let bundle: ExportBundle = serde_json::from_str(text)?;
    if bundle.schema != SCHEMA {
        return Err(ExportError::Schema(bundle.schema));
    }
    Ok(bundle)
}

/// Distinct points at a boundary value of `q`, each with the trees mapped
/// onto it, in order of first appearance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientPoints {
    pub n: usize,
    #[serde(with = "rational::serde_q")]
    pub q: Q,
    pub points: Vec<RationalPoint>,
    pub trees: Vec<Vec<String>>,
    /// `C(n-1)` at `q = 1`; no claim is made at `q = 0`.
    pub expected: Option<u64>,
}

impl QuotientPoints {
    pub fn count(&self) -> usize {
        self.points.len()
    }

    pub fn matches_expected(&self) -> bool {
        self.expected.is_none_or(|e| e == self.count() as u64)
    }
}

pub fn quotient_mode(n: usize, q: &Q, w: &Weights) -> Result<QuotientPoints, RealizationError> {
    let mut points: Vec<RationalPoint> = Vec::new();
    let mut trees: Vec<Vec<String>> = Vec::new();
    for t in enumerate_binary(n) {
        let p = coordinates_at_boundary(&t, q, w)?;
        match points.iter().position(|x| *x == p) {
            Some(i) => trees[i].push(t.to_string()),
            None => {
                points.push(p);
                trees.push(vec![t.to_string()]);
            }
        }
    }
    let expected = (*q == Q::from_integer(BigInt::from(1)) && n >= 1)
        .then(|| counting::catalan(n as u64 - 1).to_u64().unwrap_or(u64::MAX));
    Ok(QuotientPoints { n, q: q.clone(), points, trees, expected })
}
