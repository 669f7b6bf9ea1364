//! Painted planar trees: representation, validation, enumeration,
//! refinement, grafting, and the facet trees.
//!
//! A tree is stored as its root [`Branch`]: an edge together with everything
//! above it. Each branch carries the paint of its own edge, so node types are
//! derived from the paint of the edge below a node and the edges above it:
//!
//! | lower edge | upper edges | arity | type    |
//! |------------|-------------|-------|---------|
//! | unpainted  | unpainted   | 2     | (1)     |
//! | painted    | painted     | 2     | (2)     |
//! | painted    | unpainted   | 1     | (3)     |
//! | unpainted  | unpainted   | ≥ 3   | (4)     |
//! | painted    | painted     | ≥ 3   | (5)     |
//! | painted    | unpainted   | ≥ 2   | (6)     |
//!
//! # Text format
//!
//! ```text
//! branch := "="? ( "x" | "(" branch ( " " branch )* ")" )
//! ```
//!
//! A leading `=` marks the edge below a term as painted, `x` is a leaf and a
//! parenthesised list is a node with its children left to right. The painted
//! corolla on three leaves is `=(x x x)`; the binary tree whose root node is
//! painted over two color changes is `=(=(x) =(x))`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Branch {
    painted: bool,
    children: Vec<Branch>,
}

/// Half-open run of leaves `first..first + count` locating a node or edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LeafSpan {
    pub first: usize,
    pub count: usize,
}

impl fmt::Display for LeafSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "leaves {}..{}", self.first, self.first + self.count)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TreeViolation {
    #[error("root edge is unpainted")]
    RootUnpainted,
    #[error("leaf {leaf} has a painted edge")]
    PaintedLeaf { leaf: usize },
    #[error("unpainted node over {at} has a single branch")]
    UnpaintedBivalent { at: LeafSpan },
    #[error("painted node over {at} has a single painted branch")]
    PaintedBivalent { at: LeafSpan },
    #[error("painted edge above an unpainted edge at node over {at}")]
    DisconnectedPaint { at: LeafSpan },
    #[error("painting ends at the node over {at} on some branches but not others")]
    MixedPaint { at: LeafSpan },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("invalid painted tree: {0}")]
    Invalid(#[from] TreeViolation),
    #[error("tree is not binary")]
    NotBinary,
    #[error("leaf counts differ: {left} vs {right}")]
    LeafCountMismatch { left: usize, right: usize },
    #[error("leaf index {index} out of range for a tree with {leaves} leaves")]
    LeafOutOfRange { index: usize, leaves: usize },
    #[error("cannot graft a {} scion onto {} leaf {leaf}",
        if *.scion_painted { "painted" } else { "unpainted" },
        if *.scion_painted { "an unpainted" } else { "a painted" })]
    PaintMismatch { leaf: usize, scion_painted: bool },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid facet tree: {0}")]
    InvalidFacet(String),
}

/// The three node families; arity distinguishes (1)/(4), (2)/(5), (3)/(6).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Unpainted,
    Painted,
    ColorChange,
}

impl NodeKind {
    /// The numbered type (1)–(6) for a node of this kind with `arity` branches.
    pub fn type_number(self, arity: usize) -> u8 {
        match (self, arity) {
            (NodeKind::Unpainted, 2) => 1,
            (NodeKind::Painted, 2) => 2,
            (NodeKind::ColorChange, 1) => 3,
            (NodeKind::Unpainted, _) => 4,
            (NodeKind::Painted, _) => 5,
            (NodeKind::ColorChange, _) => 6,
        }
    }
}

/// An interior edge, identified by the leaves above it and its paint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub span: LeafSpan,
    pub painted: bool,
}

impl Branch {
    pub fn leaf(painted: bool) -> Self {
        Branch { painted, children: Vec::new() }
    }

    pub fn node(painted: bool, children: Vec<Branch>) -> Self {
        assert!(!children.is_empty(), "a node needs at least one branch");
        Branch { painted, children }
    }

    /// Unpainted node over unpainted children.
    pub fn unpainted(children: Vec<Branch>) -> Self {
        Self::node(false, children)
    }

    /// Painted node; children should be painted branches.
    pub fn painted(children: Vec<Branch>) -> Self {
        Self::node(true, children)
    }

    /// Color-change node: painted below, children unpainted.
    pub fn color_change(children: Vec<Branch>) -> Self {
        Self::node(true, children)
    }

    pub fn is_painted(&self) -> bool {
        self.painted
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn children(&self) -> &[Branch] {
        &self.children
    }

    pub fn leaf_count(&self) -> usize {
        if self.is_leaf() {
            1
        } else {
            self.children.iter().map(Branch::leaf_count).sum()
        }
    }

    fn kind(&self, first_leaf: usize) -> Result<NodeKind, TreeViolation> {
        debug_assert!(!self.is_leaf());
        let at = LeafSpan { first: first_leaf, count: self.leaf_count() };
        let painted_above = self.children.iter().filter(|c| c.painted).count();
        let arity = self.children.len();
        if !self.painted {
            if painted_above > 0 {
                return Err(TreeViolation::DisconnectedPaint { at });
            }
            if arity < 2 {
                return Err(TreeViolation::UnpaintedBivalent { at });
            }
            return Ok(NodeKind::Unpainted);
        }
        match painted_above {
            0 => Ok(NodeKind::ColorChange),
            p if p == arity && arity >= 2 => Ok(NodeKind::Painted),
            p if p == arity => Err(TreeViolation::PaintedBivalent { at }),
            _ => Err(TreeViolation::MixedPaint { at }),
        }
    }

    fn check_nodes(&self, first_leaf: usize) -> Result<(), TreeViolation> {
        if self.is_leaf() {
            return Ok(());
        }
        self.kind(first_leaf)?;
        let mut offset = first_leaf;
        for child in &self.children {
            child.check_nodes(offset)?;
            offset += child.leaf_count();
        }
        Ok(())
    }

    fn write_to(&self, out: &mut String) {
        if self.painted {
            out.push('=');
        }
        if self.is_leaf() {
            out.push('x');
        } else {
            out.push('(');
            for (i, child) in self.children.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                child.write_to(out);
            }
            out.push(')');
        }
    }
}

/// A rooted planar tree with painted and unpainted edges.
///
/// Construction never checks the paint rules; call [`PaintedTree::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PaintedTree {
    root: Branch,
}

impl PaintedTree {
    pub fn new(root: Branch) -> Self {
        PaintedTree { root }
    }

    pub fn root(&self) -> &Branch {
        &self.root
    }

    pub fn leaf_count(&self) -> usize {
        self.root.leaf_count()
    }

    /// The painted corolla: one node of type (6) (type (3) when `n = 1`).
    pub fn painted_corolla(n: usize) -> Self {
        assert!(n >= 1);
        PaintedTree::new(Branch::color_change(vec![Branch::leaf(false); n]))
    }

    /// Checks every rule a face of the multiplihedron must obey: painted
    /// root edge, unpainted leaf edges, and node types (1)–(6) only.
    /// Returns the first violation in depth-first order.
    pub fn validate(&self) -> Result<(), TreeViolation> {
        if !self.root.painted {
            return Err(TreeViolation::RootUnpainted);
        }
        if let Some(leaf) = self.leaf_paints().iter().position(|&p| p) {
            return Err(TreeViolation::PaintedLeaf { leaf });
        }
        self.root.check_nodes(0)
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Node rules only, ignoring the root and leaf paint. Grafting inputs
    /// such as fully painted or fully unpainted trees pass this check.
    pub fn check_nodes(&self) -> Result<(), TreeViolation> {
        self.root.check_nodes(0)
    }

    /// True for valid trees whose nodes are all of types (1), (2), (3).
    pub fn is_binary(&self) -> bool {
        fn walk(b: &Branch, first: usize) -> bool {
            if b.is_leaf() {
                return true;
            }
            let ok = match b.kind(first) {
                Ok(kind) => matches!(kind.type_number(b.children.len()), 1..=3),
                Err(_) => false,
            };
            let mut offset = first;
            ok && b.children.iter().all(|c| {
                let r = walk(c, offset);
                offset += c.leaf_count();
                r
            })
        }
        self.is_valid() && walk(&self.root, 0)
    }

    fn leaf_paints(&self) -> Vec<bool> {
        fn walk(b: &Branch, out: &mut Vec<bool>) {
            if b.is_leaf() {
                out.push(b.painted);
            }
            for c in &b.children {
                walk(c, out);
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }

    /// Interior edges (both ends at nodes) in depth-first, left-to-right
    /// preorder. This order indexes edge lengths in metric trees.
    pub fn interior_edges(&self) -> Vec<Edge> {
        fn walk(b: &Branch, first: usize, out: &mut Vec<Edge>) {
            let mut offset = first;
            for c in &b.children {
                let count = c.leaf_count();
                if !c.is_leaf() {
                    out.push(Edge { span: LeafSpan { first: offset, count }, painted: c.painted });
                    walk(c, offset, out);
                }
                offset += count;
            }
        }
        let mut out = Vec::new();
        if !self.root.is_leaf() {
            walk(&self.root, 0, &mut out);
        }
        out
    }

    /// Collapses the interior edges whose preorder indices are in `edges`.
    pub fn collapse(&self, edges: &BTreeSet<usize>) -> PaintedTree {
        fn walk(b: &Branch, edges: &BTreeSet<usize>, next: &mut usize) -> Vec<Branch> {
            let mut out = Vec::with_capacity(b.children.len());
            for c in &b.children {
                if c.is_leaf() {
                    out.push(c.clone());
                    continue;
                }
                let index = *next;
                *next += 1;
                let grand = walk(c, edges, next);
                if edges.contains(&index) {
                    out.extend(grand);
                } else {
                    out.push(Branch { painted: c.painted, children: grand });
                }
            }
            out
        }
        if self.root.is_leaf() {
            return self.clone();
        }
        let mut next = 0;
        let children = walk(&self.root, edges, &mut next);
        PaintedTree::new(Branch { painted: self.root.painted, children })
    }

    /// Leaf-count-preserving graft: the scion's root edge is identified with
    /// the edge of leaf `leaf_index` of `self`. The two edges must carry the
    /// same paint, and the result must satisfy the node rules.
    pub fn graft(&self, leaf_index: usize, scion: &PaintedTree) -> Result<PaintedTree, TreeError> {
        fn walk(b: &mut Branch, target: usize, seen: &mut usize, scion: &Branch) -> Result<bool, TreeError> {
            if b.is_leaf() {
                if *seen == target {
                    if b.painted != scion.painted {
                        return Err(TreeError::PaintMismatch { leaf: target, scion_painted: scion.painted });
                    }
                    *b = scion.clone();
                    return Ok(true);
                }
                *seen += 1;
                return Ok(false);
            }
            for c in &mut b.children {
                if walk(c, target, seen, scion)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        let leaves = self.leaf_count();
        if leaf_index >= leaves {
            return Err(TreeError::LeafOutOfRange { index: leaf_index, leaves });
        }
        let mut root = self.root.clone();
        let mut seen = 0;
        walk(&mut root, leaf_index, &mut seen, &scion.root)?;
        let out = PaintedTree::new(root);
        out.check_nodes()?;
        Ok(out)
    }

    pub fn to_canonical_string(&self) -> String {
        let mut out = String::new();
        self.root.write_to(&mut out);
        out
    }
}

impl fmt::Display for PaintedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl FromStr for PaintedTree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parser = Parser { src: s.as_bytes(), pos: 0 };
        parser.skip_ws();
        let root = parser.branch()?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(PaintedTree::new(root))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> TreeError {
        TreeError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn branch(&mut self) -> Result<Branch, TreeError> {
        let painted = self.src.get(self.pos) == Some(&b'=');
        if painted {
            self.pos += 1;
        }
        match self.src.get(self.pos) {
            Some(b'x') => {
                self.pos += 1;
                Ok(Branch::leaf(painted))
            }
            Some(b'(') => {
                self.pos += 1;
                let mut children = Vec::new();
                loop {
                    self.skip_ws();
                    match self.src.get(self.pos) {
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        Some(_) => children.push(self.branch()?),
                        None => return Err(self.error("unclosed `(`")),
                    }
                }
                if children.is_empty() {
                    return Err(self.error("empty node"));
                }
                Ok(Branch { painted, children })
            }
            Some(_) => Err(self.error("expected `x`, `(` or `=`")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// A painted tree known to be valid and binary: a vertex of the multiplihedron.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryPaintedTree(PaintedTree);

impl BinaryPaintedTree {
    pub fn tree(&self) -> &PaintedTree {
        &self.0
    }

    pub fn into_tree(self) -> PaintedTree {
        self.0
    }

    pub fn leaf_count(&self) -> usize {
        self.0.leaf_count()
    }
}

impl TryFrom<PaintedTree> for BinaryPaintedTree {
    type Error = TreeError;

    fn try_from(tree: PaintedTree) -> Result<Self, TreeError> {
        tree.validate()?;
        if !tree.is_binary() {
            return Err(TreeError::NotBinary);
        }
        Ok(BinaryPaintedTree(tree))
    }
}

impl FromStr for BinaryPaintedTree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<PaintedTree>()?.try_into()
    }
}

impl fmt::Display for BinaryPaintedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl AsRef<PaintedTree> for BinaryPaintedTree {
    fn as_ref(&self) -> &PaintedTree {
        &self.0
    }
}

/// `validate` as a total function: `(true, None)` or `(false, Some(reason))`.
pub fn validate(tree: &PaintedTree) -> (bool, Option<String>) {
    match tree.validate() {
        Ok(()) => (true, None),
        Err(v) => (false, Some(v.to_string())),
    }
}

/// Compositions of `n` (ordered by first part, then recursively).
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn product_of(lists: &[&Vec<Branch>]) -> Vec<Vec<Branch>> {
    lists
        .iter()
        .map(|l| l.iter())
        .multi_cartesian_product()
        .map(|combo| combo.into_iter().cloned().collect())
        .collect()
}

/// All binary painted trees with `n` leaves, each once, in canonical order:
/// trees with a color change at the root (unpainted trivalent nodes above)
/// first, then painted roots split by left leaf count `1..n`, sub-lists
/// recursively in the same order.
pub fn enumerate_binary(n: usize) -> Vec<BinaryPaintedTree> {
    if n == 0 {
        return Vec::new();
    }
    let mut unpainted: Vec<Vec<Branch>> = vec![Vec::new(), vec![Branch::leaf(false)]];
    let mut painted: Vec<Vec<Branch>> = vec![Vec::new()];
    for m in 1..=n {
        if m >= 2 {
            let mut level = Vec::new();
            for a in 1..m {
                for l in &unpainted[a] {
                    for r in &unpainted[m - a] {
                        level.push(Branch::unpainted(vec![l.clone(), r.clone()]));
                    }
                }
            }
            unpainted.push(level);
        }
        let mut level: Vec<Branch> = unpainted[m]
            .iter()
            .map(|u| Branch::color_change(vec![u.clone()]))
            .collect();
        for a in 1..m {
            for l in &painted[a] {
                for r in &painted[m - a] {
                    level.push(Branch::painted(vec![l.clone(), r.clone()]));
                }
            }
        }
        painted.push(level);
    }
    painted
        .pop()
        .unwrap_or_default()
        .into_iter()
        .map(|b| BinaryPaintedTree(PaintedTree::new(b)))
        .collect()
}

/// Every valid painted tree with `n` leaves: one per face of the
/// multiplihedron. Color-change roots come before painted roots; children
/// follow composition order.
pub fn enumerate_faces(n: usize) -> Vec<PaintedTree> {
    if n == 0 {
        return Vec::new();
    }
    let mut unpainted: Vec<Vec<Branch>> = vec![Vec::new(), vec![Branch::leaf(false)]];
    let mut painted: Vec<Vec<Branch>> = vec![Vec::new()];
    for m in 1..=n {
        if m >= 2 {
            let mut level = Vec::new();
            for parts in compositions(m).into_iter().filter(|p| p.len() >= 2) {
                let lists: Vec<&Vec<Branch>> = parts.iter().map(|&p| &unpainted[p]).collect();
                level.extend(product_of(&lists).into_iter().map(Branch::unpainted));
            }
            unpainted.push(level);
        }
        let mut level = Vec::new();
        for parts in compositions(m) {
            let lists: Vec<&Vec<Branch>> = parts.iter().map(|&p| &unpainted[p]).collect();
            level.extend(product_of(&lists).into_iter().map(Branch::color_change));
        }
        for parts in compositions(m).into_iter().filter(|p| p.len() >= 2) {
            let lists: Vec<&Vec<Branch>> = parts.iter().map(|&p| &painted[p]).collect();
            level.extend(product_of(&lists).into_iter().map(Branch::painted));
        }
        painted.push(level);
    }
    painted.pop().unwrap_or_default().into_iter().map(PaintedTree::new).collect()
}

/// `t` refines `u` when `u` is obtained from `t` by collapsing interior
/// edges. An interior edge is determined by the leaves above it and its
/// paint, and collapsing removes exactly the collapsed edges, so this is
/// inclusion of interior edge sets.
pub fn refines(t: &PaintedTree, u: &PaintedTree) -> Result<bool, TreeError> {
    let (lt, lu) = (t.leaf_count(), u.leaf_count());
    if lt != lu {
        return Err(TreeError::LeafCountMismatch { left: lt, right: lu });
    }
    if t.root.painted != u.root.painted {
        return Ok(false);
    }
    let te: BTreeSet<Edge> = t.interior_edges().into_iter().collect();
    Ok(u.interior_edges().iter().all(|e| te.contains(e)))
}

/// Refinement by searching every collapse set of `t`. Exponential in the
/// number of interior edges; a reference for [`refines`].
pub fn refines_exhaustive(t: &PaintedTree, u: &PaintedTree) -> Result<bool, TreeError> {
    let (lt, lu) = (t.leaf_count(), u.leaf_count());
    if lt != lu {
        return Err(TreeError::LeafCountMismatch { left: lt, right: lu });
    }
    let m = t.interior_edges().len();
    for mask in 0u64..(1u64 << m) {
        let set: BTreeSet<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        if t.collapse(&set) == *u {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A tree one collapse away from the painted corolla; indexes a facet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", try_from = "FacetTreeRepr")]
pub enum FacetTree {
    /// `l(k, s)`: an unpainted `s`-corolla grafted at gap `k` (on leaf
    /// `k - 1`) of the painted `r`-corolla, `r = n + 1 - s`.
    Lower { k: usize, s: usize, n: usize },
    /// `u(t; r_1, …, r_t)`: painted corollas with `parts[i]` leaves over a
    /// painted `t`-ary node.
    Upper { parts: Vec<usize> },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum FacetTreeRepr {
    Lower { k: usize, s: usize, n: usize },
    Upper { parts: Vec<usize> },
}

impl TryFrom<FacetTreeRepr> for FacetTree {
    type Error = TreeError;

    fn try_from(r: FacetTreeRepr) -> Result<Self, TreeError> {
        match r {
            FacetTreeRepr::Lower { k, s, n } => FacetTree::lower(k, s, n),
            FacetTreeRepr::Upper { parts } => FacetTree::upper(parts),
        }
    }
}

impl FacetTree {
    pub fn lower(k: usize, s: usize, n: usize) -> Result<Self, TreeError> {
        if s < 2 || s > n {
            return Err(TreeError::InvalidFacet(format!("l({k},{s}) needs 1 < s <= n = {n}")));
        }
        let r = n + 1 - s;
        if k < 1 || k > r {
            return Err(TreeError::InvalidFacet(format!("l({k},{s}) needs 1 <= k <= r = {r}")));
        }
        Ok(FacetTree::Lower { k, s, n })
    }

    pub fn upper(parts: Vec<usize>) -> Result<Self, TreeError> {
        if parts.len() < 2 || parts.contains(&0) {
            return Err(TreeError::InvalidFacet(format!(
                "u(t;r) needs at least two positive parts, got {parts:?}"
            )));
        }
        Ok(FacetTree::Upper { parts })
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            FacetTree::Lower { n, .. } => *n,
            FacetTree::Upper { parts } => parts.iter().sum(),
        }
    }

    pub fn is_lower(&self) -> bool {
        matches!(self, FacetTree::Lower { .. })
    }

    pub fn realize(&self) -> PaintedTree {
        match self {
            FacetTree::Lower { k, s, n } => {
                let r = n + 1 - s;
                let children = (0..r)
                    .map(|i| {
                        if i == k - 1 {
                            Branch::unpainted(vec![Branch::leaf(false); *s])
                        } else {
                            Branch::leaf(false)
                        }
                    })
                    .collect();
                PaintedTree::new(Branch::color_change(children))
            }
            FacetTree::Upper { parts } => PaintedTree::new(Branch::painted(
                parts
                    .iter()
                    .map(|&r| Branch::color_change(vec![Branch::leaf(false); r]))
                    .collect(),
            )),
        }
    }
}

impl fmt::Display for FacetTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FacetTree::Lower { k, s, .. } => write!(f, "l({k},{s})"),
            FacetTree::Upper { parts } => write!(f, "u({};{})", parts.len(), parts.iter().join(",")),
        }
    }
}

/// `realize_facet_tree`.
pub fn realize_facet_tree(f: &FacetTree) -> PaintedTree {
    f.realize()
}

/// Lower trees (by `s`, then `k`) followed by upper trees (compositions
/// of `n` into at least two parts).
pub fn facet_trees(n: usize) -> Vec<FacetTree> {
    if n < 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for s in 2..=n {
        for k in 1..=(n + 1 - s) {
            out.push(FacetTree::Lower { k, s, n });
        }
    }
    out.extend(
        compositions(n)
            .into_iter()
            .filter(|p| p.len() >= 2)
            .map(|parts| FacetTree::Upper { parts }),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> PaintedTree {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["=(x x x)", "=(=(x) =((x x)))", "=x", "(x (x x))", "=((x x) x)"] {
            assert_eq!(t(s).to_string(), s);
        }
        assert_eq!(t(" =( x  x ) ").to_string(), "=(x x)");
        assert!(matches!("=(".parse::<PaintedTree>(), Err(TreeError::Parse { .. })));
        assert!(matches!("()".parse::<PaintedTree>(), Err(TreeError::Parse { .. })));
        assert!(matches!("=(x) x".parse::<PaintedTree>(), Err(TreeError::Parse { .. })));
    }

    #[test]
    fn validate_examples() {
        assert!(PaintedTree::painted_corolla(4).is_valid());
        // type (3) over type (1)
        assert_eq!(validate(&t("=((x x))")), (true, None));
        // painting stops at a trivalent node on one branch only
        let (ok, why) = validate(&t("=(=(x) x)"));
        assert!(!ok);
        assert!(why.unwrap().contains("some branches"));
        assert_eq!(t("(x x)").validate(), Err(TreeViolation::RootUnpainted));
        assert_eq!(t("=(=x =(x))").validate(), Err(TreeViolation::PaintedLeaf { leaf: 0 }));
        assert!(matches!(t("=((=(x) x))").validate(), Err(TreeViolation::DisconnectedPaint { .. })));
        assert!(matches!(t("=(((x x)))").validate(), Err(TreeViolation::UnpaintedBivalent { .. })));
        assert!(matches!(t("=(=(=(x)) =(x))").validate(), Err(TreeViolation::PaintedBivalent { .. })));
    }

    #[test]
    fn binary_rejects_trivalent_color_change() {
        // valid face (edge of J(2)) but not a vertex
        assert!(t("=(x x)").is_valid());
        assert!(!t("=(x x)").is_binary());
        assert!(matches!(BinaryPaintedTree::try_from(t("=(x x)")), Err(TreeError::NotBinary)));
        assert!(t("=(=(x) =(x))").is_binary());
    }

    #[test]
    fn small_enumerations() {
        let one = enumerate_binary(1);
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].to_string(), "=(x)");
        assert_eq!(enumerate_binary(0).len(), 0);
        assert_eq!(enumerate_binary(3).len(), 6);
        assert_eq!(enumerate_binary(5).len(), 80);
        let two: Vec<String> = enumerate_binary(2).iter().map(|b| b.to_string()).collect();
        assert_eq!(two, ["=((x x))", "=(=(x) =(x))"]);
        assert_eq!(enumerate_faces(1).len(), 1);
        assert_eq!(enumerate_faces(2).len(), 3);
        assert_eq!(enumerate_faces(3).len(), 13);
    }

    #[test]
    fn refinement_examples() {
        let corolla = PaintedTree::painted_corolla(3);
        for b in enumerate_binary(3) {
            assert!(refines(b.tree(), b.tree()).unwrap());
            assert!(refines(b.tree(), &corolla).unwrap());
        }
        // fully painted left comb does not refine l(1,2)
        let comb = t("=(=(=(x) =(x)) =(x))");
        let l12 = FacetTree::lower(1, 2, 3).unwrap().realize();
        assert!(!refines(&comb, &l12).unwrap());
        assert!(!refines_exhaustive(&comb, &l12).unwrap());
        assert!(refines(&t("=(=((x x)) =(x))"), &l12).unwrap());
        assert!(!refines(&t("=(=(x) =((x x)))"), &l12).unwrap());
        assert!(refines(&t("=((x x) x)"), &corolla).unwrap());
        assert!(matches!(
            refines(&corolla, &PaintedTree::painted_corolla(2)),
            Err(TreeError::LeafCountMismatch { left: 3, right: 2 })
        ));
    }

    #[test]
    fn facet_tree_shapes() {
        assert_eq!(facet_trees(1), Vec::<FacetTree>::new());
        let two = facet_trees(2);
        assert_eq!(two, vec![FacetTree::Lower { k: 1, s: 2, n: 2 }, FacetTree::Upper { parts: vec![1, 1] }]);
        assert_eq!(facet_trees(3).len(), 6);
        assert_eq!(facet_trees(4).iter().filter(|f| f.is_lower()).count(), 6);
        assert_eq!(facet_trees(4).len(), 13);

        assert_eq!(FacetTree::lower(1, 3, 3).unwrap().realize().to_string(), "=((x x x))");
        assert_eq!(FacetTree::upper(vec![1, 1, 1]).unwrap().realize().to_string(), "=(=(x) =(x) =(x))");
        assert_eq!(FacetTree::lower(2, 2, 3).unwrap().realize().to_string(), "=(x (x x))");
        assert_eq!(FacetTree::upper(vec![2, 1]).unwrap().to_string(), "u(2;2,1)");

        assert!(FacetTree::lower(3, 2, 3).is_err());
        assert!(FacetTree::lower(1, 1, 3).is_err());
        assert!(FacetTree::upper(vec![3]).is_err());
        for f in facet_trees(5) {
            assert!(f.realize().is_valid(), "{f}");
        }
    }

    #[test]
    fn graft_examples() {
        // identity: a bare painted edge
        let stem = t("=x");
        let corolla = PaintedTree::painted_corolla(3);
        assert_eq!(stem.graft(0, &corolla).unwrap(), corolla);

        // lower facet recipe: unpainted s-corolla onto leaf k-1 of a painted r-corolla
        let base = PaintedTree::painted_corolla(3);
        let scion = t("(x x)");
        assert_eq!(base.graft(1, &scion).unwrap(), FacetTree::lower(2, 2, 4).unwrap().realize());

        // upper facet recipe: painted corollas onto a fully painted t-corolla
        let mut acc = t("=(=x =x)");
        acc = acc.graft(1, &PaintedTree::painted_corolla(2)).unwrap();
        acc = acc.graft(0, &PaintedTree::painted_corolla(1)).unwrap();
        assert_eq!(acc, FacetTree::upper(vec![1, 2]).unwrap().realize());
        assert!(acc.is_valid());

        // paint mismatch
        assert!(matches!(
            base.graft(0, &corolla),
            Err(TreeError::PaintMismatch { leaf: 0, scion_painted: true })
        ));
        assert!(matches!(base.graft(3, &scion), Err(TreeError::LeafOutOfRange { .. })));
    }

    #[test]
    fn collapse_by_index() {
        let tree = t("=(=(=(x) =(x)) =(x))");
        let edges = tree.interior_edges();
        assert_eq!(edges.len(), 4);
        assert_eq!(edges[0], Edge { span: LeafSpan { first: 0, count: 2 }, painted: true });
        let all: BTreeSet<usize> = (0..4).collect();
        assert_eq!(tree.collapse(&all), PaintedTree::painted_corolla(3));
        assert_eq!(tree.collapse(&BTreeSet::new()), tree);
    }
}
