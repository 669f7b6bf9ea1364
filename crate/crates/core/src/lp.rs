//! Small dense two-phase simplex over exact rationals, with Bland's rule.
//!
//! Solves `maximize c.x subject to A x = b, x >= 0`. Used for convex-hull
//! membership (extremality) and for per-edge length bounds of metric trees.

use num_traits::{Signed, Zero};

use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Q, x: Vec<Q> },
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    obj: Vec<Q>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.width
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for v in &mut self.rows[row] {
            *v /= &p;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        if !self.obj[col].is_zero() {
            let f = self.obj[col].clone();
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Runs to optimality over columns `< allowed`. Returns false if unbounded.
    fn run(&mut self, allowed: usize) -> bool {
        let rhs = self.rhs();
        loop {
            let Some(col) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Q)> = None;
            for (i, r) in self.rows.iter().enumerate() {
                if !r[col].is_positive() {
                    continue;
                }
                let ratio = &r[rhs] / &r[col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }
}

pub fn maximize(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m);
    assert!(a.iter().all(|r| r.len() == n));

    // Columns: n structural, m artificial, then the right-hand side.
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (ar, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut row: Vec<Q> = ar.iter().map(|v| if flip { -v } else { v.clone() }).collect();
        row.extend((0..m).map(|j| if j == i { Q::from_integer(1.into()) } else { Q::zero() }));
        row.push(if flip { -bi } else { bi.clone() });
        rows.push(row);
    }
    let mut obj = vec![Q::zero(); width + 1];
    for r in &rows {
        for j in 0..n {
            obj[j] -= &r[j];
        }
        obj[width] -= &r[width];
    }
    let mut t = Tableau { rows, obj, basis: (n..n + m).collect(), width };
    t.run(width);
    if t.obj[width].is_negative() {
        return LpOutcome::Infeasible;
    }

    // Drive zero-valued artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    let mut obj = vec![Q::zero(); width + 1];
    for (j, cj) in c.iter().enumerate() {
        obj[j] = -cj.clone();
    }
    for (r, &bj) in t.rows.iter().zip(&t.basis) {
        let cb = &c[bj];
        if cb.is_zero() {
            continue;
        }
        for (o, v) in obj.iter_mut().zip(r) {
            *o += cb * v;
        }
    }
    t.obj = obj;
    if !t.run(n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Q::zero(); n];
    for (r, &bj) in t.rows.iter().zip(&t.basis) {
        x[bj] = r[width].clone();
    }
    LpOutcome::Optimal { value: t.obj[width].clone(), x }
}

/// Some `x >= 0` with `A x = b`, if one exists.
pub fn feasible_point(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.first().map_or(0, Vec::len);
    match maximize(&vec![Q::zero(); n], a, b) {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}

/// Whether `target` is a convex combination of `points`.
pub fn in_convex_hull(points: &[Vec<Q>], target: &[Q]) -> bool {
    if points.is_empty() {
        return false;
    }
    let d = target.len();
    let mut a: Vec<Vec<Q>> = (0..d).map(|k| points.iter().map(|p| p[k].clone()).collect()).collect();
    a.push(vec![Q::from_integer(1.into()); points.len()]);
    let mut b: Vec<Q> = target.to_vec();
    b.push(Q::from_integer(1.into()));
    feasible_point(&a, &b).is_some()
}
