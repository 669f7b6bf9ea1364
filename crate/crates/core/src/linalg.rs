//! Exact Gaussian elimination over the rationals.

use num_traits::Zero;

use crate::rational::Q;

/// Brings `rows` to reduced row echelon form in place, dropping zero rows.
/// Returns the pivot column of each remaining row.
pub fn row_reduce(rows: &mut Vec<Vec<Q>>) -> Vec<usize> {
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let p = rows[r][col].clone();
        for v in &mut rows[r] {
            *v /= &p;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= &f * pv;
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    row_reduce(&mut rows.to_vec()).len()
}

/// Differences `p_i - p_0`.
pub fn differences(points: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let Some(base) = points.first() else {
        return Vec::new();
    };
    points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect()
}

/// Dimension of the affine span; `None` for an empty set.
pub fn affine_dimension(points: &[Vec<Q>]) -> Option<usize> {
    if points.is_empty() {
        return None;
    }
    Some(rank(&differences(points)))
}
