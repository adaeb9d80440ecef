//! Gaussian elimination over a [`Field`].
//!
//! Matrices are row-major `Vec<Vec<Elem>>`. Base-field systems use the same
//! routines: codes below `q` are closed under the extension-field operations.
//! Pivots are taken column by column, left to right, using the first row
//! with a nonzero entry, so every result is deterministic.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::{Elem, Field};

/// Reduces `m` (with `cols` columns) to reduced row echelon form in place,
/// drops zero rows and returns the pivot columns.
pub fn rref(f: &Field, m: &mut Vec<Vec<Elem>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(found) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, found);
        let inv = f.inv(m[row][col]);
        for x in m[row].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row {
                continue;
            }
            let c = other[col];
            if c.is_zero() {
                continue;
            }
            for (x, &p) in other.iter_mut().zip(&pivot_row).skip(col) {
                *x = f.sub(*x, f.mul(c, p));
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    pivots
}

pub fn rank(f: &Field, mut m: Vec<Vec<Elem>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    rref(f, &mut m, cols).len()
}

/// A solution of `a · x = b` with every free variable set to zero, or `None`
/// when the system is inconsistent.
pub fn solve(f: &Field, a: &[Vec<Elem>], b: &[Elem]) -> Option<Vec<Elem>> {
    assert_eq!(a.len(), b.len(), "one right-hand side per row");
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Elem>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    let pivots = rref(f, &mut aug, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Elem::ZERO; cols];
    for (row, &col) in aug.iter().zip(&pivots) {
        x[col] = row[cols];
    }
    Some(x)
}

/// Basis of `{x : a · x = 0}` for a matrix with `cols` columns; one vector
/// per free column, with a one in that column.
pub fn kernel(f: &Field, a: &[Vec<Elem>], cols: usize) -> Vec<Vec<Elem>> {
    let mut m = a.to_vec();
    let pivots = rref(f, &mut m, cols);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Elem::ZERO; cols];
            v[free] = Elem::ONE;
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = f.neg(row[free]);
            }
            v
        })
        .collect()
}

/// `m · x`.
pub fn mat_vec(f: &Field, m: &[Vec<Elem>], x: &[Elem]) -> Vec<Elem> {
    m.iter().map(|row| f.dot(row, x)).collect()
}

/// Transpose of a matrix with `cols` columns.
pub fn transpose(m: &[Vec<Elem>], cols: usize) -> Vec<Vec<Elem>> {
    (0..cols).map(|c| m.iter().map(|row| row[c]).collect()).collect()
}
