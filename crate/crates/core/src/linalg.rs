//! Small exact-rational linear algebra: rank and null-space bases via
//! Gaussian elimination. Pivoting is by lowest index, so outputs are
//! deterministic functions of the input.

use num::{Signed, Zero};

use crate::rational::Rational;

/// Reduced row echelon form; returns the pivot column of each nonzero row.
fn reduce(matrix: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(pivot_row) = (row..matrix.len()).find(|&r| !matrix[r][col].is_zero()) else {
            continue;
        };
        matrix.swap(row, pivot_row);
        let pivot = matrix[row][col].clone();
        for v in matrix[row].iter_mut() {
            *v /= pivot.clone();
        }
        for r in 0..matrix.len() {
            if r != row && !matrix[r][col].is_zero() {
                let factor = matrix[r][col].clone();
                for c in 0..cols {
                    let delta = &matrix[row][c] * &factor;
                    matrix[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == matrix.len() {
            break;
        }
    }
    pivots
}

pub fn rank(matrix: &[Vec<Rational>]) -> usize {
    let cols = matrix.first().map_or(0, Vec::len);
    let mut work = matrix.to_vec();
    reduce(&mut work, cols).len()
}

/// A basis of the null space. Each basis vector sets one free column to 1
/// and is sign-normalized so its first nonzero entry is positive.
pub fn null_space(matrix: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut work = matrix.to_vec();
    let pivots = reduce(&mut work, cols);
    let pivot_set: Vec<Option<usize>> = {
        let mut set = vec![None; cols];
        for (r, &c) in pivots.iter().enumerate() {
            set[c] = Some(r);
        }
        set
    };
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set[free].is_some() {
            continue;
        }
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::from_integer(1.into());
        for (col, row) in pivot_set.iter().enumerate() {
            if let Some(r) = row {
                v[col] = -work[*r][free].clone();
            }
        }
        if let Some(first) = v.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                for x in v.iter_mut() {
                    *x = -x.clone();
                }
            }
        }
        basis.push(v);
    }
    basis
}

/// The affine dimension of a finite point set: the rank of the differences
/// against the first point.
pub fn affine_rank(points: &[Vec<Rational>]) -> usize {
    match points.split_first() {
        None | Some((_, [])) => 0,
        Some((origin, rest)) => {
            let diffs: Vec<Vec<Rational>> = rest
                .iter()
                .map(|p| p.iter().zip(origin).map(|(a, b)| a.clone() - b).collect())
                .collect();
            rank(&diffs)
        }
    }
}
