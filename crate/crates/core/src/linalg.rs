//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::Rational;

/// Row-major dense matrix.
pub type Matrix = Vec<Vec<Rational>>;

/// Reduced row echelon form and pivot columns. Pivots are chosen left to
/// right, first nonzero row first, so the result is deterministic.
pub fn rref(mut a: Matrix) -> (Matrix, Vec<usize>) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Rational::one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(a: &Matrix) -> usize {
    rref(a.clone()).1.len()
}

/// Factors `a` (n×m, rank r) as `c · f` with `c` the pivot columns of `a`
/// (n×r) and `f` the nonzero rows of its RREF (r×m).
pub fn rank_factorization(a: &Matrix) -> (Matrix, Matrix) {
    let (red, pivots) = rref(a.clone());
    let c = a.iter().map(|row| pivots.iter().map(|&j| row[j].clone()).collect()).collect();
    let f = red.into_iter().take(pivots.len()).collect();
    (c, f)
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Rational::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
}
