//! Exact Gaussian elimination over the rationals.

use num::{One, Zero};

use crate::series::Rational;

/// Reduced row echelon form: nonzero rows and their pivot columns.
pub fn rref(rows: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        m[r].iter_mut().for_each(|v| *v *= &inv);
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                row.iter_mut().zip(&pivot_row).for_each(|(v, p)| *v -= &f * p);
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    rref(rows).1.len()
}

/// Whether `candidate` is a rational combination of `rows`.
pub fn in_rowspace(rows: &[Vec<Rational>], candidate: &[Rational]) -> bool {
    let (basis, pivots) = rref(rows);
    let mut v = candidate.to_vec();
    for (row, &c) in basis.iter().zip(&pivots) {
        if !v[c].is_zero() {
            let f = v[c].clone();
            v.iter_mut().zip(row).for_each(|(x, p)| *x -= &f * p);
        }
    }
    v.iter().all(Zero::is_zero)
}
