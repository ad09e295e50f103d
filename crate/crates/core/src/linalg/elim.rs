//! Fraction-free elimination over the rationals.
//!
//! Rows are scaled to integers, reduced with Bareiss' one-step
//! fraction-free scheme (every intermediate entry is a minor of the input,
//! so the divisions are exact), and only then brought to reduced form
//! over the rationals when a kernel or a solution is needed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::RatMatrix;
use super::rational::{Rational, Vector};
use crate::error::{Error, Result};

fn integer_rows(m: &RatMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect()
}

/// Bareiss forward elimination in place; returns the pivot columns.
fn bareiss(rows: &mut [Vec<BigInt>]) -> Vec<usize> {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(p) = (r..n_rows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let (top, rest) = rows.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = pivot_row[col].clone();
        for row in rest.iter_mut() {
            let lead = row[col].clone();
            for j in col + 1..n_cols {
                let v = &pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = pivot;
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn rank(x: &RatMatrix) -> usize {
    let mut rows = integer_rows(x);
    bareiss(&mut rows).len()
}

/// Reduced row echelon form and its pivot columns.
pub fn rref(x: &RatMatrix) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut rows = integer_rows(x);
    let pivots = bareiss(&mut rows);
    let mut red: Vec<Vec<Rational>> = rows
        .into_iter()
        .take(pivots.len())
        .enumerate()
        .map(|(k, row)| {
            let lead = row[pivots[k]].clone();
            row.into_iter().map(|v| Rational::new(v, lead.clone())).collect()
        })
        .collect();
    for k in (0..pivots.len()).rev() {
        let pc = pivots[k];
        let (above, below) = red.split_at_mut(k);
        let pivot_row = &below[0];
        for row in above.iter_mut() {
            let factor = row[pc].clone();
            if factor.is_zero() {
                continue;
            }
            for (dst, src) in row.iter_mut().zip(pivot_row) {
                if !src.is_zero() {
                    *dst -= &factor * src;
                }
            }
        }
    }
    (red, pivots)
}

/// Basis of the right null space `{v : x·v = 0}`; empty when `x` is injective.
pub fn kernel_basis(x: &RatMatrix) -> Vec<Vector> {
    let (red, pivots) = rref(x);
    let n = x.cols();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); n];
            v[free] = Rational::one();
            for (k, &p) in pivots.iter().enumerate() {
                v[p] = -red[k][free].clone();
            }
            v
        })
        .collect()
}

/// Some `v` with `a·v = b`, or `None` when the system is inconsistent.
///
/// Free variables are set to zero, so the witness is deterministic.
pub fn solve_linear(a: &RatMatrix, b: &[Rational]) -> Result<Option<Vector>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    let n = a.cols();
    let mut aug = RatMatrix::zeros(a.rows(), n + 1);
    for i in 0..a.rows() {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, n)] = b[i].clone();
    }
    let (red, pivots) = rref(&aug);
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut v = vec![Rational::zero(); n];
    for (k, &p) in pivots.iter().enumerate() {
        v[p] = red[k][n].clone();
    }
    Ok(Some(v))
}

/// Exact inverse, `None` when singular.
pub fn inverse(x: &RatMatrix) -> Result<Option<RatMatrix>> {
    if !x.is_square() {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let n = x.rows();
    let mut aug = RatMatrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = x[(i, j)].clone();
        }
        aug[(i, n + i)] = Rational::one();
    }
    let (red, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Ok(None);
    }
    let rows = red.into_iter().map(|r| r[n..].to_vec()).collect();
    RatMatrix::from_rows(rows).map(Some)
}

/// Whether `v` lies in the span of `basis` (all of one common length).
pub fn in_span(basis: &[Vector], v: &[Rational]) -> bool {
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    let a = RatMatrix::from_columns(v.len(), basis).expect("span vectors of equal length");
    matches!(solve_linear(&a, v), Ok(Some(_)))
}
