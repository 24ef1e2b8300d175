//! Exact integer and rational linear algebra on small dense matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::rational::Rational;

/// Rank over the rationals.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &pivot;
            for j in c..cols {
                let d = &f * &m[r][j];
                m[i][j] -= &d;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Subtracts `k * rows[src]` from `rows[dst]`.
fn row_axpy(rows: &mut [Vec<BigInt>], dst: usize, src: usize, k: &BigInt) {
    if k.is_zero() {
        return;
    }
    let (d, s) = if dst < src {
        let (lo, hi) = rows.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s) {
        *x -= k * y;
    }
}

/// Brings `rows` to integer row echelon form over columns `0..cols` using unimodular
/// row operations on the full rows. Returns the pivot columns, one per leading row.
fn echelon(rows: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        loop {
            // smallest nonzero entry at or below r
            let best = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()).then(a.cmp(&b)));
            let Some(best) = best else { break };
            rows.swap(r, best);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                row_axpy(rows, i, r, &q);
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !rows[r][c].is_zero() {
            pivots.push(c);
            r += 1;
        }
    }
    pivots
}

/// A lattice basis of `{x ∈ Zⁿ : A x = 0}` for an `r × n` integer matrix.
pub fn integer_kernel(a: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let r = a.len();
    // rows of [Aᵀ | I]
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut row: Vec<BigInt> = a.iter().map(|eq| eq[j].clone()).collect();
            row.extend((0..n).map(|k| BigInt::from((k == j) as i64)));
            row
        })
        .collect();
    let rank = echelon(&mut m, r).len();
    m.into_iter().skip(rank).map(|row| row[r..].to_vec()).collect()
}

/// Row Hermite normal form with zero rows removed: echelon shape, positive pivots,
/// entries above each pivot reduced into `[0, pivot)`.
pub fn row_hnf(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut m = rows.to_vec();
    let pivots = echelon(&mut m, cols);
    m.truncate(pivots.len());
    for (r, &c) in pivots.iter().enumerate() {
        if m[r][c].is_negative() {
            for x in m[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = m[i][c].div_floor(&m[r][c]);
            row_axpy(&mut m, i, r, &q);
        }
    }
    m
}
