//! Phase-one simplex over the rationals with Bland's rule.

use crate::rational::Rational;

/// Finds `y ≥ 0` with `A y = b`, or `None` when no such `y` exists.
/// `A` is `m × n`. Deterministic: Bland's smallest-index rule for entering and leaving.
pub fn nonnegative_solution(a: &[Vec<Rational>], b: &[Rational], n: usize) -> Option<Vec<Rational>> {
    let m = a.len();
    let width = n + m + 1;
    let rhs = n + m;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        let flip = b[i].is_negative();
        let mut r = vec![Rational::zero(); width];
        for j in 0..n {
            r[j] = if flip { -&row[j] } else { row[j].clone() };
        }
        r[n + i] = Rational::one();
        r[rhs] = b[i].abs();
        t.push(r);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // reduced costs of minimizing the sum of artificials
    let mut obj = vec![Rational::zero(); width];
    for r in &t {
        for j in 0..n {
            obj[j] -= &r[j];
        }
        obj[rhs] -= &r[rhs];
    }

    while let Some(enter) = (0..rhs).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][rhs] / &t[i][enter];
            let better = match &leave {
                None => true,
                Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // phase one is bounded below by zero, so an entering column always has a pivot
        let (p, _) = leave.expect("phase-one objective is bounded");
        let pivot = t[p][enter].clone();
        for x in t[p].iter_mut() {
            *x = &*x / &pivot;
        }
        let prow = t[p].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == p || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for j in 0..width {
                let d = &f * &prow[j];
                row[j] -= &d;
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for j in 0..width {
                let d = &f * &prow[j];
                obj[j] -= &d;
            }
        }
        basis[p] = enter;
    }

    if !obj[rhs].is_zero() {
        return None;
    }
    let mut y = vec![Rational::zero(); n];
    for (i, &v) in basis.iter().enumerate() {
        if v < n {
            y[v] = t[i][rhs].clone();
        }
    }
    Some(y)
}
