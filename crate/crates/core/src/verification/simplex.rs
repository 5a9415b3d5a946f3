//! Dense tableau simplex over exact rationals.
//!
//! Solves `max c^T x  s.t.  A x <= b, x >= 0` with `b >= 0`, so the slack
//! basis is feasible from the start and no phase one is needed. Bland's rule
//! keeps it from cycling.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<BigRational>, value: BigRational },
    Unbounded,
}

pub fn maximize(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m);
    assert!(a.iter().all(|r| r.len() == n));
    assert!(
        b.iter().all(|v| !v.is_negative()),
        "right-hand side must be nonnegative"
    );

    // tableau rows: [A | I | b]; objective row: [-c | 0 | 0]
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..m).map(|j| if i == j { one() } else { BigRational::zero() }));
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut obj: Vec<BigRational> = c.iter().map(|v| -v.clone()).collect();
    obj.resize(width, BigRational::zero());
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Bland: lowest-index column with negative reduced cost
    while let Some(col) = (0..n + m).find(|&j| obj[j].is_negative()) {
        let mut pivot: Option<(usize, BigRational)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[col].is_positive() {
                let ratio = &row[width - 1] / &row[col];
                let better = match &pivot {
                    None => true,
                    Some((p, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*p]),
                };
                if better {
                    pivot = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = pivot else {
            return LpOutcome::Unbounded;
        };

        let p = t[row][col].clone();
        for v in &mut t[row] {
            *v = &*v / &p;
        }
        let pivot_row = t[row].clone();
        for (i, r) in t.iter_mut().enumerate() {
            if i != row && !r[col].is_zero() {
                let f = r[col].clone();
                for (v, pv) in r.iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
        if !obj[col].is_zero() {
            let f = obj[col].clone();
            for (v, pv) in obj.iter_mut().zip(&pivot_row) {
                *v -= &f * pv;
            }
        }
        basis[row] = col;
    }

    let mut x = vec![BigRational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][width - 1].clone();
        }
    }
    LpOutcome::Optimal {
        x,
        value: obj[width - 1].clone(),
    }
}

fn one() -> BigRational {
    BigRational::from_integer(1.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18
        let a = vec![vec![r(1), r(0)], vec![r(0), r(2)], vec![r(3), r(2)]];
        let b = vec![r(4), r(12), r(18)];
        match maximize(&a, &b, &[r(3), r(5)]) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, r(36));
                assert_eq!(x, vec![r(2), r(6)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn detects_unbounded() {
        let a = vec![vec![r(1), r(-1)]];
        assert_eq!(maximize(&a, &[r(1)], &[r(0), r(1)]), LpOutcome::Unbounded);
    }

    #[test]
    fn degenerate_vertex_terminates() {
        // classic cycling example under the largest-coefficient rule
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let a = vec![
            vec![q(1, 2), q(-11, 2), q(-5, 2), r(9)],
            vec![q(1, 2), q(-3, 2), q(-1, 2), r(1)],
            vec![r(1), r(0), r(0), r(0)],
        ];
        let b = vec![r(0), r(0), r(1)];
        match maximize(&a, &b, &[r(10), r(-57), r(-9), r(-24)]) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, r(1)),
            other => panic!("{other:?}"),
        }
    }
}
