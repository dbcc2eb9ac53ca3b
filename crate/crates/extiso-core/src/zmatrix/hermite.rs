use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::zmatrix::IntMatrix;

/// Row-style Hermite reduction by left multiplication only: returns `(U, T)`
/// with `U` unimodular and `T = U * M` in row echelon form, so in particular
/// `T[i][j] = 0` for `i > j`. Pivots are positive and entries above a pivot
/// are reduced into `[0, pivot)`, which makes the output canonical and the
/// reduction idempotent.
pub fn hermite_left_reduce(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut t = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut pr = 0usize;

    for col in 0..t.cols() {
        if pr >= t.rows() {
            break;
        }
        // Euclid on the column below pr: smallest |entry| to the pivot row,
        // reduce the rest, repeat until only the pivot survives.
        loop {
            let mut best: Option<(BigInt, usize)> = None;
            for i in pr..t.rows() {
                let a = t[(i, col)].abs();
                if a.is_zero() {
                    continue;
                }
                match &best {
                    Some((b, _)) if *b <= a => {}
                    _ => best = Some((a, i)),
                }
            }
            let Some((_, i)) = best else {
                break;
            };
            t.swap_rows(pr, i);
            u.swap_rows(pr, i);
            let mut done = true;
            for r in pr + 1..t.rows() {
                if !t[(r, col)].is_zero() {
                    let q = -(&t[(r, col)] / &t[(pr, col)]);
                    t.add_row_multiple(r, pr, &q);
                    u.add_row_multiple(r, pr, &q);
                    if !t[(r, col)].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if t[(pr, col)].is_zero() {
            continue;
        }
        if t[(pr, col)].is_negative() {
            t.negate_row(pr);
            u.negate_row(pr);
        }
        // Canonical range above the pivot.
        for r in 0..pr {
            let q = -t[(r, col)].div_floor(&t[(pr, col)]);
            t.add_row_multiple(r, pr, &q);
            u.add_row_multiple(r, pr, &q);
        }
        pr += 1;
    }

    (u, t)
}

/// Membership of `target` in the lattice generated by the rows of `basis`.
pub fn row_lattice_contains(basis: &IntMatrix, target: &[BigInt]) -> bool {
    assert_eq!(basis.cols(), target.len());
    let (_, h) = hermite_left_reduce(basis);
    let mut t: Vec<BigInt> = target.to_vec();
    let mut row = 0usize;
    for col in 0..h.cols() {
        if row >= h.rows() || h[(row, col)].is_zero() {
            continue;
        }
        let piv = h[(row, col)].clone();
        if !(&t[col] % &piv).is_zero() {
            return false;
        }
        let q = &t[col] / &piv;
        if !q.is_zero() {
            for c in 0..h.cols() {
                let sub = &q * &h[(row, c)];
                t[c] -= sub;
            }
        }
        row += 1;
    }
    t.iter().all(Zero::is_zero)
}
