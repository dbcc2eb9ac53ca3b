use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::zmatrix::IntMatrix;

/// Smith normal form `U * M * V = D` with `U`, `V` unimodular and `D`
/// diagonal, non-negative, satisfying the divisibility chain
/// `D[0][0] | D[1][1] | ...`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries, in chain order.
    pub fn invariant_factors(&self) -> alloc::vec::Vec<BigInt> {
        let n = core::cmp::min(self.d.rows(), self.d.cols());
        (0..n)
            .map(|i| self.d[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

/// Pivot choice is deterministic: smallest nonzero absolute value, ties
/// broken in row-major order. This fixes the transforms, not just `D`.
fn select_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let a = d[(i, j)].abs();
            if a.is_zero() {
                continue;
            }
            match &best {
                Some((b, _, _)) if *b <= a => {}
                _ => best = Some((a, i, j)),
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());
    let steps = core::cmp::min(m.rows(), m.cols());

    'outer: for t in 0..steps {
        loop {
            let Some((pi, pj)) = select_pivot(&d, t) else {
                break 'outer;
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..d.rows() {
                if !d[(i, t)].is_zero() {
                    let q = -(&d[(i, t)] / &d[(t, t)]);
                    d.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                    if !d[(i, t)].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..d.cols() {
                if !d[(t, j)].is_zero() {
                    let q = -(&d[(t, j)] / &d[(t, t)]);
                    d.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                    if !d[(t, j)].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }

            // Pivot row and column are clear; absorb any entry the pivot
            // does not divide so the divisibility chain holds.
            let mut absorbed = false;
            'scan: for i in t + 1..d.rows() {
                for j in t + 1..d.cols() {
                    if !d[(i, j)].is_multiple_of(&d[(t, t)]) {
                        let one = BigInt::from(1);
                        d.add_row_multiple(t, i, &one);
                        u.add_row_multiple(t, i, &one);
                        absorbed = true;
                        break 'scan;
                    }
                }
            }
            if !absorbed {
                break;
            }
        }
    }

    for t in 0..steps {
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }

    SnfResult { u, d, v }
}

trait MultipleOf {
    fn is_multiple_of(&self, d: &BigInt) -> bool;
}

impl MultipleOf for BigInt {
    fn is_multiple_of(&self, d: &BigInt) -> bool {
        (self % d).is_zero()
    }
}
