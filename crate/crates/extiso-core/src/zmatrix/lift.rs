use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::zmatrix::{content, factorize, hermite_left_reduce, mod_inverse, mod_reduce};
use crate::zmatrix::{IntMatrix, ModMatrix};

/// Constructive lift of an invertible `R` mod `D` to `Phi` in `GL_n(Z)`.
///
/// With `det_pm_one = true` the lift satisfies `Phi = R mod D` in full; this
/// requires `det R = +-1 mod D` (error `NotLiftable` otherwise). With
/// `det_pm_one = false` the determinant obstruction is waived at the price of
/// the congruence in the last column: `Phi` still lies in `GL_n(Z)` and
/// matches `R mod D` on the first `n - 1` columns. That weaker mode exists
/// for block constructions that overwrite the last column themselves.
///
/// With `pin_first_column = true`, `R`'s first column must be `e_1 mod D`
/// and the returned `Phi` has first column exactly `e_1`.
///
/// The construction walks the columns: the first column is lifted to a
/// primitive integer vector, a recorded Hermite transform moves it to `e_1`,
/// and the lower-right block is completed recursively. No search is involved.
pub fn lift_modular_matrix(
    r: &ModMatrix,
    det_pm_one: bool,
    pin_first_column: bool,
) -> Result<IntMatrix, Error> {
    let n = r.size();
    let d = r.modulus().clone();
    if !r.is_invertible() {
        return Err(Error::NotInvertible);
    }
    if det_pm_one && !r.det_is_pm_one() {
        return Err(Error::NotLiftable);
    }
    if pin_first_column && !r.first_column_is_e1() {
        return Err(Error::FirstColumnNotPinned);
    }
    if d == BigInt::one() || n == 0 {
        return Ok(IntMatrix::identity(n));
    }
    let phi = lift_rec(&r.lift(), &d);
    debug_assert!(phi.is_unimodular());
    debug_assert!(congruent_on_columns(&phi, &r.lift(), &d, if det_pm_one { n } else { n.saturating_sub(1) }));
    if pin_first_column {
        debug_assert!(phi.column(0) == e1(n));
    }
    Ok(phi)
}

fn e1(n: usize) -> Vec<BigInt> {
    let mut v = alloc::vec![BigInt::zero(); n];
    v[0] = BigInt::one();
    v
}

fn congruent_on_columns(a: &IntMatrix, b: &IntMatrix, d: &BigInt, cols: usize) -> bool {
    (0..a.rows()).all(|r| (0..cols).all(|c| mod_reduce(&a[(r, c)], d) == mod_reduce(&b[(r, c)], d)))
}

/// `m` is an integer representative of an invertible matrix mod `d >= 2`.
fn lift_rec(m: &IntMatrix, d: &BigInt) -> IntMatrix {
    let n = m.rows();
    if n == 1 {
        // det = +-1 mod d was checked at the top level when required, and
        // propagates down the recursion; a base entry not congruent to +-1
        // only occurs in the relaxed mode, where the sign is free.
        let e = mod_reduce(&m[(0, 0)], d);
        if e == mod_reduce(&BigInt::from(-1), d) {
            return IntMatrix::from_i64_rows(&[&[-1]]);
        }
        return IntMatrix::identity(1);
    }

    let first = m.column(0);
    let first_is_e1 = mod_reduce(&first[0], d) == BigInt::one()
        && first[1..].iter().all(|x| mod_reduce(x, d).is_zero());

    if first_is_e1 {
        // Peel the block: Phi = [[1, b], [0, Phi']] with b a lift of the top
        // row remainder and Phi' a recursive lift of the lower-right block.
        let inner = lift_rec(&m.submatrix(1, 1, n - 1, n - 1), d);
        let mut phi = IntMatrix::identity(n);
        for c in 1..n {
            phi[(0, c)] = mod_reduce(&m[(0, c)], d);
        }
        for r in 1..n {
            for c in 1..n {
                phi[(r, c)] = inner[(r - 1, c - 1)].clone();
            }
        }
        return phi;
    }

    // Move the first column to e_1: lift it to a primitive vector v, record
    // the Hermite transform with U v = e_1, and recurse on U m.
    let w: Vec<BigInt> = first.iter().map(|x| mod_reduce(x, d)).collect();
    let v = primitive_lift(&w, d);
    let (u, t) = hermite_left_reduce(&IntMatrix::column_vector(&v));
    debug_assert!(t[(0, 0)] == BigInt::one());
    let inner = lift_rec(&u.mul(m), d);
    u.inverse_unimodular()
        .expect("hermite transform is unimodular")
        .mul(&inner)
}

/// Lift a vector `w` with `gcd(w_1, ..., w_n, d) = 1` (entries in `[0, d)`,
/// not all zero, `n >= 2`) to a content-1 vector congruent to it mod `d`.
fn primitive_lift(w: &[BigInt], d: &BigInt) -> Vec<BigInt> {
    let n = w.len();
    debug_assert!(n >= 2);
    let mut v = w.to_vec();
    if content(&v) == BigInt::one() {
        return v;
    }
    let head = &v[..n - 1];
    let g = content(head);
    if g.is_zero() {
        // Only the last entry is nonzero; it is a unit mod d.
        v[0] = d.clone();
        debug_assert!(content(&v) == BigInt::one());
        return v;
    }
    // Choose K so that v_last + K*d avoids every prime of g. Primes shared
    // with d are already safe: they cannot divide v_last.
    let mut residues: Vec<(BigInt, BigInt)> = Vec::new();
    for (p, _) in factorize(&g) {
        if d.is_multiple_of(&p) {
            continue;
        }
        let d_inv = mod_inverse(&mod_reduce(d, &p), &p).expect("p does not divide d");
        let forbidden = mod_reduce(&(-&v[n - 1] * d_inv), &p);
        let pick = if forbidden.is_zero() { BigInt::one() } else { BigInt::zero() };
        residues.push((pick, p));
    }
    let k = crt(&residues);
    v[n - 1] = &v[n - 1] + k * d;
    debug_assert!(content(&v) == BigInt::one());
    v
}

/// Chinese remainder for pairwise coprime moduli; empty input gives 0.
fn crt(residues: &[(BigInt, BigInt)]) -> BigInt {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (r, q) in residues {
        // x' = x mod m, x' = r mod q
        let diff = mod_reduce(&(r - &x), q);
        let m_inv = mod_inverse(&mod_reduce(&m, q), q).expect("moduli are coprime");
        let t = mod_reduce(&(diff * m_inv), q);
        x += t * &m;
        m *= q;
    }
    x
}
