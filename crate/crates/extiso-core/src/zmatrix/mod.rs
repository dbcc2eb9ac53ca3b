//! Exact integer matrix algebra: dense matrices over `BigInt`, Smith and
//! Hermite normal forms with recorded unimodular transforms, vector content,
//! matrices over `Z/D` with constructive `GL_n(Z)` lifting, and lexicographic
//! enumeration of invertible matrices mod D.

mod dense;
mod hermite;
mod lift;
mod modular;
mod snf;

pub use dense::IntMatrix;
pub use hermite::{hermite_left_reduce, row_lattice_contains};
pub use lift::lift_modular_matrix;
pub use modular::{enumerate_units_matrices, ModMatrix, UnitsMatrices};
pub use snf::{smith_normal_form, SnfResult};

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// gcd of the entries, non-negative; `content(0) = 0` and the content of the
/// empty vector is 0.
pub fn content(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
        if g == BigInt::from(1) {
            break;
        }
    }
    g.abs()
}

/// Representative of `x` mod `d` in `[0, d)`; requires `d >= 1`.
pub fn mod_reduce(x: &BigInt, d: &BigInt) -> BigInt {
    debug_assert!(d > &BigInt::zero());
    x.mod_floor(d)
}

/// Inverse of `x` mod `d` for `gcd(x, d) = 1`; for `d = 1` returns 0.
pub fn mod_inverse(x: &BigInt, d: &BigInt) -> Option<BigInt> {
    if *d == BigInt::from(1) {
        return Some(BigInt::zero());
    }
    let e = x.extended_gcd(d);
    if e.gcd == BigInt::from(1) {
        Some(mod_reduce(&e.x, d))
    } else {
        None
    }
}

/// Trial-division factorization of `n >= 1` into `(prime, exponent)` pairs
/// in increasing prime order.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(n >= &BigInt::from(1), "factorize requires n >= 1");
    let mut out = Vec::new();
    let mut rest = n.clone();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        if rest.is_multiple_of(&p) {
            let mut e = 0u32;
            while rest.is_multiple_of(&p) {
                rest /= &p;
                e += 1;
            }
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if rest > BigInt::from(1) {
        out.push((rest, 1));
    }
    out
}
