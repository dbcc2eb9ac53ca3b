use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::zmatrix::{mod_reduce, IntMatrix};

/// Square matrix over `Z/D`, entries reduced to `[0, D)`. `D = 1` is the
/// trivial ring: the unique matrix has all entries 0 and counts as
/// invertible (and as the identity).
#[derive(Clone, PartialEq, Eq)]
pub struct ModMatrix {
    n: usize,
    modulus: BigInt,
    entries: Vec<BigInt>,
}

impl ModMatrix {
    pub fn new(n: usize, modulus: BigInt, entries: Vec<BigInt>) -> Result<Self, Error> {
        if modulus < BigInt::one() {
            return Err(Error::ModulusMismatch {
                detail: format!("modulus must be >= 1, got {}", modulus),
            });
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                detail: format!("expected {} entries, got {}", n * n, entries.len()),
            });
        }
        let entries = entries.iter().map(|x| mod_reduce(x, &modulus)).collect();
        Ok(ModMatrix { n, modulus, entries })
    }

    pub fn identity(n: usize, modulus: BigInt) -> Self {
        let mut m = ModMatrix::new(n, modulus, vec![BigInt::zero(); n * n]).unwrap();
        for i in 0..n {
            let one = mod_reduce(&BigInt::one(), &m.modulus);
            m.entries[i * n + i] = one;
        }
        m
    }

    pub fn from_int_matrix(m: &IntMatrix, modulus: &BigInt) -> Result<Self, Error> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                detail: format!("modular matrices are square, got {}x{}", m.rows(), m.cols()),
            });
        }
        let n = m.rows();
        let entries = (0..n * n)
            .map(|k| m[(k / n, k % n)].clone())
            .collect();
        ModMatrix::new(n, modulus.clone(), entries)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.n + c]
    }

    /// Integer lift with entries in `[0, D)`.
    pub fn lift(&self) -> IntMatrix {
        IntMatrix::from_fn(self.n, self.n, |r, c| self.at(r, c).clone())
    }

    /// Determinant reduced into `[0, D)`.
    pub fn det(&self) -> BigInt {
        mod_reduce(&self.lift().determinant(), &self.modulus)
    }

    /// Invertible iff the determinant is a unit mod D.
    pub fn is_invertible(&self) -> bool {
        self.det().gcd(&self.modulus) == BigInt::one()
    }

    pub fn det_is_pm_one(&self) -> bool {
        let d = self.det();
        d == mod_reduce(&BigInt::one(), &self.modulus)
            || d == mod_reduce(&BigInt::from(-1), &self.modulus)
    }

    pub fn first_column_is_e1(&self) -> bool {
        let one = mod_reduce(&BigInt::one(), &self.modulus);
        if *self.at(0, 0) != one {
            return false;
        }
        (1..self.n).all(|r| self.at(r, 0).is_zero())
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!(self.n, other.n);
        assert_eq!(self.modulus, other.modulus);
        ModMatrix::from_int_matrix(&self.lift().mul(&other.lift()), &self.modulus).unwrap()
    }

    pub fn mul_vec_mod(&self, v: &[BigInt], modulus: &BigInt) -> Vec<BigInt> {
        self.lift()
            .mul_vec(v)
            .iter()
            .map(|x| mod_reduce(x, modulus))
            .collect()
    }

    /// Entry tuple in row-major order; the enumeration order key.
    pub fn entry_tuple(&self) -> &[BigInt] {
        &self.entries
    }
}

impl fmt::Debug for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModMatrix mod {} ", self.modulus)?;
        fmt::Debug::fmt(&self.lift(), f)
    }
}

/// Lexicographic stream of the invertible matrices in `(Z/D)^{n x n}`
/// satisfying `predicate`, each exactly once. `D = 1` yields the single
/// trivial matrix. Restartable: each call builds a fresh iterator.
pub fn enumerate_units_matrices<P>(n: usize, modulus: &BigInt, predicate: P) -> UnitsMatrices<P>
where
    P: FnMut(&ModMatrix) -> bool,
{
    assert!(*modulus >= BigInt::one(), "modulus must be >= 1");
    UnitsMatrices {
        n,
        modulus: modulus.clone(),
        state: Some(vec![BigInt::zero(); n * n]),
        predicate,
    }
}

pub struct UnitsMatrices<P> {
    n: usize,
    modulus: BigInt,
    state: Option<Vec<BigInt>>,
    predicate: P,
}

impl<P: FnMut(&ModMatrix) -> bool> Iterator for UnitsMatrices<P> {
    type Item = ModMatrix;

    fn next(&mut self) -> Option<ModMatrix> {
        loop {
            let digits = self.state.as_ref()?;
            let candidate =
                ModMatrix::new(self.n, self.modulus.clone(), digits.clone()).unwrap();
            self.advance();
            if candidate.is_invertible() && (self.predicate)(&candidate) {
                return Some(candidate);
            }
        }
    }
}

impl<P> UnitsMatrices<P> {
    fn advance(&mut self) {
        let Some(digits) = self.state.as_mut() else {
            return;
        };
        let top = &self.modulus - 1u32;
        for k in (0..digits.len()).rev() {
            if digits[k] < top {
                digits[k] += 1u32;
                return;
            }
            digits[k] = BigInt::zero();
        }
        // Wrapped around: exhausted. (n = 0 or D = 1 end after one item.)
        self.state = None;
    }
}
