//! Concrete group-theoretic back-end: finite presentations of the extension
//! groups, abelianization invariants, the torus-case normal form, and
//! counting homomorphisms into small finite groups as an independent
//! finite-quotient observable.

mod homcount;
mod tables;

pub use homcount::{count_homs, HomCountConfig};
pub use tables::{groups_up_to_order_12, GroupTable};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::coclass::ExtensionClass;
use crate::error::Error;
use crate::zmatrix::{content, smith_normal_form, IntMatrix};

/// A finite presentation: named generators and relator words. A word is a
/// sequence of `(generator index, exponent)` syllables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

pub type Word = Vec<(usize, BigInt)>;

impl Presentation {
    /// Exponent-sum matrix of the relators over all generators.
    pub fn abelianized_relator_matrix(&self) -> IntMatrix {
        let cols = self.generators.len();
        let mut m = IntMatrix::zero(self.relators.len(), cols);
        for (r, word) in self.relators.iter().enumerate() {
            for (g, e) in word {
                m[(r, *g)] += e;
            }
        }
        m
    }
}

impl fmt::Display for Presentation {
    /// Text exchange format: one generator list line, then one relator per
    /// line as space-separated `name^exponent` syllables.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.generators.join(" "))?;
        for word in &self.relators {
            let mut first = true;
            for (g, e) in word {
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}^{}", self.generators[*g], e)?;
                first = false;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The presentation of the extension group encoded by a class: surface
/// generators `x_i, y_i`, cone generators `a_i`, central generators `z_k`,
/// with relators
///
/// * `[z_k, g]` for every generator `g` (centrality),
/// * `a_i^{p_i} z^{-A_{*,i}}` for `i = 1..m`,
/// * `prod [x_i, y_i] . a_1 ... a_m . z^{-A_{*,0}}`.
///
/// The exponent convention is pinned by the substitution test: replacing
/// `a_i` by `a_i z^w` shifts the class by exactly `w` at column 0 plus
/// `p_i w` at column `i`, i.e. by a relation-lattice generator.
pub fn emit_presentation(a: &ExtensionClass) -> Presentation {
    let g = a.signature().genus() as usize;
    let m = a.signature().cone_count();
    let n = a.n();

    let mut generators = Vec::with_capacity(2 * g + m + n);
    for i in 1..=g {
        generators.push(format!("x{}", i));
    }
    for i in 1..=g {
        generators.push(format!("y{}", i));
    }
    for i in 1..=m {
        generators.push(format!("a{}", i));
    }
    for k in 1..=n {
        generators.push(format!("z{}", k));
    }
    let xi = |i: usize| i; // 0-based among generators: x_{i+1}
    let yi = |i: usize| g + i;
    let ai = |i: usize| 2 * g + i;
    let zk = |k: usize| 2 * g + m + k;

    let mut relators: Vec<Word> = Vec::new();

    // Centrality: z_k commutes with every non-central generator and with
    // the later z's (earlier pairs are the same relators).
    for k in 0..n {
        for target in 0..2 * g + m {
            relators.push(commutator(zk(k), target));
        }
        for l in k + 1..n {
            relators.push(commutator(zk(k), zk(l)));
        }
    }

    // a_i^{p_i} = z^{A_{*,i}}.
    for i in 0..m {
        let mut w: Word = Vec::new();
        w.push((ai(i), BigInt::from(a.signature().cone_orders()[i])));
        for k in 0..n {
            let e = -a.rep()[(k, i + 1)].clone();
            if !e.is_zero() {
                w.push((zk(k), e));
            }
        }
        relators.push(w);
    }

    // prod [x_i, y_i] a_1 ... a_m = z^{A_{*,0}}.
    let mut long: Word = Vec::new();
    for i in 0..g {
        long.push((xi(i), BigInt::one()));
        long.push((yi(i), BigInt::one()));
        long.push((xi(i), -BigInt::one()));
        long.push((yi(i), -BigInt::one()));
    }
    for i in 0..m {
        long.push((ai(i), BigInt::one()));
    }
    for k in 0..n {
        let e = -a.rep()[(k, 0)].clone();
        if !e.is_zero() {
            long.push((zk(k), e));
        }
    }
    relators.push(long);

    Presentation { generators, relators }
}

fn commutator(a: usize, b: usize) -> Word {
    alloc::vec![
        (a, BigInt::one()),
        (b, BigInt::one()),
        (a, -BigInt::one()),
        (b, -BigInt::one()),
    ]
}

/// Canonical abelian invariants: free rank plus the torsion chain
/// `t_1 | t_2 | ...` with every `t_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z^{}", self.rank)?;
        for t in &self.torsion {
            write!(f, " + Z/{}", t)?;
        }
        Ok(())
    }
}

/// Abelianization of the extension group: the `x, y` generators contribute
/// free rank `2g`; the `(a, z)` block is the cokernel of the
/// `(m+1) x (m+n)` matrix with rows `(1 ... 1 | -x_0^T)` and
/// `(p_i e_i^T | -x_i^T)`.
pub fn abelianization(a: &ExtensionClass) -> AbelianInvariants {
    let g = a.signature().genus() as usize;
    let m = a.signature().cone_count();
    let n = a.n();
    let rel = IntMatrix::from_fn(m + 1, m + n, |r, c| {
        if r == 0 {
            if c < m {
                BigInt::one()
            } else {
                -a.rep()[(c - m, 0)].clone()
            }
        } else if c < m {
            if c == r - 1 {
                BigInt::from(a.signature().cone_orders()[c])
            } else {
                BigInt::zero()
            }
        } else {
            -a.rep()[(c - m, r)].clone()
        }
    });
    invariants_of_quotient(&rel, 2 * g)
}

/// Invariants of `Z^{cols} / rowspan(rel)` plus `extra_rank` free summands.
fn invariants_of_quotient(rel: &IntMatrix, extra_rank: usize) -> AbelianInvariants {
    let snf = smith_normal_form(rel);
    let factors = snf.invariant_factors();
    let rank = rel.cols() - factors.len() + extra_rank;
    let torsion = factors
        .into_iter()
        .filter(|d| d > &BigInt::one())
        .collect();
    AbelianInvariants { rank, torsion }
}

/// Normal form of a class over the torus signature `(g = 1, m = 0)`: the
/// group is `H_k x Z^{n-1}` with `k` the content of the single column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HkForm {
    pub k: BigInt,
    pub copies: usize,
}

pub fn hk_form(a: &ExtensionClass) -> Result<HkForm, Error> {
    if a.signature().genus() != 1 || a.signature().cone_count() != 0 {
        return Err(Error::WrongSignature);
    }
    Ok(HkForm {
        k: content(&a.column(0)),
        copies: a.n() - 1,
    })
}
