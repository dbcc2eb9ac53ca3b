//! Orbit decisions: are two extension classes related by `GL_n(Z) x Sigma`
//! (isomorphic extensions) or by `GL_n(Zhat) x Sigma` (profinitely
//! isomorphic extensions)? Both decisions normalize the free part to
//! `(c, 0, ..., 0)^T`, search congruence matrices mod the torsion exponent
//! `D`, and return witnesses that are re-verified before being returned.
//!
//! Completeness of the search set: a witness over `Z` (or `Zhat`) fixing the
//! normalized free vector has first column exactly `e_1` when `c != 0`, and
//! reduction mod `D` maps the relevant matrix groups *onto* the searched
//! sets: determinant `+-1 mod D` for the integral case, any unit for the
//! profinite case. Conversely a found matrix lifts: integrally through
//! `lift_modular_matrix`, profinitely by completing the lower-right block
//! through the surjection `GL_{n-1}(Zhat) -> GL_{n-1}(Z/D)` (primes away
//! from `D` impose only the content equality, which is checked separately).
//! Exhausting `Sigma x GL_n(Z/D)` without a hit therefore certifies a
//! negative answer.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::coclass::{Decomposition, ExtensionClass, SignatureContext, TorsionPart};
use crate::error::Error;
use crate::orbifold::Permutation;
use crate::zmatrix::{
    content, hermite_left_reduce, lift_modular_matrix, mod_reduce, IntMatrix, ModMatrix,
};

/// Node budget for the enumerative searches. A node is one candidate row
/// considered in the congruence search.
#[derive(Clone, Debug)]
pub struct Budget {
    remaining: Option<u64>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { remaining: None }
    }

    pub fn nodes(limit: u64) -> Self {
        Budget {
            remaining: Some(limit),
        }
    }

    pub fn charge(&mut self) -> Result<(), Error> {
        match &mut self.remaining {
            None => Ok(()),
            Some(0) => Err(Error::BudgetExceeded),
            Some(r) => {
                *r -= 1;
                Ok(())
            }
        }
    }
}

/// A class with its free part moved to `(c, 0, ..., 0)^T`, `c = content`,
/// by a recorded unimodular transform; torsion parts are carried along by
/// the same transform. Deterministic for class-equal inputs.
#[derive(Clone, Debug)]
pub struct NormalizedClass {
    pub transform: IntMatrix,
    pub content: BigInt,
    pub free: Vec<BigInt>,
    pub torsion: Vec<TorsionPart>,
}

pub fn canonical_normalize(a: &ExtensionClass) -> NormalizedClass {
    normalize_decomposition(&a.decompose())
}

fn normalize_decomposition(dec: &Decomposition) -> NormalizedClass {
    let col = IntMatrix::column_vector(&dec.free);
    let (u, t) = hermite_left_reduce(&col);
    let c = t[(0, 0)].clone();
    debug_assert_eq!(c, content(&dec.free));
    let free = u.mul_vec(&dec.free);
    let torsion = dec
        .torsion
        .iter()
        .map(|part| TorsionPart {
            modulus: part.modulus.clone(),
            entries: u
                .mul_vec(&part.entries)
                .iter()
                .map(|x| mod_reduce(x, &part.modulus))
                .collect(),
        })
        .collect();
    NormalizedClass {
        transform: u,
        content: c,
        free,
        torsion,
    }
}

/// Witness for an integral orbit equality: `act(phi, sigma, A)` is
/// class-equal to `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralWitness {
    pub phi: IntMatrix,
    pub sigma: Permutation,
}

/// Witness for a profinite orbit equality: in normalized coordinates the
/// congruence matrix maps every torsion part of `A` to the matching part of
/// `sigma^{-1} B` mod `d_j`, the free contents agree, and the first column
/// is pinned to `e_1` whenever the common content is nonzero. `det_class`
/// is the determinant, a unit mod `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfiniteWitness {
    pub sigma: Permutation,
    pub congruence: ModMatrix,
    pub det_class: BigInt,
}

/// Either kind, for uniform re-verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Integral(IntegralWitness),
    Profinite(ProfiniteWitness),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum DetMode {
    /// `det = +-1 mod D`: exactly the image of `GL_n(Z)`.
    PlusMinusOne,
    /// Any unit mod `D`: exactly the image of `GL_n(Zhat)`.
    AnyUnit,
}

/// Decide whether some `(phi, sigma)` in `GL_n(Z) x Sigma` carries `A` to
/// `B`; returns a verified witness or `None` after exhausting the search.
pub fn decide_integral_iso(
    a: &ExtensionClass,
    b: &ExtensionClass,
) -> Result<Option<IntegralWitness>, Error> {
    decide_integral_iso_budgeted(a, b, &mut Budget::unlimited())
}

pub fn decide_integral_iso_budgeted(
    a: &ExtensionClass,
    b: &ExtensionClass,
    budget: &mut Budget,
) -> Result<Option<IntegralWitness>, Error> {
    match decide(a, b, DetMode::PlusMinusOne, budget)? {
        Some(Witness::Integral(w)) => Ok(Some(w)),
        Some(Witness::Profinite(_)) => unreachable!("integral mode returns integral witnesses"),
        None => Ok(None),
    }
}

/// Decide whether some `(phihat, sigma)` in `GL_n(Zhat) x Sigma` carries
/// `A` to `B`; returns a verified congruence witness or `None`.
pub fn decide_profinite_iso(
    a: &ExtensionClass,
    b: &ExtensionClass,
) -> Result<Option<ProfiniteWitness>, Error> {
    decide_profinite_iso_budgeted(a, b, &mut Budget::unlimited())
}

pub fn decide_profinite_iso_budgeted(
    a: &ExtensionClass,
    b: &ExtensionClass,
    budget: &mut Budget,
) -> Result<Option<ProfiniteWitness>, Error> {
    match decide(a, b, DetMode::AnyUnit, budget)? {
        Some(Witness::Profinite(w)) => Ok(Some(w)),
        Some(Witness::Integral(_)) => unreachable!("profinite mode returns profinite witnesses"),
        None => Ok(None),
    }
}

fn decide(
    a: &ExtensionClass,
    b: &ExtensionClass,
    mode: DetMode,
    budget: &mut Budget,
) -> Result<Option<Witness>, Error> {
    if a.signature() != b.signature() || a.n() != b.n() {
        return Err(Error::SignatureMismatch);
    }
    let n = a.n();
    let sig = a.signature().clone();
    let m = sig.cone_count();
    let ctx = SignatureContext::new(&sig);
    let dd = ctx.torsion_exponent().clone();

    if a.class_equal(b)? {
        let sigma = Permutation::identity(m);
        let w = match mode {
            DetMode::PlusMinusOne => Witness::Integral(IntegralWitness {
                phi: IntMatrix::identity(n),
                sigma,
            }),
            DetMode::AnyUnit => {
                let r = ModMatrix::identity(n, dd);
                let det_class = r.det();
                Witness::Profinite(ProfiniteWitness {
                    sigma,
                    congruence: r,
                    det_class,
                })
            }
        };
        return Ok(Some(w));
    }

    let norm_a = normalize_decomposition(&ctx.decompose(a));
    let norm_b_probe = normalize_decomposition(&ctx.decompose(b));
    // Content is a full GL_n(Z)- and GL_n(Zhat)-invariant of the free part,
    // and Sigma fixes the free coordinate, so one mismatch ends it.
    if norm_a.content != norm_b_probe.content {
        return Ok(None);
    }
    let pin = !norm_a.content.is_zero();

    for sigma in sig.symmetry_group().iter() {
        // act(phi, sigma, A) = B  <=>  phi . A = sigma^{-1} . B
        let b_sigma = b.act(&IntMatrix::identity(n), &sigma.inverse())?;
        let norm_b = normalize_decomposition(&ctx.decompose(&b_sigma));
        debug_assert_eq!(norm_b.content, norm_a.content);

        let system: Vec<(&[BigInt], &[BigInt], &BigInt)> = norm_a
            .torsion
            .iter()
            .zip(&norm_b.torsion)
            .map(|(x, y)| (&x.entries[..], &y.entries[..], &x.modulus))
            .collect();

        if let Some(r) = search_congruence_matrix(n, &dd, pin, mode, &system, budget)? {
            let witness = match mode {
                DetMode::PlusMinusOne => {
                    let phi_norm = lift_modular_matrix(&r, true, pin)?;
                    let phi = norm_b
                        .transform
                        .inverse_unimodular()
                        .expect("normalizer is unimodular")
                        .mul(&phi_norm)
                        .mul(&norm_a.transform);
                    Witness::Integral(IntegralWitness {
                        phi,
                        sigma: sigma.clone(),
                    })
                }
                DetMode::AnyUnit => {
                    let det_class = r.det();
                    Witness::Profinite(ProfiniteWitness {
                        sigma: sigma.clone(),
                        congruence: r,
                        det_class,
                    })
                }
            };
            if !verify_witness(&witness, a, b) {
                return Err(Error::InternalVerificationFailed {
                    detail: alloc::format!(
                        "decision produced a witness that fails re-verification (sigma = {:?})",
                        sigma.images()
                    ),
                });
            }
            return Ok(Some(witness));
        }
    }
    Ok(None)
}

/// Lexicographic backtracking over the rows of `R` in `(Z/D)^{n x n}`:
/// entries row-major, first column forced to `e_1` when pinned, each
/// completed row checked against every torsion congruence, determinant
/// class checked last. Returns the lexicographically least solution.
fn search_congruence_matrix(
    n: usize,
    dd: &BigInt,
    pin: bool,
    mode: DetMode,
    system: &[(&[BigInt], &[BigInt], &BigInt)],
    budget: &mut Budget,
) -> Result<Option<ModMatrix>, Error> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    if assign_rows(n, dd, pin, mode, system, &mut rows, budget)? {
        let entries: Vec<BigInt> = rows.into_iter().flatten().collect();
        Ok(Some(ModMatrix::new(n, dd.clone(), entries)?))
    } else {
        Ok(None)
    }
}

fn assign_rows(
    n: usize,
    dd: &BigInt,
    pin: bool,
    mode: DetMode,
    system: &[(&[BigInt], &[BigInt], &BigInt)],
    rows: &mut Vec<Vec<BigInt>>,
    budget: &mut Budget,
) -> Result<bool, Error> {
    if rows.len() == n {
        let entries: Vec<BigInt> = rows.iter().flatten().cloned().collect();
        let r = ModMatrix::new(n, dd.clone(), entries)?;
        let ok = match mode {
            DetMode::PlusMinusOne => r.det_is_pm_one(),
            DetMode::AnyUnit => r.is_invertible(),
        };
        return Ok(ok);
    }
    let row_idx = rows.len();
    let mut row = alloc::vec![BigInt::zero(); n];
    if pin && row_idx == 0 {
        row[0] = mod_reduce(&BigInt::one(), dd);
    }
    loop {
        budget.charge()?;
        if row_satisfies_congruences(row_idx, &row, system) {
            rows.push(row.clone());
            if assign_rows(n, dd, pin, mode, system, rows, budget)? {
                return Ok(true);
            }
            rows.pop();
        }
        if !next_row(&mut row, dd, pin) {
            return Ok(false);
        }
    }
}

/// Row `r` of the congruence `R x = y mod d_j` only involves row `r` of `R`.
fn row_satisfies_congruences(
    row_idx: usize,
    row: &[BigInt],
    system: &[(&[BigInt], &[BigInt], &BigInt)],
) -> bool {
    system.iter().all(|(x, y, d)| {
        let mut acc = BigInt::zero();
        for (rc, xc) in row.iter().zip(x.iter()) {
            acc += rc * xc;
        }
        mod_reduce(&acc, d) == mod_reduce(&y[row_idx], d)
    })
}

/// Advance the row odometer in lexicographic order; the first digit is
/// frozen when the column pin applies. False on wrap.
fn next_row(row: &mut [BigInt], dd: &BigInt, pin: bool) -> bool {
    let top = dd - 1u32;
    let lo = if pin { 1 } else { 0 };
    for k in (lo..row.len()).rev() {
        if row[k] < top {
            row[k] += 1u32;
            return true;
        }
        row[k] = BigInt::zero();
    }
    false
}

/// Re-verify a witness from scratch. Integral witnesses are checked by
/// recomputing the action and deciding class equality; profinite witnesses
/// by recomputing normalized coordinates and checking every congruence, the
/// determinant class, the column pin, and the content equality.
pub fn verify_witness(w: &Witness, a: &ExtensionClass, b: &ExtensionClass) -> bool {
    match w {
        Witness::Integral(w) => verify_integral_witness(w, a, b),
        Witness::Profinite(w) => verify_profinite_witness(w, a, b),
    }
}

pub fn verify_integral_witness(w: &IntegralWitness, a: &ExtensionClass, b: &ExtensionClass) -> bool {
    if a.signature() != b.signature() || a.n() != b.n() {
        return false;
    }
    match a.act(&w.phi, &w.sigma) {
        Ok(image) => image.class_equal(b).unwrap_or(false),
        Err(_) => false,
    }
}

pub fn verify_profinite_witness(
    w: &ProfiniteWitness,
    a: &ExtensionClass,
    b: &ExtensionClass,
) -> bool {
    if a.signature() != b.signature() || a.n() != b.n() {
        return false;
    }
    let n = a.n();
    if !w.sigma.preserves(a.signature()) || w.congruence.size() != n {
        return false;
    }
    let ctx = SignatureContext::new(a.signature());
    if w.congruence.modulus() != ctx.torsion_exponent() {
        return false;
    }
    if !w.congruence.is_invertible() || w.det_class != w.congruence.det() {
        return false;
    }
    let norm_a = normalize_decomposition(&ctx.decompose(a));
    let Ok(b_sigma) = b.act(&IntMatrix::identity(n), &w.sigma.inverse()) else {
        return false;
    };
    let norm_b = normalize_decomposition(&ctx.decompose(&b_sigma));
    if norm_a.content != norm_b.content {
        return false;
    }
    if !norm_a.content.is_zero() && !w.congruence.first_column_is_e1() {
        return false;
    }
    norm_a.torsion.iter().zip(&norm_b.torsion).all(|(x, y)| {
        let image = w.congruence.mul_vec_mod(&x.entries, &x.modulus);
        image == y.entries
    })
}
