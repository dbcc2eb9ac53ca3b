//! The headline classification: for a signature and rank `n`, either every
//! pair of non-isomorphic extensions stays non-isomorphic profinitely
//! (rigid), or an explicit profinitely-equal non-isomorphic pair exists
//! (non-rigid), or the boundary value 12 leaves the global question open.
//! Also the stabilization map (append a zero row = take a direct product
//! with `Z`) and the explicit integral witness it produces for any
//! profinitely equal pair.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::coclass::{recombine, ExtensionClass, SignatureContext, TorsionPart};
use crate::error::Error;
use crate::orbifold::{OrbifoldSignature, SignatureKind};
use crate::orbits::{
    decide_integral_iso_budgeted, decide_profinite_iso_budgeted, verify_integral_witness,
    verify_profinite_witness, Budget, IntegralWitness, ProfiniteWitness,
};
use crate::zmatrix::{factorize, lift_modular_matrix, mod_inverse, mod_reduce, IntMatrix, ModMatrix};

/// Why a `(sig, n)` pair is rigid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RigidReason {
    /// `n > m`: more centre directions than cone points.
    NGreaterThanM,
    /// `d_{m-(n-1)}` lies in `{1, 2, 3, 4, 6}`, whose unit groups have at
    /// most two elements.
    SmallUnitGroup(BigInt),
}

/// Total, deterministic verdict for a `(sig, n)` pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RigidityVerdict {
    Rigid(RigidReason),
    NonRigid {
        /// The decisive divisor `d_{m-(n-1)}`.
        d: BigInt,
        /// Smallest prime power outside `{2, 3, 4}` dividing `d`; drives the
        /// explicit pair construction.
        certificate: BigInt,
    },
    /// `d_{m-(n-1)} = 12`: no global statement either way. Individual pair
    /// queries still work over such signatures.
    Unresolved12,
}

/// The trichotomy. Requires `n >= 2` and an infinite orbifold group.
pub fn classify_rigidity(sig: &OrbifoldSignature, n: usize) -> Result<RigidityVerdict, Error> {
    if n < 2 {
        return Err(Error::UnsupportedRank { n });
    }
    match sig.kind() {
        SignatureKind::Finite => return Err(Error::FiniteOrbifold),
        SignatureKind::EuclideanTorus => {
            // Torus extensions are separated by their abelianizations; the
            // verdict coincides with the n > m gate since m = 0.
            return Ok(RigidityVerdict::Rigid(RigidReason::NGreaterThanM));
        }
        SignatureKind::Nice => {}
    }
    let m = sig.cone_count();
    if n > m {
        return Ok(RigidityVerdict::Rigid(RigidReason::NGreaterThanM));
    }
    let ctx = SignatureContext::new(sig);
    // 1-based d_{m-(n-1)}; n <= m makes the index valid, and for n = m it
    // is d_1.
    let v = ctx.divisors().d[m - n].clone();
    let small = [1i64, 2, 3, 4, 6].map(BigInt::from);
    if small.contains(&v) {
        return Ok(RigidityVerdict::Rigid(RigidReason::SmallUnitGroup(v)));
    }
    if v == BigInt::from(12) {
        return Ok(RigidityVerdict::Unresolved12);
    }
    let certificate = smallest_large_prime_power_divisor(&v);
    Ok(RigidityVerdict::NonRigid { d: v, certificate })
}

/// Smallest prime power dividing `v` that is not 2, 3 or 4. Exists exactly
/// when `v` is outside `{1, 2, 3, 4, 6, 12}`.
fn smallest_large_prime_power_divisor(v: &BigInt) -> BigInt {
    let mut best: Option<BigInt> = None;
    for (p, e) in factorize(v) {
        let mut q = BigInt::one();
        for _ in 0..e {
            q *= &p;
            if q == BigInt::from(2) || q == BigInt::from(3) || q == BigInt::from(4) {
                continue;
            }
            match &best {
                Some(b) if *b <= q => {}
                _ => best = Some(q.clone()),
            }
            break; // larger powers of p only get bigger
        }
    }
    best.expect("a prime power outside {2,3,4} divides any d outside {1,2,3,4,6,12}")
}

/// Smallest integer `>= 2` that is a unit mod `d` and not `+-1 mod d`.
/// Exists because `(Z/d)^x` has more than two elements for the certificate
/// values used here.
fn smallest_unit_not_pm_one(d: &BigInt) -> BigInt {
    let mut a = BigInt::from(2);
    loop {
        if a.gcd(d) == BigInt::one()
            && mod_reduce(&a, d) != mod_reduce(&BigInt::one(), d)
            && mod_reduce(&a, d) != mod_reduce(&BigInt::from(-1), d)
        {
            return a;
        }
        a += 1;
        assert!(&a < d, "no unit != +-1 exists mod {}", d);
    }
}

/// Smallest integer congruent to `a` mod `cert` that is a unit mod `big_d`.
fn extend_unit(a: &BigInt, cert: &BigInt, big_d: &BigInt) -> BigInt {
    let mut x = a.clone();
    loop {
        if x.gcd(big_d) == BigInt::one() {
            return x;
        }
        x += cert;
    }
}

/// Builds an explicit pair `(A, B)` with a verified profinite witness whose
/// determinant class is not `+-1`, together with a verified negative answer
/// from the integral decision. `A` is the seed with standard basis columns
/// at the first `n` cone positions divisible by the certificate; `B` applies
/// `diag(1, ..., 1, a)` to `A`'s torsion parts in normalized coordinates.
///
/// The triple is returned only after both decision procedures confirm it;
/// a disagreement with the verdict aborts loudly.
pub fn construct_nonrigid_pair(
    sig: &OrbifoldSignature,
    n: usize,
) -> Result<(ExtensionClass, ExtensionClass, ProfiniteWitness), Error> {
    construct_nonrigid_pair_budgeted(sig, n, &mut Budget::unlimited())
}

pub fn construct_nonrigid_pair_budgeted(
    sig: &OrbifoldSignature,
    n: usize,
    budget: &mut Budget,
) -> Result<(ExtensionClass, ExtensionClass, ProfiniteWitness), Error> {
    let verdict = classify_rigidity(sig, n)?;
    let RigidityVerdict::NonRigid { certificate, .. } = verdict else {
        return Err(Error::NotNonRigid);
    };

    let m = sig.cone_count();
    let positions: Vec<usize> = (0..m)
        .filter(|&i| BigInt::from(sig.cone_orders()[i]).is_multiple_of(&certificate))
        .take(n)
        .collect();
    if positions.len() < n {
        return Err(Error::InternalVerificationFailed {
            detail: format!(
                "certificate {} divides fewer than n = {} cone orders",
                certificate, n
            ),
        });
    }

    let mut rep = IntMatrix::zero(n, m + 1);
    for (k, &pos) in positions.iter().enumerate() {
        rep[(k, pos + 1)] = BigInt::one();
    }
    let a_class = ExtensionClass::new(sig.clone(), n, rep)?;

    let ctx = SignatureContext::new(sig);
    let big_d = ctx.torsion_exponent().clone();
    let dec = ctx.decompose(&a_class);
    let norm = crate::orbits::canonical_normalize(&a_class);
    if norm.content.is_zero() {
        return Err(Error::InternalVerificationFailed {
            detail: "seed class has zero free content".into(),
        });
    }

    let unit = smallest_unit_not_pm_one(&certificate);
    let unit_mod_d = extend_unit(&unit, &certificate, &big_d);

    // diag(1, ..., 1, a) on the normalized torsion parts, carried back to
    // the raw basis by the inverse normalizer; the free part is untouched.
    let u_inv = norm.transform.inverse_unimodular()?;
    let torsion_b: Vec<TorsionPart> = norm
        .torsion
        .iter()
        .map(|part| {
            let mut scaled = part.entries.clone();
            let last = scaled.len() - 1;
            scaled[last] = mod_reduce(&(&scaled[last] * &unit_mod_d), &part.modulus);
            TorsionPart {
                modulus: part.modulus.clone(),
                entries: u_inv
                    .mul_vec(&scaled)
                    .iter()
                    .map(|x| mod_reduce(x, &part.modulus))
                    .collect(),
            }
        })
        .collect();
    let b_class = recombine(&dec.with_parts(dec.free.clone(), torsion_b))?;

    if decide_integral_iso_budgeted(&a_class, &b_class, budget)?.is_some() {
        return Err(Error::InternalVerificationFailed {
            detail: "constructed pair is integrally isomorphic".into(),
        });
    }
    let Some(witness) = decide_profinite_iso_budgeted(&a_class, &b_class, budget)? else {
        return Err(Error::InternalVerificationFailed {
            detail: "constructed pair is not profinitely isomorphic".into(),
        });
    };
    Ok((a_class, b_class, witness))
}

/// Append a zero row: the class of the extension times `Z`. The Euler image
/// and every decomposition part gain one zero coordinate.
pub fn stabilize(a: &ExtensionClass) -> ExtensionClass {
    let n = a.n();
    let m = a.signature().cone_count();
    let rep = IntMatrix::from_fn(n + 1, m + 1, |r, c| {
        if r < n {
            a.rep()[(r, c)].clone()
        } else {
            BigInt::zero()
        }
    });
    ExtensionClass::new(a.signature().clone(), n + 1, rep)
        .expect("stabilized class keeps a valid shape")
}

fn block_diag_int(a: &IntMatrix, corner: BigInt) -> IntMatrix {
    let n = a.rows();
    IntMatrix::from_fn(n + 1, n + 1, |r, c| {
        if r < n && c < n {
            a[(r, c)].clone()
        } else if r == n && c == n {
            corner.clone()
        } else {
            BigInt::zero()
        }
    })
}

/// Upgrade a verified profinite witness for `(A, B)` into an integral
/// witness for `(stabilize(A), stabilize(B))`: extend the congruence matrix
/// by `det^{-1}` in the new corner (determinant becomes 1 mod D), lift to
/// `GL_{n+1}(Z)` with the column pin, and undo the normalizers.
pub fn stabilized_integral_witness(
    a: &ExtensionClass,
    b: &ExtensionClass,
    w: &ProfiniteWitness,
) -> Result<IntegralWitness, Error> {
    if !verify_profinite_witness(w, a, b) {
        return Err(Error::WitnessInvalid);
    }
    let n = a.n();
    let ctx = SignatureContext::new(a.signature());
    let big_d = ctx.torsion_exponent().clone();

    let norm_a = crate::orbits::canonical_normalize(a);
    let b_sigma = b.act(&IntMatrix::identity(n), &w.sigma.inverse())?;
    let norm_b = crate::orbits::canonical_normalize(&b_sigma);

    let det_inv = mod_inverse(&w.congruence.det(), &big_d).ok_or(Error::WitnessInvalid)?;
    let extended = {
        let mut entries = Vec::with_capacity((n + 1) * (n + 1));
        for r in 0..=n {
            for c in 0..=n {
                entries.push(if r < n && c < n {
                    w.congruence.at(r, c).clone()
                } else if r == n && c == n {
                    det_inv.clone()
                } else {
                    BigInt::zero()
                });
            }
        }
        ModMatrix::new(n + 1, big_d.clone(), entries)?
    };

    let pin = !norm_a.content.is_zero();
    let phi_norm = lift_modular_matrix(&extended, true, pin)?;
    let ua_ext = block_diag_int(&norm_a.transform, BigInt::one());
    let ub_ext = block_diag_int(&norm_b.transform, BigInt::one());
    let phi = ub_ext.inverse_unimodular()?.mul(&phi_norm).mul(&ua_ext);

    let witness = IntegralWitness {
        phi,
        sigma: w.sigma.clone(),
    };
    let sa = stabilize(a);
    let sb = stabilize(b);
    if !verify_integral_witness(&witness, &sa, &sb) {
        return Err(Error::InternalVerificationFailed {
            detail: "stabilized witness failed verification".into(),
        });
    }
    Ok(witness)
}
