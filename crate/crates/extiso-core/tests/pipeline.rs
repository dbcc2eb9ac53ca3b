//! Cross-module behaviour: decisions against the class model, the
//! determinant obstruction, stabilization, and finite-quotient invariants.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use extiso_core::coclass::{recombine, ExtensionClass, SignatureContext};
use extiso_core::groups::{abelianization, count_homs, emit_presentation, groups_up_to_order_12, HomCountConfig};
use extiso_core::orbifold::{OrbifoldSignature, Permutation};
use extiso_core::orbits::{
    decide_integral_iso, decide_profinite_iso, verify_integral_witness, verify_profinite_witness,
};
use extiso_core::rigidity::{
    classify_rigidity, construct_nonrigid_pair, stabilize, stabilized_integral_witness,
    RigidityVerdict,
};
use extiso_core::zmatrix::{mod_reduce, smith_normal_form, IntMatrix};

fn sig(g: i64, p: &[i64]) -> OrbifoldSignature {
    OrbifoldSignature::new(g, p).unwrap()
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

#[test]
fn nonrigid_pair_shows_determinant_obstruction() {
    // Whenever the profinite decision succeeds but the integral one fails,
    // the witness determinant cannot be +-1 mod D.
    for (g, p) in [(1i64, &[5i64, 5][..]), (1, &[7, 7]), (0, &[5, 5, 5, 5])] {
        let s = sig(g, p);
        let (a, b, w) = construct_nonrigid_pair(&s, 2).unwrap();
        assert!(decide_integral_iso(&a, &b).unwrap().is_none());
        let dd = w.congruence.modulus().clone();
        assert_ne!(w.det_class, mod_reduce(&big(1), &dd));
        assert_ne!(w.det_class, mod_reduce(&big(-1), &dd));
        assert!(verify_profinite_witness(&w, &a, &b));
    }
}

#[test]
fn stabilization_resolves_every_profinitely_equal_pair_in_suite() {
    // A mixed suite: genuinely non-rigid pairs plus random same-orbit pairs.
    let mut suite = Vec::new();
    for (g, p) in [(1i64, &[5i64, 5][..]), (1, &[8, 8]), (0, &[5, 5, 5, 5])] {
        let s = sig(g, p);
        let (a, b, _) = construct_nonrigid_pair(&s, 2).unwrap();
        suite.push((a, b));
    }
    let mut rng = StdRng::seed_from_u64(0x5eed_0100);
    let s = sig(1, &[9, 9]);
    let sigmas: Vec<Permutation> = s.symmetry_group().iter().collect();
    for _ in 0..6 {
        let rep = IntMatrix::from_fn(2, 3, |_, _| big(rng.gen_range(-5i64..=5)));
        let a = ExtensionClass::new(s.clone(), 2, rep).unwrap();
        let mut phi = IntMatrix::identity(2);
        for _ in 0..5 {
            let mut e = IntMatrix::identity(2);
            let (i, j) = if rng.gen_bool(0.5) { (0, 1) } else { (1, 0) };
            e[(i, j)] = big(rng.gen_range(-2i64..=2));
            phi = phi.mul(&e);
        }
        let sigma = sigmas[rng.gen_range(0..sigmas.len())].clone();
        let b = a.act(&phi, &sigma).unwrap();
        suite.push((a, b));
    }

    for (a, b) in &suite {
        let Some(w) = decide_profinite_iso(a, b).unwrap() else {
            panic!("suite pair must be profinitely equal");
        };
        let iw = stabilized_integral_witness(a, b, &w).unwrap();
        assert!(verify_integral_witness(&iw, &stabilize(a), &stabilize(b)));
        assert_eq!(iw.phi.rows(), a.n() + 1);
    }
}

#[test]
fn finite_quotient_invariants_cannot_separate_the_nonrigid_pair() {
    let s = sig(1, &[5, 5]);
    let (a, b, _) = construct_nonrigid_pair(&s, 2).unwrap();
    assert_eq!(abelianization(&a), abelianization(&b));
    let cfg = HomCountConfig::default();
    let pa = emit_presentation(&a);
    let pb = emit_presentation(&b);
    for t in groups_up_to_order_12() {
        if t.order() > 8 {
            continue; // full order <= 12 sweep lives in the acceptance suite
        }
        assert_eq!(
            count_homs(&pa, &t, &cfg).unwrap(),
            count_homs(&pb, &t, &cfg).unwrap(),
            "hom counts differ over {}",
            t.name()
        );
    }
    // while the integral decision tells them apart:
    assert!(decide_integral_iso(&a, &b).unwrap().is_none());
}

#[test]
fn positive_decisions_imply_equal_group_invariants() {
    // Isomorphic extensions have isomorphic groups, so abelianizations and
    // hom counts must agree whenever the integral decision says yes.
    let mut rng = StdRng::seed_from_u64(0x5eed_0101);
    let s = sig(1, &[4, 4]);
    let cfg = HomCountConfig::default();
    let mut positives = 0;
    for _ in 0..60 {
        let rep_a = IntMatrix::from_fn(2, 3, |_, _| big(rng.gen_range(-4i64..=4)));
        let rep_b = IntMatrix::from_fn(2, 3, |_, _| big(rng.gen_range(-4i64..=4)));
        let a = ExtensionClass::new(s.clone(), 2, rep_a).unwrap();
        let b = ExtensionClass::new(s.clone(), 2, rep_b).unwrap();
        if decide_integral_iso(&a, &b).unwrap().is_some() {
            positives += 1;
            assert_eq!(abelianization(&a), abelianization(&b));
            for t in groups_up_to_order_12() {
                if t.order() > 6 {
                    continue;
                }
                assert_eq!(
                    count_homs(&emit_presentation(&a), &t, &cfg).unwrap(),
                    count_homs(&emit_presentation(&b), &t, &cfg).unwrap(),
                    "hom counts differ over {} for an isomorphic pair",
                    t.name()
                );
            }
        }
    }
    assert!(positives > 0, "sample never produced an isomorphic pair");
}

#[test]
fn higher_rank_nonrigid_pairs_and_stabilization() {
    // The same pipeline at n = 3 and n = 4 over (0;[5,5,5,5]): exhaustive
    // integral refutation in GL_n(Z/5), profinite witness, stabilized
    // integral witness in GL_{n+1}(Z).
    let s = sig(0, &[5, 5, 5, 5]);
    for n in [3usize, 4] {
        let (a, b, w) = construct_nonrigid_pair(&s, n).unwrap();
        assert_eq!(w.det_class, big(2));
        let iw = stabilized_integral_witness(&a, &b, &w).unwrap();
        assert_eq!(iw.phi.rows(), n + 1);
        assert!(verify_integral_witness(&iw, &stabilize(&a), &stabilize(&b)));
    }
}

#[test]
fn differing_invariants_force_negative_decisions() {
    // Abelianization is an isomorphism invariant and a profinite
    // invariant, so whenever it differs both decisions must answer no.
    // An independent soundness check on negative answers.
    let mut rng = StdRng::seed_from_u64(0x5eed_0102);
    let s = sig(1, &[5, 5]);
    let mut checked = 0;
    for _ in 0..80 {
        let rep_a = IntMatrix::from_fn(2, 3, |_, _| big(rng.gen_range(-5i64..=5)));
        let rep_b = IntMatrix::from_fn(2, 3, |_, _| big(rng.gen_range(-5i64..=5)));
        let a = ExtensionClass::new(s.clone(), 2, rep_a).unwrap();
        let b = ExtensionClass::new(s.clone(), 2, rep_b).unwrap();
        if abelianization(&a) != abelianization(&b) {
            checked += 1;
            assert!(
                decide_integral_iso(&a, &b).unwrap().is_none(),
                "integral decision contradicts differing abelianizations"
            );
            assert!(
                decide_profinite_iso(&a, &b).unwrap().is_none(),
                "profinite decision contradicts differing abelianizations"
            );
        }
    }
    assert!(checked > 10, "sample produced too few separated pairs");
}

#[test]
fn decisions_are_transitive_on_a_small_census() {
    // Both decisions are equivalence relations; spot-check transitivity on
    // a small family over one signature.
    let s = sig(1, &[2, 2]);
    let mut classes = Vec::new();
    for x in -1i64..=1 {
        for y in 0i64..=1 {
            let rep = IntMatrix::from_i64_rows(&[&[x, y, 0], &[1, 0, y]]);
            classes.push(ExtensionClass::new(s.clone(), 2, rep).unwrap());
        }
    }
    let k = classes.len();
    let mut int = vec![vec![false; k]; k];
    let mut prof = vec![vec![false; k]; k];
    for i in 0..k {
        for j in 0..k {
            int[i][j] = decide_integral_iso(&classes[i], &classes[j]).unwrap().is_some();
            prof[i][j] = decide_profinite_iso(&classes[i], &classes[j]).unwrap().is_some();
        }
    }
    for i in 0..k {
        assert!(int[i][i] && prof[i][i], "reflexivity broken at {}", i);
        for j in 0..k {
            assert_eq!(int[i][j], int[j][i], "integral symmetry broken");
            assert_eq!(prof[i][j], prof[j][i], "profinite symmetry broken");
            for l in 0..k {
                if int[i][j] && int[j][l] {
                    assert!(int[i][l], "integral transitivity broken ({},{},{})", i, j, l);
                }
                if prof[i][j] && prof[j][l] {
                    assert!(prof[i][l], "profinite transitivity broken ({},{},{})", i, j, l);
                }
            }
        }
    }
}

#[test]
fn verdicts_match_decision_behaviour_on_unresolved_signature() {
    // No global classification covers d = 12, but pair queries resolve.
    let s = sig(1, &[12, 12]);
    assert_eq!(classify_rigidity(&s, 2).unwrap(), RigidityVerdict::Unresolved12);
    let ctx = SignatureContext::new(&s);
    let zero = ExtensionClass::zero(s.clone(), 2).unwrap();
    let template = ctx.decompose(&zero);
    let a = recombine(&template.with_parts(
        vec![big(1), big(0)],
        vec![extiso_core::coclass::TorsionPart {
            modulus: big(12),
            entries: vec![big(1), big(0)],
        }],
    ))
    .unwrap();
    let w = decide_profinite_iso(&a, &a).unwrap().unwrap();
    assert!(verify_profinite_witness(&w, &a, &a));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Smith normal form certificate on arbitrary small matrices.
    #[test]
    fn snf_certificate(rows in 1usize..5, cols in 1usize..5, seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = IntMatrix::from_fn(rows, cols, |_, _| big(rng.gen_range(-30i64..=30)));
        let snf = smith_normal_form(&m);
        prop_assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d.clone());
        prop_assert!(snf.u.is_unimodular());
        prop_assert!(snf.v.is_unimodular());
        let k = rows.min(cols);
        for i in 0..k.saturating_sub(1) {
            let a = &snf.d[(i, i)];
            let b = &snf.d[(i + 1, i + 1)];
            if a != &BigInt::from(0) {
                prop_assert_eq!(b % a, BigInt::from(0));
            }
        }
    }

    /// Two routes to class equality agree: the Hermite membership test and
    /// coordinate equality of decompositions.
    #[test]
    fn class_equality_routes_agree(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let s = sig(1, &[4, 6]);
        let ctx = SignatureContext::new(&s);
        let rep_a = IntMatrix::from_fn(2, 3, |_, _| big(rng.gen_range(-8i64..=8)));
        let rep_b = IntMatrix::from_fn(2, 3, |_, _| big(rng.gen_range(-8i64..=8)));
        let a = ExtensionClass::new(s.clone(), 2, rep_a).unwrap();
        let b = ExtensionClass::new(s.clone(), 2, rep_b).unwrap();
        let da = ctx.decompose(&a);
        let db = ctx.decompose(&b);
        let coords_equal = da.free == db.free && da.torsion == db.torsion;
        prop_assert_eq!(a.class_equal(&b).unwrap(), coords_equal);
    }

    /// Round trip through the decomposition is the identity on classes.
    #[test]
    fn recombine_inverts_decompose(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let s = sig(0, &[2, 2, 9]);
        let ctx = SignatureContext::new(&s);
        let rep = IntMatrix::from_fn(3, 4, |_, _| big(rng.gen_range(-9i64..=9)));
        let a = ExtensionClass::new(s.clone(), 3, rep).unwrap();
        let dec = ctx.decompose(&a);
        let back = recombine(&dec).unwrap();
        prop_assert!(a.class_equal(&back).unwrap());
    }

    /// Witnesses returned by the integral decision always verify, and the
    /// profinite decision never contradicts the integral one.
    #[test]
    fn integral_implies_profinite(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let s = sig(1, &[3, 3]);
        let rep_a = IntMatrix::from_fn(2, 3, |_, _| big(rng.gen_range(-4i64..=4)));
        let rep_b = IntMatrix::from_fn(2, 3, |_, _| big(rng.gen_range(-4i64..=4)));
        let a = ExtensionClass::new(s.clone(), 2, rep_a).unwrap();
        let b = ExtensionClass::new(s.clone(), 2, rep_b).unwrap();
        if let Some(w) = decide_integral_iso(&a, &b).unwrap() {
            prop_assert!(verify_integral_witness(&w, &a, &b));
            prop_assert!(w.phi.determinant().abs() == BigInt::one());
            let wp = decide_profinite_iso(&a, &b).unwrap();
            prop_assert!(wp.is_some());
            prop_assert!(verify_profinite_witness(&wp.unwrap(), &a, &b));
        }
    }
}
