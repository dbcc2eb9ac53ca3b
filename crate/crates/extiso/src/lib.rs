//! Command-line front door: every pipeline stage as a subcommand with JSON
//! input and output documents, deterministic for fixed inputs.

pub mod json;

use std::fs;
use std::io::Read;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use extiso_core::coclass::{elementary_divisors, ExtensionClass, SignatureContext};
use extiso_core::groups::{
    abelianization, count_homs, emit_presentation, groups_up_to_order_12, HomCountConfig,
};
use extiso_core::orbits::{
    decide_integral_iso_budgeted, decide_profinite_iso_budgeted, verify_witness, Budget, Witness,
};
use extiso_core::rigidity::{
    classify_rigidity, construct_nonrigid_pair_budgeted, stabilize, stabilized_integral_witness,
    RigidReason, RigidityVerdict,
};
use extiso_core::zmatrix::IntMatrix;
use extiso_core::Error as CoreError;

use json::{
    CertificateDoc, ClassDoc, ErrorDoc, JsonInt, SignatureDoc, VerdictDoc, WitnessDoc,
};

#[derive(Parser, Debug)]
#[command(
    name = "extiso",
    about = "Decide isomorphism and profinite isomorphism of central extensions of Z^n by 2-orbifold groups",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Node budget for enumerative searches; exceeding it exits with 3.
    #[arg(long, global = true)]
    pub budget: Option<u64>,

    /// Worker cap. Accepted for scripting compatibility; the decision
    /// procedures currently run serially.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rigidity verdict for a signature and rank.
    Classify {
        #[arg(long)]
        signature: String,
        #[arg(short, long)]
        n: usize,
    },
    /// Elementary divisor chain of the cone orders.
    Divisors {
        #[arg(long)]
        signature: String,
    },
    /// Decide integral isomorphism of two classes.
    DecideIso {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Decide profinite isomorphism of two classes.
    DecideProfiniteIso {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Construct a verified non-rigid pair over a signature.
    MakeNonrigid {
        #[arg(long)]
        signature: String,
        #[arg(short, long)]
        n: usize,
    },
    /// Append a zero row: the class of the extension times Z.
    Stabilize {
        #[arg(long)]
        class: String,
    },
    /// Upgrade a profinite witness to an integral witness for the
    /// stabilized pair.
    StabilizeWitness {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        witness: String,
    },
    /// Print the finite presentation of the extension group (text format).
    EmitPresentation {
        #[arg(long)]
        class: String,
    },
    /// Abelian invariants of the extension group.
    Abelianize {
        #[arg(long)]
        class: String,
    },
    /// Hom counts from the extension group into every bundled group of
    /// order at most the bound (bundled library covers order <= 12), or
    /// into a single user-supplied multiplication table.
    CountHoms {
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 12)]
        max_order: usize,
        /// JSON multiplication table; overrides the bundled library.
        #[arg(long)]
        table: Option<String>,
    },
    /// Re-verify a witness against a pair of classes.
    Verify {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        witness: String,
    },
    /// Deterministic random class for test pipelines.
    GenRandomClass {
        #[arg(long)]
        signature: String,
        #[arg(short, long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 9)]
        entry_bound: i64,
    },
}

/// Exit codes: 0 completed (including negative decisions), 2 input error,
/// 3 budget exceeded, 1 internal failure.
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn ok<T: Serialize>(doc: &T) -> Outcome {
    Outcome {
        stdout: format!("{}\n", serde_json::to_string(doc).expect("serializable")),
        stderr: String::new(),
        code: 0,
    }
}

fn fail(error: &str, detail: String, code: i32) -> Outcome {
    let doc = ErrorDoc {
        error: error.to_string(),
        detail,
    };
    Outcome {
        stdout: format!("{}\n", serde_json::to_string(&doc).expect("serializable")),
        stderr: format!("extiso: {}\n", doc.detail),
        code,
    }
}

fn core_error(e: &CoreError) -> Outcome {
    let (name, code) = match e {
        CoreError::NegativeGenus { .. } => ("negative_genus", 2),
        CoreError::NonPositiveOrder { .. } => ("non_positive_order", 2),
        CoreError::UnsupportedRank { .. } => ("unsupported_rank", 2),
        CoreError::DimensionMismatch { .. } => ("dimension_mismatch", 2),
        CoreError::SignatureMismatch => ("signature_mismatch", 2),
        CoreError::ModulusMismatch { .. } => ("modulus_mismatch", 2),
        CoreError::NotUnimodular => ("not_unimodular", 2),
        CoreError::PermutationNotInSigma => ("permutation_not_in_sigma", 2),
        CoreError::NotInvertible => ("not_invertible", 2),
        CoreError::NotLiftable => ("not_liftable", 2),
        CoreError::FirstColumnNotPinned => ("first_column_not_pinned", 2),
        CoreError::BudgetExceeded => ("budget_exceeded", 3),
        CoreError::WrongSignature => ("wrong_signature", 2),
        CoreError::FiniteOrbifold => ("finite_orbifold", 2),
        CoreError::NotNonRigid => ("not_non_rigid", 2),
        CoreError::WitnessInvalid => ("witness_invalid", 2),
        CoreError::TooLarge { .. } => ("too_large", 2),
        CoreError::InternalVerificationFailed { .. } => ("internal_verification_failed", 1),
    };
    fail(name, e.to_string(), code)
}

fn read_input(path: &str) -> Result<String, Outcome> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| fail("io_error", format!("reading stdin: {}", e), 2))?;
        Ok(buf)
    } else {
        fs::read_to_string(path)
            .map_err(|e| fail("io_error", format!("reading {}: {}", path, e), 2))
    }
}

fn parse_doc<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, Outcome> {
    let text = read_input(path)?;
    serde_json::from_str(&text)
        .map_err(|e| fail("invalid_json", format!("parsing {}: {}", path, e), 2))
}

fn parse_signature(path: &str) -> Result<extiso_core::orbifold::OrbifoldSignature, Outcome> {
    let doc: SignatureDoc = parse_doc(path)?;
    doc.to_core().map_err(|e| core_error(&e))
}

fn parse_class(path: &str) -> Result<ExtensionClass, Outcome> {
    let doc: ClassDoc = parse_doc(path)?;
    doc.to_core().map_err(|e| fail("invalid_class", e, 2))
}

fn budget_of(cli: &Cli) -> Budget {
    match cli.budget {
        Some(n) => Budget::nodes(n),
        None => Budget::unlimited(),
    }
}

#[derive(Serialize)]
struct DivisorsDoc {
    d_sequence: Vec<JsonInt>,
    torsion_exponent: JsonInt,
    lcm: Option<JsonInt>,
}

#[derive(Serialize)]
struct IntegralDecisionDoc {
    isomorphic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessDoc>,
}

#[derive(Serialize)]
struct ProfiniteDecisionDoc {
    profinitely_isomorphic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessDoc>,
}

#[derive(Serialize)]
struct NonrigidPairDoc {
    a: ClassDoc,
    b: ClassDoc,
    witness: WitnessDoc,
}

#[derive(Serialize)]
struct AbelianDoc {
    rank: usize,
    torsion: Vec<JsonInt>,
}

#[derive(Serialize)]
struct HomCountEntry {
    group: String,
    order: usize,
    count: u64,
}

#[derive(Serialize)]
struct HomCountsDoc {
    max_order: usize,
    counts: Vec<HomCountEntry>,
}

#[derive(Serialize)]
struct VerifyDoc {
    valid: bool,
}

fn verdict_doc(
    verdict: &RigidityVerdict,
    sig: &extiso_core::orbifold::OrbifoldSignature,
) -> VerdictDoc {
    let d_sequence = elementary_divisors(sig)
        .d
        .into_iter()
        .map(JsonInt)
        .collect();
    let (name, certificate) = match verdict {
        RigidityVerdict::Rigid(RigidReason::NGreaterThanM) => (
            "rigid",
            CertificateDoc {
                reason: Some("n_greater_than_m".into()),
                d: None,
                prime_power: None,
            },
        ),
        RigidityVerdict::Rigid(RigidReason::SmallUnitGroup(d)) => (
            "rigid",
            CertificateDoc {
                reason: Some("small_unit_group".into()),
                d: Some(JsonInt(d.clone())),
                prime_power: None,
            },
        ),
        RigidityVerdict::NonRigid { d, certificate } => (
            "nonrigid",
            CertificateDoc {
                reason: None,
                d: Some(JsonInt(d.clone())),
                prime_power: Some(JsonInt(certificate.clone())),
            },
        ),
        RigidityVerdict::Unresolved12 => (
            "unresolved12",
            CertificateDoc {
                reason: None,
                d: Some(JsonInt(BigInt::from(12))),
                prime_power: None,
            },
        ),
    };
    VerdictDoc {
        verdict: name.to_string(),
        d_sequence,
        certificate,
    }
}

pub fn execute(cli: &Cli) -> Outcome {
    if cli.jobs == 0 {
        return fail("invalid_jobs", "--jobs must be at least 1".into(), 2);
    }
    match run(cli) {
        Ok(outcome) => outcome,
        Err(outcome) => outcome,
    }
}

fn run(cli: &Cli) -> Result<Outcome, Outcome> {
    match &cli.command {
        Command::Classify { signature, n } => {
            let sig = parse_signature(signature)?;
            let verdict = classify_rigidity(&sig, *n).map_err(|e| core_error(&e))?;
            Ok(ok(&verdict_doc(&verdict, &sig)))
        }
        Command::Divisors { signature } => {
            let sig = parse_signature(signature)?;
            let ed = elementary_divisors(&sig);
            Ok(ok(&DivisorsDoc {
                d_sequence: ed.d.into_iter().map(JsonInt).collect(),
                torsion_exponent: JsonInt(ed.torsion_exponent),
                lcm: ed.lcm.map(JsonInt),
            }))
        }
        Command::DecideIso { a, b } => {
            let a = parse_class(a)?;
            let b = parse_class(b)?;
            let mut budget = budget_of(cli);
            let result =
                decide_integral_iso_budgeted(&a, &b, &mut budget).map_err(|e| core_error(&e))?;
            let ctx = SignatureContext::new(a.signature());
            Ok(ok(&IntegralDecisionDoc {
                isomorphic: result.is_some(),
                witness: result.map(|w| WitnessDoc::from_integral(&w, &ctx)),
            }))
        }
        Command::DecideProfiniteIso { a, b } => {
            let a = parse_class(a)?;
            let b = parse_class(b)?;
            let mut budget = budget_of(cli);
            let result =
                decide_profinite_iso_budgeted(&a, &b, &mut budget).map_err(|e| core_error(&e))?;
            Ok(ok(&ProfiniteDecisionDoc {
                profinitely_isomorphic: result.is_some(),
                witness: result.map(|w| WitnessDoc::from_profinite(&w)),
            }))
        }
        Command::MakeNonrigid { signature, n } => {
            let sig = parse_signature(signature)?;
            let mut budget = budget_of(cli);
            let (a, b, w) = construct_nonrigid_pair_budgeted(&sig, *n, &mut budget)
                .map_err(|e| core_error(&e))?;
            Ok(ok(&NonrigidPairDoc {
                a: ClassDoc::from_core(&a),
                b: ClassDoc::from_core(&b),
                witness: WitnessDoc::from_profinite(&w),
            }))
        }
        Command::Stabilize { class } => {
            let a = parse_class(class)?;
            Ok(ok(&ClassDoc::from_core(&stabilize(&a))))
        }
        Command::StabilizeWitness { a, b, witness } => {
            let a = parse_class(a)?;
            let b = parse_class(b)?;
            let ctx = SignatureContext::new(a.signature());
            let doc: WitnessDoc = parse_doc(witness)?;
            let w = doc
                .to_core(&ctx)
                .map_err(|e| fail("invalid_witness", e, 2))?;
            let Witness::Profinite(w) = w else {
                return Err(fail(
                    "invalid_witness",
                    "stabilize-witness expects a profinite witness".into(),
                    2,
                ));
            };
            let iw = stabilized_integral_witness(&a, &b, &w).map_err(|e| core_error(&e))?;
            let stab_ctx = SignatureContext::new(a.signature());
            Ok(ok(&WitnessDoc::from_integral(&iw, &stab_ctx)))
        }
        Command::EmitPresentation { class } => {
            let a = parse_class(class)?;
            Ok(Outcome {
                stdout: format!("{}", emit_presentation(&a)),
                stderr: String::new(),
                code: 0,
            })
        }
        Command::Abelianize { class } => {
            let a = parse_class(class)?;
            let ab = abelianization(&a);
            Ok(ok(&AbelianDoc {
                rank: ab.rank,
                torsion: ab.torsion.into_iter().map(JsonInt).collect(),
            }))
        }
        Command::CountHoms {
            class,
            max_order,
            table,
        } => {
            let a = parse_class(class)?;
            let p = emit_presentation(&a);
            let cfg = HomCountConfig {
                node_budget: cli.budget.unwrap_or(50_000_000),
                ..HomCountConfig::default()
            };
            let targets = match table {
                Some(path) => {
                    let doc: json::TableDoc = parse_doc(path)?;
                    vec![doc.to_core().map_err(|e| fail("invalid_table", e, 2))?]
                }
                None => groups_up_to_order_12(),
            };
            let effective = (*max_order).min(16);
            let mut counts = Vec::new();
            for t in targets {
                if t.order() > effective {
                    continue;
                }
                let count = count_homs(&p, &t, &cfg).map_err(|e| core_error(&e))?;
                counts.push(HomCountEntry {
                    group: t.name().to_string(),
                    order: t.order(),
                    count,
                });
            }
            Ok(ok(&HomCountsDoc {
                max_order: effective,
                counts,
            }))
        }
        Command::Verify { a, b, witness } => {
            let a = parse_class(a)?;
            let b = parse_class(b)?;
            let ctx = SignatureContext::new(a.signature());
            let doc: WitnessDoc = parse_doc(witness)?;
            let w = doc
                .to_core(&ctx)
                .map_err(|e| fail("invalid_witness", e, 2))?;
            Ok(ok(&VerifyDoc {
                valid: verify_witness(&w, &a, &b),
            }))
        }
        Command::GenRandomClass {
            signature,
            n,
            seed,
            entry_bound,
        } => {
            let sig = parse_signature(signature)?;
            if *entry_bound < 0 {
                return Err(fail(
                    "invalid_bound",
                    "--entry-bound must be non-negative".into(),
                    2,
                ));
            }
            let mut rng = StdRng::seed_from_u64(*seed);
            let cols = sig.cone_count() + 1;
            let rep = IntMatrix::from_fn(*n, cols, |_, _| {
                BigInt::from(rng.gen_range(-entry_bound..=*entry_bound))
            });
            let a = ExtensionClass::new(sig, *n, rep).map_err(|e| core_error(&e))?;
            Ok(ok(&ClassDoc::from_core(&a)))
        }
    }
}
