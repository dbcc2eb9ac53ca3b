//! JSON document types for the CLI: signatures, matrices, classes,
//! witnesses, verdicts. Integers serialize as JSON numbers while they fit
//! the 53-bit safe range and as decimal strings beyond it; both forms are
//! accepted on input.

use core::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use extiso_core::coclass::{ExtensionClass, SignatureContext};
use extiso_core::orbifold::{OrbifoldSignature, Permutation};
use extiso_core::orbits::{IntegralWitness, ProfiniteWitness, Witness};
use extiso_core::zmatrix::{mod_reduce, IntMatrix, ModMatrix};
use extiso_core::Error as CoreError;

const SAFE_MAX: i64 = 9_007_199_254_740_991; // 2^53 - 1

/// Arbitrary-precision integer carried as number-or-decimal-string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl From<BigInt> for JsonInt {
    fn from(v: BigInt) -> Self {
        JsonInt(v)
    }
}

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if let Some(v) = self.0.to_i64() {
            if v.abs() <= SAFE_MAX {
                return s.serialize_i64(v);
            }
        }
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = JsonInt;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonInt, E> {
                Ok(JsonInt(BigInt::from(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonInt, E> {
                Ok(JsonInt(BigInt::from(v)))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonInt, E> {
                v.parse::<BigInt>()
                    .map(JsonInt)
                    .map_err(|_| E::custom(format!("not a decimal integer: {:?}", v)))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SignatureDoc {
    pub genus: i64,
    pub cone_orders: Vec<i64>,
}

impl SignatureDoc {
    pub fn to_core(&self) -> Result<OrbifoldSignature, CoreError> {
        OrbifoldSignature::new(self.genus, &self.cone_orders)
    }

    pub fn from_core(sig: &OrbifoldSignature) -> Self {
        SignatureDoc {
            genus: sig.genus() as i64,
            cone_orders: sig.cone_orders().iter().map(|&p| p as i64).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<JsonInt>>,
}

impl MatrixDoc {
    pub fn from_core(m: &IntMatrix) -> Self {
        MatrixDoc {
            rows: m.rows(),
            cols: m.cols(),
            entries: (0..m.rows())
                .map(|r| (0..m.cols()).map(|c| JsonInt(m[(r, c)].clone())).collect())
                .collect(),
        }
    }

    pub fn to_core(&self) -> Result<IntMatrix, String> {
        if self.entries.len() != self.rows
            || self.entries.iter().any(|r| r.len() != self.cols)
        {
            return Err(format!(
                "matrix declared {}x{} but entries disagree",
                self.rows, self.cols
            ));
        }
        Ok(IntMatrix::from_fn(self.rows, self.cols, |r, c| {
            self.entries[r][c].0.clone()
        }))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassDoc {
    pub signature: SignatureDoc,
    pub n: usize,
    pub matrix: Vec<Vec<JsonInt>>,
}

impl ClassDoc {
    pub fn to_core(&self) -> Result<ExtensionClass, String> {
        let sig = self.signature.to_core().map_err(|e| e.to_string())?;
        let cols = sig.cone_count() + 1;
        if self.matrix.len() != self.n || self.matrix.iter().any(|r| r.len() != cols) {
            return Err(format!(
                "class matrix must be {}x{} (n rows, one column per cone point plus one)",
                self.n, cols
            ));
        }
        let rep = IntMatrix::from_fn(self.n, cols, |r, c| self.matrix[r][c].0.clone());
        ExtensionClass::new(sig, self.n, rep).map_err(|e| e.to_string())
    }

    pub fn from_core(a: &ExtensionClass) -> Self {
        ClassDoc {
            signature: SignatureDoc::from_core(a.signature()),
            n: a.n(),
            matrix: (0..a.n())
                .map(|r| {
                    (0..a.signature().cone_count() + 1)
                        .map(|c| JsonInt(a.rep()[(r, c)].clone()))
                        .collect()
                })
                .collect(),
        }
    }
}

/// Uniform witness document. `sigma` is the image list of the cone-point
/// permutation in 1-based positions. For integral witnesses `phi` is
/// present and `R_modD` is its reduction; for profinite witnesses `phi` is
/// null and `R_modD` is the congruence matrix itself.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub kind: String,
    pub sigma: Vec<usize>,
    pub phi: Option<MatrixDoc>,
    #[serde(rename = "R_modD")]
    pub r_mod_d: MatrixDoc,
    pub modulus: JsonInt,
    pub det_class: JsonInt,
}

fn sigma_doc(p: &Permutation) -> Vec<usize> {
    p.images().iter().map(|&i| i + 1).collect()
}

fn sigma_core(images: &[usize]) -> Result<Permutation, String> {
    let zero_based: Vec<usize> = images
        .iter()
        .map(|&i| i.checked_sub(1).ok_or("sigma images are 1-based"))
        .collect::<Result<_, _>>()?;
    Permutation::from_images(zero_based).map_err(|e| e.to_string())
}

impl WitnessDoc {
    pub fn from_integral(w: &IntegralWitness, ctx: &SignatureContext) -> Self {
        let dd = ctx.torsion_exponent().clone();
        let reduced = ModMatrix::from_int_matrix(&w.phi, &dd).expect("phi is square");
        WitnessDoc {
            kind: "integral".into(),
            sigma: sigma_doc(&w.sigma),
            phi: Some(MatrixDoc::from_core(&w.phi)),
            r_mod_d: MatrixDoc::from_core(&reduced.lift()),
            modulus: JsonInt(dd.clone()),
            det_class: JsonInt(mod_reduce(&w.phi.determinant(), &dd)),
        }
    }

    pub fn from_profinite(w: &ProfiniteWitness) -> Self {
        WitnessDoc {
            kind: "profinite".into(),
            sigma: sigma_doc(&w.sigma),
            phi: None,
            r_mod_d: MatrixDoc::from_core(&w.congruence.lift()),
            modulus: JsonInt(w.congruence.modulus().clone()),
            det_class: JsonInt(w.det_class.clone()),
        }
    }

    pub fn to_core(&self, ctx: &SignatureContext) -> Result<Witness, String> {
        let sigma = sigma_core(&self.sigma)?;
        let dd = ctx.torsion_exponent();
        if &self.modulus.0 != dd {
            return Err(format!(
                "witness modulus {} does not match the signature's torsion exponent {}",
                self.modulus.0, dd
            ));
        }
        match self.kind.as_str() {
            "integral" => {
                let phi_doc = self.phi.as_ref().ok_or("integral witness needs phi")?;
                let phi = phi_doc.to_core()?;
                if !phi.is_unimodular() {
                    return Err("phi is not unimodular".into());
                }
                let reduced = ModMatrix::from_int_matrix(&phi, dd).map_err(|e| e.to_string())?;
                let declared = self.r_mod_d.to_core()?;
                if reduced.lift() != declared {
                    return Err("R_modD does not match phi mod D".into());
                }
                if JsonInt(mod_reduce(&phi.determinant(), dd)) != self.det_class {
                    return Err("det_class does not match phi".into());
                }
                Ok(Witness::Integral(IntegralWitness { phi, sigma }))
            }
            "profinite" => {
                let lifted = self.r_mod_d.to_core()?;
                let congruence =
                    ModMatrix::from_int_matrix(&lifted, dd).map_err(|e| e.to_string())?;
                Ok(Witness::Profinite(ProfiniteWitness {
                    sigma,
                    congruence,
                    det_class: self.det_class.0.clone(),
                }))
            }
            other => Err(format!("unknown witness kind {:?}", other)),
        }
    }
}

/// A finite group as a multiplication table: row `a` lists the products
/// `a * b` as indices, so each row is a permutation of `0..order`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableDoc {
    #[serde(default)]
    pub name: Option<String>,
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

impl TableDoc {
    pub fn to_core(&self) -> Result<extiso_core::groups::GroupTable, String> {
        if self.table.len() != self.order || self.table.iter().any(|r| r.len() != self.order) {
            return Err(format!(
                "table must be {} rows of {} entries",
                self.order, self.order
            ));
        }
        let flat: Vec<usize> = self.table.iter().flatten().copied().collect();
        extiso_core::groups::GroupTable::new(
            self.name.as_deref().unwrap_or("custom"),
            self.order,
            flat,
        )
        .map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<JsonInt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime_power: Option<JsonInt>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerdictDoc {
    pub verdict: String,
    pub d_sequence: Vec<JsonInt>,
    pub certificate: CertificateDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ErrorDoc {
    pub error: String,
    pub detail: String,
}
