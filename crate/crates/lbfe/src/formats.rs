//! JSON file formats. Field elements are written as their integer codes in
//! `[0, Q)` and rationals as `[numerator, denominator]`.

use std::sync::Arc;

use lbfe_core::bounds::BoundReport;
use lbfe_core::rs_scheme::{EvaluationScheme, GoodTriple, SchemeKind, SchemeParams};
use lbfe_core::scheme::GenericSchemeWitness;
use lbfe_core::sim::{Cluster, EvalResult};
use lbfe_core::{Elem, Field, Poly, Rational, RsCode};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] lbfe_core::Error),
    #[error("{0}")]
    Invalid(String),
}

fn codes(xs: &[Elem]) -> Vec<u32> {
    xs.iter().map(|x| x.0).collect()
}

fn elems(xs: &[u32]) -> Vec<Elem> {
    xs.iter().copied().map(Elem).collect()
}

fn rational(r: Rational) -> [i64; 2] {
    [*r.numer(), *r.denom()]
}

fn from_pair([n, d]: [i64; 2]) -> Result<Rational, FormatError> {
    if d == 0 {
        return Err(FormatError::Invalid("zero denominator".into()));
    }
    Ok(Rational::new(n, d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDesc {
    pub q: u64,
    pub t: u32,
    /// Modulus coefficients, lowest degree first.
    pub modulus: Vec<u32>,
    pub basis: Vec<u32>,
}

impl FieldDesc {
    pub fn of(f: &Field) -> Self {
        FieldDesc { q: f.base_order() as u64, t: f.degree(), modulus: codes(f.modulus()), basis: codes(f.basis()) }
    }

    pub fn build(&self) -> Result<Field, FormatError> {
        let f = Field::with_modulus(self.q, self.t, &elems(&self.modulus))?;
        if self.basis == codes(f.basis()) {
            Ok(f)
        } else {
            Ok(f.with_basis(elems(&self.basis))?)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDesc {
    pub field: FieldDesc,
    pub k: usize,
    pub n: usize,
    pub eval_point_codes: Vec<u32>,
}

impl CodeDesc {
    pub fn of(code: &RsCode) -> Self {
        CodeDesc {
            field: FieldDesc::of(code.field()),
            k: code.k(),
            n: code.n(),
            eval_point_codes: codes(code.points()),
        }
    }

    pub fn build(&self) -> Result<RsCode, FormatError> {
        if self.eval_point_codes.len() != self.n {
            return Err(FormatError::Invalid("n does not match the number of points".into()));
        }
        let field = Arc::new(self.field.build()?);
        Ok(RsCode::new(field, self.k, elems(&self.eval_point_codes))?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub p: Vec<u32>,
    pub w: Vec<u32>,
    pub z_list: Vec<Vec<u32>>,
    /// `coefficient_tables[i][j][ℓ]`
    pub coefficient_tables: Vec<Vec<Vec<u32>>>,
    /// Per-node subspace basis.
    pub subspaces: Vec<Vec<u32>>,
}

impl WitnessFile {
    pub fn of(w: &GenericSchemeWitness) -> Self {
        WitnessFile {
            p: codes(&w.p),
            w: codes(&w.w),
            z_list: w.z.iter().map(|z| codes(z)).collect(),
            coefficient_tables: w.coeffs.iter().map(|table| table.iter().map(|row| codes(row)).collect()).collect(),
            subspaces: w.assignment.bases().iter().map(|b| codes(b)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsDesc {
    pub epsilon: [i64; 2],
    pub gamma: [i64; 2],
    pub delta: [i64; 2],
    pub s: [i64; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundDesc {
    /// `[j_min, j_max, d]`
    pub triple: [usize; 3],
    pub p: Vec<u32>,
    /// Coefficients of `v`, lowest degree first.
    pub v: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeFile {
    pub code: CodeDesc,
    /// `"rate-half"` or `"main"`.
    pub kind: String,
    pub params: Option<ParamsDesc>,
    pub erasures: Vec<usize>,
    pub target: Vec<u32>,
    pub rounds: Vec<RoundDesc>,
}

impl SchemeFile {
    pub fn of(scheme: &EvaluationScheme) -> Self {
        let (kind, params) = match scheme.kind() {
            SchemeKind::RateHalf => ("rate-half", None),
            SchemeKind::Main(p) => (
                "main",
                Some(ParamsDesc {
                    epsilon: rational(p.epsilon),
                    gamma: rational(p.gamma),
                    delta: rational(p.delta),
                    s: [scheme.s() as i64, 1],
                }),
            ),
        };
        SchemeFile {
            code: CodeDesc::of(scheme.code()),
            kind: kind.into(),
            params,
            erasures: scheme.failed().to_vec(),
            target: codes(scheme.target()),
            rounds: scheme
                .rounds()
                .iter()
                .map(|w| {
                    let t = w.triple();
                    RoundDesc {
                        triple: [t.j_min, t.j_max, t.d],
                        p: codes(w.target()),
                        v: codes(w.polynomial().coeffs()),
                    }
                })
                .collect(),
        }
    }

    /// Rebuilds the scheme; every invariant is re-checked.
    pub fn build(&self) -> Result<EvaluationScheme, FormatError> {
        let code = self.code.build()?;
        let kind = match (self.kind.as_str(), &self.params) {
            ("rate-half", None) => SchemeKind::RateHalf,
            ("main", Some(p)) => {
                let params = SchemeParams::new(from_pair(p.epsilon)?, from_pair(p.gamma)?, from_pair(p.delta)?);
                if Rational::from_integer(params.rounds()? as i64) != from_pair(p.s)? {
                    return Err(FormatError::Invalid("s does not match ε and δ".into()));
                }
                SchemeKind::Main(params)
            }
            (other, _) => return Err(FormatError::Invalid(format!("bad scheme kind `{other}`"))),
        };
        let rounds = self
            .rounds
            .iter()
            .map(|r| {
                let [j_min, j_max, d] = r.triple;
                (GoodTriple::new(j_min, j_max, d), elems(&r.p), Poly::new(elems(&r.v)))
            })
            .collect();
        Ok(EvaluationScheme::from_parts(&code, kind, elems(&self.target), &self.erasures, rounds)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub block: usize,
    pub values: Vec<u32>,
    pub bits_downloaded: u64,
    pub bits_naive: u64,
    pub bits_uploaded: u64,
    pub nodes_contacted: Vec<usize>,
}

impl EvalRecord {
    pub fn of(block: usize, r: &EvalResult) -> Self {
        EvalRecord {
            block,
            values: codes(&r.values),
            bits_downloaded: r.bits_downloaded,
            bits_naive: r.bits_naive,
            bits_uploaded: r.bits_uploaded,
            nodes_contacted: r.nodes_contacted.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundEntryDesc {
    pub name: String,
    pub symbols: f64,
    pub bits: f64,
    pub vacuous: bool,
    pub binding: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReportFile {
    pub n: usize,
    pub k: usize,
    pub q: u64,
    pub t: u32,
    pub entries: Vec<BoundEntryDesc>,
    pub binding: String,
    pub binding_bits: f64,
}

impl BoundReportFile {
    pub fn of(r: &BoundReport) -> Self {
        BoundReportFile {
            n: r.n,
            k: r.k,
            q: r.q,
            t: r.t,
            entries: r
                .entries
                .iter()
                .map(|e| BoundEntryDesc {
                    name: e.name.clone(),
                    symbols: e.symbols,
                    bits: e.bits,
                    vacuous: e.vacuous,
                    binding: e.name == r.binding,
                })
                .collect(),
            binding: r.binding.clone(),
            binding_bits: r.binding_bits,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterSnapshot {
    pub code: CodeDesc,
    pub blocks: usize,
    pub failed: Vec<usize>,
}

impl ClusterSnapshot {
    pub fn of(c: &Cluster) -> Self {
        ClusterSnapshot { code: CodeDesc::of(c.code()), blocks: c.blocks(), failed: c.failed() }
    }
}
