//! Serde types for session files and their conversion to and from core
//! values. Rationals are strings such as `"-3/4"`; integers are accepted
//! too.

use std::collections::BTreeMap;

use serde::de::{self, Deserializer};
use serde::Deserialize;
use serde_json::{json, Value};

use flagforge_core::epcore::{EpSeq, EpSet, Periodic};
use flagforge_core::exactnum::{format_rational, parse_rational, Matrix, Rational};
use flagforge_core::pairedspace::{Side, Subspace, Vector};

#[derive(Clone, Debug)]
pub struct Q(pub Rational);

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::String(s) => parse_rational(&s).map(Q).ok_or_else(|| de::Error::custom(format!("bad rational {s:?}"))),
            Value::Number(n) => n
                .as_i64()
                .map(|i| Q(Rational::from_integer(i.into())))
                .ok_or_else(|| de::Error::custom(format!("non-integer number {n}; write rationals as strings"))),
            other => Err(de::Error::custom(format!("expected a rational, found {other}"))),
        }
    }
}

pub fn rats(v: &[Q]) -> Vec<Rational> {
    v.iter().map(|x| x.0.clone()).collect()
}

pub fn q_out(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SideDef(pub Side);

impl<'de> Deserialize<'de> for SideDef {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "V" => Ok(SideDef(Side::V)),
            "V*" | "VStar" => Ok(SideDef(Side::VStar)),
            _ => Err(de::Error::custom(format!("side must be \"V\" or \"V*\", found {s:?}"))),
        }
    }
}

pub fn side_out(s: Side) -> Value {
    Value::String(s.to_string())
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum EpSetDef {
    Named(String),
    Parts {
        #[serde(default)]
        pre: Vec<usize>,
        period: usize,
        #[serde(default)]
        residues: Vec<usize>,
        #[serde(default)]
        threshold: usize,
    },
}

impl EpSetDef {
    pub fn build(&self) -> Result<EpSet, String> {
        match self {
            EpSetDef::Named(n) => match n.as_str() {
                "naturals" => Ok(EpSet::naturals()),
                "empty" => Ok(EpSet::empty()),
                _ => Err(format!("unknown set name {n:?}")),
            },
            EpSetDef::Parts { pre, period, residues, threshold } => {
                EpSet::new(*threshold, *period, pre.iter().copied(), residues.iter().copied())
                    .ok_or_else(|| format!("invalid set: pre {pre:?} threshold {threshold} residues {residues:?} period {period}"))
            }
        }
    }
}

pub fn epset_out(s: &EpSet) -> Value {
    json!({
        "pre": s.pre().iter().collect::<Vec<_>>(),
        "period": s.period(),
        "residues": s.residues().iter().collect::<Vec<_>>(),
        "threshold": s.threshold(),
    })
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpSeqDef {
    #[serde(default)]
    pub preperiod: Vec<Q>,
    pub repeat: Vec<Q>,
}

impl EpSeqDef {
    pub fn build(&self) -> Result<EpSeq, String> {
        EpSeq::new(rats(&self.preperiod), rats(&self.repeat)).ok_or_else(|| "sequence needs a nonempty repeat".into())
    }
}

pub fn epseq_out(s: &EpSeq) -> Value {
    json!({
        "preperiod": s.preperiod().iter().map(q_out).collect::<Vec<_>>(),
        "repeat": s.repeat().iter().map(q_out).collect::<Vec<_>>(),
    })
}

/// Finitely many basis coordinates plus augmentation coefficients; missing
/// augmentation coefficients are zero.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorDef {
    #[serde(default)]
    pub basis: Vec<(usize, Q)>,
    #[serde(default)]
    pub aug: Vec<Q>,
}

impl VectorDef {
    pub fn build(&self, side: Side, n_aug: usize) -> Result<Vector, String> {
        if self.aug.len() > n_aug {
            return Err(format!("{} augmentation coefficients but the side has {n_aug}", self.aug.len()));
        }
        let mut aug = rats(&self.aug);
        aug.resize(n_aug, Rational::from_integer(0.into()));
        Ok(Vector::from_parts(side, self.basis.iter().map(|(i, c)| (*i, c.0.clone())), aug))
    }
}

pub fn vector_out(v: &Vector) -> Value {
    json!({
        "basis": v.basis().iter().map(|(i, c)| json!([i, q_out(c)])).collect::<Vec<_>>(),
        "aug": v.aug().iter().map(q_out).collect::<Vec<_>>(),
    })
}

pub fn matrix_out(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(q_out).collect())).collect())
}

pub fn matrix_in(n: usize, rows: &[Vec<Q>]) -> Result<Matrix, String> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(format!("matrix must be {n}x{n}"));
    }
    Ok(Matrix::from_rows(n, rows.iter().map(|r| rats(r)).collect()))
}

pub fn subspace_out(model: &str, s: &Subspace) -> Value {
    json!({
        "model": model,
        "side": side_out(s.side()),
        "aligned": epset_out(s.aligned_set()),
        "conditions": s.conditions().iter().map(epseq_out).collect::<Vec<_>>(),
        "corrections": s.corrections().iter().map(vector_out).collect::<Vec<_>>(),
    })
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvolutionDef {
    #[serde(default)]
    pub pre: Vec<usize>,
    pub offsets: Vec<i64>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormKindDef {
    Symmetric,
    Antisymmetric,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormDef {
    pub kind: FormKindDef,
    pub iota: InvolutionDef,
    pub sign: EpSeqDef,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelDef {
    Plain,
    DenseLine,
    SplitSymmetric,
    SplitSymplectic,
    Custom {
        #[serde(default)]
        v_augs: Vec<EpSeqDef>,
        #[serde(default)]
        w_augs: Vec<EpSeqDef>,
        #[serde(default)]
        cross: Option<Vec<Vec<Q>>>,
        #[serde(default)]
        form: Option<FormDef>,
    },
}

/// Exactly one way of producing a subspace: explicit data (`aligned`,
/// `conditions`, `corrections`), a `span`, `full`, or an operation on
/// other named subspaces.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceDef {
    pub model: Option<String>,
    pub side: Option<SideDef>,
    pub aligned: Option<EpSetDef>,
    #[serde(default)]
    pub conditions: Vec<EpSeqDef>,
    #[serde(default)]
    pub corrections: Vec<VectorDef>,
    pub span: Option<Vec<VectorDef>>,
    #[serde(default)]
    pub full: bool,
    pub perp: Option<String>,
    pub closure: Option<String>,
    pub sum: Option<Vec<String>>,
    pub intersection: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagDef {
    pub model: String,
    pub side: SideDef,
    pub chain: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoupleDef {
    pub f: String,
    pub g: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementDef {
    pub model: String,
    /// Rank-one terms `v ⊗ w`, `v` in `V` and `w` in `V*`.
    #[serde(default)]
    pub terms: Vec<(VectorDef, VectorDef)>,
    /// Entries `(i, j, c)` for `c e_i ⊗ f_j`.
    #[serde(default)]
    pub entries: Vec<(usize, usize, Q)>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDef {
    pub named: Option<String>,
    pub n: Option<usize>,
    pub sizes: Option<Vec<usize>>,
    pub basis: Option<Vec<Vec<Vec<Q>>>>,
    pub generators: Option<Vec<Vec<Vec<Q>>>>,
    pub battery: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionFile {
    #[serde(default)]
    pub models: BTreeMap<String, ModelDef>,
    #[serde(default)]
    pub subspaces: BTreeMap<String, SubspaceDef>,
    #[serde(default)]
    pub flags: BTreeMap<String, FlagDef>,
    #[serde(default)]
    pub couples: BTreeMap<String, CoupleDef>,
    #[serde(default)]
    pub elements: BTreeMap<String, ElementDef>,
    #[serde(default)]
    pub algebras: BTreeMap<String, AlgebraDef>,
    #[serde(default)]
    pub commands: Vec<Value>,
}
