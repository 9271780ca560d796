//! Resolution of a parsed session file into core values.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use flagforge_core::epcore::EpSet;
use flagforge_core::finitary::{Coord, FinitaryElement};
use flagforge_core::finoracle::{battery, lie_close, FdLieAlgebra};
use flagforge_core::genflag::{flag_from_chain, make_taut_couple, FinitePairFlag, TautCouple};
use flagforge_core::pairedspace::{Form, FormKind, Involution, Model, PairedSpaceModel, Side, Subspace};

use crate::schema::{matrix_in, rats, AlgebraDef, FormKindDef, ModelDef, SessionFile, SubspaceDef};

/// Errors that make a session unusable; they map to exit code 2.
#[derive(Debug)]
pub enum InputError {
    Io(String),
    Parse { line: usize, column: usize, message: String },
    UnresolvedReference(String),
    Invalid { object: String, message: String },
    BadCommand { index: usize, message: String },
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Io(m) => write!(f, "cannot read session: {m}"),
            InputError::Parse { line, column, message } => write!(f, "parse error at {line}:{column}: {message}"),
            InputError::UnresolvedReference(n) => write!(f, "unresolved reference: {n}"),
            InputError::Invalid { object, message } => write!(f, "invalid definition of {object}: {message}"),
            InputError::BadCommand { index, message } => write!(f, "command {index}: {message}"),
        }
    }
}

impl InputError {
    pub fn kind(&self) -> &'static str {
        match self {
            InputError::Io(_) => "Io",
            InputError::Parse { .. } => "ParseError",
            InputError::UnresolvedReference(_) => "UnresolvedReference",
            InputError::Invalid { .. } => "InvalidDefinition",
            InputError::BadCommand { .. } => "InvalidCommand",
        }
    }
}

fn invalid(object: &str, message: impl fmt::Display) -> InputError {
    InputError::Invalid { object: object.to_string(), message: message.to_string() }
}

pub struct Session {
    pub models: BTreeMap<String, Model>,
    pub subspaces: BTreeMap<String, Subspace>,
    pub flags: BTreeMap<String, FinitePairFlag>,
    pub couples: BTreeMap<String, TautCouple>,
    pub elements: BTreeMap<String, FinitaryElement>,
    pub algebras: BTreeMap<String, FdLieAlgebra>,
}

impl Session {
    pub fn model_name(&self, m: &Model) -> String {
        self.models.iter().find(|(_, x)| Arc::ptr_eq(x, m)).map(|(n, _)| n.clone()).unwrap_or_default()
    }

    pub fn model(&self, name: &str) -> Result<&Model, InputError> {
        self.models.get(name).ok_or_else(|| InputError::UnresolvedReference(name.to_string()))
    }

    pub fn subspace(&self, name: &str) -> Result<&Subspace, InputError> {
        self.subspaces.get(name).ok_or_else(|| InputError::UnresolvedReference(name.to_string()))
    }

    pub fn flag(&self, name: &str) -> Result<&FinitePairFlag, InputError> {
        self.flags.get(name).ok_or_else(|| InputError::UnresolvedReference(name.to_string()))
    }

    pub fn couple(&self, name: &str) -> Result<&TautCouple, InputError> {
        self.couples.get(name).ok_or_else(|| InputError::UnresolvedReference(name.to_string()))
    }

    pub fn element(&self, name: &str) -> Result<&FinitaryElement, InputError> {
        self.elements.get(name).ok_or_else(|| InputError::UnresolvedReference(name.to_string()))
    }

    pub fn algebra(&self, name: &str) -> Result<&FdLieAlgebra, InputError> {
        self.algebras.get(name).ok_or_else(|| InputError::UnresolvedReference(name.to_string()))
    }
}

pub fn parse(text: &str) -> Result<SessionFile, InputError> {
    serde_json::from_str(text).map_err(|e| InputError::Parse { line: e.line(), column: e.column(), message: e.to_string() })
}

pub fn build(file: &SessionFile) -> Result<Session, InputError> {
    let mut seen = BTreeSet::new();
    let names = file
        .models
        .keys()
        .chain(file.subspaces.keys())
        .chain(file.flags.keys())
        .chain(file.couples.keys())
        .chain(file.elements.keys())
        .chain(file.algebras.keys());
    for n in names {
        if !seen.insert(n) {
            return Err(invalid(n, "name is defined twice"));
        }
    }
    let mut models = BTreeMap::new();
    for (name, def) in &file.models {
        models.insert(name.clone(), build_model(def).map_err(|e| invalid(name, e))?);
    }
    let mut r = Resolver { file, models: &models, done: BTreeMap::new(), active: BTreeSet::new() };
    for name in file.subspaces.keys() {
        r.subspace(name)?;
    }
    let subspaces = r.done;
    let mut flags = BTreeMap::new();
    for (name, def) in &file.flags {
        let m = lookup(&models, &def.model)?;
        let chain =
            def.chain.iter().map(|s| lookup(&subspaces, s).cloned()).collect::<Result<Vec<_>, _>>()?;
        flags.insert(name.clone(), flag_from_chain(m, def.side.0, chain).map_err(|e| invalid(name, e))?);
    }
    let mut couples = BTreeMap::new();
    for (name, def) in &file.couples {
        let f = lookup(&flags, &def.f)?.clone();
        let g = lookup(&flags, &def.g)?.clone();
        couples.insert(name.clone(), make_taut_couple(f, g).map_err(|e| invalid(name, e))?);
    }
    let mut elements = BTreeMap::new();
    for (name, def) in &file.elements {
        let m = lookup(&models, &def.model)?;
        let mut terms = Vec::new();
        for (v, w) in &def.terms {
            terms.push((
                v.build(Side::V, m.n_augs(Side::V)).map_err(|e| invalid(name, e))?,
                w.build(Side::VStar, m.n_augs(Side::VStar)).map_err(|e| invalid(name, e))?,
            ));
        }
        let x = FinitaryElement::from_terms(m, &terms).map_err(|e| invalid(name, e))?;
        let y = FinitaryElement::from_entries(
            m,
            def.entries.iter().map(|(i, j, c)| ((Coord::Basis(*i), Coord::Basis(*j)), c.0.clone())),
        );
        elements.insert(name.clone(), x.add(&y).map_err(|e| invalid(name, e))?);
    }
    let mut algebras = BTreeMap::new();
    for (name, def) in &file.algebras {
        algebras.insert(name.clone(), build_algebra(def).map_err(|e| invalid(name, e))?);
    }
    Ok(Session { models, subspaces, flags, couples, elements, algebras })
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, name: &str) -> Result<&'a T, InputError> {
    map.get(name).ok_or_else(|| InputError::UnresolvedReference(name.to_string()))
}

fn build_model(def: &ModelDef) -> Result<Model, String> {
    Ok(match def {
        ModelDef::Plain => PairedSpaceModel::plain(),
        ModelDef::DenseLine => PairedSpaceModel::dense_line(),
        ModelDef::SplitSymmetric => PairedSpaceModel::split_symmetric(),
        ModelDef::SplitSymplectic => PairedSpaceModel::split_symplectic(),
        ModelDef::Custom { v_augs, w_augs, cross, form } => {
            let v = v_augs.iter().map(|s| s.build()).collect::<Result<Vec<_>, _>>()?;
            let w = w_augs.iter().map(|s| s.build()).collect::<Result<Vec<_>, _>>()?;
            let cross = match cross {
                Some(rows) => rows.iter().map(|r| rats(r)).collect(),
                None => vec![vec![Default::default(); w.len()]; v.len()],
            };
            let form = match form {
                None => None,
                Some(f) => Some(Form {
                    kind: match f.kind {
                        FormKindDef::Symmetric => FormKind::Symmetric,
                        FormKindDef::Antisymmetric => FormKind::Antisymmetric,
                    },
                    iota: Involution::new(f.iota.pre.clone(), f.iota.offsets.clone()).map_err(|e| e.to_string())?,
                    sign: f.sign.build()?,
                }),
            };
            Arc::new(PairedSpaceModel::new(v, w, cross, form).map_err(|e| e.to_string())?)
        }
    })
}

fn build_algebra(def: &AlgebraDef) -> Result<FdLieAlgebra, String> {
    let need_n = || def.n.ok_or_else(|| "missing n".to_string());
    if let Some(b) = &def.battery {
        return battery().into_iter().find(|(n, _)| n == b).map(|(_, g)| g).ok_or_else(|| format!("no battery entry {b:?}"));
    }
    if let Some(named) = &def.named {
        return match named.as_str() {
            "gl" => Ok(FdLieAlgebra::gl(need_n()?)),
            "sl" => Ok(FdLieAlgebra::sl(need_n()?)),
            "borel" => Ok(FdLieAlgebra::borel(need_n()?)),
            "diagonal" => Ok(FdLieAlgebra::diagonal(need_n()?)),
            "zero" => Ok(FdLieAlgebra::zero(need_n()?)),
            "block_upper" => Ok(FdLieAlgebra::block_upper(def.sizes.as_deref().ok_or("missing sizes")?)),
            _ => Err(format!("unknown algebra name {named:?}")),
        };
    }
    let mats = def.basis.as_ref().or(def.generators.as_ref());
    let n = match (def.n, mats.and_then(|m| m.first())) {
        (Some(n), _) => n,
        (None, Some(first)) => first.len(),
        (None, None) => need_n()?,
    };
    if let Some(basis) = &def.basis {
        let mats = basis.iter().map(|m| matrix_in(n, m)).collect::<Result<Vec<_>, _>>()?;
        return FdLieAlgebra::from_basis(n, &mats).map_err(|e| e.to_string());
    }
    if let Some(gens) = &def.generators {
        let mats = gens.iter().map(|m| matrix_in(n, m)).collect::<Result<Vec<_>, _>>()?;
        return Ok(lie_close(n, &mats));
    }
    Err("give one of battery, named, basis or generators".into())
}

struct Resolver<'a> {
    file: &'a SessionFile,
    models: &'a BTreeMap<String, Model>,
    done: BTreeMap<String, Subspace>,
    active: BTreeSet<String>,
}

impl Resolver<'_> {
    fn subspace(&mut self, name: &str) -> Result<Subspace, InputError> {
        if let Some(s) = self.done.get(name) {
            return Ok(s.clone());
        }
        let def = self.file.subspaces.get(name).ok_or_else(|| InputError::UnresolvedReference(name.to_string()))?;
        if !self.active.insert(name.to_string()) {
            return Err(invalid(name, "definition refers to itself"));
        }
        let s = self.build(name, def)?;
        self.active.remove(name);
        self.done.insert(name.to_string(), s.clone());
        Ok(s)
    }

    fn pair(&mut self, name: &str, names: &[String]) -> Result<(Subspace, Subspace), InputError> {
        match names {
            [a, b] => Ok((self.subspace(a)?, self.subspace(b)?)),
            _ => Err(invalid(name, "expects exactly two operands")),
        }
    }

    fn build(&mut self, name: &str, def: &SubspaceDef) -> Result<Subspace, InputError> {
        let ops = [def.perp.is_some(), def.closure.is_some(), def.sum.is_some(), def.intersection.is_some()];
        let data = def.aligned.is_some() || !def.conditions.is_empty() || !def.corrections.is_empty();
        let forms = ops.iter().filter(|&&b| b).count() + data as usize + def.span.is_some() as usize + def.full as usize;
        if forms != 1 {
            return Err(invalid(name, "give exactly one of data, span, full, perp, closure, sum, intersection"));
        }
        if let Some(o) = &def.perp {
            return Ok(self.subspace(o)?.perp());
        }
        if let Some(o) = &def.closure {
            return Ok(self.subspace(o)?.closure());
        }
        if let Some(ns) = &def.sum {
            let (a, b) = self.pair(name, ns)?;
            return a.sum(&b).map_err(|e| invalid(name, e));
        }
        if let Some(ns) = &def.intersection {
            let (a, b) = self.pair(name, ns)?;
            return a.intersection(&b).map_err(|e| invalid(name, e));
        }
        let model = def.model.as_deref().ok_or_else(|| invalid(name, "missing model"))?;
        let m = lookup(self.models, model)?;
        let side = def.side.ok_or_else(|| invalid(name, "missing side"))?.0;
        let k = m.n_augs(side);
        if def.full {
            return Ok(Subspace::full(m, side));
        }
        if let Some(vs) = &def.span {
            let vs = vs.iter().map(|v| v.build(side, k)).collect::<Result<Vec<_>, _>>().map_err(|e| invalid(name, e))?;
            return Subspace::span(m, side, vs).map_err(|e| invalid(name, e));
        }
        let aligned = match &def.aligned {
            Some(a) => a.build().map_err(|e| invalid(name, e))?,
            None => EpSet::empty(),
        };
        let conditions = def.conditions.iter().map(|c| c.build()).collect::<Result<Vec<_>, _>>().map_err(|e| invalid(name, e))?;
        let corrections =
            def.corrections.iter().map(|v| v.build(side, k)).collect::<Result<Vec<_>, _>>().map_err(|e| invalid(name, e))?;
        Subspace::new(m, side, aligned, conditions, corrections).map_err(|e| invalid(name, e))
    }
}
