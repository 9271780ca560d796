//! Command surface: parsing, reference checks and execution.

use serde::Deserialize;
use serde_json::{json, Map, Value};

use flagforge_core::epcore::{join_window, EpSeq};
use flagforge_core::finitary::{
    block_traces, in_joint_stabilizer, in_nilradical, in_pminus, in_stabilizer, normalizer_sampling, normalizer_test,
    perp_parabolic_member, tc_member, Ambient, FinitaryElement, TraceConditionSubalgebra,
};
use flagforge_core::finoracle::{
    cartan_queries, cartan_subalgebra, fd_parabolic_tests, invariant_taut_couple, is_splittable, killing_invariants,
    levi_component, linear_nilradical, locally_reductive_part, parabolic_bijection_check, preserving_subalgebra,
    solvable_radical, splittable_closure, tensor_span, CartanReport, FdLieAlgebra,
};
use flagforge_core::genflag::{classify_flag, fc_flag, make_taut_couple, FinitePairFlag, TautCouple};
use flagforge_core::pairedspace::{finite_perp, same_span_modulo, FormKind, Model, Side, Subspace, TruncatedModel};
use flagforge_core::Error;

use crate::schema::{epseq_out, matrix_out, q_out, rats, side_out, subspace_out, vector_out, VectorDef, Q};
use crate::session::{InputError, Session};

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubOp {
    IsClosed,
    Closure,
    Perp,
    Contains,
    Same,
    Member,
    Window,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MemberKind {
    Stabilizer,
    Joint,
    Nilradical,
    Pminus,
    Tc,
    Pprime,
    Normalizer,
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AmbientDef {
    #[default]
    Gl,
    Sl,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FdOp {
    Radical,
    Nilradical,
    Levi,
    Splittable,
    Gred,
    Cartan,
    Taut,
    Parabolic,
    Bijection,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(untagged)]
pub enum LevelsDef {
    #[default]
    #[serde(skip)]
    Auto,
    Named(String),
    List(Vec<usize>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "cmd", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Command {
    ValidateModel {
        model: String,
    },
    ClassifyFlag {
        flag: String,
    },
    MakeCouple {
        #[serde(default)]
        couple: Option<String>,
        #[serde(default)]
        f: Option<String>,
        #[serde(default)]
        g: Option<String>,
    },
    Subspace {
        op: SubOp,
        subspace: String,
        #[serde(default)]
        other: Option<String>,
        #[serde(default)]
        vector: Option<VectorDef>,
    },
    Member {
        kind: MemberKind,
        elem: String,
        #[serde(default)]
        flag: Option<String>,
        #[serde(default)]
        couple: Option<String>,
        #[serde(default)]
        ambient: AmbientDef,
        #[serde(default)]
        constraints: Vec<Vec<Q>>,
        #[serde(default)]
        sampling_bound: Option<usize>,
    },
    BlockTrace {
        elem: String,
        couple: String,
    },
    FcFlag {
        flag: String,
    },
    TruncateCompare {
        object: String,
        #[serde(default)]
        levels: LevelsDef,
    },
    Fd {
        op: FdOp,
        alg: String,
        #[serde(default)]
        sub: Option<String>,
    },
    Emit {
        object: String,
    },
}

/// A command with its optional expectation. A scalar `expect` is compared
/// with the output's `verdict`; an object is compared field by field, and
/// its `error` field matches a substring of a command error.
#[derive(Clone, Debug)]
pub struct Step {
    pub name: String,
    pub command: Command,
    pub expect: Option<Value>,
}

pub fn parse_step(index: usize, raw: &Value) -> Result<Step, InputError> {
    let bad = |message: String| InputError::BadCommand { index, message };
    let mut obj: Map<String, Value> = raw.as_object().cloned().ok_or_else(|| bad("command must be an object".into()))?;
    let expect = obj.remove("expect");
    let name = obj.get("cmd").and_then(Value::as_str).unwrap_or("").to_string();
    let command: Command = serde_json::from_value(Value::Object(obj)).map_err(|e| bad(e.to_string()))?;
    Ok(Step { name, command, expect })
}

/// Every name the command refers to must be defined with the right kind.
pub fn check_refs(cmd: &Command, s: &Session) -> Result<(), InputError> {
    let opt = |o: &Option<String>, f: &dyn Fn(&str) -> Result<(), InputError>| o.as_deref().map_or(Ok(()), f);
    let model = |n: &str| s.model(n).map(|_| ());
    let sub = |n: &str| s.subspace(n).map(|_| ());
    let flag = |n: &str| s.flag(n).map(|_| ());
    let couple = |n: &str| s.couple(n).map(|_| ());
    let elem = |n: &str| s.element(n).map(|_| ());
    let alg = |n: &str| s.algebra(n).map(|_| ());
    match cmd {
        Command::ValidateModel { model: m } => model(m),
        Command::ClassifyFlag { flag: f } | Command::FcFlag { flag: f } => flag(f),
        Command::MakeCouple { couple: c, f, g } => {
            opt(c, &couple)?;
            opt(f, &flag)?;
            opt(g, &flag)
        }
        Command::Subspace { subspace, other, .. } => {
            sub(subspace)?;
            opt(other, &sub)
        }
        Command::Member { elem: e, flag: f, couple: c, .. } => {
            elem(e)?;
            opt(f, &flag)?;
            opt(c, &couple)
        }
        Command::BlockTrace { elem: e, couple: c } => {
            elem(e)?;
            couple(c)
        }
        Command::TruncateCompare { object, .. } | Command::Emit { object } => {
            let known = s.models.contains_key(object)
                || s.subspaces.contains_key(object)
                || s.flags.contains_key(object)
                || s.couples.contains_key(object)
                || s.elements.contains_key(object)
                || s.algebras.contains_key(object);
            if known {
                Ok(())
            } else {
                Err(InputError::UnresolvedReference(object.clone()))
            }
        }
        Command::Fd { alg: a, sub, .. } => {
            alg(a)?;
            opt(sub, &alg)
        }
    }
}

pub fn expectation_holds(expect: &Value, out: &Result<Value, String>) -> bool {
    match (expect, out) {
        (Value::Object(map), Err(e)) => map.get("error").and_then(Value::as_str).is_some_and(|s| e.contains(s)),
        (Value::Object(map), Ok(v)) => map.iter().all(|(k, x)| v.get(k) == Some(x)),
        (x, Ok(v)) => v.get("verdict") == Some(x),
        (_, Err(_)) => false,
    }
}

fn err(e: Error) -> String {
    format!("{e:?}: {e}")
}

fn need<'a>(o: &'a Option<String>, what: &str) -> Result<&'a str, String> {
    o.as_deref().ok_or_else(|| format!("missing {what}"))
}

fn algebra_out(g: &FdLieAlgebra) -> Value {
    json!({ "n": g.n(), "dim": g.dim(), "basis": g.basis().iter().map(matrix_out).collect::<Vec<_>>() })
}

fn cartan_out(r: &CartanReport) -> Value {
    json!({
        "d": r.d, "e": r.e, "f": r.f, "is_cartan": r.is_cartan,
        "self_normalizing": r.self_normalizing, "nilpotent": r.nilpotent,
        "routes_agree": r.routes_agree(), "verdict": r.is_cartan,
    })
}

fn dim_out(d: Option<usize>) -> Value {
    d.map_or_else(|| json!("infinite"), |d| json!(d))
}

fn couple_out(t: &TautCouple) -> Value {
    json!({
        "verdict": true,
        "f_pairs": t.f().n_pairs(),
        "g_pairs": t.g().n_pairs(),
        "c_pairs": t.c_pairs().iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
        "c_dims": t.c_dims().iter().map(|(x, y)| json!([dim_out(*x), dim_out(*y)])).collect::<Vec<_>>(),
    })
}

pub fn execute(cmd: &Command, s: &Session, seed: u64) -> Result<Value, String> {
    let r = |e: InputError| e.to_string();
    match cmd {
        Command::ValidateModel { model } => {
            let m = s.model(model).map_err(r)?;
            let radical = |side| m.radical(side).iter().map(vector_out).collect::<Vec<_>>();
            let window = m.window();
            match m.validate() {
                Ok(rep) => Ok(json!({
                    "verdict": true, "v_augs": rep.v_augs, "w_augs": rep.w_augs, "has_form": rep.has_form,
                    "window": [window.0, window.1],
                })),
                Err(Error::DegeneratePairing(w)) => Ok(json!({
                    "verdict": false, "witness": w,
                    "radical_v": radical(Side::V), "radical_vstar": radical(Side::VStar),
                })),
                Err(e) => Err(err(e)),
            }
        }
        Command::ClassifyFlag { flag } => {
            let f = s.flag(flag).map_err(r)?;
            let c = classify_flag(f).map_err(err)?;
            Ok(json!({
                "verdict": c.semiclosed, "semiclosed": c.semiclosed, "closed": c.closed,
                "maximal_semiclosed": c.maximal_semiclosed, "pairs": f.n_pairs(),
            }))
        }
        Command::MakeCouple { couple, f, g } => {
            if let Some(c) = couple {
                return Ok(couple_out(s.couple(c).map_err(r)?));
            }
            let f = s.flag(need(f, "f")?).map_err(r)?.clone();
            let g = s.flag(need(g, "g")?).map_err(r)?.clone();
            match make_taut_couple(f, g) {
                Ok(t) => Ok(couple_out(&t)),
                Err(e @ (Error::NotTaut(_) | Error::NotSemiclosed(_))) => Ok(json!({ "verdict": false, "reason": err(e) })),
                Err(e) => Err(err(e)),
            }
        }
        Command::Subspace { op, subspace, other, vector } => {
            let a = s.subspace(subspace).map_err(r)?;
            let name = s.model_name(a.model());
            let b = || -> Result<&Subspace, String> { s.subspace(need(other, "other")?).map_err(r) };
            Ok(match op {
                SubOp::IsClosed => json!({ "verdict": a.is_closed() }),
                SubOp::Closure => json!({ "subspace": subspace_out(&name, &a.closure()) }),
                SubOp::Perp => json!({ "subspace": subspace_out(&name, &a.perp()) }),
                SubOp::Contains => json!({ "verdict": a.contains(b()?).map_err(err)? }),
                SubOp::Same => json!({ "verdict": a.same_as(b()?).map_err(err)? }),
                SubOp::Member => {
                    let v = vector.as_ref().ok_or("missing vector")?.build(a.side(), a.model().n_augs(a.side()))?;
                    json!({ "verdict": a.member(&v).map_err(err)? })
                }
                SubOp::Window => {
                    let (n, p) = a.window();
                    json!({ "window": [n, p] })
                }
            })
        }
        Command::Member { kind, elem, flag, couple, ambient, constraints, sampling_bound } => {
            let x = s.element(elem).map_err(r)?;
            let amb = match ambient {
                AmbientDef::Gl => Ambient::Gl,
                AmbientDef::Sl => Ambient::Sl,
            };
            if let MemberKind::Stabilizer = kind {
                let f = s.flag(need(flag, "flag")?).map_err(r)?;
                return Ok(json!({ "verdict": in_stabilizer(x, f).map_err(err)? }));
            }
            let t = s.couple(need(couple, "couple")?).map_err(r)?;
            let verdict = match kind {
                MemberKind::Stabilizer => unreachable!(),
                MemberKind::Joint => in_joint_stabilizer(x, t),
                MemberKind::Nilradical => in_nilradical(x, t),
                MemberKind::Pminus => in_pminus(x, t, amb),
                MemberKind::Pprime => perp_parabolic_member(x, t),
                MemberKind::Normalizer => normalizer_test(x, t),
                MemberKind::Tc => {
                    let cs = constraints.iter().map(|c| rats(c)).collect();
                    TraceConditionSubalgebra::new(t.clone(), amb, cs).and_then(|tc| tc_member(x, &tc))
                }
            }
            .map_err(err)?;
            let mut out = json!({ "verdict": verdict });
            if let (MemberKind::Normalizer, Some(bound)) = (kind, sampling_bound) {
                out["sampling_verdict"] = json!(normalizer_sampling(x, t, *bound, amb).map_err(err)?);
            }
            Ok(out)
        }
        Command::BlockTrace { elem, couple } => {
            let x = s.element(elem).map_err(r)?;
            let t = s.couple(couple).map_err(r)?;
            let tr = block_traces(x, t).map_err(err)?;
            Ok(json!({
                "traces": tr.iter().map(q_out).collect::<Vec<_>>(),
                "c_pairs": t.c_pairs().iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
                "infinite": (0..tr.len()).map(|k| t.is_infinite_block(k)).collect::<Vec<_>>(),
            }))
        }
        Command::FcFlag { flag } => {
            let f = s.flag(flag).map_err(r)?;
            let c = fc_flag(f).map_err(err)?;
            let name = s.model_name(f.model());
            Ok(json!({ "chain": c.chain().iter().map(|x| subspace_out(&name, x)).collect::<Vec<_>>() }))
        }
        Command::TruncateCompare { object, levels } => truncate_compare(s, object, levels),
        Command::Fd { op, alg, sub } => fd(s, *op, alg, sub, seed),
        Command::Emit { object } => emit(s, object),
    }
}

fn fd(s: &Session, op: FdOp, alg: &str, sub: &Option<String>, seed: u64) -> Result<Value, String> {
    let g = s.algebra(alg).map_err(|e| e.to_string())?;
    let sub = || -> Result<&FdLieAlgebra, String> { s.algebra(need(sub, "sub")?).map_err(|e| e.to_string()) };
    Ok(match op {
        FdOp::Radical => algebra_out(&solvable_radical(g)),
        FdOp::Nilradical => algebra_out(&linear_nilradical(g)),
        FdOp::Levi => {
            let l = levi_component(g).map_err(err)?;
            let mut out = algebra_out(&l);
            out["killing_rank"] = json!(killing_invariants(&l).1);
            out
        }
        FdOp::Splittable => json!({ "verdict": is_splittable(g), "closure_dim": splittable_closure(g).dim() }),
        FdOp::Gred => {
            let d = locally_reductive_part(g, seed).map_err(err)?;
            json!({
                "nilradical": algebra_out(&d.nilradical),
                "levi": algebra_out(&d.levi),
                "torus": algebra_out(&d.torus),
                "reductive_part": algebra_out(&d.reductive_part),
            })
        }
        FdOp::Cartan => match sub_opt(sub) {
            Some(h) => cartan_out(&cartan_queries(g, h?.space()).map_err(err)?),
            None => {
                let h = cartan_subalgebra(g, seed).map_err(err)?;
                let mut out = cartan_out(&cartan_queries(g, h.space()).map_err(err)?);
                out["cartan"] = algebra_out(&h);
                out
            }
        },
        FdOp::Taut => {
            let c = invariant_taut_couple(g, seed).map_err(err)?;
            json!({
                "verdict": c.quotients_irreducible && c.nilradical_match,
                "quotients_irreducible": c.quotients_irreducible,
                "nilradical_match": c.nilradical_match,
                "flag_dims": c.flag.dims(),
                "dual_flag_dims": c.dual_flag.dims(),
            })
        }
        FdOp::Parabolic => {
            let p = fd_parabolic_tests(g, seed).map_err(err)?;
            json!({
                "verdict": p.is_parabolic,
                "borel_restriction_check": p.borel_restriction_check,
                "series_dims": p.series_dims,
            })
        }
        FdOp::Bijection => {
            let p = parabolic_bijection_check(g, sub()?, seed).map_err(err)?;
            let mut out = algebra_out(&p);
            out["verdict"] = json!(true);
            out
        }
    })
}

fn sub_opt<'a>(f: impl Fn() -> Result<&'a FdLieAlgebra, String>) -> Option<Result<&'a FdLieAlgebra, String>> {
    match f() {
        Err(e) if e == "missing sub" => None,
        r => Some(r),
    }
}

fn auto_levels(m: &Model, subs: &[&Subspace]) -> Vec<usize> {
    let (n, p) = subs.iter().fold(m.window(), |w, s| join_window(w, s.window()));
    vec![n + p, n + 2 * p, n + 3 * p]
}

fn resolve_levels(levels: &LevelsDef, auto: Vec<usize>) -> Result<Vec<usize>, String> {
    match levels {
        LevelsDef::Auto => Ok(auto),
        LevelsDef::Named(n) if n == "auto" => Ok(auto),
        LevelsDef::Named(n) => Err(format!("levels must be \"auto\" or a list, found {n:?}")),
        LevelsDef::List(l) => Ok(l.clone()),
    }
}

/// Perp and closure of `a` at level `n` against the finite computation.
/// Subspaces with conditions are not closed under truncation of their
/// annihilator, so those checks are reported as skipped.
fn subspace_level(a: &Subspace, n: usize) -> Value {
    let m = a.model();
    let side = a.side();
    let t = TruncatedModel::new(m, n);
    let ta = a.truncate(n);
    let mut out = json!({ "level": n, "dim": ta.len(), "degenerate": t.is_degenerate() });
    if !a.is_unconditioned() {
        out["perp"] = json!("skipped");
        out["closure"] = json!("skipped");
        out["agree"] = json!(true);
        return out;
    }
    let p = a.perp();
    let fp = finite_perp(&t, side, &ta);
    let perp_ok = same_span_modulo(&p.truncate(n), &fp, t.radical(side.dual()), t.dim(side.dual()));
    let closure = if p.is_unconditioned() {
        let fc = finite_perp(&t, side.dual(), &fp);
        json!(same_span_modulo(&a.closure().truncate(n), &fc, t.radical(side), t.dim(side)))
    } else {
        json!("skipped")
    };
    let agree = perp_ok && closure != json!(false);
    out["perp"] = json!(perp_ok);
    out["closure"] = closure;
    out["agree"] = json!(agree);
    out
}

fn flag_levels(f: &FinitePairFlag, levels: &[usize]) -> Vec<Value> {
    levels
        .iter()
        .map(|&n| {
            let members: Vec<Value> = f.chain().iter().map(|s| subspace_level(s, n)).collect();
            let agree = members.iter().all(|v| v["agree"] == json!(true));
            json!({ "level": n, "members": members, "agree": agree })
        })
        .collect()
}

fn couple_level(t: &TautCouple, n: usize) -> Value {
    let tr = |s: &Subspace| s.truncate(n);
    let fm: Vec<_> = t.f().chain().iter().map(tr).collect();
    let gm: Vec<_> = t.g().chain().iter().map(tr).collect();
    let p = preserving_subalgebra(n, &fm, &gm);
    let joint = tensor_span(n, &t.joint_terms().iter().map(|(a, b)| (tr(a), tr(b))).collect::<Vec<_>>());
    let nil = tensor_span(n, &t.nil_terms().iter().map(|(a, b)| (tr(a), tr(b))).collect::<Vec<_>>());
    let oracle = linear_nilradical(&p);
    let blocks: usize = t
        .c_pairs()
        .iter()
        .map(|&(a, b)| {
            let df = t.f().succ(a).truncated_dim(n) - t.f().pred(a).truncated_dim(n);
            let dg = t.g().succ(b).truncated_dim(n) - t.g().pred(b).truncated_dim(n);
            df * dg
        })
        .sum();
    let joint_ok = p.space() == &joint;
    let nil_ok = oracle.space() == &nil;
    let dims_ok = p.dim() == oracle.dim() + blocks;
    json!({
        "level": n, "dim_joint": p.dim(), "dim_nilradical": oracle.dim(), "block_sum": blocks,
        "joint": joint_ok, "nilradical": nil_ok, "decomposition": dims_ok,
        "agree": joint_ok && nil_ok && dims_ok,
    })
}

fn truncate_compare(s: &Session, object: &str, levels: &LevelsDef) -> Result<Value, String> {
    let verdict = |rows: &[Value]| rows.iter().all(|v| v["agree"] == json!(true));
    if let Some(a) = s.subspaces.get(object) {
        let p = a.perp();
        let ls = resolve_levels(levels, auto_levels(a.model(), &[a, &p]))?;
        let rows: Vec<Value> = ls.iter().map(|&n| subspace_level(a, n)).collect();
        return Ok(json!({ "verdict": verdict(&rows), "levels": ls, "results": rows }));
    }
    if let Some(f) = s.flags.get(object) {
        let ls = resolve_levels(levels, auto_levels(f.model(), &f.chain().iter().collect::<Vec<_>>()))?;
        let rows = flag_levels(f, &ls);
        return Ok(json!({ "verdict": verdict(&rows), "levels": ls, "results": rows }));
    }
    if let Some(t) = s.couples.get(object) {
        let members: Vec<&Subspace> = t.f().chain().iter().chain(t.g().chain()).collect();
        let ls = resolve_levels(levels, auto_levels(t.f().model(), &members))?;
        let rows: Vec<Value> = if t.f().model().is_pure_basis() {
            ls.iter().map(|&n| couple_level(t, n)).collect()
        } else {
            let mut rows = flag_levels(t.f(), &ls);
            rows.extend(flag_levels(t.g(), &ls));
            rows
        };
        return Ok(json!({ "verdict": verdict(&rows), "levels": ls, "results": rows }));
    }
    Err(format!("{object} is not a subspace, flag or couple"))
}

fn model_out(m: &Model) -> Value {
    let seqs = |v: &[EpSeq]| v.iter().map(epseq_out).collect::<Vec<_>>();
    let form = m.form().map(|f| {
        json!({
            "kind": match f.kind { FormKind::Symmetric => "symmetric", FormKind::Antisymmetric => "antisymmetric" },
            "iota": { "pre": f.iota.pre(), "offsets": f.iota.offsets() },
            "sign": epseq_out(&f.sign),
        })
    });
    json!({
        "kind": "custom",
        "v_augs": seqs(m.v_augs()),
        "w_augs": seqs(m.w_augs()),
        "cross": m.cross().iter().map(|r| r.iter().map(q_out).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "form": form,
    })
}

fn element_out(name: &str, x: &FinitaryElement) -> Value {
    json!({
        "model": name,
        "terms": x.terms().iter().map(|(v, w)| json!([vector_out(v), vector_out(w)])).collect::<Vec<_>>(),
    })
}

fn emit(s: &Session, object: &str) -> Result<Value, String> {
    let def = if let Some(m) = s.models.get(object) {
        model_out(m)
    } else if let Some(a) = s.subspaces.get(object) {
        subspace_out(&s.model_name(a.model()), a)
    } else if let Some(f) = s.flags.get(object) {
        let name = s.model_name(f.model());
        json!({
            "model": name,
            "side": side_out(f.side()),
            "chain": f.chain().iter().map(|x| subspace_out(&name, x)).collect::<Vec<_>>(),
        })
    } else if let Some(x) = s.elements.get(object) {
        element_out(&s.model_name(x.model()), x)
    } else if let Some(g) = s.algebras.get(object) {
        json!({ "n": g.n(), "basis": g.basis().iter().map(matrix_out).collect::<Vec<_>>() })
    } else if let Some(t) = s.couples.get(object) {
        let name = s.model_name(t.f().model());
        let chain = |f: &FinitePairFlag| f.chain().iter().map(|x| subspace_out(&name, x)).collect::<Vec<_>>();
        json!({ "f": chain(t.f()), "g": chain(t.g()) })
    } else {
        return Err(format!("unknown object {object}"));
    };
    Ok(json!({ "definition": def }))
}
