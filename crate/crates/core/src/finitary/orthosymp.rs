use num_traits::Zero;

use super::blocks::{block_component, Complement};
use super::element::{Coord, FinitaryElement};
use super::membership::{in_joint_stabilizer, in_nilradical};
use crate::error::{Error, Result};
use crate::genflag::{form_couple, FinitePairFlag};
use crate::pairedspace::{form_image, FormKind, Model, Vector};

/// The Lie algebras preserving the form: `so` for a symmetric form, `sp`
/// for an antisymmetric one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classical {
    So,
    Sp,
}

impl Classical {
    fn kind(self) -> FormKind {
        match self {
            Classical::So => FormKind::Symmetric,
            Classical::Sp => FormKind::Antisymmetric,
        }
    }
}

/// `sum v_i ⊗ J(u_i)` for terms `(v_i, u_i)` in `V ⊗ V`.
pub fn from_vv(model: &Model, terms: &[(Vector, Vector)]) -> Result<FinitaryElement> {
    let mapped: Vec<(Vector, Vector)> =
        terms.iter().map(|(v, u)| Ok((v.clone(), form_image(model, u)?))).collect::<Result<_>>()?;
    FinitaryElement::from_terms(model, &mapped)
}

/// The flip `v ⊗ J(u) -> u ⊗ J(v)`.
pub fn sharp(x: &FinitaryElement) -> Result<FinitaryElement> {
    let form = x.model().form().ok_or(Error::NoFormOnModel)?;
    Ok(FinitaryElement::from_entries(
        x.model(),
        x.entries().iter().map(|((a, b), c)| match (a, b) {
            (Coord::Basis(i), Coord::Basis(j)) => {
                // e_i ⊗ f_j = e_i ⊗ J(s e_k) with k = iota(j), s = sign(k)
                let k = form.iota.apply(*j);
                let s = form.sign.value(k) * form.sign.value(*i);
                ((Coord::Basis(k), Coord::Basis(form.iota.apply(*i))), c * s)
            }
            _ => unreachable!("forms live on pure-basis models"),
        }),
    ))
}

/// `Λ(x) = x - sharp(x)`.
pub fn lambda(x: &FinitaryElement) -> Result<FinitaryElement> {
    x.sub(&sharp(x)?)
}

/// `S(x) = x + sharp(x)`.
pub fn sym(x: &FinitaryElement) -> Result<FinitaryElement> {
    x.add(&sharp(x)?)
}

fn check_kind(model: &Model, g: Classical) -> Result<()> {
    let form = model.form().ok_or(Error::NoFormOnModel)?;
    if form.kind != g.kind() {
        return Err(Error::WrongFormKind(format!("{:?} needs a {:?} form", g, g.kind())));
    }
    Ok(())
}

/// `x` preserves the form: `sharp(x) = -x` for `so`, `sharp(x) = x` for
/// `sp`.
pub fn in_classical(x: &FinitaryElement, g: Classical) -> Result<bool> {
    check_kind(x.model(), g)?;
    let s = sharp(x)?;
    Ok(match g {
        Classical::So => s.add(x)?.is_zero(),
        Classical::Sp => s.sub(x)?.is_zero(),
    })
}

/// `x` in `g`, in the joint stabilizer of `(F, J(F))`, and with zero trace
/// on every infinite block.
pub fn in_so_sp_stabilizer_minus(x: &FinitaryElement, f: &FinitePairFlag, g: Classical) -> Result<bool> {
    if !in_classical(x, g)? {
        return Ok(false);
    }
    let t = form_couple(f)?;
    if !in_joint_stabilizer(x, &t)? {
        return Ok(false);
    }
    for k in 0..t.c_pairs().len() {
        if t.is_infinite_block(k) && !block_component(x, &t, k, Complement::Pivot)?.trace.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `x` in `g` and in `sum F''_a ∧ (F''_a)^⊥`.
pub fn in_so_sp_nilradical(x: &FinitaryElement, f: &FinitePairFlag, g: Classical) -> Result<bool> {
    Ok(in_classical(x, g)? && in_nilradical(x, &form_couple(f)?)?)
}
