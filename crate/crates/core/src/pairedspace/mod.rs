//! Computable models of countable-dimensional paired spaces and the
//! subspace calculus on them.

mod model;
mod subspace;
mod truncate;
mod vector;

pub use model::{Form, FormKind, Involution, Model, ModelReport, PairedSpaceModel, Side};
pub use subspace::Subspace;
pub use truncate::{finite_perp, same_span_modulo, TruncatedModel};
pub use vector::Vector;

pub(crate) use vector::echelon;

use num_traits::Zero;

use crate::error::{Error, Result};

/// `J(v) = sum_i v_i sign(i) f_{iota(i)}`, the form's identification of `V`
/// with `V*`.
pub fn form_image(model: &Model, v: &Vector) -> Result<Vector> {
    let form = model.form().ok_or(Error::NoFormOnModel)?;
    if v.side() != Side::V {
        return Err(Error::SideMismatch { expected: "V".into(), found: v.side().to_string() });
    }
    Ok(Vector::from_parts(
        Side::VStar,
        v.basis().iter().map(|(i, c)| (form.iota.apply(*i), c * form.sign.value(*i))),
        Vec::new(),
    ))
}

/// Inverse of [`form_image`].
pub(crate) fn form_preimage(model: &Model, g: &Vector) -> Vector {
    let form = model.form().expect("caller checked the form");
    Vector::from_parts(
        Side::V,
        g.basis().iter().filter(|(_, c)| !c.is_zero()).map(|(j, c)| {
            let i = form.iota.apply(*j);
            (i, c / form.sign.value(i))
        }),
        Vec::new(),
    )
}

/// The bilinear form `B(x, y) = <x, J y>` on `V`.
pub fn form_value(model: &Model, x: &Vector, y: &Vector) -> Result<crate::exactnum::Rational> {
    let jy = form_image(model, y)?;
    model.pair(x, &jy)
}
