use num_traits::Signed;

use super::meataxe::composition_series;
use super::space::{FdLieAlgebra, MatSpace};
use super::structure::{cartan_subalgebra, levi_component, locally_reductive_part, solvable_radical};
use crate::error::{Error, Result};
use crate::exactnum::{factor_over_q, Matrix, Rational};

/// Verdicts of [`fd_parabolic_tests`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FdParabolicReport {
    /// `p` is the stabilizer of its composition series.
    pub is_parabolic: bool,
    /// For parabolic `p`: a Borel `b ⊆ p` meets `[p, p]` in a Borel of
    /// `[p, p]`. `None` when `p` is not parabolic.
    pub borel_restriction_check: Option<bool>,
    pub series_dims: Vec<usize>,
}

/// Dimension of a Borel subalgebra: `dim r + (dim l + rank l) / 2`.
pub fn borel_dim(g: &FdLieAlgebra, seed: u64) -> Result<usize> {
    let r = solvable_radical(g);
    let l = levi_component(g)?;
    let rank = cartan_subalgebra(&l, seed)?.dim();
    Ok(r.dim() + (l.dim() + rank) / 2)
}

/// Parabolic test for a subalgebra of `gl_n`.
pub fn fd_parabolic_tests(p: &FdLieAlgebra, seed: u64) -> Result<FdParabolicReport> {
    let series = composition_series(&p.basis(), p.n(), seed)?;
    let is_parabolic = &series.stabilizer() == p;
    let borel_restriction_check = if is_parabolic {
        let b = series.complete().stabilizer();
        let d = p.derived();
        let bd = b.intersect(&d);
        Some(p.contains_space(b.space()) && bd.is_solvable() && bd.dim() == borel_dim(&d, seed)?)
    } else {
        None
    };
    Ok(FdParabolicReport { is_parabolic, borel_restriction_check, series_dims: series.dims() })
}

/// A Borel subalgebra `r + h + (positive root spaces)` for a regular
/// element of a split Cartan subalgebra of the Levi component. `None` when
/// the Cartan subalgebra found is not split over the rationals.
pub fn borel_of(g: &FdLieAlgebra, seed: u64) -> Result<Option<FdLieAlgebra>> {
    let r = solvable_radical(g);
    let l = levi_component(g)?;
    if l.is_zero() {
        return Ok(Some(g.clone()));
    }
    let h = cartan_subalgebra(&l, seed)?;
    let hb = h.basis();
    for attempt in 0..32i64 {
        let mut h0 = Matrix::zeros(g.n(), g.n());
        for (i, x) in hb.iter().enumerate() {
            let w = Rational::from_integer((1 + (i as i64 + 1) * (attempt + 1) + i as i64 * i as i64 * attempt).into());
            h0 = &h0 + &x.scale(&w);
        }
        let ad = l.ad(&h0);
        let mut roots: Vec<Rational> = Vec::new();
        for (f, _) in factor_over_q(&ad.charpoly()?) {
            if f.degree() != Some(1) {
                return Ok(None);
            }
            roots.push(-f.coeff(0) / f.coeff(1));
        }
        let d = l.dim();
        let zero_mult = ad.pow(d as u32).kernel().len();
        if zero_mult != h.dim() {
            continue;
        }
        let mut mats = r.basis();
        mats.extend(hb.iter().cloned());
        for lam in roots.iter().filter(|x| x.is_positive()) {
            let mut m = ad.clone();
            for i in 0..d {
                m[(i, i)] -= lam;
            }
            mats.extend(m.kernel().iter().map(|c| l.element(c)));
        }
        let b = FdLieAlgebra::from_space(MatSpace::span(g.n(), &mats))?;
        if !b.is_solvable() {
            return Err(Error::Invalid("Borel candidate is not solvable".into()));
        }
        return Ok(Some(b));
    }
    Err(Error::Invalid("no regular element found in the Cartan subalgebra".into()))
}

/// `p_red ↦ n_g + p_red`, with the Borel containment and the round trip
/// `(n_g + p_red) ∩ g_red = p_red` verified.
pub fn parabolic_bijection_check(g: &FdLieAlgebra, p_red: &FdLieAlgebra, seed: u64) -> Result<FdLieAlgebra> {
    let dec = locally_reductive_part(g, seed)?;
    let g_red = &dec.reductive_part;
    if p_red.n() != g.n() || !g_red.contains_space(p_red.space()) {
        return Err(Error::NotParabolicInput("p_red is not contained in g_red".into()));
    }
    if borel_dim(p_red, seed)? != borel_dim(g_red, seed)? {
        return Err(Error::NotParabolicInput("p_red contains no Borel subalgebra of g_red".into()));
    }
    let p = FdLieAlgebra::from_space(dec.nilradical.sum(p_red.space()))?;
    if borel_dim(&p, seed)? != borel_dim(g, seed)? {
        return Err(Error::Invalid("n_g + p_red contains no Borel subalgebra of g".into()));
    }
    if &p.intersect(g_red) != p_red {
        return Err(Error::Invalid("round trip does not recover p_red".into()));
    }
    Ok(p)
}
