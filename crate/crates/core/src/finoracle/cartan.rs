use super::space::{annihilator, FdLieAlgebra, MatSpace};
use super::structure::{is_splittable, is_toral, semisimple_span};
use crate::error::{Error, Result};
use crate::exactnum::{dot, Rational};

/// Verdicts of the three Cartan criteria, plus the structural checks run on
/// positive answers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanReport {
    /// `h = z_k(h_ss)`.
    pub d: bool,
    /// `h = z_k(t)` for the maximal toral subalgebra `t = h_ss`.
    pub e: bool,
    /// `h` equals its Fitting null component in `k`.
    pub f: bool,
    pub is_cartan: bool,
    pub self_normalizing: bool,
    pub nilpotent: bool,
}

impl CartanReport {
    pub fn routes_agree(&self) -> bool {
        self.d == self.e && self.e == self.f
    }
}

fn check_inputs(k: &FdLieAlgebra, h: &MatSpace) -> Result<()> {
    if h.n() != k.n() || !k.contains_space(h) {
        return Err(Error::Invalid("h is not a subspace of k".into()));
    }
    if !is_splittable(k) {
        return Err(Error::NotSplittable("k".into()));
    }
    Ok(())
}

/// Largest subspace `U` of `k` with `ad(h)` nilpotent on it: the limit of
/// `U_0 = 0`, `U_{i+1} = {y : [h, y] ⊆ U_i}`.
pub fn fitting_null(k: &FdLieAlgebra, h: &MatSpace) -> Result<FdLieAlgebra> {
    if h.n() != k.n() || !k.contains_space(h) {
        return Err(Error::Invalid("h is not a subspace of k".into()));
    }
    let hb = h.basis();
    let mut u = MatSpace::zero(k.n());
    loop {
        let ann = annihilator(&u);
        let mut eqs: Vec<Vec<Rational>> = Vec::new();
        for x in &hb {
            let cols: Vec<Vec<Rational>> = k.basis().iter().map(|y| x.commutator(y).flat().to_vec()).collect();
            for a in &ann {
                let row: Vec<Rational> = cols.iter().map(|c| dot(a, c)).collect();
                eqs.push(row);
            }
        }
        let next = k.solution_space(eqs);
        if next.dim() == u.dim() {
            return Ok(next);
        }
        u = next.space().clone();
    }
}

/// `z_k(t)` for a toral `t ⊆ k`.
pub fn cartan_from_torus(k: &FdLieAlgebra, t: &MatSpace) -> Result<FdLieAlgebra> {
    if t.n() != k.n() || !k.contains_space(t) {
        return Err(Error::Invalid("t is not a subspace of k".into()));
    }
    if !is_toral(t) {
        return Err(Error::Invalid("t is not toral".into()));
    }
    Ok(k.centralizer(&t.basis()))
}

/// Toral `t` is maximal in `k` when its centralizer is nilpotent and the
/// semisimple parts of the centralizer lie in `t`.
pub fn is_maximal_toral(k: &FdLieAlgebra, t: &MatSpace) -> bool {
    if !is_toral(t) {
        return false;
    }
    let c = k.centralizer(&t.basis());
    c.is_nilpotent() && t.contains_space(&semisimple_span(c.space()))
}

/// Evaluates the three criteria independently.
pub fn cartan_queries(k: &FdLieAlgebra, h: &MatSpace) -> Result<CartanReport> {
    check_inputs(k, h)?;
    let is_alg = h.is_subalgebra();
    let nilpotent = is_alg && FdLieAlgebra::from_space(h.clone()).is_ok_and(|a| a.is_nilpotent());
    let hss = semisimple_span(h);
    let d = nilpotent && k.centralizer(&hss.basis()).space() == h;
    let e = nilpotent && is_maximal_toral(k, &hss) && k.centralizer(&hss.basis()).space() == h;
    let f = is_alg && fitting_null(k, h)?.space() == h;
    let self_normalizing = k.normalizer(h).space() == h;
    Ok(CartanReport { d, e, f, is_cartan: d, self_normalizing, nilpotent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{q, Matrix};

    #[test]
    fn diagonal_of_gl3() {
        let k = FdLieAlgebra::gl(3);
        let r = cartan_queries(&k, FdLieAlgebra::diagonal(3).space()).unwrap();
        assert!(r.d && r.e && r.f && r.is_cartan && r.self_normalizing && r.nilpotent);
    }

    #[test]
    fn nilpotent_line_is_not_cartan() {
        let k = FdLieAlgebra::gl(2);
        let h = MatSpace::span(2, &[Matrix::unit(2, 0, 1)]);
        let r = cartan_queries(&k, &h).unwrap();
        assert!(!r.d && !r.e && !r.f);
        assert!(r.routes_agree());
    }

    #[test]
    fn torus_in_borel() {
        let k = FdLieAlgebra::borel(2);
        let mut t = Matrix::zeros(2, 2);
        t[(0, 0)] = q(1);
        let c = cartan_from_torus(&k, &MatSpace::span(2, &[t])).unwrap();
        assert_eq!(c, FdLieAlgebra::diagonal(2));
        let r = cartan_queries(&k, c.space()).unwrap();
        assert!(r.is_cartan && r.routes_agree());
        assert_eq!(fitting_null(&k, c.space()).unwrap(), c);
    }

    #[test]
    fn non_maximal_torus() {
        let k = FdLieAlgebra::gl(3);
        let h = MatSpace::span(3, &[Matrix::identity(3)]);
        let r = cartan_queries(&k, &h).unwrap();
        assert!(!r.d && !r.e && !r.f);
        let x = Matrix::from_i64(&[&[1, 1], &[0, 1]]);
        let k = FdLieAlgebra::from_basis(2, &[x]).unwrap();
        assert!(matches!(cartan_queries(&k, k.space()), Err(Error::NotSplittable(_))));
    }
}
