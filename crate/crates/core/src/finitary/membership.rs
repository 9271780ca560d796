use std::collections::BTreeMap;

use num_traits::Zero;

use super::element::{same_model, Coord, FinitaryElement};
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::genflag::{BasisOrderFlag, FinitePairFlag, TautCouple};
use crate::pairedspace::{Model, Side, Subspace, Vector};

fn check_model(x: &FinitaryElement, m: &Model) -> Result<()> {
    if same_model(x.model(), m) {
        Ok(())
    } else {
        Err(Error::ModelMismatch)
    }
}

/// Images under `x` of vectors spanning `x · s`.
pub fn image_generators(x: &FinitaryElement, s: &Subspace) -> Result<Vec<Vector>> {
    check_model(x, s.model())?;
    s.window_generators(x.support_bound())
        .iter()
        .map(|u| x.act(u))
        .filter(|r| !matches!(r, Ok(v) if v.is_zero()))
        .collect()
}

/// `x · s ⊆ s`.
pub fn preserves(x: &FinitaryElement, s: &Subspace) -> Result<bool> {
    for y in image_generators(x, s)? {
        if !s.member(&y)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `x` maps every member of the flag into itself.
pub fn in_stabilizer(x: &FinitaryElement, f: &FinitePairFlag) -> Result<bool> {
    check_model(x, f.model())?;
    for s in &f.chain()[1..f.chain().len() - 1] {
        if !preserves(x, s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Support test for a basis-order flag: every entry `(i, j)` has
/// `sigma(i) <= sigma(j)`.
pub fn in_basis_stabilizer(x: &FinitaryElement, b: &BasisOrderFlag) -> Result<bool> {
    if !x.model().is_pure_basis() {
        return Err(Error::Invalid("basis-order flags need a pure-basis model".into()));
    }
    Ok(x.entries().keys().all(|(a, c)| match (a, c) {
        (Coord::Basis(i), Coord::Basis(j)) => b.le(*i, *j),
        _ => unreachable!("pure-basis model"),
    }))
}

/// `x` lies in `A ⊗ V* + V ⊗ B`: the kernel of `N_A ⊗ N_B`, where `N_S`
/// is the normal-form projection with kernel `S`.
pub fn in_tensor_sum(x: &FinitaryElement, a: &Subspace, b: &Subspace) -> Result<bool> {
    check_model(x, a.model())?;
    check_model(x, b.model())?;
    let m = x.model();
    let mut na: BTreeMap<Coord, Vec<(Coord, Rational)>> = BTreeMap::new();
    let mut nb: BTreeMap<Coord, Vec<(Coord, Rational)>> = BTreeMap::new();
    let mut acc: BTreeMap<(Coord, Coord), Rational> = BTreeMap::new();
    for ((p, q), c) in x.entries() {
        if !na.contains_key(p) {
            na.insert(*p, Coord::support(&a.normal_form(&p.unit(m, Side::V))?));
        }
        if !nb.contains_key(q) {
            nb.insert(*q, Coord::support(&b.normal_form(&q.unit(m, Side::VStar))?));
        }
        for (r, u) in &na[p] {
            for (s, w) in &nb[q] {
                *acc.entry((*r, *s)).or_insert_with(Rational::zero) += c * u * w;
            }
        }
    }
    Ok(acc.values().all(Zero::is_zero))
}

/// Membership in `sum_a A_a ⊗ B_a` for increasing `A_a` and decreasing
/// `B_a`, as the intersection over `a = 0..=m` of
/// `A_a ⊗ V* + V ⊗ B_{a+1}` with `A_0 = 0` and `B_{m+1} = 0`.
pub fn in_staircase(x: &FinitaryElement, terms: &[(Subspace, Subspace)]) -> Result<bool> {
    let m = x.model();
    let zero_v = Subspace::zero(m, Side::V);
    let zero_w = Subspace::zero(m, Side::VStar);
    for k in 0..=terms.len() {
        let a = if k == 0 { &zero_v } else { &terms[k - 1].0 };
        let b = if k == terms.len() { &zero_w } else { &terms[k].1 };
        if !in_tensor_sum(x, a, b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership in `sum_a F''_a ⊗ (F'_a)^⊥`.
pub fn in_stabilizer_formula(x: &FinitaryElement, f: &FinitePairFlag) -> Result<bool> {
    let terms: Vec<(Subspace, Subspace)> = (0..f.n_pairs()).map(|a| (f.succ(a).clone(), f.pred(a).perp())).collect();
    in_staircase(x, &terms)
}

/// `x` stabilizes both flags of the couple.
pub fn in_joint_stabilizer(x: &FinitaryElement, t: &TautCouple) -> Result<bool> {
    Ok(in_stabilizer(x, t.f())? && in_stabilizer(x, t.g())?)
}

/// Membership in `sum_{a <= b} F''_a ⊗ G''_b`.
pub fn in_joint_stabilizer_formula(x: &FinitaryElement, t: &TautCouple) -> Result<bool> {
    in_staircase(x, &t.joint_terms())
}

/// Membership in the nilradical `sum_a F''_a ⊗ (F''_a)^⊥`.
pub fn in_nilradical(x: &FinitaryElement, t: &TautCouple) -> Result<bool> {
    check_model(x, t.f().model())?;
    in_staircase(x, &t.nil_terms())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epcore::EpSet;
    use crate::exactnum::q;
    use crate::genflag::{flag_from_chain, make_taut_couple};
    use crate::pairedspace::PairedSpaceModel;

    pub(crate) fn evens_couple(m: &Model) -> TautCouple {
        let f = flag_from_chain(m, Side::V, vec![Subspace::aligned(m, Side::V, EpSet::residue_class(2, 0))]).unwrap();
        let g =
            flag_from_chain(m, Side::VStar, vec![Subspace::aligned(m, Side::VStar, EpSet::residue_class(2, 1))]).unwrap();
        make_taut_couple(f, g).unwrap()
    }

    #[test]
    fn stabilizer_examples() {
        let m = PairedSpaceModel::plain();
        let t = evens_couple(&m);
        let e = |i, j| FinitaryElement::elementary(&m, i, j, q(1));
        assert!(in_stabilizer(&e(0, 1), t.f()).unwrap());
        assert!(!in_stabilizer(&e(1, 0), t.f()).unwrap());
        assert!(in_stabilizer(&FinitaryElement::zero(&m), t.f()).unwrap());
        for x in [e(0, 1), e(1, 0), e(0, 0), e(3, 5), e(4, 1)] {
            assert_eq!(in_stabilizer(&x, t.f()).unwrap(), in_stabilizer_formula(&x, t.f()).unwrap());
            assert_eq!(in_joint_stabilizer(&x, &t).unwrap(), in_joint_stabilizer_formula(&x, &t).unwrap());
        }
        assert!(!in_joint_stabilizer(&e(1, 0), &t).unwrap());
    }

    #[test]
    fn nilradical_examples() {
        let m = PairedSpaceModel::plain();
        let t = evens_couple(&m);
        let e = |i, j| FinitaryElement::elementary(&m, i, j, q(1));
        assert!(in_nilradical(&e(0, 1), &t).unwrap());
        assert!(!in_nilradical(&e(0, 0), &t).unwrap());
        assert!(in_nilradical(&FinitaryElement::zero(&m), &t).unwrap());
        assert!(in_joint_stabilizer(&e(0, 1), &t).unwrap());
    }

    #[test]
    fn trivial_couple_is_everything() {
        let m = PairedSpaceModel::dense_line();
        let t = make_taut_couple(
            flag_from_chain(&m, Side::V, vec![]).unwrap(),
            flag_from_chain(&m, Side::VStar, vec![]).unwrap(),
        )
        .unwrap();
        let a = Vector::aug_unit(Side::V, 0, 1);
        let x = FinitaryElement::rank_one(&m, &a, &Vector::basis_unit(Side::VStar, 2, 0)).unwrap();
        assert!(in_joint_stabilizer(&x, &t).unwrap());
        assert!(in_joint_stabilizer_formula(&x, &t).unwrap());
        assert!(!in_nilradical(&x, &t).unwrap());
    }

    #[test]
    fn basis_flag_support() {
        use crate::genflag::Block;
        let m = PairedSpaceModel::plain();
        let b = BasisOrderFlag::new(vec![
            Block::OmegaUp(EpSet::residue_class(2, 0)),
            Block::OmegaUp(EpSet::residue_class(2, 1)),
        ])
        .unwrap();
        assert!(in_basis_stabilizer(&FinitaryElement::elementary(&m, 2, 1, q(1)), &b).unwrap());
        assert!(!in_basis_stabilizer(&FinitaryElement::elementary(&m, 1, 2, q(1)), &b).unwrap());
    }
}
