use std::fmt;

use crate::error::{Error, Result};
use crate::pairedspace::{Model, Side, Subspace};

/// Finite generalized flag `0 = F_0 ⊊ F_1 ⊊ ... ⊊ F_k = full`. Its pairs are
/// the consecutive entries; pair `a` is `(F_a, F_{a+1})`.
#[derive(Clone)]
pub struct FinitePairFlag {
    model: Model,
    side: Side,
    chain: Vec<Subspace>,
}

impl FinitePairFlag {
    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn chain(&self) -> &[Subspace] {
        &self.chain
    }

    pub fn n_pairs(&self) -> usize {
        self.chain.len() - 1
    }

    /// Predecessor `F'_a`.
    pub fn pred(&self, a: usize) -> &Subspace {
        &self.chain[a]
    }

    /// Successor `F''_a`.
    pub fn succ(&self, a: usize) -> &Subspace {
        &self.chain[a + 1]
    }

    /// Index of a chain member equal to `s`.
    pub fn position(&self, s: &Subspace) -> Option<usize> {
        self.chain.iter().position(|c| c.same_as(s).unwrap_or(false))
    }

    /// Index of the pair separating `v`: the `a` with `v in F''_a \ F'_a`.
    pub fn pair_of(&self, v: &crate::pairedspace::Vector) -> Result<Option<usize>> {
        for a in 0..self.n_pairs() {
            if self.succ(a).member(v)? && !self.pred(a).member(v)? {
                return Ok(Some(a));
            }
        }
        Ok(None)
    }
}

impl fmt::Debug for FinitePairFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.chain).finish()
    }
}

/// Flag with the same stabilizer as a chain of subspaces: adds the
/// endpoints, sorts by inclusion and drops repeats.
pub fn flag_from_chain(model: &Model, side: Side, chain: Vec<Subspace>) -> Result<FinitePairFlag> {
    let mut all = vec![Subspace::zero(model, side)];
    all.extend(chain);
    all.push(Subspace::full(model, side));
    for s in &all {
        if s.side() != side {
            return Err(Error::SideMismatch { expected: side.to_string(), found: s.side().to_string() });
        }
    }
    let mut sorted: Vec<Subspace> = Vec::new();
    for s in all {
        let mut at = sorted.len();
        let mut dup = false;
        for (k, t) in sorted.iter().enumerate() {
            let t_in_s = s.contains(t)?;
            let s_in_t = t.contains(&s)?;
            match (t_in_s, s_in_t) {
                (true, true) => {
                    dup = true;
                    break;
                }
                (false, true) => {
                    at = at.min(k);
                }
                (true, false) => {}
                (false, false) => return Err(Error::NotAChain(format!("{s:?}"), format!("{t:?}"))),
            }
        }
        if !dup {
            sorted.insert(at, s);
        }
    }
    Ok(FinitePairFlag { model: model.clone(), side, chain: sorted })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlagClass {
    pub semiclosed: bool,
    pub closed: bool,
    pub maximal_semiclosed: bool,
}

/// First pair whose predecessor is neither closed nor dense in its successor.
fn first_non_semiclosed(f: &FinitePairFlag) -> Option<usize> {
    (0..f.n_pairs()).find(|&a| {
        let c = f.pred(a).closure();
        !(c.same_as(f.pred(a)).unwrap() || c.same_as(f.succ(a)).unwrap())
    })
}

pub fn classify_flag(f: &FinitePairFlag) -> Result<FlagClass> {
    let semiclosed = first_non_semiclosed(f).is_none();
    let closed = semiclosed && f.chain.iter().all(Subspace::is_closed);
    let mut maximal_semiclosed = semiclosed;
    if semiclosed {
        for a in 0..f.n_pairs() {
            if f.pred(a).is_closed() && f.succ(a).quotient_dim(f.pred(a))? != Some(1) {
                maximal_semiclosed = false;
                break;
            }
        }
    }
    Ok(FlagClass { semiclosed, closed, maximal_semiclosed })
}

/// The closed flag `F^c`: each non-closed member is merged into its
/// closure, which for a semiclosed flag is the next member.
pub fn fc_flag(f: &FinitePairFlag) -> Result<FinitePairFlag> {
    if let Some(a) = first_non_semiclosed(f) {
        return Err(Error::NotSemiclosed(a));
    }
    let chain = f.chain.iter().filter(|s| s.is_closed()).cloned().collect();
    Ok(FinitePairFlag { model: f.model.clone(), side: f.side, chain })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epcore::EpSet;
    use crate::exactnum::q;
    use crate::pairedspace::{PairedSpaceModel, Vector};

    fn evens(m: &Model) -> Subspace {
        Subspace::aligned(m, Side::V, EpSet::residue_class(2, 0))
    }

    #[test]
    fn chain_dedup_and_completion() {
        let m = PairedSpaceModel::plain();
        let u = evens(&m);
        let f = flag_from_chain(&m, Side::V, vec![Subspace::zero(&m, Side::V), u.clone(), u.clone()]).unwrap();
        assert_eq!(f.chain().len(), 3);
        assert!(f.chain()[1].same_as(&u).unwrap());
        let g = flag_from_chain(&m, Side::V, vec![u.clone()]).unwrap();
        assert_eq!(g.n_pairs(), 2);
        let w = Subspace::aligned(&m, Side::V, EpSet::residue_class(2, 1));
        assert!(matches!(flag_from_chain(&m, Side::V, vec![u, w]), Err(Error::NotAChain(..))));
    }

    #[test]
    fn chain_sorts_by_inclusion() {
        let m = PairedSpaceModel::plain();
        let big = Subspace::aligned(&m, Side::V, EpSet::at_least(1));
        let small = Subspace::aligned(&m, Side::V, EpSet::at_least(3));
        let f = flag_from_chain(&m, Side::V, vec![big.clone(), small.clone()]).unwrap();
        assert!(f.chain()[1].same_as(&small).unwrap());
        assert!(f.chain()[2].same_as(&big).unwrap());
        assert_eq!(f.pair_of(&Vector::basis_unit(Side::V, 2, 0)).unwrap(), Some(1));
    }

    #[test]
    fn classification_examples() {
        let m = PairedSpaceModel::plain();
        let e0 = Subspace::span(&m, Side::V, vec![Vector::basis_unit(Side::V, 0, 0)]).unwrap();
        let f = flag_from_chain(&m, Side::V, vec![e0]).unwrap();
        let c = classify_flag(&f).unwrap();
        assert!(c.semiclosed && c.closed && !c.maximal_semiclosed);

        let t = flag_from_chain(&m, Side::V, vec![]).unwrap();
        let c = classify_flag(&t).unwrap();
        assert!(c.semiclosed && c.closed);

        let d = PairedSpaceModel::dense_line();
        let v = Subspace::aligned(&d, Side::V, EpSet::naturals());
        let f = flag_from_chain(&d, Side::V, vec![v]).unwrap();
        assert_eq!(f.n_pairs(), 2);
        let c = classify_flag(&f).unwrap();
        assert!(c.semiclosed && !c.closed);
    }

    #[test]
    fn fc_collapses_dense_pair() {
        let d = PairedSpaceModel::dense_line();
        let v = Subspace::aligned(&d, Side::V, EpSet::naturals());
        let f = flag_from_chain(&d, Side::V, vec![v]).unwrap();
        let fc = fc_flag(&f).unwrap();
        assert_eq!(fc.n_pairs(), 1);
        assert!(fc.chain()[1].is_full());
        let again = fc_flag(&fc).unwrap();
        assert_eq!(again.n_pairs(), 1);
        assert!(classify_flag(&fc).unwrap().closed);

        let m = PairedSpaceModel::plain();
        let f = flag_from_chain(&m, Side::V, vec![evens(&m)]).unwrap();
        assert_eq!(fc_flag(&f).unwrap().n_pairs(), 2);
    }

    #[test]
    fn not_semiclosed_rejected() {
        // U = span{e_0 - e_1, e_2, e_3, ...} has annihilator span{f_0 + f_1},
        // so its closure {x_0 + x_1 + 2a = 0} is neither U nor the full space.
        let d = PairedSpaceModel::dense_line();
        let u = Subspace::new(
            &d,
            Side::V,
            EpSet::at_least(2),
            vec![],
            vec![Vector::from_parts(Side::V, [(0, q(1)), (1, q(-1))], vec![q(0)])],
        )
        .unwrap();
        let f = flag_from_chain(&d, Side::V, vec![u]).unwrap();
        assert!(matches!(fc_flag(&f), Err(Error::NotSemiclosed(1))));
        assert!(!classify_flag(&f).unwrap().semiclosed);
    }
}
