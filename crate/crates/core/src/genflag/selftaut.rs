use super::couple::{make_taut_couple, TautCouple};
use super::flag::{classify_flag, flag_from_chain, FinitePairFlag};
use crate::error::{Error, Result};
use crate::pairedspace::{Side, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsoTag {
    Isotropic,
    Coisotropic,
    Both,
    Neither,
}

#[derive(Clone, Debug)]
pub struct SelfTautReport {
    pub self_taut: bool,
    /// One tag per chain member.
    pub tags: Vec<IsoTag>,
    /// For a self-taut flag, the matching of pairs `a -> b` with closed
    /// `F'_a`, `F'_b = (F''_a)^⊥` and `F'_a = (F''_b)^⊥` (form annihilators).
    pub c_bijection: Vec<(usize, usize)>,
}

pub fn self_taut_and_iso(f: &FinitePairFlag) -> Result<SelfTautReport> {
    let model = f.model();
    if model.form().is_none() {
        return Err(Error::NoFormOnModel);
    }
    if f.side() != Side::V {
        return Err(Error::SideMismatch { expected: "V".into(), found: f.side().to_string() });
    }
    let perps: Vec<Subspace> = f.chain().iter().map(Subspace::form_perp).collect::<Result<_>>()?;
    let tags = f
        .chain()
        .iter()
        .zip(&perps)
        .map(|(s, p)| match (p.contains(s).unwrap(), s.contains(p).unwrap()) {
            (true, true) => IsoTag::Both,
            (true, false) => IsoTag::Isotropic,
            (false, true) => IsoTag::Coisotropic,
            (false, false) => IsoTag::Neither,
        })
        .collect();
    let self_taut = classify_flag(f)?.semiclosed && perps.iter().all(|p| f.position(p).is_some());
    let mut c_bijection = Vec::new();
    if self_taut {
        c_bijection = form_couple(f)?.c_pairs().to_vec();
    }
    Ok(SelfTautReport { self_taut, tags, c_bijection })
}

/// The couple `(F, J(F))` attached to a self-taut flag.
pub fn form_couple(f: &FinitePairFlag) -> Result<TautCouple> {
    let images: Vec<Subspace> = f.chain().iter().map(Subspace::form_image).collect::<Result<_>>()?;
    let g = flag_from_chain(f.model(), Side::VStar, images)?;
    make_taut_couple(f.clone(), g)
}
