//! Generalized flags in paired spaces: finite chains, basis-order flags,
//! taut couples and self-taut flags.

mod basis_flag;
mod couple;
mod flag;
mod selftaut;

pub use basis_flag::{BasisOrderFlag, Block, Position};
pub use couple::{make_taut_couple, TautCouple};
pub use flag::{classify_flag, fc_flag, flag_from_chain, FinitePairFlag, FlagClass};
pub use selftaut::{form_couple, self_taut_and_iso, IsoTag, SelfTautReport};
