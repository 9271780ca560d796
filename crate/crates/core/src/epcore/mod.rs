//! Eventually periodic sets and sequences over the naturals, and the linear
//! algebra of eventually periodic conditions.

mod epset;
mod epseq;
mod solve;

pub use epseq::EpSeq;
pub use epset::EpSet;
pub use solve::{ep_linear_solve, image_columns, EpLinearSolution};

use num_integer::Integer;

/// Anything with a threshold after which it repeats with a fixed period.
pub trait Periodic {
    fn threshold(&self) -> usize;
    fn period(&self) -> usize;
}

/// `(max threshold, lcm of periods)`; `(0, 1)` for no inputs. An index-wise
/// property of the inputs holding on `[N*, N* + p*)` holds for all `n >= N*`.
pub fn stabilization_window<'a>(objs: impl IntoIterator<Item = &'a dyn Periodic>) -> (usize, usize) {
    objs.into_iter()
        .fold((0, 1), |(n, p), o| (n.max(o.threshold()), p.lcm(&o.period())))
}

/// Merges two windows.
pub fn join_window(a: (usize, usize), b: (usize, usize)) -> (usize, usize) {
    (a.0.max(b.0), a.1.lcm(&b.1))
}
