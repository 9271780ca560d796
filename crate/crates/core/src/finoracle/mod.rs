//! Finite-dimensional structure theory of matrix Lie algebras over the
//! rationals, used as an independent oracle at truncation level.

mod cartan;
mod examples;
mod fdflag;
mod meataxe;
mod parabolic;
mod space;
mod structure;

pub use cartan::{cartan_from_torus, cartan_queries, fitting_null, is_maximal_toral, CartanReport};
pub use examples::{
    battery, four_block_example, four_block_report, killing_invariants, trace_ratio_example, FourBlockReport,
};
pub use fdflag::{annihilator_of, preserving_subalgebra, tensor_span, Basis, FdFlag};
pub use meataxe::{composition_series, invariant_taut_couple, is_irreducible, spin, InvariantCouple};
pub use parabolic::{borel_dim, borel_of, fd_parabolic_tests, parabolic_bijection_check, FdParabolicReport};
pub use space::{lie_close, FdLieAlgebra, MatSpace};
pub use structure::{
    associative_closure, cartan_subalgebra, fitting_null_of, is_ideal, is_semisimple, is_splittable, is_toral,
    levi_component, linear_nilradical, locally_reductive_part, semisimple_span, solvable_radical,
    splittable_closure, trace_product, FdDecomposition,
};
