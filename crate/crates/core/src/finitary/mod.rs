//! Finite-rank operators on a paired space and membership tests for
//! stabilizers, nilradicals, block traces and trace-condition subalgebras.

mod blocks;
mod element;
mod membership;
mod orthosymp;

pub use blocks::{
    block_component, block_trace_dual, block_traces, in_pminus, normalizer_sampling, normalizer_test,
    perp_parabolic_member, pminus_battery, quotient_operator, restricted_trace, tc_member, Ambient, BlockComponent,
    Complement, TraceConditionSubalgebra,
};
pub use element::{coord_pair, Coord, FinitaryElement};
pub use membership::{
    image_generators, in_basis_stabilizer, in_joint_stabilizer, in_joint_stabilizer_formula, in_nilradical,
    in_stabilizer, in_stabilizer_formula, in_staircase, in_tensor_sum, preserves,
};
pub use orthosymp::{
    from_vv, in_classical, in_so_sp_nilradical, in_so_sp_stabilizer_minus, lambda, sharp, sym, Classical,
};
