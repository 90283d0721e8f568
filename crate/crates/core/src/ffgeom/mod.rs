//! Exact linear algebra over small prime fields, canonical flags and
//! subspaces, and relative positions of pairs of flags.

mod field;
mod flag;
mod matrix;
mod subspace;

pub use field::{PrimeField, MAX_PRIME};
pub use flag::{
    canonical_flag, common_basis, enumerate_flags, flag_count, is_almost_transverse,
    is_transverse, opposite_flag, par_fold_flags, random_flag, random_flag_with,
    random_invertible, rank_table, relative_position, standard_flag, Budget, Flag, FlagJson,
    RankTable,
};
pub(crate) use flag::almost_transverse_index;
pub use matrix::{Echelon, Matrix};
pub use subspace::{enumerate_subspaces, gaussian_binomial};
