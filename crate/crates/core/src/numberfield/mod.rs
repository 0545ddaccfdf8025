//! The cyclic degree-`p` totally real field `L` of prime conductor, with the
//! Gaussian periods as integral basis.

pub mod cache;
pub mod field;
pub mod ideals;
pub mod lattice;

pub use field::{AbelianFieldSpec, AlgebraicInt};
pub use ideals::{
    artin_symbol_level, enumerate_ideals, factor_principal, split_type, IdealFactored, PrimeIdeal,
    SplitType,
};
pub use lattice::enumerate_tot_pos_trace;
