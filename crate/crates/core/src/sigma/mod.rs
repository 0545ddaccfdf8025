//! Finite-group model of the transfer: coset-defined `ver`, `Sigma`-actions
//! on group rings, trace ideals with membership certificates, the orbit
//! decomposition of transfer differences, and the conjugation-element
//! identity.

mod format;
mod group;
mod setup;
mod snf;
mod trace;

pub use format::parse_setup;
pub use group::FiniteGroup;
pub use setup::{transfer_cosets, transfer_with_reps, Fiber, GaloisSetup};
pub use snf::{smith_normal_form, ModularSolver, SmithForm};
pub use trace::{
    orbit_decompose, ring_mul, trace_membership, verify_c_identity, CIdentityReport, Membership,
    OrbitDecomposition, TraceIdeal,
};
