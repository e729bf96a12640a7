//! Classification of the universal compact quantum groups `A_u(Q)` and
//! `B_u(Q)` from their parameter matrix, together with the fusion-ring
//! dimension arithmetic and free-product normal forms that the
//! classification rests on.
//!
//! The crate splits into a numerical side (dense complex matrices with an
//! explicit tolerance policy, polar and spectral decompositions, the two
//! classifiers and the decomposer) and an exact side (word combinatorics of
//! the free monoid on two generators with big-integer dimensions).

pub mod au;
pub mod bu;
pub mod decompose;
pub mod error;
pub mod fusion;
pub mod matrix;
pub mod normal_form;
pub mod sampling;

pub use au::{au_invariant, au_isomorphic, class_f_matrices, AuInvariant, FClassPair};
pub use bu::{bu_descriptor, bu_isomorphic, phase_profile_solve, BuDescriptor, BuIso, PhaseProfile};
pub use decompose::{decompose_au, decompose_bu, expression_equal, Atom, GroupExpression};
pub use error::{Error, Result};
pub use fusion::{fuse, involute, min_dim_sequence, verify_fusion_dims, DimensionTable, FreeWord, FusionReport, Letter};
pub use matrix::{eig_normal, eigh, eigvals_hermitian, polar_decompose, predicates, ComplexMatrix, Predicates, Tolerance, C64};
pub use normal_form::{mu_signature, normalize_au, normalize_bu, AuNormalization, BuNormalization, MuSignature};
