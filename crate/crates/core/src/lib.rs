//! Exact-arithmetic toolkit for idempotent factorization questions on the
//! singular matrices A(p, z) = (p, z; z̄, ‖z‖/p) over quadratic integer
//! rings Z[√D].
//!
//! The crate decides, with certificates, whether A(p, z) admits the
//! conjugate-pair factorization (a, b; c, 1−a)·(ā, c̄; b̄, 1−ā), produces
//! refutation evidence when it does not, and searches for general
//! two-idempotent factorizations within a bound.
//!
//! # Modules
//!
//! - [`quadring`] — exact elements of Z[√D] and Q(√D), ring membership
//! - [`mat2`] — exact 2×2 matrices
//! - [`pell`] — continued fractions, fundamental units, x² − Dy² = N
//! - [`ideals`] — Kronecker symbol, prime status, I_p(D) membership
//! - [`factorization`] — A(p, z), factor parametrizations, certificates
//! - [`decision`] — obstructions, Pell reduction, decision and search

pub mod decision;
pub mod factorization;
pub mod ideals;
pub mod mat2;
pub mod nt;
pub mod pell;
pub mod quadring;

pub use decision::{
    check_kronecker_obstruction, check_mod4_obstruction, decide_conjecture,
    decide_conjecture_with, derive_congruence_classes, florida_transform, search_two_idempotent,
    CongruenceFilter, DecisionError, Evidence, FloridaForm, Verdict, VerdictStatus,
};
pub use factorization::{
    conjecture_candidate, conjecture_equation, construct_norm_minus_p2, pairing_residual,
    params_ac, params_de, transfer_by_unit, transpose_cert, verify_lemma31, CaseTag, CertError,
    Certificate, ConjectureEquation, FactorError, MatrixA, Method,
};
pub use ideals::{in_ip, in_sz, ip_report, kronecker, kronecker_i64, prime_status, IdealError, PrimeStatus};
pub use mat2::Mat2;
pub use pell::{
    cf_sqrt, enumerate_class_residues, fundamental_unit, norm_one_unit, solve_norm_equation,
    torsion_generator, unit_action, CfExpansion, PellError, PellSolutionClass,
};
pub use quadring::{QuadInt, QuadRational, RingContext, RingError};
