//! Multiple skew-orthogonal polynomials as Pfaffian linear forms, their
//! verification, and the linear-solve constructions they are checked against.

pub mod form;
pub mod linsolve;
pub mod mops;
pub mod sop;
pub mod verify;

pub use form::{derive_form, linear_form_r, linear_form_rtilde, pf_form, skew_pair, LinearForm};
pub use linsolve::{determinant_form, determinant_sign, msop_tilde_via_linsolve, msop_via_linsolve, verify_linsolve_oracle};
pub use mops::{verify_mop_biorthogonality, MopKind, MopSystem};
pub use sop::{sop_pair, sop_reduce, SopPair};
pub use verify::{
    recurrence_residual, verify_derivative_relation, verify_recurrence, verify_skew_orthogonality, PairingCase, Recurrence,
};
