//! Schur operators, Miwa expansions, Hirota derivatives and the bilinear
//! equations of the hierarchy.

pub mod cauchy;
pub mod equations;
pub mod hirota;
pub mod schur;

pub use cauchy::{cauchy_series, CauchySeries};
pub use equations::{equation_residual, explain, hierarchy_instances, lattice_residual, lattice_toda_sides, verify_equation, EqId, EqParams, LatticeConvention};
pub use hirota::{hirota_eval, hirota_poly, hirota_with, HirotaMonomial, TauRef};
pub use schur::{apply_schur_derivation, schur_operator, schur_p, schur_p_formal, verify_miwa_form, verify_miwa_minor, OpPoly, SchurVariables};
