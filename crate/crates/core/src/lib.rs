//! Exact tooling for the cone filtration
//! `Σ = C_0 ⊆ C_1 ⊆ … ⊆ C_{k-n} = P` between sums of squares and
//! nonnegative forms, built from the Gram matrix method along varieties
//! that contain the Veronese variety.
//!
//! The crate covers:
//!
//! * lexicographic monomial bases and the quadrics cutting out the
//!   intermediate varieties ([`monomial_basis`]),
//! * exact rational forms ([`polyforms`]),
//! * circuit-form recognition and the circuit-number nonnegativity test
//!   ([`circuit_analysis`]),
//! * level arithmetic for the filtration ([`cone_filtration`]),
//! * explicit complete sets of separating forms
//!   ([`separating_generators`]),
//! * exact linear algebra and a Farkas-producing simplex ([`exact_linalg`]),
//! * Gram fibers, banded membership certificates and sampled
//!   non-membership certificates ([`gram`]).
//!
//! Everything on a certificate path is exact rational arithmetic.

pub mod circuit_analysis;
pub mod cone_filtration;
pub mod error;
pub mod exact_linalg;
pub mod gram;
pub mod monomial_basis;
pub mod par;
pub mod polyforms;
pub mod rat;
pub mod separating_generators;

pub use circuit_analysis::{
    analyze, circuit_nonnegativity, j_of, Analysis, CircuitDecomposition, NotCircuitReason,
    PsdVerdict,
};
pub use cone_filtration::{
    is_hilbert, level_bounds, profile, Assumptions, FiltrationProfile, LevelClass, LevelReport,
};
pub use error::{Error, Result};
pub use exact_linalg::{
    lp_feasible, solve_affine, AffineSolution, LinearConstraint, LpOutcome, RatMatrix,
};
pub use gram::{
    banded_gram, gram_fiber, gram_map, non_membership, sample_point, verify_certificate,
    Certificate, FarkasCertificate, GramFiber, MembershipCertificate, NonMembership, PsdEvidence,
    SampleSchedule, SearchSummary, VarietyPoint, Verification,
};
pub use monomial_basis::{basis_size, Exponent, MonomialBasis, QuadricSpec};
pub use par::Execution;
pub use polyforms::Form;
pub use rat::Rat;
pub use separating_generators::{
    base_choi_lam_quartic, base_choi_lam_sextic, base_motzkin, complete_set, degree_jump,
    quartic_separator, separator, sextic_separator, Provenance, SeparatorRecord,
};
