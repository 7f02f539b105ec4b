//! Gram fibers, banded membership, variety sampling and Farkas certificates.

mod banded;
mod fiber;
mod sampler;
mod search;
mod verify;

pub use banded::{banded_gram, MembershipCertificate, PsdEvidence};
pub use fiber::{gram_fiber, gram_map, GramFiber};
pub use sampler::{sample_point, SampleSchedule, VarietyPoint};
pub use search::{non_membership, NonMembership, SearchSummary};
pub use verify::{verify_certificate, Certificate, FarkasCertificate, Verification};
