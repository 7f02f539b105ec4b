use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::fiber::{fiber_system, half_basis, symmetric_from_upper};
use crate::circuit_analysis::{analyze, circuit_nonnegativity, Analysis, PsdVerdict};
use crate::error::{Error, Result};
use crate::exact_linalg::RatMatrix;
use crate::polyforms::Form;

/// Why a form is known to be nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PsdEvidence {
    /// Circuit form strictly inside the circuit-number bound.
    Strict,
    /// Circuit form on the circuit-number bound.
    Boundary,
    /// Every term is an even monomial with positive coefficient.
    Squares,
}

impl PsdEvidence {
    pub fn of(f: &Form) -> Result<PsdEvidence> {
        if !f.is_zero() && f.terms().all(|(e, c)| e.is_even() && c.is_positive()) {
            return Ok(PsdEvidence::Squares);
        }
        match analyze(f)? {
            Analysis::Circuit(cd) => match circuit_nonnegativity(&cd) {
                PsdVerdict::Strict => Ok(PsdEvidence::Strict),
                PsdVerdict::Boundary => Ok(PsdEvidence::Boundary),
                PsdVerdict::NotPsd => Err(Error::NotPsd),
            },
            Analysis::NotCircuit(reason) => Err(Error::NoPsdEvidence(reason.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipCertificate {
    pub level: usize,
    /// Gram matrix of `f`, zero outside the leading `(n+level+1)` block.
    pub gram: RatMatrix,
    pub psd: PsdEvidence,
}

/// A Gram matrix of `f` supported on ranks `<= n + level`, if one exists.
///
/// `f` must carry nonnegativity evidence. Together with the band this places
/// `f` in `C_level`.
pub fn banded_gram(f: &Form, level: usize) -> Result<Option<MembershipCertificate>> {
    let basis = half_basis(f)?;
    let (n, k) = (basis.n(), basis.k());
    if level > k - n {
        return Err(Error::LevelOutOfRange {
            level,
            min: 0,
            max: k - n,
        });
    }
    let psd = PsdEvidence::of(f)?;
    let bound = n + level;
    let (pairs, sol) = fiber_system(f, &basis, bound)?;
    match sol {
        Ok(sol) => Ok(Some(MembershipCertificate {
            level,
            gram: symmetric_from_upper(k + 1, &pairs, &sol.particular),
            psd,
        })),
        Err(Error::Inconsistent) => Ok(None),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gram::fiber::gram_map;
    use crate::monomial_basis::MonomialBasis;
    use crate::rat::int;
    use crate::separating_generators::base_motzkin;
    use num_traits::Zero;

    #[test]
    fn motzkin_band_edges() {
        let cert = banded_gram(&base_motzkin(), 7).unwrap().unwrap();
        assert_eq!(cert.psd, PsdEvidence::Boundary);
        let basis = MonomialBasis::new(2, 3).unwrap();
        assert_eq!(gram_map(&cert.gram, &basis).unwrap(), base_motzkin());
        assert!(cert.gram.is_symmetric());
        assert!(banded_gram(&base_motzkin(), 6).unwrap().is_none());
    }

    #[test]
    fn pure_power_at_level_zero() {
        let f = Form::from_int_terms(2, &[(&[6, 0, 0], 1)]).unwrap();
        let cert = banded_gram(&f, 0).unwrap().unwrap();
        assert_eq!(cert.psd, PsdEvidence::Squares);
        let nonzero: Vec<(usize, usize)> = (0..10)
            .flat_map(|s| (0..10).map(move |t| (s, t)))
            .filter(|&(s, t)| !cert.gram.get(s, t).is_zero())
            .collect();
        assert_eq!(nonzero, vec![(0, 0)]);
        assert_eq!(cert.gram.get(0, 0), &int(1));
    }

    #[test]
    fn refuses_without_evidence() {
        let f =
            Form::from_int_terms(2, &[(&[6, 0, 0], 1), (&[5, 1, 0], 1), (&[4, 1, 1], 1)]).unwrap();
        assert!(matches!(banded_gram(&f, 3), Err(Error::NoPsdEvidence(_))));
        let bad = Form::from_int_terms(
            2,
            &[
                (&[4, 2, 0], 1),
                (&[2, 4, 0], 1),
                (&[0, 0, 6], 1),
                (&[2, 2, 2], -4),
            ],
        )
        .unwrap();
        assert_eq!(banded_gram(&bad, 7), Err(Error::NotPsd));
        assert!(matches!(
            banded_gram(&base_motzkin(), 8),
            Err(Error::LevelOutOfRange { .. })
        ));
    }
}
