//! Level arithmetic of the filtration `Σ = C_0 ⊆ … ⊆ C_{k-n} = P`.

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::circuit_analysis::{analyze, circuit_nonnegativity, PsdVerdict};
use crate::error::{Error, Result};
use crate::monomial_basis::basis_size;
use crate::polyforms::Form;

/// Binary forms, quadratic forms and ternary quartics.
pub fn is_hilbert(n: usize, d: usize) -> bool {
    n == 1 || d == 1 || (n, d) == (2, 2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiltrationProfile {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub hilbert: bool,
    /// Largest `c` with `C_0 = … = C_c`.
    pub collapsed_prefix: usize,
    /// Cone indices `c, c+1, …, k-n` of the strictly increasing part.
    pub strict_chain: Vec<usize>,
    /// Number of strictly separating intermediate cones.
    pub mu: usize,
}

impl FiltrationProfile {
    /// Levels `i` with `C_i ⊊ C_{i+1}`.
    pub fn strict_levels(&self) -> std::ops::Range<usize> {
        if self.hilbert {
            0..0
        } else {
            self.collapsed_prefix..self.k - self.n
        }
    }
}

pub fn profile(n: usize, d: usize) -> Result<FiltrationProfile> {
    let k = basis_size(n, d)? - 1;
    let top = k - n;
    if is_hilbert(n, d) {
        return Ok(FiltrationProfile {
            n,
            d,
            k,
            hilbert: true,
            collapsed_prefix: top,
            strict_chain: Vec::new(),
            mu: 0,
        });
    }
    let c = if n == 2 { 3 } else { n };
    let mu = if n == 2 {
        top - (n + 1) - 1
    } else {
        top - (n + 1)
    };
    Ok(FiltrationProfile {
        n,
        d,
        k,
        hilbert: false,
        collapsed_prefix: c,
        strict_chain: (c..=top).collect(),
        mu,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelClass {
    Sos,
    /// `f ∈ C_i`.
    InConeUpper(usize),
    /// `f ∈ C_{i+1} \ C_i`.
    Exact(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Assumptions {
    pub extremal: bool,
    pub not_sos: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelReport {
    pub classification: LevelClass,
    pub j_top: usize,
    pub psd: PsdVerdict,
    pub assumptions_used: Assumptions,
}

impl Serialize for LevelReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        match self.classification {
            LevelClass::Sos => map.serialize_entry("sos", &true)?,
            LevelClass::InConeUpper(i) => map.serialize_entry("upper_member", &i)?,
            LevelClass::Exact(i) => {
                map.serialize_entry("exact", &i)?;
                map.serialize_entry("upper_member", &(i + 1))?;
            }
        }
        map.serialize_entry("j", &self.j_top)?;
        map.serialize_entry("psd", &self.psd)?;
        map.serialize_entry("assumptions", &self.assumptions_used)?;
        map.end()
    }
}

/// Smallest `j(f)` a non-SOS PSD circuit form can have.
fn j_floor(n: usize) -> usize {
    if n == 2 {
        6
    } else {
        2 * n + 1
    }
}

pub fn level_bounds(f: &Form, assert_extremal: bool, assert_not_sos: bool) -> Result<LevelReport> {
    let cd = analyze(f)?.circuit()?;
    let psd = circuit_nonnegativity(&cd);
    if psd == PsdVerdict::NotPsd {
        return Err(Error::NotPsd);
    }
    let (n, d, j) = (cd.n, cd.d, cd.j_top);
    let assumptions_used = Assumptions {
        extremal: assert_extremal,
        not_sos: assert_not_sos,
    };
    if assert_not_sos {
        if is_hilbert(n, d) {
            return Err(Error::HilbertCase {
                vars: n + 1,
                degree: 2 * d,
            });
        }
        if j < j_floor(n) {
            return Err(Error::Assertion(format!(
                "a form with j = {j} is a sum of squares here (non-SOS needs j >= {})",
                j_floor(n)
            )));
        }
    }
    let classification = if j < n {
        LevelClass::Sos
    } else if assert_extremal && assert_not_sos {
        LevelClass::Exact(j - n - 1)
    } else {
        LevelClass::InConeUpper(j - n)
    };
    Ok(LevelReport {
        classification,
        j_top: j,
        psd,
        assumptions_used,
    })
}
