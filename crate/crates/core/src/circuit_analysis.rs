//! Circuit forms: support on the even vertices of a simplex plus one point
//! in its relative interior.
//!
//! Nonnegativity is decided by comparing the inner coefficient with the
//! circuit number `Θ = Π (c_l/λ_l)^{λ_l}`. Since `Θ` is usually irrational,
//! both sides are raised to the common denominator `N` of the weights and the
//! resulting rationals are compared.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_linalg::{solve_affine, RatMatrix};
use crate::monomial_basis::{Exponent, MonomialBasis};
use crate::polyforms::Form;
use crate::rat::{self, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NotCircuitReason {
    /// More than one term is odd or has a nonpositive coefficient, so it cannot be a vertex.
    NonVertexTerms {
        count: usize,
    },
    /// Every term could be a vertex and none lies inside the hull of the others.
    NoInnerTerm,
    TooFewVertices {
        count: usize,
    },
    TooManyVertices {
        count: usize,
        max: usize,
    },
    AffinelyDependent,
    /// The inner exponent has no strictly positive barycentric coordinates.
    NotInterior,
}

impl fmt::Display for NotCircuitReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotCircuitReason::NonVertexTerms { count } => {
                write!(
                    f,
                    "{count} terms are odd or nonpositive; a circuit allows one"
                )
            }
            NotCircuitReason::NoInnerTerm => write!(f, "no inner term"),
            NotCircuitReason::TooFewVertices { count } => write!(f, "only {count} vertices"),
            NotCircuitReason::TooManyVertices { count, max } => {
                write!(
                    f,
                    "{count} vertices, at most {max} can be affinely independent"
                )
            }
            NotCircuitReason::AffinelyDependent => write!(f, "vertices are affinely dependent"),
            NotCircuitReason::NotInterior => {
                write!(f, "inner exponent is not in the relative interior")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PsdVerdict {
    Strict,
    Boundary,
    NotPsd,
}

impl PsdVerdict {
    pub fn is_psd(self) -> bool {
        self != PsdVerdict::NotPsd
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitDecomposition {
    pub n: usize,
    pub d: usize,
    /// Ascending ranks of the half vertices in the degree-`d` basis.
    pub vertex_ranks: Vec<usize>,
    pub vertex_exponents: Vec<Exponent>,
    #[serde(with = "rat::vec_serde")]
    pub vertex_coeffs: Vec<Rat>,
    pub inner_exponent: Exponent,
    #[serde(
        serialize_with = "rat::serialize_rat",
        deserialize_with = "rat::deserialize_rat"
    )]
    pub inner_coeff: Rat,
    #[serde(with = "rat::vec_serde")]
    pub lambdas: Vec<Rat>,
    pub j_top: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Analysis {
    Circuit(CircuitDecomposition),
    NotCircuit(NotCircuitReason),
}

impl Analysis {
    pub fn circuit(self) -> Result<CircuitDecomposition> {
        match self {
            Analysis::Circuit(cd) => Ok(cd),
            Analysis::NotCircuit(r) => Err(Error::NotCircuit(r)),
        }
    }
}

pub fn analyze(f: &Form) -> Result<Analysis> {
    if f.degree() % 2 == 1 {
        return Err(Error::Domain(format!("odd degree {}", f.degree())));
    }
    if f.degree() == 0 || f.n() == 0 {
        return Err(Error::Domain(
            "circuit forms need n >= 1 and positive degree".into(),
        ));
    }
    let terms: Vec<(Exponent, Rat)> = f.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
    let vertex_like = |(e, c): &(Exponent, Rat)| e.is_even() && c.is_positive();
    let others: Vec<usize> = (0..terms.len())
        .filter(|&i| !vertex_like(&terms[i]))
        .collect();
    match others.len() {
        0 => {
            for b in 0..terms.len() {
                if let Analysis::Circuit(cd) = try_circuit(f, &terms, b)? {
                    return Ok(Analysis::Circuit(cd));
                }
            }
            Ok(Analysis::NotCircuit(NotCircuitReason::NoInnerTerm))
        }
        1 => try_circuit(f, &terms, others[0]),
        count => Ok(Analysis::NotCircuit(NotCircuitReason::NonVertexTerms {
            count,
        })),
    }
}

fn try_circuit(f: &Form, terms: &[(Exponent, Rat)], inner: usize) -> Result<Analysis> {
    let n = f.n();
    let d = f.degree() as usize / 2;
    let vertices: Vec<&(Exponent, Rat)> = terms
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != inner)
        .map(|(_, t)| t)
        .collect();
    if vertices.len() < 2 {
        return Ok(Analysis::NotCircuit(NotCircuitReason::TooFewVertices {
            count: vertices.len(),
        }));
    }
    if vertices.len() > n + 1 {
        return Ok(Analysis::NotCircuit(NotCircuitReason::TooManyVertices {
            count: vertices.len(),
            max: n + 1,
        }));
    }
    // columns are homogenized vertices (coords..., 1)
    let rows = n + 2;
    let mut m = RatMatrix::zeros(rows, vertices.len());
    for (col, (e, _)) in vertices.iter().enumerate() {
        for (row, &c) in e.coords().iter().enumerate() {
            m.set(row, col, rat::int(c as i64));
        }
        m.set(n + 1, col, Rat::one());
    }
    if m.rank() < vertices.len() {
        return Ok(Analysis::NotCircuit(NotCircuitReason::AffinelyDependent));
    }
    let b = &terms[inner].0;
    let mut rhs: Vec<Rat> = b.coords().iter().map(|&c| rat::int(c as i64)).collect();
    rhs.push(Rat::one());
    let lambdas = match solve_affine(&m, &rhs) {
        Ok(sol) => sol.particular,
        Err(Error::Inconsistent) => return Ok(Analysis::NotCircuit(NotCircuitReason::NotInterior)),
        Err(e) => return Err(e),
    };
    if lambdas.iter().any(|l| !l.is_positive()) {
        return Ok(Analysis::NotCircuit(NotCircuitReason::NotInterior));
    }
    let basis = MonomialBasis::new(n, d)?;
    let mut entries: Vec<(usize, Exponent, Rat, Rat)> = vertices
        .iter()
        .zip(lambdas)
        .map(|((e, c), l)| {
            let half = e.half().expect("vertices are even");
            Ok((basis.rank(&half)?, e.clone(), c.clone(), l))
        })
        .collect::<Result<_>>()?;
    entries.sort_by_key(|t| t.0);
    let j_top = entries.last().map(|t| t.0).unwrap_or(0);
    Ok(Analysis::Circuit(CircuitDecomposition {
        n,
        d,
        vertex_ranks: entries.iter().map(|t| t.0).collect(),
        vertex_exponents: entries.iter().map(|t| t.1.clone()).collect(),
        vertex_coeffs: entries.iter().map(|t| t.2.clone()).collect(),
        inner_exponent: b.clone(),
        inner_coeff: terms[inner].1.clone(),
        lambdas: entries.into_iter().map(|t| t.3).collect(),
        j_top,
    }))
}

/// Exact circuit-number test.
pub fn circuit_nonnegativity(cd: &CircuitDecomposition) -> PsdVerdict {
    let fb = &cd.inner_coeff;
    if cd.inner_exponent.is_even() && !fb.is_negative() {
        return PsdVerdict::Strict;
    }
    match compare_with_circuit_number(fb.abs(), &cd.vertex_coeffs, &cd.lambdas) {
        Ordering::Less => PsdVerdict::Strict,
        Ordering::Equal => PsdVerdict::Boundary,
        Ordering::Greater => PsdVerdict::NotPsd,
    }
}

/// Compares `value` with `Π (c_l/λ_l)^{λ_l}` through the `N`-th powers.
fn compare_with_circuit_number(value: Rat, coeffs: &[Rat], lambdas: &[Rat]) -> Ordering {
    let n = lambdas
        .iter()
        .fold(BigInt::one(), |acc, l| acc.lcm(l.denom()));
    let mut theta_pow = Rat::one();
    for (c, l) in coeffs.iter().zip(lambdas) {
        let base = c / l;
        let exp = (l * Rat::from_integer(n.clone())).to_integer();
        theta_pow *= Pow::pow(&base, exp.to_biguint().expect("positive exponent"));
    }
    let lhs = Pow::pow(&value, n.to_biguint().expect("positive lcm"));
    lhs.cmp(&theta_pow)
}

pub fn j_of(cd: &CircuitDecomposition) -> usize {
    cd.j_top
}
