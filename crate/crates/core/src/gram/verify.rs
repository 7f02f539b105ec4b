//! Certificate replay. Nothing here touches the fiber solver, the sampler or
//! the LP: membership is re-checked by expanding the Gram matrix, and a Farkas
//! certificate by forming `M = Σ μ_p z_p z_pᵀ`, which must be constant on
//! every class `{(s,t) : α_s + α_t = β}`; then `Σ μ_p q_A(z_p) = Σ_β ℓ_β f_β`
//! for every Gram matrix `A` of `f`, and that sum must be negative.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::banded::{MembershipCertificate, PsdEvidence};
use crate::error::Error;
use crate::monomial_basis::{Exponent, MonomialBasis};
use crate::polyforms::Form;
use crate::rat::{self, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FarkasCertificate {
    pub level: usize,
    /// Points `z ∈ V_level(R)` in the chart `z_0 = 1`.
    #[serde(with = "rat::mat_serde")]
    pub points: Vec<Vec<Rat>>,
    #[serde(with = "rat::vec_serde")]
    pub multipliers: Vec<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Certificate {
    Member(MembershipCertificate),
    Nonmember(FarkasCertificate),
}

impl Certificate {
    pub fn level(&self) -> usize {
        match self {
            Certificate::Member(c) => c.level,
            Certificate::Nonmember(c) => c.level,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> crate::Result<Certificate> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl Verification {
    fn ok() -> Self {
        Verification {
            valid: true,
            reason: None,
        }
    }

    fn fail(reason: impl Into<String>) -> Self {
        Verification {
            valid: false,
            reason: Some(reason.into()),
        }
    }
}

pub fn verify_certificate(f: &Form, cert: &Certificate) -> Verification {
    let outcome = match cert {
        Certificate::Member(c) => check_member(f, c),
        Certificate::Nonmember(c) => check_farkas(f, c),
    };
    match outcome {
        Ok(()) => Verification::ok(),
        Err(reason) => Verification::fail(reason),
    }
}

fn basis_of(f: &Form) -> Result<MonomialBasis, String> {
    if f.degree() == 0 || f.degree() % 2 == 1 {
        return Err(format!(
            "form degree {} is not positive and even",
            f.degree()
        ));
    }
    MonomialBasis::new(f.n(), f.degree() as usize / 2).map_err(|e| e.to_string())
}

fn check_member(f: &Form, c: &MembershipCertificate) -> Result<(), String> {
    let basis = basis_of(f)?;
    let (n, k) = (basis.n(), basis.k());
    if c.level > k - n {
        return Err(format!("level {} exceeds {}", c.level, k - n));
    }
    let g = &c.gram;
    if g.rows() != k + 1 || g.cols() != k + 1 {
        return Err(format!(
            "Gram matrix is {}x{}, expected {}x{}",
            g.rows(),
            g.cols(),
            k + 1,
            k + 1
        ));
    }
    let band = n + c.level;
    let mut expansion: BTreeMap<Exponent, Rat> = BTreeMap::new();
    for s in 0..=k {
        for t in 0..=k {
            let v = g.get(s, t);
            if v != g.get(t, s) {
                return Err(format!("Gram matrix not symmetric at ({s},{t})"));
            }
            if v.is_zero() {
                continue;
            }
            if s.max(t) > band {
                return Err(format!("entry ({s},{t}) lies outside the band {band}"));
            }
            *expansion
                .entry(basis.exponents()[s].add(&basis.exponents()[t]))
                .or_insert_with(Rat::zero) += v;
        }
    }
    expansion.retain(|_, v| !v.is_zero());
    let target: BTreeMap<Exponent, Rat> = f.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
    if expansion != target {
        return Err("Gram matrix does not expand to the form".into());
    }
    match PsdEvidence::of(f) {
        Ok(e) if e == c.psd => Ok(()),
        Ok(e) => Err(format!("claimed evidence {:?}, recomputed {:?}", c.psd, e)),
        Err(e) => Err(format!("no nonnegativity evidence: {e}")),
    }
}

fn check_farkas(f: &Form, c: &FarkasCertificate) -> Result<(), String> {
    let basis = basis_of(f)?;
    let (n, k) = (basis.n(), basis.k());
    if c.level > k - n {
        return Err(format!("level {} exceeds {}", c.level, k - n));
    }
    if c.points.is_empty() || c.points.len() != c.multipliers.len() {
        return Err(format!(
            "{} points against {} multipliers",
            c.points.len(),
            c.multipliers.len()
        ));
    }
    if let Some(p) = c.multipliers.iter().position(Signed::is_negative) {
        return Err(format!("multiplier {p} is negative"));
    }
    if c.multipliers.iter().all(Zero::is_zero) {
        return Err("all multipliers vanish".into());
    }
    let quadrics: Vec<_> = (1..=c.level)
        .map(|l| basis.quadric_spec(l))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    for (p, z) in c.points.iter().enumerate() {
        if z.len() != k + 1 {
            return Err(format!(
                "point {p} has length {}, expected {}",
                z.len(),
                k + 1
            ));
        }
        if !z[0].is_one() {
            return Err(format!("point {p} is not in the chart z_0 = 1"));
        }
        for q in &quadrics {
            if &z[0] * &z[n + q.i] != &z[q.s] * &z[q.t] {
                return Err(format!("point {p} violates quadric {}", q.i));
            }
        }
    }
    // moment matrix entries, one class per degree-2d exponent
    let mut classes: BTreeMap<Exponent, Rat> = BTreeMap::new();
    for s in 0..=k {
        for t in s..=k {
            let m = c
                .points
                .iter()
                .zip(&c.multipliers)
                .filter(|(_, mu)| !mu.is_zero())
                .fold(Rat::zero(), |acc, (z, mu)| acc + mu * &z[s] * &z[t]);
            let beta = basis.exponents()[s].add(&basis.exponents()[t]);
            match classes.get(&beta) {
                Some(prev) if *prev != m => {
                    return Err(format!(
                        "combination leaves a nonzero kernel coordinate at {beta}"
                    ));
                }
                Some(_) => {}
                None => {
                    classes.insert(beta, m);
                }
            }
        }
    }
    let total = f.terms().fold(Rat::zero(), |acc, (e, coeff)| {
        acc + coeff * classes.get(e).cloned().unwrap_or_else(Rat::zero)
    });
    if !total.is_negative() {
        return Err(format!(
            "combined value {} is not negative",
            rat::rat_to_string(&total)
        ));
    }
    Ok(())
}
