//! Sparse homogeneous forms with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial_basis::{monomial_value, Exponent};
use crate::rat::{self, Rat};

/// A homogeneous polynomial in `X_0, …, X_n`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Form {
    n: usize,
    degree: u32,
    terms: BTreeMap<Exponent, Rat>,
}

impl Form {
    pub fn zero(n: usize, degree: u32) -> Self {
        Form {
            n,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a form from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(n: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Rat)>,
    {
        let mut f = Form::zero(n, degree);
        for (e, c) in terms {
            f.add_term(e, c)?;
        }
        Ok(f)
    }

    /// Integer-coefficient shorthand used by the constructions and tests.
    pub fn from_int_terms(n: usize, terms: &[(&[u32], i64)]) -> Result<Self> {
        let degree = terms
            .first()
            .map(|(e, _)| e.iter().sum())
            .ok_or_else(|| Error::Domain("empty term list has no degree".into()))?;
        Form::from_terms(
            n,
            degree,
            terms
                .iter()
                .map(|(e, c)| (Exponent::new(e.to_vec()), rat::int(*c))),
        )
    }

    pub fn add_term(&mut self, e: Exponent, c: Rat) -> Result<()> {
        self.check_exponent(&e)?;
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
        }
        Ok(())
    }

    fn check_exponent(&self, e: &Exponent) -> Result<()> {
        if e.len() != self.n + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.n + 1,
                got: e.len(),
            });
        }
        if e.degree() != self.degree {
            return Err(Error::Domain(format!(
                "term {e} has degree {}, form degree is {}",
                e.degree(),
                self.degree
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn variables(&self) -> usize {
        self.n + 1
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &Exponent) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    /// Terms in descending lexicographic order of exponents.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rat)> {
        self.terms.iter().rev()
    }

    pub fn support(&self) -> Vec<Exponent> {
        self.terms().map(|(e, _)| e.clone()).collect()
    }

    pub fn evaluate(&self, x: &[Rat]) -> Result<Rat> {
        if x.len() != self.n + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.n + 1,
                got: x.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .fold(Rat::zero(), |acc, (e, c)| acc + c * monomial_value(e, x)))
    }

    /// Floating-point evaluation, only used to guide searches.
    pub fn evaluate_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| rat::to_f64(c) * monomial_value(e, x))
            .sum()
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        if self.n != other.n || self.degree != other.degree {
            return Err(Error::Domain(format!(
                "cannot add forms of shape ({}, {}) and ({}, {})",
                self.n, self.degree, other.n, other.degree
            )));
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> Form {
        if c.is_zero() {
            return Form::zero(self.n, self.degree);
        }
        Form {
            n: self.n,
            degree: self.degree,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// `X_l^2 · f`.
    pub fn mul_monomial_square(&self, l: usize) -> Result<Form> {
        if l > self.n {
            return Err(Error::OutOfRange {
                index: l,
                max: self.n,
            });
        }
        Ok(Form {
            n: self.n,
            degree: self.degree + 2,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.with_added(l, 2), c.clone()))
                .collect(),
        })
    }

    /// Renames variables: `X_v` becomes `X_{perm[v]}`.
    pub fn permute(&self, perm: &[usize]) -> Result<Form> {
        if perm.len() != self.n + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.n + 1,
                got: perm.len(),
            });
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p > self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Domain(format!("{perm:?} is not a permutation")));
            }
        }
        let terms = self.terms.iter().map(|(e, c)| {
            let mut out = vec![0; perm.len()];
            for (v, &p) in perm.iter().enumerate() {
                out[p] = e.coords()[v];
            }
            (Exponent::new(out), c.clone())
        });
        Form::from_terms(self.n, self.degree, terms)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("form serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("form serializes")
    }

    pub fn from_json(text: &str) -> Result<Form> {
        let doc: FormDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Form::from_document(doc)
    }

    fn to_document(&self) -> FormDocument {
        FormDocument {
            variables: self.n + 1,
            degree: self.degree,
            terms: self
                .terms()
                .map(|(e, c)| TermDocument {
                    exponent: e.coords().to_vec(),
                    coefficient: serde_json::Value::String(rat::rat_to_string(c)),
                })
                .collect(),
        }
    }

    fn from_document(doc: FormDocument) -> Result<Form> {
        if doc.variables == 0 {
            return Err(Error::Parse("a form needs at least one variable".into()));
        }
        let mut f = Form::zero(doc.variables - 1, doc.degree);
        let mut seen = std::collections::BTreeSet::new();
        for t in doc.terms {
            let e = Exponent::new(t.exponent);
            if !seen.insert(e.clone()) {
                return Err(Error::Parse(format!("duplicate exponent {e}")));
            }
            f.check_exponent(&e)
                .map_err(|err| Error::Parse(err.to_string()))?;
            let c = rat::rat_from_json(&t.coefficient)?;
            f.add_term(e, c)?;
        }
        Ok(f)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if idx > 0 {
                write!(f, " {sign} ")?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let abs = c.abs();
            let mono: Vec<String> = e
                .coords()
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(v, &p)| {
                    if p == 1 {
                        format!("X{v}")
                    } else {
                        format!("X{v}^{p}")
                    }
                })
                .collect();
            if !abs.is_one() || mono.is_empty() {
                write!(f, "{abs}")?;
                if !mono.is_empty() {
                    write!(f, "*")?;
                }
            }
            write!(f, "{}", mono.join("*"))?;
        }
        Ok(())
    }
}

impl Serialize for Form {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_document().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Form {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = FormDocument::deserialize(d)?;
        Form::from_document(doc).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormDocument {
    variables: usize,
    degree: u32,
    terms: Vec<TermDocument>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDocument {
    exponent: Vec<u32>,
    coefficient: serde_json::Value,
}
