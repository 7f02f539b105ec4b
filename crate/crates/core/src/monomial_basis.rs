//! Lexicographically ordered monomial bases of `(n+1)`-ary `d`-ic forms.
//!
//! Rank 0 is `X_0^d` and rank `k = binom(n+d, n) - 1` is `X_n^d`: the order is
//! *descending* lexicographic on exponent vectors. With this convention the
//! first `k(n,d-1)+1` monomials of degree `d` are exactly `X_0 · m_j^{(d-1)}`,
//! which is what the `X_0^2`-lift and the degree jump rely on.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent vector of a monomial in `n+1` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(coords: Vec<u32>) -> Self {
        Exponent(coords)
    }

    pub fn zero(vars: usize) -> Self {
        Exponent(vec![0; vars])
    }

    /// `X_var^power` in `vars` variables.
    pub fn pure(vars: usize, var: usize, power: u32) -> Self {
        let mut e = vec![0; vars];
        e[var] = power;
        Exponent(e)
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_even(&self) -> bool {
        self.0.iter().all(|c| c % 2 == 0)
    }

    /// Componentwise half; `None` unless every coordinate is even.
    pub fn half(&self) -> Option<Exponent> {
        self.is_even()
            .then(|| Exponent(self.0.iter().map(|c| c / 2).collect()))
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        debug_assert_eq!(self.len(), other.len());
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other` if it stays nonnegative.
    pub fn checked_sub(&self, other: &Exponent) -> Option<Exponent> {
        if self.len() != other.len() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Exponent)
    }

    pub fn with_added(&self, var: usize, by: u32) -> Exponent {
        let mut e = self.0.clone();
        e[var] += by;
        Exponent(e)
    }

    /// Index of the first variable with a nonzero exponent.
    pub fn leading_variable(&self) -> Option<usize> {
        self.0.iter().position(|&c| c > 0)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `binom(n+d, n)`, the dimension of the space of `(n+1)`-ary `d`-ics.
pub fn basis_size(n: usize, d: usize) -> Result<usize> {
    if n == 0 || d == 0 {
        return Err(Error::Domain(format!(
            "basis needs n >= 1 and d >= 1, got n = {n}, d = {d}"
        )));
    }
    binomial(n + d, n)
        .ok_or_else(|| Error::Domain(format!("basis size overflows for n = {n}, d = {d}")))
}

fn binomial(top: usize, bottom: usize) -> Option<usize> {
    let bottom = bottom.min(top - bottom);
    let mut acc: u128 = 1;
    for i in 0..bottom {
        acc = acc * (top - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return None;
        }
    }
    Some(acc as usize)
}

/// Number of exponent vectors with `parts` nonnegative entries summing to `total`.
fn compositions(total: u32, parts: usize) -> usize {
    if parts == 0 {
        return usize::from(total == 0);
    }
    binomial(total as usize + parts - 1, parts - 1).unwrap_or(usize::MAX)
}

/// Indices of the quadric `q_i(Z) = Z_0 Z_{n+i} - Z_s Z_t` cutting out `V_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadricSpec {
    pub i: usize,
    pub s: usize,
    pub t: usize,
}

/// The ordered basis `m_0, …, m_k` of degree-`d` monomials in `X_0, …, X_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    n: usize,
    d: usize,
    exponents: Vec<Exponent>,
}

impl MonomialBasis {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        let size = basis_size(n, d)?;
        let mut exponents = Vec::with_capacity(size);
        let mut current = vec![0u32; n + 1];
        enumerate_descending(&mut current, 0, d as u32, &mut exponents);
        debug_assert_eq!(exponents.len(), size);
        Ok(MonomialBasis { n, d, exponents })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `k(n,d)`, the largest rank.
    pub fn k(&self) -> usize {
        self.exponents.len() - 1
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &[Exponent] {
        &self.exponents
    }

    pub fn unrank(&self, j: usize) -> Result<&Exponent> {
        self.exponents.get(j).ok_or(Error::OutOfRange {
            index: j,
            max: self.k(),
        })
    }

    /// Position of `alpha`, counted in closed form: the number of exponents
    /// that are lexicographically larger.
    pub fn rank(&self, alpha: &Exponent) -> Result<usize> {
        if alpha.len() != self.n + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.n + 1,
                got: alpha.len(),
            });
        }
        if alpha.degree() as usize != self.d {
            return Err(Error::Domain(format!(
                "exponent {alpha} has degree {}, basis degree is {}",
                alpha.degree(),
                self.d
            )));
        }
        let mut rank = 0usize;
        let mut remaining = self.d as u32;
        let coords = alpha.coords();
        for (pos, &a) in coords.iter().enumerate().take(self.n) {
            let later = self.n - pos;
            for v in a + 1..=remaining {
                rank += compositions(remaining - v, later);
            }
            remaining -= a;
        }
        Ok(rank)
    }

    /// Minimal-`s` decomposition `α_s + α_t = α_0 + α_{n+i}` with `1 <= s <= t`.
    pub fn quadric_spec(&self, i: usize) -> Result<QuadricSpec> {
        let max = self.k() - self.n;
        if i == 0 || i > max {
            return Err(Error::LevelOutOfRange {
                level: i,
                min: 1,
                max,
            });
        }
        let target = self.exponents[0].add(&self.exponents[self.n + i]);
        for s in 1..=self.k() {
            if let Some(rest) = target.checked_sub(&self.exponents[s]) {
                let t = self.rank(&rest)?;
                if t >= s {
                    return Ok(QuadricSpec { i, s, t });
                }
            }
        }
        Err(Error::Invariant(format!(
            "no quadric decomposition for level {i}"
        )))
    }

    /// All `(s, t)` with `s <= t <= bound` and `α_s + α_t = β`, ascending in `s`.
    pub fn product_decompositions(&self, beta: &Exponent, bound: usize) -> Vec<(usize, usize)> {
        let bound = bound.min(self.k());
        let mut out = Vec::new();
        if beta.len() != self.n + 1 || beta.degree() as usize != 2 * self.d {
            return out;
        }
        for s in 0..=bound {
            if let Some(rest) = beta.checked_sub(&self.exponents[s]) {
                if let Ok(t) = self.rank(&rest) {
                    if s <= t && t <= bound {
                        out.push((s, t));
                    }
                }
            }
        }
        out
    }

    /// Evaluates every basis monomial at `x`.
    pub fn evaluate_all<T>(&self, x: &[T]) -> Vec<T>
    where
        T: Clone + num_traits::One + for<'a> std::ops::MulAssign<&'a T>,
    {
        self.exponents
            .iter()
            .map(|e| monomial_value(e, x))
            .collect()
    }
}

pub(crate) fn monomial_value<T>(e: &Exponent, x: &[T]) -> T
where
    T: Clone + num_traits::One + for<'a> std::ops::MulAssign<&'a T>,
{
    let mut acc = T::one();
    for (c, xi) in e.coords().iter().zip(x) {
        for _ in 0..*c {
            acc *= xi;
        }
    }
    acc
}

fn enumerate_descending(
    current: &mut Vec<u32>,
    pos: usize,
    remaining: u32,
    out: &mut Vec<Exponent>,
) {
    let last = current.len() - 1;
    if pos == last {
        current[pos] = remaining;
        out.push(Exponent(current.clone()));
        current[pos] = 0;
        return;
    }
    for v in (0..=remaining).rev() {
        current[pos] = v;
        enumerate_descending(current, pos + 1, remaining - v, out);
    }
    current[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(v: &[u32]) -> Exponent {
        Exponent::new(v.to_vec())
    }

    /// Oracle: every exponent of the right degree, sorted descending.
    fn brute_force(n: usize, d: usize) -> Vec<Exponent> {
        let mut all = Vec::new();
        let vars = n + 1;
        let mut idx = vec![0u32; vars];
        loop {
            if idx.iter().sum::<u32>() == d as u32 {
                all.push(Exponent::new(idx.clone()));
            }
            let mut p = 0;
            loop {
                if p == vars {
                    all.sort();
                    all.reverse();
                    return all;
                }
                idx[p] += 1;
                if idx[p] as usize <= d {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
        }
    }

    #[test]
    fn sizes() {
        assert_eq!(basis_size(2, 3).unwrap(), 10);
        assert_eq!(basis_size(1, 1).unwrap(), 2);
        assert_eq!(basis_size(3, 2).unwrap(), 10);
        assert!(basis_size(0, 3).is_err());
        assert!(basis_size(2, 0).is_err());
    }

    #[test]
    fn enumeration_matches_sorted_brute_force() {
        for n in 1..=4 {
            for d in 1..=5 {
                let b = MonomialBasis::new(n, d).unwrap();
                assert_eq!(b.exponents(), brute_force(n, d).as_slice(), "n={n} d={d}");
                for (j, a) in b.exponents().iter().enumerate() {
                    assert_eq!(b.rank(a).unwrap(), j);
                }
            }
        }
    }

    #[test]
    fn unrank_examples() {
        let b = MonomialBasis::new(2, 3).unwrap();
        assert_eq!(b.unrank(0).unwrap(), &e(&[3, 0, 0]));
        assert_eq!(b.unrank(4).unwrap(), &e(&[1, 1, 1]));
        assert_eq!(b.unrank(9).unwrap(), &e(&[0, 0, 3]));
        assert!(matches!(
            b.unrank(10),
            Err(Error::OutOfRange { index: 10, max: 9 })
        ));
    }

    #[test]
    fn rank_examples() {
        let b32 = MonomialBasis::new(3, 2).unwrap();
        assert_eq!(b32.rank(&e(&[0, 0, 1, 1])).unwrap(), 8);
        let b23 = MonomialBasis::new(2, 3).unwrap();
        assert_eq!(b23.rank(&e(&[0, 0, 3])).unwrap(), 9);
        let b24 = MonomialBasis::new(2, 4).unwrap();
        assert_eq!(b24.rank(&e(&[0, 0, 4])).unwrap(), 14);
        assert!(b23.rank(&e(&[1, 1])).is_err());
        assert!(b23.rank(&e(&[1, 1, 0])).is_err());
    }

    /// Oracle for the quadric indices: scan all pairs.
    fn quadric_brute(b: &MonomialBasis, i: usize) -> (usize, usize) {
        let target = b.unrank(0).unwrap().add(b.unrank(b.n() + i).unwrap());
        for s in 1..=b.k() {
            for t in s..=b.k() {
                if b.unrank(s).unwrap().add(b.unrank(t).unwrap()) == target {
                    return (s, t);
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn quadric_examples() {
        let b = MonomialBasis::new(2, 3).unwrap();
        assert_eq!(b.quadric_spec(1).unwrap(), QuadricSpec { i: 1, s: 1, t: 1 });
        assert_eq!(b.quadric_spec(2).unwrap(), QuadricSpec { i: 2, s: 1, t: 2 });
        let b = MonomialBasis::new(3, 2).unwrap();
        assert_eq!(b.quadric_spec(1).unwrap(), QuadricSpec { i: 1, s: 1, t: 1 });
        assert!(b.quadric_spec(0).is_err());
        assert!(b.quadric_spec(7).is_err());
    }

    #[test]
    fn quadrics_match_pair_scan() {
        for n in 1..=3 {
            for d in 1..=4 {
                let b = MonomialBasis::new(n, d).unwrap();
                for i in 1..=b.k() - n {
                    let q = b.quadric_spec(i).unwrap();
                    assert_eq!((q.s, q.t), quadric_brute(&b, i), "n={n} d={d} i={i}");
                    assert!(1 <= q.s && q.s <= q.t && q.t < n + i);
                }
            }
        }
    }

    #[test]
    fn decompositions() {
        let b = MonomialBasis::new(2, 3).unwrap();
        assert_eq!(b.product_decompositions(&e(&[0, 0, 6]), 9), vec![(9, 9)]);
        assert!(b.product_decompositions(&e(&[0, 0, 6]), 8).is_empty());
        assert_eq!(b.product_decompositions(&e(&[6, 0, 0]), 0), vec![(0, 0)]);
        // X0^3 X2^3 = m0 m9 = m2 m5
        assert_eq!(
            b.product_decompositions(&e(&[3, 0, 3]), 9),
            vec![(0, 9), (2, 5)]
        );
    }

    #[test]
    fn prefix_law() {
        for n in 1..=3 {
            for d in 1..=4 {
                let lo = MonomialBasis::new(n, d).unwrap();
                let hi = MonomialBasis::new(n, d + 1).unwrap();
                for (j, a) in lo.exponents().iter().enumerate() {
                    assert_eq!(hi.rank(&a.with_added(0, 1)).unwrap(), j);
                }
                for (j, a) in hi.exponents().iter().enumerate() {
                    assert_eq!(a.coords()[0] > 0, j <= lo.k());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn rank_unrank_round_trip(n in 1usize..5, d in 1usize..6, seed in any::<usize>()) {
            let b = MonomialBasis::new(n, d).unwrap();
            let j = seed % b.len();
            let a = b.unrank(j).unwrap().clone();
            prop_assert_eq!(b.rank(&a).unwrap(), j);
            if j + 1 < b.len() {
                prop_assert!(b.unrank(j).unwrap() > b.unrank(j + 1).unwrap());
            }
        }

        #[test]
        fn random_exponent_round_trip(parts in proptest::collection::vec(0u32..5, 2..6)) {
            let n = parts.len() - 1;
            let d = parts.iter().sum::<u32>() as usize;
            prop_assume!(d >= 1);
            let b = MonomialBasis::new(n, d).unwrap();
            let a = Exponent::new(parts);
            let j = b.rank(&a).unwrap();
            prop_assert_eq!(b.unrank(j).unwrap(), &a);
        }
    }
}
