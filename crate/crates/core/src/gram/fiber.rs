use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact_linalg::{solve_affine, RatMatrix};
use crate::monomial_basis::MonomialBasis;
use crate::polyforms::Form;
use crate::rat::{self, Rat};

/// Sparse upper-triangular view `(s, t, w·a_st)` with `w = 2` off the diagonal,
/// so that `zᵀ A z = Σ w·a_st z_s z_t`.
pub(crate) type UpperTerms = Vec<(usize, usize, Rat)>;

/// The affine space of Gram matrices of a form: `particular + span(kernel_basis)`.
#[derive(Debug, Clone)]
pub struct GramFiber {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub particular: RatMatrix,
    pub kernel_basis: Vec<RatMatrix>,
    pub(crate) particular_terms: UpperTerms,
    pub(crate) kernel_terms: Vec<UpperTerms>,
}

impl GramFiber {
    pub fn dimension(&self) -> usize {
        self.kernel_basis.len()
    }

    /// `A_0 + Σ y_m B_m`.
    pub fn point(&self, y: &[Rat]) -> Result<RatMatrix> {
        if y.len() != self.kernel_basis.len() {
            return Err(Error::DimensionMismatch {
                expected: self.kernel_basis.len(),
                got: y.len(),
            });
        }
        let mut a = self.particular.clone();
        for (b, c) in self.kernel_basis.iter().zip(y) {
            if !c.is_zero() {
                a = a.add_scaled(b, c)?;
            }
        }
        Ok(a)
    }
}

pub(crate) fn upper_terms(a: &RatMatrix) -> UpperTerms {
    let mut out = Vec::new();
    for s in 0..a.rows() {
        for t in s..a.cols() {
            let v = a.get(s, t);
            if !v.is_zero() {
                let w = if s == t { v.clone() } else { v * rat::int(2) };
                out.push((s, t, w));
            }
        }
    }
    out
}

pub(crate) fn eval_upper(terms: &UpperTerms, z: &[Rat]) -> Rat {
    terms
        .iter()
        .fold(Rat::zero(), |acc, (s, t, w)| acc + w * &z[*s] * &z[*t])
}

pub(crate) fn eval_upper_f64(terms: &[(usize, usize, f64)], z: &[f64]) -> f64 {
    terms.iter().map(|(s, t, w)| w * z[*s] * z[*t]).sum()
}

/// `G(A) = Σ_{s,t} A_st m_s m_t` by direct summation over ordered pairs.
pub fn gram_map(a: &RatMatrix, basis: &MonomialBasis) -> Result<Form> {
    let size = basis.len();
    if a.rows() != size || a.cols() != size {
        return Err(Error::DimensionMismatch {
            expected: size,
            got: a.rows(),
        });
    }
    let mut f = Form::zero(basis.n(), 2 * basis.d() as u32);
    for s in 0..size {
        for t in 0..size {
            let v = a.get(s, t);
            if !v.is_zero() {
                f.add_term(basis.exponents()[s].add(&basis.exponents()[t]), v.clone())?;
            }
        }
    }
    Ok(f)
}

/// Basis and half degree of a form of even degree.
pub(crate) fn half_basis(f: &Form) -> Result<MonomialBasis> {
    if f.degree() % 2 == 1 || f.degree() == 0 {
        return Err(Error::Domain(format!(
            "Gram matrices need a positive even degree, got {}",
            f.degree()
        )));
    }
    MonomialBasis::new(f.n(), f.degree() as usize / 2)
}

pub(crate) fn symmetric_from_upper(
    size: usize,
    pairs: &[(usize, usize)],
    values: &[Rat],
) -> RatMatrix {
    let mut m = RatMatrix::zeros(size, size);
    for (&(s, t), v) in pairs.iter().zip(values) {
        if !v.is_zero() {
            m.set(s, t, v.clone());
            m.set(t, s, v.clone());
        }
    }
    m
}

/// Unknown positions `(s, t)` and the solution of the matching system.
pub(crate) type FiberSystem = (
    Vec<(usize, usize)>,
    Result<crate::exact_linalg::AffineSolution>,
);

/// Solves the coefficient-matching system over the unknowns `a_st`, `s <= t`,
/// restricted to `t <= bound`.
pub(crate) fn fiber_system(f: &Form, basis: &MonomialBasis, bound: usize) -> Result<FiberSystem> {
    let full = MonomialBasis::new(basis.n(), 2 * basis.d())?;
    let pairs: Vec<(usize, usize)> = (0..=bound)
        .flat_map(|s| (s..=bound).map(move |t| (s, t)))
        .collect();
    let mut system = RatMatrix::zeros(full.len(), pairs.len());
    for (col, &(s, t)) in pairs.iter().enumerate() {
        let beta = basis.exponents()[s].add(&basis.exponents()[t]);
        let row = full.rank(&beta)?;
        system.set(row, col, rat::int(if s == t { 1 } else { 2 }));
    }
    let mut rhs = vec![Rat::zero(); full.len()];
    for (e, c) in f.terms() {
        rhs[full.rank(e)?] = c.clone();
    }
    Ok((pairs, solve_affine(&system, &rhs)))
}

pub fn gram_fiber(f: &Form) -> Result<GramFiber> {
    let basis = half_basis(f)?;
    let k = basis.k();
    let (pairs, sol) = fiber_system(f, &basis, k)?;
    let sol = sol.map_err(|_| {
        Error::Invariant("the Gram map is onto; system cannot be inconsistent".into())
    })?;
    let particular = symmetric_from_upper(k + 1, &pairs, &sol.particular);
    let kernel_basis: Vec<RatMatrix> = sol
        .nullspace
        .iter()
        .map(|v| symmetric_from_upper(k + 1, &pairs, v))
        .collect();
    Ok(GramFiber {
        n: basis.n(),
        d: basis.d(),
        k,
        particular_terms: upper_terms(&particular),
        kernel_terms: kernel_basis.iter().map(upper_terms).collect(),
        particular,
        kernel_basis,
    })
}
