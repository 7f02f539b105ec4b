use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial_basis::MonomialBasis;
use crate::par::Execution;
use crate::rat::{self, Rat};

/// A real point of `V_i` in the chart `z_0 = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyPoint {
    pub level: usize,
    #[serde(with = "rat::vec_serde")]
    pub z: Vec<Rat>,
}

/// `z = (1, m_1(1,x'), …, m_{n+i}(1,x'), tail)`.
pub fn sample_point(
    n: usize,
    d: usize,
    level: usize,
    x: &[Rat],
    tail: &[Rat],
) -> Result<VarietyPoint> {
    let basis = MonomialBasis::new(n, d)?;
    sample_with_basis(&basis, level, x, tail)
}

pub(crate) fn sample_with_basis(
    basis: &MonomialBasis,
    level: usize,
    x: &[Rat],
    tail: &[Rat],
) -> Result<VarietyPoint> {
    let (n, k) = (basis.n(), basis.k());
    if level > k - n {
        return Err(Error::LevelOutOfRange {
            level,
            min: 0,
            max: k - n,
        });
    }
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    if tail.len() != k - n - level {
        return Err(Error::DimensionMismatch {
            expected: k - n - level,
            got: tail.len(),
        });
    }
    let mut z = veronese(basis, x);
    z.truncate(n + level + 1);
    z.extend(tail.iter().cloned());
    Ok(VarietyPoint { level, z })
}

/// All basis monomials at `(1, x')`.
pub(crate) fn veronese(basis: &MonomialBasis, x: &[Rat]) -> Vec<Rat> {
    let mut point = Vec::with_capacity(x.len() + 1);
    point.push(Rat::one());
    point.extend(x.iter().cloned());
    basis.evaluate_all(&point)
}

/// Knobs of the certificate search. Every sampled point is exact; the
/// floating-point side only decides which points to try.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSchedule {
    /// Grid for `x'` spans `[-R, R]^n`.
    pub grid_radius: u32,
    /// Initial grid step `2^-grid_step_exp`.
    pub grid_step_exp: u32,
    /// How many times the step may be halved when no new point separates.
    pub refinements: u32,
    pub rounds: usize,
    pub points_per_round: usize,
    /// Largest `e` in the seed tails `±2^e`; doubled (up to 64) when stuck.
    pub max_tail_exp: u32,
    /// Tails found by the search are rounded to multiples of `2^-tail_bits`.
    pub tail_bits: u32,
    /// Extra seeded pseudo-random `x'` on a fine dyadic lattice.
    pub random_points: usize,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for SampleSchedule {
    fn default() -> Self {
        SampleSchedule {
            grid_radius: 2,
            grid_step_exp: 1,
            refinements: 2,
            rounds: 200,
            points_per_round: 100,
            max_tail_exp: 16,
            tail_bits: 12,
            random_points: 32,
            seed: 0,
            exec: Execution::default(),
        }
    }
}

impl SampleSchedule {
    /// The `x'` grid with step `2^-step_exp`.
    pub(crate) fn grid(&self, n: usize, step_exp: u32) -> Vec<Vec<Rat>> {
        let denom = 1i64 << step_exp;
        let r = self.grid_radius as i64 * denom;
        let values: Vec<Rat> = (-r..=r).map(|v| rat::frac(v, denom)).collect();
        let mut out: Vec<Vec<Rat>> = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |v| {
                        let mut q = p.clone();
                        q.push(v.clone());
                        q
                    })
                })
                .collect();
        }
        out
    }

    /// Seeded `x'` with coordinates in `[-R, R]` on the lattice `2^-6 Z`.
    pub(crate) fn random_grid(&self, n: usize) -> Vec<Vec<Rat>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let scale = 64i64;
        let r = self.grid_radius as i64 * scale;
        (0..self.random_points)
            .map(|_| {
                (0..n)
                    .map(|_| rat::frac(rng.random_range(-r..=r), scale))
                    .collect()
            })
            .collect()
    }

    /// `0`, `±e_v` and `±(1,…,1)`.
    pub(crate) fn directions(n: usize) -> Vec<Vec<Rat>> {
        let mut out = vec![vec![Rat::zero(); n]];
        for v in 0..n {
            for s in [1, -1] {
                let mut p = vec![Rat::zero(); n];
                p[v] = rat::int(s);
                out.push(p);
            }
        }
        out.push(vec![Rat::one(); n]);
        out.push(vec![-Rat::one(); n]);
        out
    }

    /// Tail values `±1, ±2^8, ±2^16, …` up to `2^max_exp`, doubling the exponent.
    pub(crate) fn tail_values(max_exp: u32) -> Vec<Rat> {
        let mut exps = vec![0u32];
        let mut e = 8;
        while e <= max_exp {
            exps.push(e);
            e *= 2;
        }
        if *exps.last().unwrap() != max_exp && max_exp > 0 {
            exps.push(max_exp);
        }
        exps.into_iter()
            .flat_map(|e| {
                let v = Rat::from_integer(num_bigint::BigInt::one() << e as usize);
                [v.clone(), -v]
            })
            .collect()
    }
}
