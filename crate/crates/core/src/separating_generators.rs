//! Explicit forms `f_i ∈ C_{i+1} \ C_i`, one per strict inclusion.
//!
//! Quartics come from a three-case table and sextics from a five-case table,
//! both keyed on the monomial `m_{n+i}`. Ternary sextics use permutations of
//! the Motzkin and Choi–Lam forms. Higher degrees reuse lower ones: levels
//! already present at degree `d-1` are multiplied by `X_0^2`, new levels are
//! reached by multiplying by `X_l^2` where `X_l` leads `m_{n+i+1}`.

use serde::{Deserialize, Serialize};

use crate::circuit_analysis::{analyze, circuit_nonnegativity};
use crate::cone_filtration::{is_hilbert, profile};
use crate::error::{Error, Result};
use crate::monomial_basis::{basis_size, Exponent, MonomialBasis};
use crate::par::{self, Execution};
use crate::polyforms::Form;
use crate::rat;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// `quartic_table`, `sextic_table` or `ternary_sextic`.
    pub family: String,
    pub case: u8,
    /// Base form or case instantiation, e.g. `motzkin` or `j=1,l=2`.
    pub base: String,
    /// Multiplications applied after the base form, innermost first.
    pub chain: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatorRecord {
    pub level: usize,
    pub form: Form,
    pub provenance: Provenance,
}

fn k_of(n: usize, d: usize) -> Result<usize> {
    Ok(basis_size(n, d)? - 1)
}

/// Builds `Σ c · Π X_v^p` in `n+1` variables.
fn form(n: usize, terms: &[(&[(usize, u32)], i64)]) -> Form {
    let exps = terms.iter().map(|(mono, c)| {
        let mut e = vec![0; n + 1];
        for &(v, p) in mono.iter() {
            e[v] += p;
        }
        (Exponent::new(e), rat::int(*c))
    });
    let degree = terms[0].0.iter().map(|t| t.1).sum();
    Form::from_terms(n, degree, exps).expect("well-formed construction")
}

/// `X_0^4 X_1^2 + X_0^2 X_1^4 + X_2^6 - 3 X_0^2 X_1^2 X_2^2`.
pub fn base_motzkin() -> Form {
    form(
        2,
        &[
            (&[(0, 4), (1, 2)], 1),
            (&[(0, 2), (1, 4)], 1),
            (&[(2, 6)], 1),
            (&[(0, 2), (1, 2), (2, 2)], -3),
        ],
    )
}

/// `X_0^4 X_1^2 + X_1^4 X_2^2 + X_2^4 X_0^2 - 3 X_0^2 X_1^2 X_2^2`.
pub fn base_choi_lam_sextic() -> Form {
    form(
        2,
        &[
            (&[(0, 4), (1, 2)], 1),
            (&[(1, 4), (2, 2)], 1),
            (&[(2, 4), (0, 2)], 1),
            (&[(0, 2), (1, 2), (2, 2)], -3),
        ],
    )
}

/// `X_0^2 X_1^2 + X_0^2 X_2^2 + X_1^2 X_2^2 + X_3^4 - 4 X_0 X_1 X_2 X_3`.
pub fn base_choi_lam_quartic() -> Form {
    form(
        3,
        &[
            (&[(0, 2), (1, 2)], 1),
            (&[(0, 2), (2, 2)], 1),
            (&[(1, 2), (2, 2)], 1),
            (&[(3, 4)], 1),
            (&[(0, 1), (1, 1), (2, 1), (3, 1)], -4),
        ],
    )
}

/// Quartic four-variable-product circuit `X_a²X_b² + X_a²X_c² + X_b²X_c² + X_e⁴ - 4 X_aX_bX_cX_e`.
fn quartic_circuit(n: usize, a: usize, b: usize, c: usize, e: usize) -> Form {
    form(
        n,
        &[
            (&[(a, 2), (b, 2)], 1),
            (&[(a, 2), (c, 2)], 1),
            (&[(b, 2), (c, 2)], 1),
            (&[(e, 4)], 1),
            (&[(a, 1), (b, 1), (c, 1), (e, 1)], -4),
        ],
    )
}

/// Motzkin shape `X_a^4 X_b^2 + X_a^2 X_b^4 + X_c^6 - 3 X_a^2 X_b^2 X_c^2`.
fn motzkin_shape(n: usize, a: usize, b: usize, c: usize) -> Form {
    form(
        n,
        &[
            (&[(a, 4), (b, 2)], 1),
            (&[(a, 2), (b, 4)], 1),
            (&[(c, 6)], 1),
            (&[(a, 2), (b, 2), (c, 2)], -3),
        ],
    )
}

/// Choi–Lam sextic shape `X_a^4 X_b^2 + X_b^4 X_c^2 + X_c^4 X_a^2 - 3 X_a^2 X_b^2 X_c^2`.
fn choi_lam_shape(n: usize, a: usize, b: usize, c: usize) -> Form {
    form(
        n,
        &[
            (&[(a, 4), (b, 2)], 1),
            (&[(b, 4), (c, 2)], 1),
            (&[(c, 4), (a, 2)], 1),
            (&[(a, 2), (b, 2), (c, 2)], -3),
        ],
    )
}

fn validate(n: usize, record: SeparatorRecord) -> Result<SeparatorRecord> {
    let cd = analyze(&record.form)?
        .circuit()
        .map_err(|e| Error::Invariant(format!("level {} separator: {e}", record.level)))?;
    if !circuit_nonnegativity(&cd).is_psd() {
        return Err(Error::Invariant(format!(
            "level {} separator is not PSD",
            record.level
        )));
    }
    if cd.j_top != n + record.level + 1 {
        return Err(Error::Invariant(format!(
            "level {} separator has j = {}, expected {}",
            record.level,
            cd.j_top,
            n + record.level + 1
        )));
    }
    Ok(record)
}

fn record(level: usize, form: Form, family: &str, case: u8, base: String) -> SeparatorRecord {
    SeparatorRecord {
        level,
        form,
        provenance: Provenance {
            family: family.to_string(),
            case,
            base,
            chain: Vec::new(),
        },
    }
}

fn check_level(level: usize, min: usize, max: usize) -> Result<()> {
    if level < min || level > max {
        return Err(Error::LevelOutOfRange { level, min, max });
    }
    Ok(())
}

/// Quartic separator at level `i ∈ [n, k(n,2)-n-1]`, `n >= 3`.
pub fn quartic_separator(n: usize, i: usize) -> Result<SeparatorRecord> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "quartic separators need n >= 3, got {n}"
        )));
    }
    let basis = MonomialBasis::new(n, 2)?;
    let k = basis.k();
    check_level(i, n, k - n - 1)?;
    let m = basis.unrank(n + i)?;
    let vars = support_vars(m);
    let (a, b) = (vars[0], vars[1]);
    let rec = if n + i == k - 1 {
        record(
            i,
            quartic_circuit(n, 0, 1, n - 1, n),
            "quartic_table",
            3,
            String::new(),
        )
    } else if b == n {
        // X_j X_n with 1 <= j <= n-2
        let j = a;
        record(
            i,
            quartic_circuit(n, 0, n, j, j + 1),
            "quartic_table",
            1,
            format!("j={j}"),
        )
    } else {
        // X_j X_l with 2 <= j <= l <= n-1
        let (j, l) = (a, b);
        record(
            i,
            quartic_circuit(n, 1, l + 1, j, 0),
            "quartic_table",
            2,
            format!("j={j},l={l}"),
        )
    };
    validate(n, rec)
}

/// Variables of a monomial listed with multiplicity, ascending.
fn support_vars(m: &Exponent) -> Vec<usize> {
    m.coords()
        .iter()
        .enumerate()
        .flat_map(|(v, &p)| std::iter::repeat_n(v, p as usize))
        .collect()
}

/// Sextic separator at level `i ∈ [k(n,2)-n, k(n,3)-n-1]`, `n >= 2`.
pub fn sextic_separator(n: usize, i: usize) -> Result<SeparatorRecord> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "sextic separators need n >= 2, got {n}"
        )));
    }
    let k2 = k_of(n, 2)?;
    let basis = MonomialBasis::new(n, 3)?;
    check_level(i, k2 - n, basis.k() - n - 1)?;
    if n == 2 {
        return ternary_sextic(i);
    }
    let rec = if n + i == k2 {
        record(
            i,
            motzkin_shape(n, 0, n, 1),
            "sextic_table",
            1,
            String::new(),
        )
    } else {
        let m = basis.unrank(n + i)?;
        let v = support_vars(m);
        let (v1, v2, v3) = (v[0], v[1], v[2]);
        if v3 == n && v2 == n {
            let j = v1;
            record(
                i,
                motzkin_shape(n, 0, j, j + 1),
                "sextic_table",
                4,
                format!("j={j}"),
            )
        } else if v3 == n {
            let (j, l) = (v1, v2);
            record(
                i,
                choi_lam_shape(n, 0, l + 1, j),
                "sextic_table",
                3,
                format!("j={j},l={l}"),
            )
        } else if v1 == v2 {
            let (j, l) = (v1, v3);
            record(
                i,
                choi_lam_shape(n, 0, j, l + 1),
                "sextic_table",
                2,
                format!("j={j},l={l}"),
            )
        } else {
            let (j, l, r) = (v1, v2, v3);
            let f = form(
                n,
                &[
                    (&[(j, 4), (r + 1, 2)], 1),
                    (&[(j, 2), (l, 2), (r + 1, 2)], 1),
                    (&[(j, 4), (l, 2)], 1),
                    (&[(0, 4), (j, 2)], 1),
                    (&[(0, 1), (j, 3), (l, 1), (r + 1, 1)], -4),
                ],
            );
            record(i, f, "sextic_table", 5, format!("j={j},l={l},r={r}"))
        }
    };
    validate(n, rec)
}

/// The four ternary sextic separators, levels 3 to 6.
fn ternary_sextic(i: usize) -> Result<SeparatorRecord> {
    let rec = match i {
        3 => record(
            i,
            motzkin_shape(2, 0, 2, 1),
            "ternary_sextic",
            1,
            "motzkin(X0,X2,X1)".into(),
        ),
        4 => record(
            i,
            base_choi_lam_sextic(),
            "ternary_sextic",
            2,
            "choi_lam_sextic".into(),
        ),
        5 => record(
            i,
            base_choi_lam_sextic().permute(&[0, 2, 1])?,
            "ternary_sextic",
            3,
            "choi_lam_sextic(X0,X2,X1)".into(),
        ),
        6 => record(i, base_motzkin(), "ternary_sextic", 4, "motzkin".into()),
        _ => {
            return Err(Error::LevelOutOfRange {
                level: i,
                min: 3,
                max: 6,
            })
        }
    };
    validate(2, rec)
}

fn lift(rec: SeparatorRecord, var: usize) -> Result<SeparatorRecord> {
    let mut provenance = rec.provenance;
    provenance.chain.push(format!("X{var}^2"));
    Ok(SeparatorRecord {
        level: rec.level,
        form: rec.form.mul_monomial_square(var)?,
        provenance,
    })
}

/// New level `i ∈ [k(n,d-1)-n, k(n,d)-n-1]` at degree `d >= 4`.
pub fn degree_jump(n: usize, d: usize, i: usize) -> Result<SeparatorRecord> {
    if d < 4 {
        return Err(Error::Domain(format!(
            "degree jumps start at d = 4, got {d}"
        )));
    }
    if n < 2 {
        return Err(Error::Domain(format!("degree jumps need n >= 2, got {n}")));
    }
    let basis = MonomialBasis::new(n, d)?;
    let lower = MonomialBasis::new(n, d - 1)?;
    check_level(i, lower.k() - n, basis.k() - n - 1)?;
    let m = basis.unrank(n + i + 1)?;
    let l = m
        .leading_variable()
        .ok_or_else(|| Error::Invariant("zero monomial".into()))?;
    let reduced = m
        .checked_sub(&Exponent::pure(n + 1, l, 1))
        .ok_or_else(|| Error::Invariant("leading variable does not divide".into()))?;
    let r = lower.rank(&reduced)?;
    if r < n + 1 {
        return Err(Error::Invariant(format!("jump reached rank {r} below n+1")));
    }
    let j = r - n - 1;
    let inner = match d - 1 {
        3 => sextic_separator(n, j)?,
        dd if dd >= 4 => degree_jump(n, dd, j)?,
        _ => {
            return Err(Error::Invariant(
                "degree jump recursion fell below 3".into(),
            ))
        }
    };
    let mut rec = lift(inner, l)?;
    rec.level = i;
    validate(n, rec)
}

/// Separator for one strict level of a non-Hilbert case.
pub fn separator(n: usize, d: usize, level: usize) -> Result<SeparatorRecord> {
    if is_hilbert(n, d) {
        return Err(Error::HilbertCase {
            vars: n + 1,
            degree: 2 * d,
        });
    }
    let p = profile(n, d)?;
    let levels = p.strict_levels();
    check_level(level, levels.start, levels.end - 1)?;
    match d {
        2 => quartic_separator(n, level),
        3 if n == 2 => sextic_separator(n, level),
        _ => {
            let previous_top = k_of(n, d - 1)? - n;
            if level < previous_top {
                let rec = lift(separator(n, d - 1, level)?, 0)?;
                validate(n, rec)
            } else if d == 3 {
                sextic_separator(n, level)
            } else {
                degree_jump(n, d, level)
            }
        }
    }
}

/// One separator per strict level, in level order.
pub fn complete_set(n: usize, d: usize, exec: Execution) -> Result<Vec<SeparatorRecord>> {
    if n == 0 || d == 0 {
        return Err(Error::Domain(format!(
            "need n >= 1 and d >= 1, got n = {n}, d = {d}"
        )));
    }
    if is_hilbert(n, d) {
        return Err(Error::HilbertCase {
            vars: n + 1,
            degree: 2 * d,
        });
    }
    let levels: Vec<usize> = profile(n, d)?.strict_levels().collect();
    par::map(exec, &levels, |&i| separator(n, d, i))
        .into_iter()
        .collect()
}
