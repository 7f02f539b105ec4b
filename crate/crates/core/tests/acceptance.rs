//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use conefilt::rat::{frac, int};
use conefilt::{
    analyze, banded_gram, base_choi_lam_quartic, base_choi_lam_sextic, base_motzkin,
    circuit_nonnegativity, complete_set, degree_jump, gram_fiber, gram_map, j_of, level_bounds,
    lp_feasible, non_membership, profile, separator, verify_certificate, Certificate, Execution,
    Exponent, FarkasCertificate, Form, LevelClass, LinearConstraint, LpOutcome,
    MembershipCertificate, MonomialBasis, NonMembership, PsdEvidence, PsdVerdict, Rat,
    SampleSchedule,
};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("mu reproduction", mu_reproduction),
        ("complete-set coverage", complete_set_coverage),
        ("level arithmetic", level_arithmetic),
        ("example D", example_d),
        ("Motzkin sandwich", motzkin_sandwich),
        ("fiber identity", fiber_identity),
        ("prefix and lift laws", prefix_and_lift),
        ("degree-jump consistency", degree_jump_consistency),
        ("adversarial certificates", adversarial_certificates),
        ("LP engine oracle", lp_oracle),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|p| Err(format!("panicked: {}", panic_text(&p))));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}; {secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({why}; {secs:.2}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn panic_text(p: &Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<String>()
        .cloned()
        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_default()
}

fn d_form() -> Form {
    Form::from_int_terms(
        3,
        &[
            (&[4, 0, 0, 2], 2),
            (&[2, 0, 0, 4], 2),
            (&[0, 4, 2, 0], 1),
            (&[0, 2, 4, 0], 1),
            (&[2, 1, 1, 2], -6),
        ],
    )
    .expect("well-formed")
}

fn mu_reproduction() -> Outcome {
    for (n, d, mu) in [(2, 3, 3), (3, 2, 2), (3, 3, 12)] {
        let p = ok(profile(n, d), "profile")?;
        ensure!(p.mu == mu, "mu({n},{d}) = {}, expected {mu}", p.mu);
        ensure!(!p.hilbert, "({n},{d}) reported Hilbert");
    }
    let mut hilbert_cases = 0;
    for n in 1..=5 {
        for d in 1..=5 {
            let expected = n == 1 || d == 1 || (n, d) == (2, 2);
            let p = ok(profile(n, d), "profile")?;
            ensure!(p.hilbert == expected, "hilbert({n},{d}) = {}", p.hilbert);
            if expected {
                hilbert_cases += 1;
                ensure!(p.mu == 0, "Hilbert case ({n},{d}) has mu {}", p.mu);
            }
        }
    }
    Ok(format!(
        "mu = 3, 2, 12; {hilbert_cases} Hilbert cases in 1..=5 x 1..=5"
    ))
}

fn complete_set_coverage() -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    for n in [2, 3] {
        for d in [2, 3, 4] {
            let p = ok(profile(n, d), "profile")?;
            if p.hilbert {
                continue;
            }
            let records = ok(complete_set(n, d, Execution::default()), "complete_set")?;
            ensure!(
                records.len() == p.mu + 1,
                "({n},{d}): {} records, mu+1 = {}",
                records.len(),
                p.mu + 1
            );
            let levels: Vec<usize> = records.iter().map(|r| r.level).collect();
            let expected: Vec<usize> = (p.collapsed_prefix..p.k - n).collect();
            ensure!(
                levels == expected,
                "({n},{d}): levels {levels:?}, expected {expected:?}"
            );
            for r in &records {
                let cd = ok(ok(analyze(&r.form), "analyze")?.circuit(), "circuit")?;
                let verdict = circuit_nonnegativity(&cd);
                ensure!(
                    verdict != PsdVerdict::NotPsd,
                    "({n},{d}) level {}: not PSD",
                    r.level
                );
                ensure!(
                    j_of(&cd) == n + r.level + 1,
                    "({n},{d}) level {}: j = {}",
                    r.level,
                    j_of(&cd)
                );
                let member = ok(banded_gram(&r.form, r.level + 1), "banded_gram")?;
                ensure!(
                    member.is_some(),
                    "({n},{d}) level {}: no Gram matrix in band {}",
                    r.level,
                    r.level + 1
                );
            }
            total += records.len();
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!("{total} separators checked"))
}

fn level_arithmetic() -> Outcome {
    for (name, f, expected) in [("M", base_motzkin(), 6), ("E", base_choi_lam_quartic(), 5)] {
        let report = ok(level_bounds(&f, true, true), "level_bounds")?;
        ensure!(report.j_top == 9, "j({name}) = {}", report.j_top);
        ensure!(
            report.classification == LevelClass::Exact(expected),
            "{name}: {:?}",
            report.classification
        );
    }
    Ok("Exact(6) and Exact(5)".into())
}

fn example_d() -> Outcome {
    let f = d_form();
    let cd = ok(ok(analyze(&f), "analyze")?.circuit(), "circuit")?;
    ensure!(j_of(&cd) == 13, "j(D) = {}", j_of(&cd));
    let report = ok(level_bounds(&f, false, false), "level_bounds")?;
    ensure!(
        report.classification == LevelClass::InConeUpper(10),
        "{:?}",
        report.classification
    );
    let fiber = ok(gram_fiber(&f), "gram_fiber")?;
    ensure!(
        fiber.dimension() == 126,
        "fiber dimension {}",
        fiber.dimension()
    );
    let member = ok(banded_gram(&f, 10), "banded_gram")?.ok_or("no banded Gram matrix at 10")?;
    let member = Certificate::Member(member);
    ensure!(
        verify_certificate(&f, &member).valid,
        "membership certificate at 10 rejected"
    );
    let cert = match ok(
        non_membership(&f, 9, &SampleSchedule::default()),
        "non_membership",
    )? {
        NonMembership::Certificate(c, _) => c,
        NonMembership::Unknown(s) => {
            return Err(format!("search inconclusive after {} rounds", s.rounds))
        }
    };
    let points = cert.points.len();
    let cert = Certificate::Nonmember(cert);
    let v = verify_certificate(&f, &cert);
    ensure!(v.valid, "Farkas certificate rejected: {:?}", v.reason);
    consistent(&[member, cert])?;
    Ok(format!(
        "j = 13, member of C_10, {points}-point certificate outside C_9"
    ))
}

/// No form may hold a membership certificate at `i` and a Farkas certificate at `j >= i`.
fn consistent(certs: &[Certificate]) -> Result<(), String> {
    for a in certs {
        for b in certs {
            if let (Certificate::Member(m), Certificate::Nonmember(f)) = (a, b) {
                ensure!(
                    f.level < m.level,
                    "member at {} but nonmember at {}",
                    m.level,
                    f.level
                );
            }
        }
    }
    Ok(())
}

fn motzkin_certificates() -> Result<(MembershipCertificate, FarkasCertificate), String> {
    let m = base_motzkin();
    let member = ok(banded_gram(&m, 7), "banded_gram")?.ok_or("no banded Gram matrix at 7")?;
    let farkas = match ok(
        non_membership(&m, 6, &SampleSchedule::default()),
        "non_membership",
    )? {
        NonMembership::Certificate(c, _) => c,
        NonMembership::Unknown(s) => {
            return Err(format!("search inconclusive after {} rounds", s.rounds))
        }
    };
    Ok((member, farkas))
}

fn motzkin_sandwich() -> Outcome {
    let m = base_motzkin();
    let start = Instant::now();
    ensure!(
        ok(banded_gram(&m, 6), "banded_gram")?.is_none(),
        "banded Gram matrix found at 6"
    );
    let (member, farkas) = motzkin_certificates()?;
    let certs = [Certificate::Member(member), Certificate::Nonmember(farkas)];
    for c in &certs {
        let v = verify_certificate(&m, c);
        ensure!(
            v.valid,
            "certificate at level {} rejected: {:?}",
            c.level(),
            v.reason
        );
    }
    consistent(&certs)?;
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    Ok("member of C_7, none in band 6, verified certificate outside C_6".into())
}

fn random_form(rng: &mut ChaCha8Rng) -> Form {
    let n = rng.random_range(1..=3);
    let d = rng.random_range(1..=3);
    let monomials = MonomialBasis::new(n, 2 * d).expect("valid shape");
    loop {
        let mut terms: Vec<(Exponent, Rat)> = Vec::new();
        for e in monomials.exponents() {
            if rng.random_bool(0.3) {
                terms.push((e.clone(), int(rng.random_range(-5..=5))));
            }
        }
        let f = Form::from_terms(n, 2 * d as u32, terms).expect("homogeneous");
        if !f.is_zero() {
            return f;
        }
    }
}

fn fiber_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut points = 0;
    for _ in 0..50 {
        let f = random_form(&mut rng);
        let basis = MonomialBasis::new(f.n(), f.degree() as usize / 2).expect("valid shape");
        let fiber = ok(gram_fiber(&f), "gram_fiber")?;
        for _ in 0..20 {
            let y: Vec<Rat> = (0..fiber.dimension())
                .map(|_| frac(rng.random_range(-9..=9), rng.random_range(1..=7)))
                .collect();
            let a = ok(fiber.point(&y), "point")?;
            let back = ok(gram_map(&a, &basis), "gram_map")?;
            ensure!(back == f, "G(A) != f for {f}");
            points += 1;
        }
    }
    Ok(format!("{points} fiber points"))
}

fn prefix_and_lift() -> Outcome {
    let mut ranks = 0;
    for n in 1..=3 {
        for d in 1..=4 {
            let lower = MonomialBasis::new(n, d).expect("valid shape");
            let upper = MonomialBasis::new(n, d + 1).expect("valid shape");
            for (j, e) in lower.exponents().iter().enumerate() {
                let r = ok(upper.rank(&e.with_added(0, 1)), "rank")?;
                ensure!(r == j, "({n},{d}): X_0 m_{j} has rank {r}");
                ranks += 1;
            }
        }
    }
    let mut lifts = 0;
    for n in 2..=3 {
        for d in 2..=4 {
            let Ok(records) = complete_set(n, d, Execution::default()) else {
                continue;
            };
            for r in records {
                let before = j_of(&ok(ok(analyze(&r.form), "analyze")?.circuit(), "circuit")?);
                let lifted = ok(r.form.mul_monomial_square(0), "lift")?;
                let after = j_of(&ok(ok(analyze(&lifted), "analyze")?.circuit(), "circuit")?);
                ensure!(
                    before == after,
                    "({n},{d}) level {}: j {before} became {after}",
                    r.level
                );
                lifts += 1;
            }
        }
    }
    Ok(format!("{ranks} prefix ranks, {lifts} lifts"))
}

fn degree_jump_consistency() -> Outcome {
    for level in 7..=11 {
        let rec = ok(degree_jump(2, 4, level), "degree_jump")?;
        ensure!(rec.level == level, "record level {}", rec.level);
        ensure!(
            rec == ok(separator(2, 4, level), "separator")?,
            "separator disagrees at {level}"
        );
        let cd = ok(ok(analyze(&rec.form), "analyze")?.circuit(), "circuit")?;
        ensure!(j_of(&cd) == level + 3, "level {level}: j = {}", j_of(&cd));
        if level == 11 {
            let expected = base_motzkin().mul_monomial_square(2).expect("in range");
            ensure!(rec.form == expected, "level 11 gave {}", rec.form);
        }
    }
    Ok("levels 7..=11, level 11 is X_2^2 M".into())
}

fn adversarial_certificates() -> Outcome {
    let m = base_motzkin();
    let (member, farkas) = motzkin_certificates()?;
    let sos = Form::from_int_terms(2, &[(&[6, 0, 0], 1), (&[0, 6, 0], 1), (&[0, 0, 6], 1)])
        .expect("well-formed");
    let lifted = m.mul_monomial_square(0).expect("in range");
    let e = base_choi_lam_quartic();
    let d = d_form();

    let mut cases: Vec<(&str, Form, Certificate)> = Vec::new();
    let mut far = |name, f: &Form, edit: &dyn Fn(&mut FarkasCertificate)| {
        let mut c = farkas.clone();
        edit(&mut c);
        cases.push((name, f.clone(), Certificate::Nonmember(c)));
    };
    far("negated multiplier", &m, &|c| {
        c.multipliers[0] = -c.multipliers[0].clone()
    });
    far("zero multipliers", &m, &|c| {
        c.multipliers.iter_mut().for_each(|x| *x = Rat::zero())
    });
    far("dropped multiplier", &m, &|c| {
        c.multipliers.pop();
    });
    far("short point", &m, &|c| {
        c.points[0].pop();
    });
    far("off-chart point", &m, &|c| c.points[0][0] = int(2));
    far("quadric violation", &m, &|c| c.points[0][3] += Rat::one());
    far("level raised past the member level", &m, &|c| c.level = 7);
    far("level out of range", &m, &|c| c.level = 100);
    far("wrong form: sum of squares", &sos, &|_| {});
    far(
        "wrong form: member of C_5",
        &base_choi_lam_sextic(),
        &|_| {},
    );
    far("wrong form: more variables", &d, &|_| {});
    far("wrong form: higher degree", &lifted, &|_| {});

    let mut mem = |name, f: &Form, edit: &dyn Fn(&mut MembershipCertificate)| {
        let mut c = member.clone();
        edit(&mut c);
        cases.push((name, f.clone(), Certificate::Member(c)));
    };
    mem("band lowered", &m, &|c| c.level = 6);
    mem("asymmetric entry", &m, &|c| {
        let v = c.gram.get(0, 1) + Rat::one();
        c.gram.set(0, 1, v);
    });
    mem("diagonal shifted", &m, &|c| {
        let v = c.gram.get(0, 0) + Rat::one();
        c.gram.set(0, 0, v);
    });
    mem("negated Gram matrix", &m, &|c| {
        let g = c.gram.add_scaled(&c.gram, &int(-2)).expect("same shape");
        c.gram = g;
    });
    mem("off-diagonal pair shifted", &m, &|c| {
        let v = c.gram.get(0, 1) + Rat::one();
        c.gram.set(0, 1, v.clone());
        c.gram.set(1, 0, v);
    });
    mem("wrong evidence", &m, &|c| c.psd = PsdEvidence::Strict);
    mem("wrong form: other shape", &e, &|_| {});
    mem("wrong form: more variables", &d, &|_| {});

    ensure!(cases.len() == 20, "{} mutations", cases.len());
    for (name, f, cert) in &cases {
        ensure!(
            !verify_certificate(f, cert).valid,
            "mutation accepted: {name}"
        );
    }
    ensure!(
        verify_certificate(&m, &Certificate::Nonmember(farkas)).valid,
        "original Farkas certificate rejected"
    );
    ensure!(
        verify_certificate(&m, &Certificate::Member(member)).valid,
        "original membership certificate rejected"
    );
    Ok("20 of 20 mutations rejected".into())
}

/// Exhaustive oracle: a nonempty polyhedron has a minimal face cut out by
/// making some linearly independent set of constraints tight.
fn oracle_feasible(cons: &[LinearConstraint], m: usize) -> bool {
    let rows = cons.len();
    (0u32..1 << rows).any(|mask| {
        let chosen: Vec<&LinearConstraint> = (0..rows)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| &cons[i])
            .collect();
        if chosen.len() > m {
            return false;
        }
        match tight_point(&chosen, m) {
            Some(y) => cons.iter().all(|c| !c.value(&y).is_negative()),
            None => false,
        }
    })
}

/// Solves `a·y = -c` on the chosen rows by elimination, free variables at zero.
fn tight_point(chosen: &[&LinearConstraint], m: usize) -> Option<Vec<Rat>> {
    let mut aug: Vec<Vec<Rat>> = chosen
        .iter()
        .map(|c| c.a.iter().cloned().chain([-c.c.clone()]).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..m {
        let Some(p) = (r..aug.len()).find(|&i| !aug[i][col].is_zero()) else {
            continue;
        };
        aug.swap(r, p);
        let inv = aug[r][col].recip();
        aug[r].iter_mut().for_each(|x| *x *= &inv);
        for i in 0..aug.len() {
            if i != r && !aug[i][col].is_zero() {
                let factor = aug[i][col].clone();
                let pivot_row = aug[r].clone();
                for (x, p) in aug[i].iter_mut().zip(&pivot_row) {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if aug[r..].iter().any(|row| !row[m].is_zero()) {
        return None;
    }
    let mut y = vec![Rat::zero(); m];
    for (i, &col) in pivots.iter().enumerate() {
        y[col] = aug[i][m].clone();
    }
    Some(y)
}

fn lp_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut feasible, mut infeasible) = (0, 0);
    for trial in 0..100 {
        let m = rng.random_range(1..=4);
        let rows = rng.random_range(1..=8);
        let cons: Vec<LinearConstraint> = (0..rows)
            .map(|_| {
                let a = (0..m).map(|_| int(rng.random_range(-3..=3))).collect();
                LinearConstraint::new(a, int(rng.random_range(-4..=2)))
            })
            .collect();
        let expected = oracle_feasible(&cons, m);
        match ok(lp_feasible(&cons), "lp_feasible")? {
            LpOutcome::Feasible(y) => {
                ensure!(
                    expected,
                    "trial {trial}: solver feasible, oracle infeasible"
                );
                ensure!(
                    cons.iter().all(|c| !c.value(&y).is_negative()),
                    "trial {trial}: witness violates"
                );
                feasible += 1;
            }
            LpOutcome::Infeasible(mu) => {
                ensure!(
                    !expected,
                    "trial {trial}: solver infeasible, oracle feasible"
                );
                ensure!(
                    mu.len() == cons.len() && mu.iter().all(|x| !x.is_negative()),
                    "trial {trial}: bad multipliers"
                );
                for col in 0..m {
                    let s = cons
                        .iter()
                        .zip(&mu)
                        .fold(Rat::zero(), |acc, (c, x)| acc + x * &c.a[col]);
                    ensure!(
                        s.is_zero(),
                        "trial {trial}: combination leaves column {col}"
                    );
                }
                let s = cons
                    .iter()
                    .zip(&mu)
                    .fold(Rat::zero(), |acc, (c, x)| acc + x * &c.c);
                ensure!(
                    s.is_negative(),
                    "trial {trial}: combined constant {s} not negative"
                );
                infeasible += 1;
            }
        }
    }
    ensure!(
        feasible > 0 && infeasible > 0,
        "{feasible} feasible, {infeasible} infeasible"
    );
    Ok(format!(
        "{feasible} feasible, {infeasible} infeasible, all agree"
    ))
}
