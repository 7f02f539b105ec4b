//! `conefilt`: basis inspection, filtration profiles, classification,
//! separator generation, and certificate production and replay.
//!
//! Exit codes: 0 success, 1 verified negative, 2 unknown, 3 usage or domain error.
//! JSON goes to stdout, diagnostics to stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use conefilt::{
    banded_gram, complete_set, level_bounds, non_membership, profile, separator,
    verify_certificate, Certificate, Error, Execution, Form, MonomialBasis, NonMembership,
    SampleSchedule,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "conefilt",
    version,
    about = "Cone filtration between sums of squares and nonnegative forms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Size of the monomial basis, one exponent, or the whole ordered list.
    Basis {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, conflicts_with = "list")]
        rank: Option<usize>,
        #[arg(long)]
        list: bool,
    },
    /// Filtration profile: Hilbert flag, mu and the strict chain.
    Filtration {
        #[command(flatten)]
        shape: Shape,
    },
    /// Level of a nonnegative circuit form.
    Classify {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        assert_extremal: bool,
        #[arg(long)]
        assert_not_sos: bool,
    },
    /// Separating forms with provenance.
    Generate {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, conflicts_with = "complete")]
        level: Option<usize>,
        /// Every strict level (the default).
        #[arg(long)]
        complete: bool,
    },
    /// Produce a membership or non-membership certificate.
    Certify {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        level: usize,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Largest seeded tail exponent.
        #[arg(long, default_value_t = SampleSchedule::default().max_tail_exp)]
        max_tail_exp: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Replay a certificate against a form.
    Verify {
        #[arg(long)]
        certificate: PathBuf,
        #[arg(long)]
        form: PathBuf,
    },
}

#[derive(Args)]
struct Shape {
    /// Number of variables minus one.
    #[arg(long)]
    n: usize,
    /// Half degree.
    #[arg(long)]
    d: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Member,
    Nonmember,
}

const OK: u8 = 0;
const NEGATIVE: u8 = 1;
const UNKNOWN: u8 = 2;
const USAGE: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok((doc, code)) => {
            println!("{doc}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE)
        }
    }
}

fn run(command: Command) -> Result<(Value, u8), Error> {
    match command {
        Command::Basis { shape, rank, list } => {
            let basis = MonomialBasis::new(shape.n, shape.d)?;
            let mut doc = json!({ "n": shape.n, "d": shape.d, "k": basis.k() });
            if let Some(j) = rank {
                doc["rank"] = json!(j);
                doc["exponent"] = to_value(basis.unrank(j)?);
            } else if list {
                doc["exponents"] = to_value(basis.exponents());
            }
            Ok((doc, OK))
        }
        Command::Filtration { shape } => Ok((to_value(&profile(shape.n, shape.d)?), OK)),
        Command::Classify {
            form,
            assert_extremal,
            assert_not_sos,
        } => {
            let f = read_form(&form)?;
            Ok((
                to_value(&level_bounds(&f, assert_extremal, assert_not_sos)?),
                OK,
            ))
        }
        Command::Generate { shape, level, .. } => {
            let doc = match level {
                Some(i) => to_value(&separator(shape.n, shape.d, i)?),
                None => to_value(&complete_set(shape.n, shape.d, Execution::default())?),
            };
            Ok((doc, OK))
        }
        Command::Certify {
            form,
            level,
            mode,
            max_tail_exp,
            seed,
        } => {
            let f = read_form(&form)?;
            match mode {
                Mode::Member => match banded_gram(&f, level)? {
                    Some(cert) => Ok((to_value(&Certificate::Member(cert)), OK)),
                    None => Ok((
                        json!({ "status": "outside_band", "level": level }),
                        NEGATIVE,
                    )),
                },
                Mode::Nonmember => {
                    let schedule = SampleSchedule {
                        max_tail_exp,
                        seed,
                        ..SampleSchedule::default()
                    };
                    match non_membership(&f, level, &schedule)? {
                        NonMembership::Certificate(cert, summary) => {
                            eprintln!(
                                "certificate after {} rounds, {} points sampled",
                                summary.rounds, summary.points
                            );
                            Ok((to_value(&Certificate::Nonmember(cert)), OK))
                        }
                        NonMembership::Unknown(summary) => {
                            let mut doc = json!({ "status": "unknown", "level": level });
                            doc["search"] = to_value(&summary);
                            Ok((doc, UNKNOWN))
                        }
                    }
                }
            }
        }
        Command::Verify { certificate, form } => {
            let f = read_form(&form)?;
            let cert = Certificate::from_json(&read(&certificate)?)?;
            let v = verify_certificate(&f, &cert);
            let code = if v.valid { OK } else { NEGATIVE };
            Ok((to_value(&v), code))
        }
    }
}

fn to_value<T: serde::Serialize + ?Sized>(v: &T) -> Value {
    serde_json::to_value(v).expect("output types serialize")
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn read_form(path: &Path) -> Result<Form, Error> {
    Form::from_json(&read(path)?)
}
