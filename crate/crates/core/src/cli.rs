//! Command-line front end.
//!
//! Exit codes: 0 success or positive answer, 1 negative answer or failed
//! verification, 2 rejected input or bad usage, 3 instance beyond the
//! solver limit. The first line on standard output starts with a verdict
//! word.

use std::fs;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};

use crate::codec::{
    parse_cnf, parse_decomp, serialize_cnf, serialize_decomp, Check, InputKind, ParseError,
};
use crate::generate::{random_cnf, random_decomposition, rng_from_seed};
use crate::reduce::{r1_total, r2_total, ReductionOutput};
use crate::solve::{
    cover_bruteforce, cover_inferred, sat_dpll, sat_truthtable, GuardLimitExceeded, SolveResult,
};
use crate::verify::{run_verify, Fault, VerifyConfig, VerifyConfigError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_REJECTED: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "spcover",
    version,
    about = "Special coverings, CNF satisfiability, and reductions between them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a string is a well-formed formula or decomposition
    Validate {
        /// Override kind detection
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        /// Inline string, or @path to read it from a file
        input: String,
    },
    /// Reduce a formula to a decomposition or back
    Reduce {
        #[arg(long = "dir", value_enum)]
        direction: Direction,
        input: String,
    },
    /// Decide satisfiability or covering existence
    Solve {
        #[arg(long, value_enum)]
        engine: Engine,
        input: String,
    },
    /// Check the reductions on random instances
    Verify {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "n-max", default_value_t = 8)]
        n_max: usize,
        #[arg(long = "m-max", default_value_t = 12)]
        m_max: usize,
        /// Corrupt the forward reduction to check that failures are reported
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Print a random valid instance
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Cnf,
    Decomp,
}

impl From<Kind> for InputKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Cnf => InputKind::Cnf,
            Kind::Decomp => InputKind::Decomp,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Direction {
    Cnf2dec,
    Dec2cnf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Engine {
    Truthtable,
    Dpll,
    Brute,
    Inferred,
}

fn check_name(c: Check) -> &'static str {
    match c {
        Check::Structure => "structure",
        Check::Clause => "clause condition",
        Check::VariableCount => "variable count",
        Check::Pair => "pair condition",
    }
}

fn rejection(kind: InputKind, e: &ParseError) -> String {
    format!("INVALID {kind} {e} [{}]", check_name(e.check()))
}

/// Reads `@path` inputs, dropping one trailing line break.
fn load_input(input: &str) -> std::io::Result<Vec<u8>> {
    match input.strip_prefix('@') {
        Some(path) => {
            let mut bytes = fs::read(path)?;
            if bytes.last() == Some(&b'\n') {
                bytes.pop();
                if bytes.last() == Some(&b'\r') {
                    bytes.pop();
                }
            }
            Ok(bytes)
        }
        None => Ok(input.as_bytes().to_vec()),
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_REJECTED
            } else {
                EXIT_OK
            };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_REJECTED
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    match command {
        Command::Validate { kind, input } => {
            let text = load_input(&input)?;
            let Some(kind) = kind
                .map(InputKind::from)
                .or_else(|| InputKind::detect(&text))
            else {
                writeln!(
                    out,
                    "INVALID unrecognized input: expected a leading 'x', 'e' or '~'"
                )?;
                return Ok(EXIT_REJECTED);
            };
            let parsed = match kind {
                InputKind::Cnf => parse_cnf(&text).map(|f| (f.n(), f.m())),
                InputKind::Decomp => parse_decomp(&text).map(|d| (d.n(), d.m())),
            };
            match parsed {
                Ok((n, m)) => {
                    writeln!(out, "{kind} n={n} m={m}")?;
                    Ok(EXIT_OK)
                }
                Err(e) => {
                    writeln!(out, "{}", rejection(kind, &e))?;
                    Ok(EXIT_REJECTED)
                }
            }
        }
        Command::Reduce { direction, input } => {
            let text = load_input(&input)?;
            let (rendered, rejected) = match direction {
                Direction::Cnf2dec => {
                    let r = r1_total(&text);
                    (r.render(), sentinel_reason(&r))
                }
                Direction::Dec2cnf => {
                    let r = r2_total(&text);
                    (r.render(), sentinel_reason(&r))
                }
            };
            writeln!(out, "{rendered}")?;
            match rejected {
                Some(reason) => {
                    writeln!(err, "rejected: {reason}")?;
                    Ok(EXIT_REJECTED)
                }
                None => Ok(EXIT_OK),
            }
        }
        Command::Solve { engine, input } => {
            let text = load_input(&input)?;
            solve(engine, &text, out)
        }
        Command::Verify {
            count,
            seed,
            n_max,
            m_max,
            inject_fault,
        } => {
            if count == 0 {
                writeln!(err, "warning: count is 0, nothing was checked")?;
            }
            let config = VerifyConfig {
                count,
                seed,
                n_max,
                m_max,
                fault: inject_fault.then_some(Fault::SwapFirstPair),
            };
            let report = match run_verify(&config) {
                Ok(r) => r,
                Err(e) => {
                    writeln!(out, "LIMIT {e}")?;
                    return Ok(match e {
                        VerifyConfigError::OverGuard(_) => EXIT_LIMIT,
                        VerifyConfigError::ZeroLimit => EXIT_REJECTED,
                    });
                }
            };
            let verdict = if report.all_passed() { "PASS" } else { "FAIL" };
            writeln!(out, "{verdict} {}", report.summary())?;
            for f in &report.failures {
                writeln!(out, "{} #{}: {}", f.property, f.index, f.instance)?;
                writeln!(err, "{} #{}: {}", f.property, f.index, f.detail)?;
            }
            Ok(if report.all_passed() {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            })
        }
        Command::Gen { kind, seed, n, m } => {
            let mut rng = rng_from_seed(seed);
            let text = match kind {
                Kind::Cnf => random_cnf(&mut rng, n, m).map(|f| serialize_cnf(&f)),
                Kind::Decomp => random_decomposition(&mut rng, n, m).map(|d| serialize_decomp(&d)),
            };
            match text {
                Ok(t) => {
                    writeln!(out, "{t}")?;
                    Ok(EXIT_OK)
                }
                Err(e) => {
                    writeln!(out, "INVALID {e}")?;
                    Ok(EXIT_REJECTED)
                }
            }
        }
    }
}

fn sentinel_reason<T>(r: &ReductionOutput<T>) -> Option<String> {
    match r {
        ReductionOutput::Sentinel(e) => Some(e.to_string()),
        ReductionOutput::Reduced(_) => None,
    }
}

fn solve(engine: Engine, text: &[u8], out: &mut dyn Write) -> std::io::Result<i32> {
    let (yes, no, result): (&str, &str, Result<SolveResult, GuardLimitExceeded>) = match engine {
        Engine::Truthtable | Engine::Dpll => {
            let f = match parse_cnf(text) {
                Ok(f) => f,
                Err(e) => {
                    writeln!(out, "{}", rejection(InputKind::Cnf, &e))?;
                    return Ok(EXIT_REJECTED);
                }
            };
            let result = match engine {
                Engine::Truthtable => sat_truthtable(&f),
                _ => Ok(sat_dpll(&f)),
            };
            if let Ok(SolveResult {
                witness: Some(w), ..
            }) = &result
            {
                assert!(f.eval_selection(w), "witness does not satisfy the formula");
            }
            ("SAT", "UNSAT", result)
        }
        Engine::Brute | Engine::Inferred => {
            let d = match parse_decomp(text) {
                Ok(d) => d,
                Err(e) => {
                    writeln!(out, "{}", rejection(InputKind::Decomp, &e))?;
                    return Ok(EXIT_REJECTED);
                }
            };
            let result = match engine {
                Engine::Brute => cover_bruteforce(&d),
                _ => cover_inferred(&d),
            };
            if let Ok(SolveResult {
                witness: Some(w), ..
            }) = &result
            {
                assert!(d.is_covering(w), "witness is not a covering");
            }
            ("COVER", "NO-COVERING", result)
        }
    };
    match result {
        Ok(SolveResult {
            witness: Some(w), ..
        }) => {
            writeln!(out, "{yes} {w}")?;
            Ok(EXIT_OK)
        }
        Ok(_) => {
            writeln!(out, "{no}")?;
            Ok(EXIT_NEGATIVE)
        }
        Err(e) => {
            writeln!(out, "LIMIT {e}")?;
            Ok(EXIT_LIMIT)
        }
    }
}
