//! Randomized check that both reductions preserve the answer.
//!
//! For each instance index the harness draws one formula and one
//! decomposition and checks:
//!
//! - forward: the reduced string parses back, truth-table satisfiability
//!   equals covering existence, assignments and coverings coincide pointwise
//!   (for small `n`), and any covering normalizes to an all-first covering;
//! - backward: the same, starting from the decomposition;
//! - roundtrip: reducing there and back returns the input, and both string
//!   encodings parse back to the same value.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::cnf::CnfFormula;
use crate::codec::{parse_cnf, parse_decomp, serialize_cnf, serialize_decomp};
use crate::generate::{random_cnf, random_decomposition, rng_from_seed};
use crate::model::{Decomposition, Selection, Side};
use crate::reduce::{r1_total, r2_total, t1_forward, t2_backward};
use crate::solve::{cover_bruteforce, sat_truthtable, GUARD_LIMIT};

/// Largest `n` for which every assignment is compared against every selection.
pub const POINTWISE_LIMIT: usize = 10;

/// Deliberate corruption of the forward reduction, for checking that the
/// harness notices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Swap the two blocks of the first pair of every forward image.
    SwapFirstPair,
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub count: usize,
    pub seed: u64,
    pub n_max: usize,
    pub m_max: usize,
    pub fault: Option<Fault>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyConfigError {
    #[error("n-max and m-max must be at least 1")]
    ZeroLimit,
    #[error("n-max {0} exceeds the solver limit of {GUARD_LIMIT}")]
    OverGuard(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Forward,
    Backward,
    Roundtrip,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Forward => "forward",
            Property::Backward => "backward",
            Property::Roundtrip => "roundtrip",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub index: usize,
    pub property: Property,
    /// The offending instance in the text encoding, for replay.
    pub instance: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub count: usize,
    pub forward_passed: usize,
    pub backward_passed: usize,
    pub roundtrip_passed: usize,
    pub failures: Vec<Failure>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> String {
        format!(
            "{}/{n} forward, {}/{n} backward, {}/{n} roundtrip",
            self.forward_passed,
            self.backward_passed,
            self.roundtrip_passed,
            n = self.count
        )
    }
}

struct Harness {
    fault: Option<Fault>,
}

impl Harness {
    fn forward(&self, f: &CnfFormula) -> Decomposition {
        let d = t1_forward(f);
        match self.fault {
            None => d,
            Some(Fault::SwapFirstPair) => d.i_transform(&[0]).expect("pair 0 exists"),
        }
    }

    fn check_forward(&self, f: &CnfFormula) -> Result<(), String> {
        let text = serialize_cnf(f);
        let reduced = r1_total(text.as_bytes());
        let Some(expected) = reduced.value() else {
            return Err("valid formula reduced to the sentinel".into());
        };
        let d = self.forward(f);
        if &d != expected {
            return Err("forward image differs from the string-level reduction".into());
        }
        let image = serialize_decomp(&d);
        if parse_decomp(image.as_bytes()).as_ref() != Ok(&d) {
            return Err(format!(
                "image {image} is not recognized as a decomposition"
            ));
        }
        let sat = sat_truthtable(f).map_err(|e| e.to_string())?;
        let cover = cover_bruteforce(&d).map_err(|e| e.to_string())?;
        if sat.decision != cover.decision {
            return Err(format!(
                "satisfiable={} but covering exists={}",
                sat.is_positive(),
                cover.is_positive()
            ));
        }
        if f.n() <= POINTWISE_LIMIT {
            pointwise(f, &d)?;
        }
        if let Some(s) = &cover.witness {
            normalizes(&d, s)?;
        }
        Ok(())
    }

    fn check_backward(&self, d: &Decomposition) -> Result<(), String> {
        let text = serialize_decomp(d);
        let reduced = r2_total(text.as_bytes());
        let Some(f) = reduced.value() else {
            return Err("valid decomposition reduced to the sentinel".into());
        };
        if f != &t2_backward(d) {
            return Err("backward image differs from the string-level reduction".into());
        }
        let image = serialize_cnf(f);
        if parse_cnf(image.as_bytes()).as_ref() != Ok(f) {
            return Err(format!("image {image} is not recognized as a formula"));
        }
        let cover = cover_bruteforce(d).map_err(|e| e.to_string())?;
        let sat = sat_truthtable(f).map_err(|e| e.to_string())?;
        if sat.decision != cover.decision {
            return Err(format!(
                "covering exists={} but satisfiable={}",
                cover.is_positive(),
                sat.is_positive()
            ));
        }
        if d.n() <= POINTWISE_LIMIT {
            pointwise(f, d)?;
        }
        if let Some(s) = &cover.witness {
            normalizes(d, s)?;
        }
        Ok(())
    }

    fn check_roundtrip(&self, f: &CnfFormula, d: &Decomposition) -> Result<(), String> {
        if &t2_backward(&self.forward(f)) != f {
            return Err("formula -> decomposition -> formula changed the formula".into());
        }
        if &self.forward(&t2_backward(d)) != d {
            return Err(
                "decomposition -> formula -> decomposition changed the decomposition".into(),
            );
        }
        if parse_cnf(serialize_cnf(f).as_bytes()).as_ref() != Ok(f) {
            return Err("formula text does not parse back".into());
        }
        if parse_decomp(serialize_decomp(d).as_bytes()).as_ref() != Ok(d) {
            return Err("decomposition text does not parse back".into());
        }
        Ok(())
    }
}

/// Every bit vector satisfies `f` exactly when it covers `d`.
fn pointwise(f: &CnfFormula, d: &Decomposition) -> Result<(), String> {
    let n = d.n();
    for k in 0..1u64 << n {
        let s = Selection::from_bits((0..n).map(|i| (k >> i) & 1 == 1));
        if f.eval_selection(&s) != d.is_covering(&s) {
            return Err(format!(
                "selection {s}: satisfies={} covers={}",
                f.eval_selection(&s),
                d.is_covering(&s)
            ));
        }
    }
    Ok(())
}

fn normalizes(d: &Decomposition, s: &Selection) -> Result<(), String> {
    let (flipped, all_first) = d
        .normalize_to_alpha(s)
        .map_err(|_| format!("witness {s} is not a covering"))?;
    if all_first.iter().any(|side| side != Side::First) || !flipped.is_covering(&all_first) {
        return Err(format!(
            "normalizing witness {s} did not give an all-first covering"
        ));
    }
    Ok(())
}

pub fn run_verify(config: &VerifyConfig) -> Result<VerifyReport, VerifyConfigError> {
    if config.n_max == 0 || config.m_max == 0 {
        return Err(VerifyConfigError::ZeroLimit);
    }
    if config.n_max > GUARD_LIMIT {
        return Err(VerifyConfigError::OverGuard(config.n_max));
    }
    let harness = Harness {
        fault: config.fault,
    };
    let mut rng = rng_from_seed(config.seed);
    let mut report = VerifyReport {
        count: config.count,
        ..VerifyReport::default()
    };
    for index in 0..config.count {
        let (n, m) = (
            rng.random_range(1..=config.n_max),
            rng.random_range(1..=config.m_max),
        );
        let f = random_cnf(&mut rng, n, m).expect("limits are positive");
        let (n, m) = (
            rng.random_range(1..=config.n_max),
            rng.random_range(1..=config.m_max),
        );
        let d = random_decomposition(&mut rng, n, m).expect("limits are positive");

        let checks = [
            (
                Property::Forward,
                serialize_cnf(&f),
                harness.check_forward(&f),
            ),
            (
                Property::Backward,
                serialize_decomp(&d),
                harness.check_backward(&d),
            ),
            (
                Property::Roundtrip,
                format!("{} {}", serialize_cnf(&f), serialize_decomp(&d)),
                harness.check_roundtrip(&f, &d),
            ),
        ];
        for (property, instance, result) in checks {
            match result {
                Ok(()) => match property {
                    Property::Forward => report.forward_passed += 1,
                    Property::Backward => report.backward_passed += 1,
                    Property::Roundtrip => report.roundtrip_passed += 1,
                },
                Err(detail) => report.failures.push(Failure {
                    index,
                    property,
                    instance,
                    detail,
                }),
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(count: usize, fault: Option<Fault>) -> VerifyConfig {
        VerifyConfig {
            count,
            seed: 42,
            n_max: 6,
            m_max: 8,
            fault,
        }
    }

    #[test]
    fn clean_run_passes() {
        let report = run_verify(&config(50, None)).unwrap();
        assert!(report.all_passed(), "{:?}", report.failures);
        assert_eq!(
            report.summary(),
            "50/50 forward, 50/50 backward, 50/50 roundtrip"
        );
    }

    #[test]
    fn injected_fault_is_caught() {
        let report = run_verify(&config(20, Some(Fault::SwapFirstPair))).unwrap();
        assert!(!report.all_passed());
        assert_eq!(report.roundtrip_passed, 0);
        // the forward image no longer matches the string-level reduction
        assert_eq!(report.forward_passed, 0);
    }

    #[test]
    fn empty_run_is_vacuous() {
        let report = run_verify(&config(0, None)).unwrap();
        assert!(report.all_passed());
        assert_eq!(report.summary(), "0/0 forward, 0/0 backward, 0/0 roundtrip");
    }

    #[test]
    fn reproducible() {
        let a = run_verify(&config(10, Some(Fault::SwapFirstPair))).unwrap();
        let b = run_verify(&config(10, Some(Fault::SwapFirstPair))).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn limits_checked() {
        let mut c = config(1, None);
        c.n_max = 21;
        assert_eq!(run_verify(&c), Err(VerifyConfigError::OverGuard(21)));
        c.n_max = 0;
        assert_eq!(run_verify(&c), Err(VerifyConfigError::ZeroLimit));
    }
}
