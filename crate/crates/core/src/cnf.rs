//! CNF formulas in the restricted form the reductions work with: every
//! clause is a nonempty set of literals over distinct variables, and the
//! variables used are exactly `1..=n`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::model::Selection;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    var: u64,
    positive: bool,
}

impl Literal {
    /// `None` for variable 0.
    pub fn new(var: u64, positive: bool) -> Option<Self> {
        (var >= 1).then_some(Literal { var, positive })
    }

    pub fn pos(var: u64) -> Self {
        Literal::new(var, true).expect("variable index must be positive")
    }

    pub fn neg(var: u64) -> Self {
        Literal::new(var, false).expect("variable index must be positive")
    }

    pub fn var(self) -> u64 {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negated(self) -> Self {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }

    /// Truth value under an assignment indexed by `var - 1`.
    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[(self.var - 1) as usize] == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("¬")?;
        }
        write!(f, "x{}", self.var)
    }
}

/// Literals sorted by variable, one per variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause(Vec<Literal>);

impl Clause {
    pub fn literals(&self) -> &[Literal] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.0.binary_search(&lit).is_ok()
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.0.iter().any(|l| l.eval(assignment))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("formula has no clauses")]
    NoClauses,
    #[error("clause {}: empty", .clause + 1)]
    EmptyClause { clause: usize },
    #[error("clause {}: literal {literal} repeated", .clause + 1)]
    DuplicateLiteral { clause: usize, literal: Literal },
    #[error("clause {}: contains x{var} and its negation", .clause + 1)]
    ComplementaryLiterals { clause: usize, var: u64 },
    #[error("variable x{var} exceeds the {n} distinct variables used")]
    VariableCountMismatch { var: u64, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    clauses: Vec<Clause>,
    num_vars: usize,
}

impl CnfFormula {
    /// Checks the clause conditions in clause order, then that the variables
    /// used are exactly `1..=n`.
    pub fn new(clauses: Vec<Vec<Literal>>) -> Result<Self, CnfError> {
        if clauses.is_empty() {
            return Err(CnfError::NoClauses);
        }
        let mut vars = BTreeSet::new();
        let mut out = Vec::with_capacity(clauses.len());
        for (j, mut lits) in clauses.into_iter().enumerate() {
            if lits.is_empty() {
                return Err(CnfError::EmptyClause { clause: j });
            }
            let mut seen = BTreeSet::new();
            for &lit in &lits {
                if seen.contains(&lit) {
                    return Err(CnfError::DuplicateLiteral {
                        clause: j,
                        literal: lit,
                    });
                }
                if seen.contains(&lit.negated()) {
                    return Err(CnfError::ComplementaryLiterals {
                        clause: j,
                        var: lit.var(),
                    });
                }
                seen.insert(lit);
            }
            lits.sort();
            vars.extend(lits.iter().map(|l| l.var()));
            out.push(Clause(lits));
        }
        let n = vars.len();
        if let Some(&var) = vars.iter().find(|&&v| v > n as u64) {
            return Err(CnfError::VariableCountMismatch { var, n });
        }
        Ok(CnfFormula {
            clauses: out,
            num_vars: n,
        })
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.num_vars
    }

    /// Number of clauses.
    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    /// # Panics
    ///
    /// If `assignment` has fewer than `n` entries.
    pub fn eval(&self, assignment: &[bool]) -> bool {
        assert!(assignment.len() >= self.num_vars, "assignment too short");
        self.clauses.iter().all(|c| c.eval(assignment))
    }

    /// Evaluates with `First` as true.
    pub fn eval_selection(&self, sigma: &Selection) -> bool {
        self.eval(&sigma.bits())
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, clause) in self.clauses.iter().enumerate() {
            if j > 0 {
                f.write_str(" ∧ ")?;
            }
            f.write_str("(")?;
            for (k, lit) in clause.literals().iter().enumerate() {
                if k > 0 {
                    f.write_str(" ∨ ")?;
                }
                write!(f, "{lit}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}
