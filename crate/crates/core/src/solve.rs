//! Exact decision procedures for satisfiability and covering existence.
//!
//! Enumeration order is fixed: position 1 is the most significant, and 1
//! (true, `First`) comes before 0. Every positive result carries a witness
//! that has been re-checked against the instance before returning.

use thiserror::Error;

use crate::cnf::{CnfFormula, Literal};
use crate::model::{Decomposition, Element, Selection, Side};

/// Largest number of enumerated positions the exhaustive procedures accept.
pub const GUARD_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("{n} positions to enumerate exceed the limit of {limit}")]
pub struct GuardLimitExceeded {
    pub n: usize,
    pub limit: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    /// Satisfiable, or a covering exists.
    Positive,
    /// Unsatisfiable, or no covering exists.
    Negative,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Assignments or selections examined (search nodes for DPLL).
    pub nodes: u64,
    /// Values fixed by inference rather than by enumeration or branching.
    pub inferences: u64,
    /// Set when the private-element rule proved infeasibility.
    pub infeasible_pair: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub decision: Decision,
    pub witness: Option<Selection>,
    pub stats: SolveStats,
}

impl SolveResult {
    pub fn is_positive(&self) -> bool {
        self.decision == Decision::Positive
    }

    fn positive(witness: Selection, stats: SolveStats) -> Self {
        SolveResult {
            decision: Decision::Positive,
            witness: Some(witness),
            stats,
        }
    }

    fn negative(stats: SolveStats) -> Self {
        SolveResult {
            decision: Decision::Negative,
            witness: None,
            stats,
        }
    }
}

fn guard(n: usize) -> Result<(), GuardLimitExceeded> {
    if n > GUARD_LIMIT {
        Err(GuardLimitExceeded {
            n,
            limit: GUARD_LIMIT,
        })
    } else {
        Ok(())
    }
}

/// Bits of the `k`-th vector of length `n` in 1-first lexicographic order.
fn lex_bits(k: u64, n: usize) -> impl Iterator<Item = bool> {
    (0..n).map(move |i| (k >> (n - 1 - i)) & 1 == 0)
}

/// Tries all `2^n` assignments in order.
pub fn sat_truthtable(f: &CnfFormula) -> Result<SolveResult, GuardLimitExceeded> {
    let n = f.n();
    guard(n)?;
    let mut stats = SolveStats::default();
    let mut assignment = vec![false; n];
    for k in 0..1u64 << n {
        stats.nodes += 1;
        for (slot, bit) in assignment.iter_mut().zip(lex_bits(k, n)) {
            *slot = bit;
        }
        if f.eval(&assignment) {
            return Ok(SolveResult::positive(
                Selection::from_bits(assignment),
                stats,
            ));
        }
    }
    Ok(SolveResult::negative(stats))
}

/// DPLL with unit propagation and pure-literal elimination. Branches on the
/// lowest-indexed open variable, trying true first. Variables left open in
/// the final state are reported as true.
pub fn sat_dpll(f: &CnfFormula) -> SolveResult {
    let mut solver = Dpll {
        clauses: f.clauses().iter().map(|c| c.literals()).collect(),
        assign: vec![None; f.n()],
        trail: Vec::new(),
        stats: SolveStats::default(),
    };
    if solver.search() {
        let witness = Selection::from_bits(solver.assign.iter().map(|v| v.unwrap_or(true)));
        assert!(
            f.eval_selection(&witness),
            "DPLL witness does not satisfy the formula"
        );
        SolveResult::positive(witness, solver.stats)
    } else {
        SolveResult::negative(solver.stats)
    }
}

struct Dpll<'a> {
    clauses: Vec<&'a [Literal]>,
    assign: Vec<Option<bool>>,
    trail: Vec<usize>,
    stats: SolveStats,
}

enum ClauseState {
    Satisfied,
    Falsified,
    Unit(Literal),
    Open,
}

impl Dpll<'_> {
    fn value(&self, lit: Literal) -> Option<bool> {
        self.assign[(lit.var() - 1) as usize].map(|v| v == lit.is_positive())
    }

    fn set(&mut self, lit: Literal) {
        let v = (lit.var() - 1) as usize;
        debug_assert!(self.assign[v].is_none());
        self.assign[v] = Some(lit.is_positive());
        self.trail.push(v);
    }

    fn undo(&mut self, mark: usize) {
        for v in self.trail.drain(mark..) {
            self.assign[v] = None;
        }
    }

    fn state(&self, clause: &[Literal]) -> ClauseState {
        let mut open = None;
        let mut open_count = 0;
        for &lit in clause {
            match self.value(lit) {
                Some(true) => return ClauseState::Satisfied,
                Some(false) => {}
                None => {
                    open_count += 1;
                    open = Some(lit);
                }
            }
        }
        match (open_count, open) {
            (0, _) => ClauseState::Falsified,
            (1, Some(lit)) => ClauseState::Unit(lit),
            _ => ClauseState::Open,
        }
    }

    /// Unit propagation and pure-literal elimination to a fixpoint. Returns
    /// false on conflict.
    fn simplify(&mut self) -> bool {
        loop {
            let mut changed = false;
            for c in 0..self.clauses.len() {
                match self.state(self.clauses[c]) {
                    ClauseState::Falsified => return false,
                    ClauseState::Unit(lit) => {
                        self.set(lit);
                        self.stats.inferences += 1;
                        changed = true;
                    }
                    ClauseState::Satisfied | ClauseState::Open => {}
                }
            }
            if changed {
                continue;
            }

            // bit 0: seen positive, bit 1: seen negative
            let mut polarity = vec![0u8; self.assign.len()];
            for clause in &self.clauses {
                if matches!(self.state(clause), ClauseState::Satisfied) {
                    continue;
                }
                for &lit in clause.iter() {
                    if self.value(lit).is_none() {
                        polarity[(lit.var() - 1) as usize] |= if lit.is_positive() { 1 } else { 2 };
                    }
                }
            }
            for (v, &p) in polarity.iter().enumerate() {
                if p == 1 || p == 2 {
                    self.set(Literal::new(v as u64 + 1, p == 1).expect("positive"));
                    self.stats.inferences += 1;
                    changed = true;
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn search(&mut self) -> bool {
        self.stats.nodes += 1;
        let mark = self.trail.len();
        if !self.simplify() {
            self.undo(mark);
            return false;
        }
        let branch = self
            .clauses
            .iter()
            .filter(|c| !matches!(self.state(c), ClauseState::Satisfied))
            .flat_map(|c| c.iter().copied())
            .filter(|&l| self.value(l).is_none())
            .map(|l| l.var())
            .min();
        let Some(var) = branch else {
            return true;
        };
        for value in [true, false] {
            let inner = self.trail.len();
            self.set(Literal::new(var, value).expect("positive"));
            if self.search() {
                return true;
            }
            self.undo(inner);
        }
        self.undo(mark);
        false
    }
}

/// Blocks as bitsets over the dense rank of each ground element.
struct DenseBlocks {
    words: usize,
    full: Vec<u64>,
    /// `blocks[i][0]` is the first block of pair `i`, `blocks[i][1]` the second.
    blocks: Vec<[Vec<u64>; 2]>,
}

impl DenseBlocks {
    fn new(d: &Decomposition) -> Self {
        let ground: Vec<Element> = d.ground().iter().collect();
        let words = ground.len().div_ceil(64);
        let mask = |block: &std::collections::BTreeSet<Element>| {
            let mut bits = vec![0u64; words];
            for e in block {
                let r = ground
                    .binary_search(e)
                    .expect("block element is in the ground set");
                bits[r / 64] |= 1 << (r % 64);
            }
            bits
        };
        let mut full = vec![0u64; words];
        for r in 0..ground.len() {
            full[r / 64] |= 1 << (r % 64);
        }
        DenseBlocks {
            words,
            full,
            blocks: d
                .pairs()
                .iter()
                .map(|p| [mask(&p.first), mask(&p.second)])
                .collect(),
        }
    }

    fn covers(&self, choices: &[Side], scratch: &mut [u64]) -> bool {
        scratch.fill(0);
        for (pair, side) in self.blocks.iter().zip(choices) {
            let block = &pair[usize::from(*side == Side::Second)];
            for (acc, w) in scratch.iter_mut().zip(block) {
                *acc |= w;
            }
        }
        scratch == self.full.as_slice()
    }
}

/// Enumerates choices for the `free` pairs in order, with the other pairs
/// held at `fixed`.
fn enumerate_coverings(
    d: &Decomposition,
    fixed: &[Option<Side>],
    stats: &mut SolveStats,
) -> Option<Selection> {
    let dense = DenseBlocks::new(d);
    let free: Vec<usize> = (0..d.n()).filter(|&i| fixed[i].is_none()).collect();
    let mut choices: Vec<Side> = fixed.iter().map(|s| s.unwrap_or(Side::First)).collect();
    let mut scratch = vec![0u64; dense.words];
    for k in 0..1u64 << free.len() {
        stats.nodes += 1;
        for (&i, bit) in free.iter().zip(lex_bits(k, free.len())) {
            choices[i] = Side::from_bit(bit);
        }
        if dense.covers(&choices, &mut scratch) {
            let s = Selection::new(choices);
            assert!(d.is_covering(&s), "enumerated covering does not re-verify");
            return Some(s);
        }
    }
    None
}

/// Tries all `2^n` selections in order.
pub fn cover_bruteforce(d: &Decomposition) -> Result<SolveResult, GuardLimitExceeded> {
    guard(d.n())?;
    let mut stats = SolveStats::default();
    Ok(
        match enumerate_coverings(d, &vec![None; d.n()], &mut stats) {
            Some(s) => SolveResult::positive(s, stats),
            None => SolveResult::negative(stats),
        },
    )
}

/// Applies the private-element rule once, then enumerates only the pairs it
/// left open. The guard limit applies to the open pairs.
pub fn cover_inferred(d: &Decomposition) -> Result<SolveResult, GuardLimitExceeded> {
    let outcome = d.infer_forced();
    let mut stats = SolveStats {
        inferences: outcome.forced.len() as u64,
        ..SolveStats::default()
    };
    if let Some(pair) = outcome.infeasible {
        stats.infeasible_pair = Some(pair);
        return Ok(SolveResult::negative(stats));
    }
    let fixed: Vec<Option<Side>> = (0..d.n()).map(|i| outcome.forced_side(i)).collect();
    guard(fixed.iter().filter(|s| s.is_none()).count())?;
    Ok(match enumerate_coverings(d, &fixed, &mut stats) {
        Some(s) => SolveResult::positive(s, stats),
        None => SolveResult::negative(stats),
    })
}

/// Reads a covering of a forward-reduced decomposition as a truth
/// assignment. Choosing the first block of pair `i` means `x_i` is true, so
/// this is the identity.
pub fn covering_to_assignment(s: &Selection) -> Selection {
    s.clone()
}
