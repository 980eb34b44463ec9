//! The two reductions between CNF satisfiability and special coverings.
//!
//! Forward: clause `j` becomes element `e_j`; variable `i` becomes pair
//! `i`, whose first block holds the clauses containing `x_i` and whose second
//! block holds the clauses containing `¬x_i`. An assignment satisfies the
//! formula iff the same bit vector, read as a block selection, is a covering.
//!
//! Backward: element `e` becomes a clause holding `x_j` when `e` is in the
//! first block of pair `j` and `¬x_j` when it is in the second block.

use std::collections::BTreeSet;

use crate::cnf::{CnfFormula, Literal};
use crate::codec::{self, ParseError, SENTINEL};
use crate::model::{BlockPair, Decomposition, Element};

/// Forward reduction. The result has one pair per variable and one element
/// per clause.
pub fn t1_forward(f: &CnfFormula) -> Decomposition {
    let mut pairs = vec![BlockPair::new(BTreeSet::new(), BTreeSet::new()); f.n()];
    for (j, clause) in f.clauses().iter().enumerate() {
        let e = Element::new(j as u64 + 1).expect("positive");
        for lit in clause.literals() {
            let pair = &mut pairs[(lit.var() - 1) as usize];
            if lit.is_positive() {
                pair.first.insert(e);
            } else {
                pair.second.insert(e);
            }
        }
    }
    Decomposition::from_pairs(pairs).expect("every variable of a valid formula occurs")
}

/// Backward reduction. Clause `k` corresponds to the `k`-th smallest ground
/// element; duplicate clauses are kept.
pub fn t2_backward(d: &Decomposition) -> CnfFormula {
    let ground: Vec<Element> = d.ground().iter().collect();
    let mut clauses: Vec<Vec<Literal>> = vec![Vec::new(); ground.len()];
    for (j, pair) in d.pairs().iter().enumerate() {
        for (block, positive) in [(&pair.first, true), (&pair.second, false)] {
            for e in block {
                let k = ground
                    .binary_search(e)
                    .expect("block element is in the ground set");
                clauses[k].push(Literal::new(j as u64 + 1, positive).expect("positive"));
            }
        }
    }
    CnfFormula::new(clauses).expect("a valid decomposition yields a valid formula")
}

/// Renames ground elements to `e_1..e_m` preserving their order. This is the
/// identification under which `t1_forward(t2_backward(d)) == d`.
pub fn compact_elements(d: &Decomposition) -> Decomposition {
    let ground: Vec<Element> = d.ground().iter().collect();
    let rank = |e: &Element| {
        let k = ground
            .binary_search(e)
            .expect("block element is in the ground set") as u64;
        Element::new(k + 1).expect("positive")
    };
    let pairs = d
        .pairs()
        .iter()
        .map(|p| {
            BlockPair::new(
                p.first.iter().map(rank).collect(),
                p.second.iter().map(rank).collect(),
            )
        })
        .collect();
    Decomposition::from_pairs(pairs).expect("renaming preserves validity")
}

/// Result of a total reduction: the reduced value, or the sentinel when the
/// input string was not in the source language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionOutput<T> {
    Reduced(T),
    Sentinel(ParseError),
}

impl<T> ReductionOutput<T> {
    pub fn is_sentinel(&self) -> bool {
        matches!(self, ReductionOutput::Sentinel(_))
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            ReductionOutput::Reduced(v) => Some(v),
            ReductionOutput::Sentinel(_) => None,
        }
    }
}

impl ReductionOutput<Decomposition> {
    pub fn render(&self) -> String {
        match self {
            ReductionOutput::Reduced(d) => codec::serialize_decomp(d),
            ReductionOutput::Sentinel(_) => SENTINEL.to_string(),
        }
    }
}

impl ReductionOutput<CnfFormula> {
    pub fn render(&self) -> String {
        match self {
            ReductionOutput::Reduced(f) => codec::serialize_cnf(f),
            ReductionOutput::Sentinel(_) => SENTINEL.to_string(),
        }
    }
}

/// Forward reduction on strings; total.
pub fn r1_total(text: &[u8]) -> ReductionOutput<Decomposition> {
    match codec::parse_cnf(text) {
        Ok(f) => ReductionOutput::Reduced(t1_forward(&f)),
        Err(e) => ReductionOutput::Sentinel(e),
    }
}

/// Backward reduction on strings; total.
pub fn r2_total(text: &[u8]) -> ReductionOutput<CnfFormula> {
    match codec::parse_decomp(text) {
        Ok(d) => ReductionOutput::Reduced(t2_backward(&d)),
        Err(e) => ReductionOutput::Sentinel(e),
    }
}
