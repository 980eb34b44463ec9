//! Independent oracles shared by the integration suites. Nothing here calls
//! the solvers or the recognizers under test.

#![allow(dead_code)]

use std::collections::BTreeSet;

use spcover::{CnfFormula, Decomposition};

/// Plain components of a decomposition: (first, second) element indices.
pub type RawPairs = Vec<(BTreeSet<u64>, BTreeSet<u64>)>;

pub fn raw_pairs(d: &Decomposition) -> RawPairs {
    d.pairs()
        .iter()
        .map(|p| {
            (
                p.first.iter().map(|e| e.index()).collect(),
                p.second.iter().map(|e| e.index()).collect(),
            )
        })
        .collect()
}

/// Clauses as signed variable indices, e.g. `[[1, -2], [2]]`.
pub fn raw_clauses(f: &CnfFormula) -> Vec<BTreeSet<i64>> {
    f.clauses()
        .iter()
        .map(|c| {
            c.literals()
                .iter()
                .map(|l| {
                    if l.is_positive() {
                        l.var() as i64
                    } else {
                        -(l.var() as i64)
                    }
                })
                .collect()
        })
        .collect()
}

/// Bit `i` of `mask` set means pair `i` takes its first component.
pub fn covers_by_union(pairs: &RawPairs, mask: u64) -> bool {
    let ground: BTreeSet<u64> = pairs
        .iter()
        .flat_map(|(a, b)| a.iter().chain(b))
        .copied()
        .collect();
    let mut union = BTreeSet::new();
    for (i, (a, b)) in pairs.iter().enumerate() {
        union.extend(if mask >> i & 1 == 1 { a } else { b });
    }
    union == ground
}

/// All covering masks, by direct set union.
pub fn all_coverings(pairs: &RawPairs) -> Vec<u64> {
    (0..1u64 << pairs.len())
        .filter(|&m| covers_by_union(pairs, m))
        .collect()
}

/// Bit `v - 1` of `mask` is the value of variable `v`.
pub fn satisfies(clauses: &[BTreeSet<i64>], mask: u64) -> bool {
    clauses.iter().all(|c| {
        c.iter().any(|&l| {
            let value = mask >> (l.unsigned_abs() - 1) & 1 == 1;
            value == (l > 0)
        })
    })
}

pub fn satisfiable(clauses: &[BTreeSet<i64>], n: usize) -> bool {
    (0..1u64 << n).any(|m| satisfies(clauses, m))
}

pub fn mask_of(bits: &[bool]) -> u64 {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | (u64::from(b) << i))
}

fn binary_index(s: &str) -> Option<u64> {
    if !s.starts_with('1') || !s.bytes().all(|b| b == b'0' || b == b'1') {
        return None;
    }
    u64::from_str_radix(s, 2).ok()
}

/// Definition-level check of the formula language. Returns the clauses as
/// signed indices when the string is a member.
pub fn slow_cnf(s: &[u8]) -> Option<Vec<BTreeSet<i64>>> {
    let s = std::str::from_utf8(s).ok()?;
    let mut clauses = Vec::new();
    for clause in s.split('*') {
        if clause.is_empty() {
            return None;
        }
        let mut lits = BTreeSet::new();
        for lit in clause.split(',') {
            let (sign, index) = match lit.strip_prefix("x1.") {
                Some(rest) => (1, rest),
                None => (-1, lit.strip_prefix("x0.")?),
            };
            let v = binary_index(index)? as i64;
            if v > i64::MAX / 2 || !lits.insert(sign * v) || lits.contains(&(-sign * v)) {
                return None;
            }
        }
        clauses.push(lits);
    }
    let vars: BTreeSet<u64> = clauses.iter().flatten().map(|l| l.unsigned_abs()).collect();
    if vars.iter().any(|&v| v > vars.len() as u64) {
        return None;
    }
    Some(clauses)
}

/// Definition-level check of the decomposition language.
pub fn slow_decomp(s: &[u8]) -> Option<RawPairs> {
    let s = std::str::from_utf8(s).ok()?;
    let component = |c: &str| -> Option<BTreeSet<u64>> {
        if c == "~" {
            return Some(BTreeSet::new());
        }
        let mut set = BTreeSet::new();
        for e in c.split(',') {
            if !set.insert(binary_index(e.strip_prefix("e.")?)?) {
                return None;
            }
        }
        Some(set)
    };
    let mut pairs = Vec::new();
    for pair in s.split('*') {
        let parts: Vec<&str> = pair.split('#').collect();
        let [a, b] = parts.as_slice() else {
            return None;
        };
        let (a, b) = (component(a)?, component(b)?);
        if !a.is_disjoint(&b) || (a.is_empty() && b.is_empty()) {
            return None;
        }
        pairs.push((a, b));
    }
    Some(pairs)
}
