//! Seeded random instances for fuzzing.
//!
//! Formulas use exactly variables `1..=n` and `m` clauses; decompositions use
//! exactly `n` pairs over elements `e_1..e_m`. Both are built so the
//! occurrence constraints hold by construction.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cnf::{CnfFormula, Literal};
use crate::model::{BlockPair, Decomposition, Element};

/// Clause width (and per-element pair count) is drawn from `1..=MAX_WIDTH`
/// before the occurrence constraints add more.
const MAX_WIDTH: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("n and m must both be at least 1 (got n={n}, m={m})")]
pub struct InvalidParameters {
    pub n: usize,
    pub m: usize,
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random incidence between `rows` rows and `cols` columns in which every
/// row and every column is used at least once. Each row gets between 1 and
/// `MAX_WIDTH` columns, or more when needed to reach every column.
fn incidence<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Vec<BTreeSet<usize>> {
    let mut sets = vec![BTreeSet::new(); rows];
    let mut order: Vec<usize> = (0..cols).collect();
    order.shuffle(rng);
    let mut row_order: Vec<usize> = (0..rows).collect();
    row_order.shuffle(rng);
    // Pair up the first min(rows, cols) rows and columns, then scatter the
    // remaining columns over random rows.
    for (k, &c) in order.iter().enumerate() {
        let r = if k < rows {
            row_order[k]
        } else {
            rng.random_range(0..rows)
        };
        sets[r].insert(c);
    }
    for set in sets.iter_mut() {
        let width = rng.random_range(1..=MAX_WIDTH.min(cols));
        while set.len() < width {
            set.insert(rng.random_range(0..cols));
        }
    }
    sets
}

pub fn random_cnf<R: Rng>(
    rng: &mut R,
    n: usize,
    m: usize,
) -> Result<CnfFormula, InvalidParameters> {
    if n == 0 || m == 0 {
        return Err(InvalidParameters { n, m });
    }
    let clauses = incidence(rng, m, n)
        .into_iter()
        .map(|vars| {
            vars.into_iter()
                .map(|v| Literal::new(v as u64 + 1, rng.random_bool(0.5)).expect("positive"))
                .collect()
        })
        .collect();
    Ok(CnfFormula::new(clauses).expect("generated formula satisfies the clause conditions"))
}

/// Each element is placed in one to a few pairs, on a random side of each.
pub fn random_decomposition<R: Rng>(
    rng: &mut R,
    n: usize,
    m: usize,
) -> Result<Decomposition, InvalidParameters> {
    if n == 0 || m == 0 {
        return Err(InvalidParameters { n, m });
    }
    let mut pairs = vec![BlockPair::new(BTreeSet::new(), BTreeSet::new()); n];
    for (j, owners) in incidence(rng, m, n).into_iter().enumerate() {
        let e = Element::new(j as u64 + 1).expect("positive");
        for i in owners {
            if rng.random_bool(0.5) {
                pairs[i].first.insert(e);
            } else {
                pairs[i].second.insert(e);
            }
        }
    }
    Ok(Decomposition::from_pairs(pairs).expect("generated pairs form a decomposition"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_sizes() {
        let mut rng = rng_from_seed(7);
        for n in 1..8 {
            for m in 1..8 {
                let f = random_cnf(&mut rng, n, m).unwrap();
                assert_eq!((f.n(), f.m()), (n, m));
                let d = random_decomposition(&mut rng, n, m).unwrap();
                assert_eq!((d.n(), d.m()), (n, m));
                assert_eq!(d.ground().iter().last().unwrap().index(), m as u64);
            }
        }
    }

    #[test]
    fn deterministic() {
        let a = random_cnf(&mut rng_from_seed(1), 5, 9).unwrap();
        let b = random_cnf(&mut rng_from_seed(1), 5, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn smallest_decomposition_has_two_shapes() {
        let shapes: BTreeSet<String> = (0..32)
            .map(|s| {
                crate::codec::serialize_decomp(
                    &random_decomposition(&mut rng_from_seed(s), 1, 1).unwrap(),
                )
            })
            .collect();
        assert_eq!(shapes, ["e.1#~".to_string(), "~#e.1".to_string()].into());
    }

    #[test]
    fn rejects_zero_sizes() {
        let mut rng = rng_from_seed(0);
        assert!(random_cnf(&mut rng, 0, 1).is_err());
        assert!(random_decomposition(&mut rng, 1, 0).is_err());
    }
}
