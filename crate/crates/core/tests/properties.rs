mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::{all_coverings, mask_of, raw_clauses, raw_pairs, satisfiable, slow_cnf, slow_decomp};
use spcover::codec::measure_length;
use spcover::generate::{random_cnf, random_decomposition, rng_from_seed};
use spcover::reduce::{compact_elements, t1_forward, t2_backward};
use spcover::solve::{cover_bruteforce, cover_inferred, sat_dpll, sat_truthtable};
use spcover::{
    parse_cnf, parse_decomp, serialize_cnf, serialize_decomp, BlockPair, CnfFormula, Decomposition,
    Element, Literal, Selection, Side,
};

/// Decompositions with up to `max_n` pairs over elements drawn from a sparse
/// index set, so ground sets are not always `1..=m`.
fn decomposition(max_n: usize, max_m: usize) -> impl Strategy<Value = Decomposition> {
    (1..=max_n, 1..=max_m)
        .prop_flat_map(|(n, m)| {
            (
                prop::collection::vec(prop::collection::vec(0u8..3, m), n),
                prop::collection::btree_set(1u64..200, m),
            )
        })
        .prop_filter_map("not a decomposition", |(cells, indices)| {
            let indices: Vec<u64> = indices.into_iter().collect();
            let pairs = cells
                .iter()
                .map(|row| {
                    let mut p = BlockPair::new(BTreeSet::new(), BTreeSet::new());
                    for (cell, &idx) in row.iter().zip(&indices) {
                        let e = Element::new(idx).unwrap();
                        match cell {
                            1 => p.first.insert(e),
                            2 => p.second.insert(e),
                            _ => false,
                        };
                    }
                    p
                })
                .collect();
            Decomposition::from_pairs(pairs).ok()
        })
}

fn formula(max_n: usize, max_m: usize) -> impl Strategy<Value = CnfFormula> {
    (1..=max_n, 1..=max_m)
        .prop_flat_map(|(n, m)| prop::collection::vec(prop::collection::vec(0u8..3, n), m))
        .prop_filter_map("not a formula", |rows| {
            let clauses = rows
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(v, &c)| Literal::new(v as u64 + 1, c == 1).unwrap())
                        .collect()
                })
                .collect();
            CnfFormula::new(clauses).ok()
        })
}

fn all_selections(n: usize) -> impl Iterator<Item = Selection> {
    (0..1u64 << n).map(move |k| Selection::from_bits((0..n).map(|i| k >> i & 1 == 1)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn covering_predicates_agree(d in decomposition(7, 8)) {
        let oracle: BTreeSet<u64> = all_coverings(&raw_pairs(&d)).into_iter().collect();
        for s in all_selections(d.n()) {
            let covers = d.is_covering(&s);
            prop_assert_eq!(covers, d.check_p1(&s));
            prop_assert_eq!(covers, oracle.contains(&mask_of(&s.bits())));
        }
    }

    #[test]
    fn transformations_preserve_validity_and_existence(
        d in decomposition(6, 7),
        keys in prop::collection::vec(any::<u32>(), 6),
        flips in prop::collection::vec(any::<bool>(), 6),
    ) {
        let n = d.n();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by_key(|&i| keys[i]);
        let flips: Vec<usize> = (0..n).filter(|&i| flips[i]).collect();
        let exists = !all_coverings(&raw_pairs(&d)).is_empty();

        let p = d.p_transform(&perm).unwrap();
        let i = d.i_transform(&flips).unwrap();
        for t in [&p, &i] {
            let ground: Vec<Element> = t.ground().iter().collect();
            prop_assert!(spcover::validate_decomposition(t.pairs().to_vec(), &ground).is_ok());
            prop_assert_eq!(!all_coverings(&raw_pairs(t)).is_empty(), exists);
        }
    }

    #[test]
    fn inference_is_sound(d in decomposition(7, 8)) {
        let outcome = d.infer_forced();
        let coverings = all_coverings(&raw_pairs(&d));
        if outcome.is_infeasible() {
            prop_assert!(coverings.is_empty());
        }
        for &(i, side) in &outcome.forced {
            for &mask in &coverings {
                prop_assert_eq!(mask >> i & 1 == 1, side == Side::First);
            }
        }
    }

    #[test]
    fn normalization_gives_all_first(d in decomposition(6, 7)) {
        for s in all_selections(d.n()).filter(|s| d.is_covering(s)) {
            let (flipped, all_first) = d.normalize_to_alpha(&s).unwrap();
            prop_assert!(all_first.iter().all(|side| side == Side::First));
            prop_assert!(flipped.is_covering(&all_first));
            for i in 0..d.n() {
                let expected = if s.side(i) == Side::Second { d.pair(i).swapped() } else { d.pair(i).clone() };
                prop_assert_eq!(flipped.pair(i), &expected);
            }
        }
    }

    #[test]
    fn text_round_trips(f in formula(8, 8), d in decomposition(8, 8)) {
        let text = serialize_cnf(&f);
        prop_assert_eq!(parse_cnf(text.as_bytes()).unwrap(), f.clone());
        prop_assert_eq!(slow_cnf(text.as_bytes()).unwrap(), raw_clauses(&f));
        let text = serialize_decomp(&d);
        prop_assert_eq!(parse_decomp(text.as_bytes()).unwrap(), d.clone());
        prop_assert_eq!(slow_decomp(text.as_bytes()).unwrap(), raw_pairs(&d));
    }

    #[test]
    fn length_counts_literals_and_stars(f in formula(8, 8)) {
        let literals: usize = f.clauses().iter().map(|c| c.len()).sum();
        prop_assert_eq!(measure_length(serialize_cnf(&f).as_bytes()).unwrap(), literals + f.m() - 1);
    }

    #[test]
    fn serialization_is_canonical(f in formula(6, 6), seed in any::<u64>()) {
        // Shuffle literal order; the canonical text must not change.
        let mut rng = rng_from_seed(seed);
        let text: Vec<String> = f
            .clauses()
            .iter()
            .map(|c| {
                let mut lits: Vec<String> = c
                    .literals()
                    .iter()
                    .map(|l| format!("x{}.{:b}", u8::from(l.is_positive()), l.var()))
                    .collect();
                rand::seq::SliceRandom::shuffle(lits.as_mut_slice(), &mut rng);
                lits.join(",")
            })
            .collect();
        let shuffled = text.join("*");
        let parsed = parse_cnf(shuffled.as_bytes()).unwrap();
        prop_assert_eq!(&parsed, &f);
        let once = serialize_cnf(&parsed);
        prop_assert_eq!(serialize_cnf(&parse_cnf(once.as_bytes()).unwrap()), once);
    }

    #[test]
    fn reductions_round_trip(f in formula(7, 7), d in decomposition(7, 7)) {
        prop_assert_eq!(t2_backward(&t1_forward(&f)), f);
        prop_assert_eq!(t1_forward(&t2_backward(&d)), compact_elements(&d));
    }

    #[test]
    fn reductions_transport_answers(f in formula(7, 8), d in decomposition(7, 8)) {
        let image = t1_forward(&f);
        let clauses = raw_clauses(&f);
        for s in all_selections(f.n()) {
            prop_assert_eq!(common::satisfies(&clauses, mask_of(&s.bits())), image.is_covering(&s));
        }
        let back = raw_clauses(&t2_backward(&d));
        for s in all_selections(d.n()) {
            prop_assert_eq!(d.is_covering(&s), common::satisfies(&back, mask_of(&s.bits())));
        }
    }

    #[test]
    fn solvers_agree_with_oracles(f in formula(10, 14), d in decomposition(10, 10)) {
        let tt = sat_truthtable(&f).unwrap();
        let dp = sat_dpll(&f);
        prop_assert_eq!(tt.decision, dp.decision);
        prop_assert_eq!(tt.is_positive(), satisfiable(&raw_clauses(&f), f.n()));

        let bf = cover_bruteforce(&d).unwrap();
        let inf = cover_inferred(&d).unwrap();
        prop_assert_eq!(bf.decision, inf.decision);
        // forced choices never exclude the first covering in enumeration order
        prop_assert_eq!(&bf.witness, &inf.witness);
        prop_assert_eq!(bf.is_positive(), !all_coverings(&raw_pairs(&d)).is_empty());
    }
}

#[test]
fn generated_instances_are_recognized() {
    for seed in 0..200 {
        let mut rng = rng_from_seed(seed);
        let f = random_cnf(&mut rng, 1 + seed as usize % 9, 1 + seed as usize % 13).unwrap();
        let text = serialize_cnf(&f);
        assert_eq!(slow_cnf(text.as_bytes()), Some(raw_clauses(&f)), "{text}");
        let d =
            random_decomposition(&mut rng, 1 + seed as usize % 7, 1 + seed as usize % 11).unwrap();
        let text = serialize_decomp(&d);
        assert_eq!(slow_decomp(text.as_bytes()), Some(raw_pairs(&d)), "{text}");
    }
}
