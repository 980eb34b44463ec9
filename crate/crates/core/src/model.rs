//! Sets, special decompositions and special coverings.
//!
//! A special decomposition of a nonempty ground set `S` is an ordered list of
//! block pairs `(first, second)` such that the two blocks of every pair are
//! disjoint, at least one block of every pair is nonempty, and the union of
//! all blocks is exactly `S`. A special covering picks one block from each
//! pair so that the picked blocks still cover `S`.
//!
//! Pair indices in this API are 0-based; human-readable reports print them
//! 1-based.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// A set member `e_j`, identified by its positive index `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(u64);

impl Element {
    /// Returns `None` for index 0.
    pub fn new(index: u64) -> Option<Self> {
        (index >= 1).then_some(Element(index))
    }

    pub fn index(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// Which block of a pair is meant. `First` plays the role of the `α` block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    First,
    Second,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::First => Side::Second,
            Side::Second => Side::First,
        }
    }

    /// `First` is bit 1, `Second` is bit 0.
    pub fn bit(self) -> bool {
        self == Side::First
    }

    pub fn from_bit(bit: bool) -> Side {
        if bit {
            Side::First
        } else {
            Side::Second
        }
    }
}

/// Builds an element set from raw indices. Panics on index 0; meant for
/// literals in tests and examples.
pub fn elements<I: IntoIterator<Item = u64>>(indices: I) -> BTreeSet<Element> {
    indices
        .into_iter()
        .map(|i| Element::new(i).expect("element index must be positive"))
        .collect()
}

/// An ordered pair of blocks. Not validated on its own; see
/// [`validate_decomposition`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockPair {
    pub first: BTreeSet<Element>,
    pub second: BTreeSet<Element>,
}

impl BlockPair {
    pub fn new(first: BTreeSet<Element>, second: BTreeSet<Element>) -> Self {
        BlockPair { first, second }
    }

    pub fn block(&self, side: Side) -> &BTreeSet<Element> {
        match side {
            Side::First => &self.first,
            Side::Second => &self.second,
        }
    }

    pub fn swapped(&self) -> BlockPair {
        BlockPair {
            first: self.second.clone(),
            second: self.first.clone(),
        }
    }

    /// Which block holds `e`, if any. Assumes the blocks are disjoint.
    pub fn side_of(&self, e: Element) -> Option<Side> {
        if self.first.contains(&e) {
            Some(Side::First)
        } else if self.second.contains(&e) {
            Some(Side::Second)
        } else {
            None
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.first.iter().chain(self.second.iter()).copied()
    }
}

/// A nonempty finite set of elements, iterated in ascending index order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundSet {
    elements: BTreeSet<Element>,
}

impl GroundSet {
    pub fn new<I: IntoIterator<Item = Element>>(elements: I) -> Result<Self, DecompositionError> {
        let mut set = BTreeSet::new();
        for e in elements {
            if !set.insert(e) {
                return Err(DecompositionError::DuplicateGroundElement { element: e });
            }
        }
        if set.is_empty() {
            return Err(DecompositionError::EmptyGround);
        }
        Ok(GroundSet { elements: set })
    }

    pub fn elements(&self) -> &BTreeSet<Element> {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, e: Element) -> bool {
        self.elements.contains(&e)
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        self.elements.iter().copied()
    }
}

/// Reasons a list of pairs fails to be a special decomposition of a ground set.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("decomposition has no pairs")]
    NoPairs,
    #[error("pair {}: components not disjoint (shared {element})", .pair + 1)]
    Overlap { pair: usize, element: Element },
    #[error("pair {}: both components empty", .pair + 1)]
    EmptyPair { pair: usize },
    #[error("pair {}: {element} is not in the ground set", .pair + 1)]
    ForeignElement { pair: usize, element: Element },
    #[error("ground set is empty")]
    EmptyGround,
    #[error("ground set lists {element} twice")]
    DuplicateGroundElement { element: Element },
    #[error("{element} is not covered by any pair")]
    CoverageGap { element: Element },
}

/// Which defining condition of a special decomposition a violation breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompositionRule {
    /// Components of a pair are disjoint.
    Disjoint,
    /// At least one component of a pair is nonempty.
    NotBothEmpty,
    /// The pairs cover exactly the (nonempty) ground set.
    Coverage,
}

impl DecompositionError {
    pub fn rule(&self) -> DecompositionRule {
        match self {
            DecompositionError::Overlap { .. } => DecompositionRule::Disjoint,
            DecompositionError::EmptyPair { .. } => DecompositionRule::NotBothEmpty,
            _ => DecompositionRule::Coverage,
        }
    }

    pub fn pair(&self) -> Option<usize> {
        match *self {
            DecompositionError::Overlap { pair, .. }
            | DecompositionError::EmptyPair { pair }
            | DecompositionError::ForeignElement { pair, .. } => Some(pair),
            _ => None,
        }
    }
}

/// A validated special decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decomposition {
    pairs: Vec<BlockPair>,
    ground: GroundSet,
}

/// Checks the three defining conditions and builds a [`Decomposition`].
///
/// Pairs are checked in ascending order, each for disjointness, then for
/// having a nonempty component, then for staying inside the ground set. After
/// all pairs pass, the ground set must be nonempty, duplicate-free and fully
/// covered. The first violation found is returned.
pub fn validate_decomposition(
    pairs: Vec<BlockPair>,
    ground: &[Element],
) -> Result<Decomposition, DecompositionError> {
    if pairs.is_empty() {
        return Err(DecompositionError::NoPairs);
    }
    let ground_set: BTreeSet<Element> = ground.iter().copied().collect();
    for (i, pair) in pairs.iter().enumerate() {
        if let Some(&element) = pair.first.intersection(&pair.second).next() {
            return Err(DecompositionError::Overlap { pair: i, element });
        }
        if pair.first.is_empty() && pair.second.is_empty() {
            return Err(DecompositionError::EmptyPair { pair: i });
        }
        if let Some(element) = pair.elements().find(|e| !ground_set.contains(e)) {
            return Err(DecompositionError::ForeignElement { pair: i, element });
        }
    }
    let ground = GroundSet::new(ground.iter().copied())?;
    let covered: BTreeSet<Element> = pairs.iter().flat_map(|p| p.elements()).collect();
    if let Some(&element) = ground.elements().difference(&covered).next() {
        return Err(DecompositionError::CoverageGap { element });
    }
    Ok(Decomposition { pairs, ground })
}

impl Decomposition {
    /// Validates `pairs` against the ground set formed by their own union.
    pub fn from_pairs(pairs: Vec<BlockPair>) -> Result<Self, DecompositionError> {
        let ground: BTreeSet<Element> = pairs.iter().flat_map(|p| p.elements()).collect();
        let ground: Vec<Element> = ground.into_iter().collect();
        validate_decomposition(pairs, &ground)
    }

    pub fn pairs(&self) -> &[BlockPair] {
        &self.pairs
    }

    pub fn pair(&self, i: usize) -> &BlockPair {
        &self.pairs[i]
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    /// Number of pairs.
    pub fn n(&self) -> usize {
        self.pairs.len()
    }

    /// Number of ground elements.
    pub fn m(&self) -> usize {
        self.ground.len()
    }

    /// True iff the blocks chosen by `s` cover the ground set.
    ///
    /// # Panics
    ///
    /// If `s` does not have one choice per pair.
    pub fn is_covering(&self, s: &Selection) -> bool {
        self.assert_len(s);
        let mut covered = BTreeSet::new();
        for (pair, side) in self.pairs.iter().zip(s.iter()) {
            covered.extend(pair.block(side).iter().copied());
        }
        covered.len() == self.ground.len()
    }

    /// The pointwise covering criterion: every element of every unchosen
    /// block lies in some chosen block of a different pair.
    ///
    /// Agrees with [`Decomposition::is_covering`] on every input.
    ///
    /// # Panics
    ///
    /// If `s` does not have one choice per pair.
    pub fn check_p1(&self, s: &Selection) -> bool {
        self.assert_len(s);
        self.pairs.iter().enumerate().all(|(i, pair)| {
            pair.block(s.side(i).other()).iter().all(|e| {
                self.pairs
                    .iter()
                    .enumerate()
                    .any(|(j, other)| j != i && other.block(s.side(j)).contains(e))
            })
        })
    }

    /// Single application of the private-element rule.
    ///
    /// An element is private when exactly one pair mentions it. A block that
    /// holds a private element must be chosen by every covering. If both
    /// blocks of a pair hold private elements, no covering exists.
    pub fn infer_forced(&self) -> InferenceOutcome {
        let mut occurrences: BTreeMap<Element, usize> = BTreeMap::new();
        for pair in &self.pairs {
            for e in pair.elements() {
                *occurrences.entry(e).or_default() += 1;
            }
        }
        let has_private = |block: &BTreeSet<Element>| block.iter().any(|e| occurrences[e] == 1);

        let mut forced = Vec::new();
        let mut infeasible = None;
        for (i, pair) in self.pairs.iter().enumerate() {
            let first = has_private(&pair.first);
            let second = has_private(&pair.second);
            if first {
                forced.push((i, Side::First));
            }
            if second {
                forced.push((i, Side::Second));
            }
            if first && second && infeasible.is_none() {
                infeasible = Some(i);
            }
        }
        InferenceOutcome { forced, infeasible }
    }

    /// Reorders pairs so that pair `k` of the result is pair `perm[k]` of
    /// `self`. `perm` is 0-based.
    pub fn p_transform(&self, perm: &[usize]) -> Result<Decomposition, TransformError> {
        let n = self.n();
        if perm.len() != n {
            return Err(TransformError::NotAPermutation);
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(TransformError::NotAPermutation);
            }
        }
        Ok(Decomposition {
            pairs: perm.iter().map(|&p| self.pairs[p].clone()).collect(),
            ground: self.ground.clone(),
        })
    }

    /// Swaps the two blocks of every pair listed in `flips` (0-based).
    /// Listing a pair twice flips it once.
    pub fn i_transform(&self, flips: &[usize]) -> Result<Decomposition, TransformError> {
        let mut flip = vec![false; self.n()];
        for &i in flips {
            *flip.get_mut(i).ok_or(TransformError::FlipOutOfRange {
                index: i,
                n: self.n(),
            })? = true;
        }
        Ok(Decomposition {
            pairs: self
                .pairs
                .iter()
                .zip(flip)
                .map(|(p, f)| if f { p.swapped() } else { p.clone() })
                .collect(),
            ground: self.ground.clone(),
        })
    }

    /// Turns a covering into an all-`First` covering by swapping the blocks
    /// of exactly those pairs where `s` chose `Second`.
    pub fn normalize_to_alpha(
        &self,
        s: &Selection,
    ) -> Result<(Decomposition, Selection), NotACovering> {
        if s.len() != self.n() || !self.is_covering(s) {
            return Err(NotACovering);
        }
        let flips: Vec<usize> = s
            .iter()
            .enumerate()
            .filter(|&(_, side)| side == Side::Second)
            .map(|(i, _)| i)
            .collect();
        let flipped = self
            .i_transform(&flips)
            .expect("selection indices are in range");
        Ok((flipped, Selection::uniform(Side::First, self.n())))
    }

    fn assert_len(&self, s: &Selection) {
        assert_eq!(
            s.len(),
            self.n(),
            "selection has {} choices for {} pairs",
            s.len(),
            self.n()
        );
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("not a permutation of the pair positions")]
    NotAPermutation,
    #[error("flip index {index} out of range for {n} pairs")]
    FlipOutOfRange { index: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("selection is not a covering of the decomposition")]
pub struct NotACovering;

/// Result of [`Decomposition::infer_forced`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InferenceOutcome {
    /// `(pair, side)` blocks every covering must choose, in pair order.
    pub forced: Vec<(usize, Side)>,
    /// First pair whose two blocks both hold private elements.
    pub infeasible: Option<usize>,
}

impl InferenceOutcome {
    pub fn is_infeasible(&self) -> bool {
        self.infeasible.is_some()
    }

    /// The forced side for pair `i`, if exactly one side is forced.
    pub fn forced_side(&self, i: usize) -> Option<Side> {
        let mut sides = self.forced.iter().filter(|(p, _)| *p == i).map(|&(_, s)| s);
        match (sides.next(), sides.next()) {
            (Some(s), None) => Some(s),
            _ => None,
        }
    }
}

/// One block choice per pair. Also used as a truth assignment, where
/// `First` means true.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Selection {
    choices: Vec<Side>,
}

impl Selection {
    pub fn new(choices: Vec<Side>) -> Self {
        Selection { choices }
    }

    pub fn uniform(side: Side, n: usize) -> Self {
        Selection {
            choices: vec![side; n],
        }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        Selection {
            choices: bits.into_iter().map(Side::from_bit).collect(),
        }
    }

    pub fn bits(&self) -> Vec<bool> {
        self.choices.iter().map(|s| s.bit()).collect()
    }

    pub fn side(&self, i: usize) -> Side {
        self.choices[i]
    }

    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Side> + '_ {
        self.choices.iter().copied()
    }
}

/// Comma-separated bits in pair order, e.g. `1,0,1`.
impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, side) in self.choices.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(if side.bit() { "1" } else { "0" })?;
        }
        Ok(())
    }
}
