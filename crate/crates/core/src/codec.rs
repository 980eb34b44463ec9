//! Text encoding of formulas and decompositions.
//!
//! Both formats are single-line 7-bit ASCII:
//!
//! ```text
//! cnf       := clause ('*' clause)*
//! clause    := literal (',' literal)*
//! literal   := ('x1.' | 'x0.') index          x1. is x_i, x0. is ¬x_i
//!
//! decomp    := pair ('*' pair)*
//! pair      := component '#' component
//! component := '~' | element (',' element)*   '~' is the empty component
//! element   := 'e.' index
//!
//! index     := '1' ('0' | '1')*               binary, no leading zeros
//! ```
//!
//! `parse_cnf` and `parse_decomp` are recognizers: structure is checked over
//! the whole input first, then the per-clause (per-pair) conditions in order,
//! then the variable-count condition. Rejections carry the byte offset of the
//! offending token.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::cnf::{CnfFormula, Literal};
use crate::model::{BlockPair, Decomposition, Element};

/// The fixed rendering of the empty pair `ε□ε`. Well-formed but never a
/// member of the decomposition language.
pub const SENTINEL: &str = "~#~";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Token {
    Literal(Literal),
    Element(Element),
    /// `*`, separates clauses or pairs.
    Star,
    /// `#`, separates the two components of a pair.
    Box,
    /// `~`, the empty component.
    Epsilon,
    /// `,`, separates literals or elements. Not counted by [`measure_length`].
    Comma,
}

impl Token {
    fn describe(self) -> &'static str {
        match self {
            Token::Literal(_) => "literal",
            Token::Element(_) => "element",
            Token::Star => "'*'",
            Token::Box => "'#'",
            Token::Epsilon => "'~'",
            Token::Comma => "','",
        }
    }
}

/// Which recognizer check rejected the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    /// Tokens or their arrangement are malformed.
    Structure,
    /// A clause is empty, repeats a literal or holds a variable and its negation.
    Clause,
    /// The variable indices are not exactly `1..=n`.
    VariableCount,
    /// A pair repeats an element, shares one between its components, or is `~#~`.
    Pair,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected byte 0x{0:02x}")]
    UnexpectedByte(u8),
    #[error("missing binary index")]
    MissingIndex,
    #[error("index has a leading zero")]
    LeadingZero,
    #[error("index too large")]
    IndexOverflow,
    #[error("expected {expected}, found {found}")]
    UnexpectedToken {
        expected: &'static str,
        found: &'static str,
    },
    #[error("expected {expected}, found end of input")]
    UnexpectedEnd { expected: &'static str },
    #[error("clause {}: empty clause", .clause + 1)]
    EmptyClause { clause: usize },
    #[error("clause {}: literal {literal} repeated", .clause + 1)]
    DuplicateLiteral { clause: usize, literal: Literal },
    #[error("clause {}: contains x{var} and its negation", .clause + 1)]
    ComplementaryLiterals { clause: usize, var: u64 },
    #[error("variable x{var} exceeds the {n} distinct variables used")]
    VariableCountMismatch { var: u64, n: usize },
    #[error("pair {}: element {element} repeated in a component", .pair + 1)]
    DuplicateElement { pair: usize, element: Element },
    #[error("pair {}: components not disjoint (shared {element})", .pair + 1)]
    ComponentOverlap { pair: usize, element: Element },
    #[error("pair {}: both components empty", .pair + 1)]
    EmptyPair { pair: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("offset {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn new(offset: usize, kind: ParseErrorKind) -> Self {
        ParseError { offset, kind }
    }

    pub fn check(&self) -> Check {
        use ParseErrorKind::*;
        match self.kind {
            UnexpectedByte(_)
            | MissingIndex
            | LeadingZero
            | IndexOverflow
            | UnexpectedToken { .. }
            | UnexpectedEnd { .. } => Check::Structure,
            EmptyClause { .. } | DuplicateLiteral { .. } | ComplementaryLiterals { .. } => {
                Check::Clause
            }
            VariableCountMismatch { .. } => Check::VariableCount,
            DuplicateElement { .. } | ComponentOverlap { .. } | EmptyPair { .. } => Check::Pair,
        }
    }
}

/// Splits `text` into tokens with their byte offsets.
pub fn tokenize(text: &[u8]) -> Result<Vec<(usize, Token)>, ParseError> {
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < text.len() {
        let start = pos;
        let token = match text[pos] {
            b'*' => {
                pos += 1;
                Token::Star
            }
            b'#' => {
                pos += 1;
                Token::Box
            }
            b'~' => {
                pos += 1;
                Token::Epsilon
            }
            b',' => {
                pos += 1;
                Token::Comma
            }
            b'x' => {
                let positive = match text.get(pos + 1) {
                    Some(b'1') => true,
                    Some(b'0') => false,
                    Some(&b) => {
                        return Err(ParseError::new(pos + 1, ParseErrorKind::UnexpectedByte(b)))
                    }
                    None => {
                        return Err(ParseError::new(
                            pos + 1,
                            ParseErrorKind::UnexpectedEnd {
                                expected: "polarity",
                            },
                        ))
                    }
                };
                expect_dot(text, pos + 2)?;
                let (var, next) = read_index(text, pos + 3)?;
                pos = next;
                Token::Literal(Literal::new(var, positive).expect("index is nonzero"))
            }
            b'e' => {
                expect_dot(text, pos + 1)?;
                let (index, next) = read_index(text, pos + 2)?;
                pos = next;
                Token::Element(Element::new(index).expect("index is nonzero"))
            }
            b => return Err(ParseError::new(pos, ParseErrorKind::UnexpectedByte(b))),
        };
        out.push((start, token));
    }
    Ok(out)
}

fn expect_dot(text: &[u8], pos: usize) -> Result<(), ParseError> {
    match text.get(pos) {
        Some(b'.') => Ok(()),
        Some(&b) => Err(ParseError::new(pos, ParseErrorKind::UnexpectedByte(b))),
        None => Err(ParseError::new(
            pos,
            ParseErrorKind::UnexpectedEnd { expected: "'.'" },
        )),
    }
}

fn read_index(text: &[u8], start: usize) -> Result<(u64, usize), ParseError> {
    match text.get(start) {
        Some(b'1') => {}
        Some(b'0') => return Err(ParseError::new(start, ParseErrorKind::LeadingZero)),
        _ => return Err(ParseError::new(start, ParseErrorKind::MissingIndex)),
    }
    let mut value: u64 = 0;
    let mut pos = start;
    while let Some(&b @ (b'0' | b'1')) = text.get(pos) {
        value = value
            .checked_mul(2)
            .and_then(|v| v.checked_add(u64::from(b - b'0')))
            .ok_or_else(|| ParseError::new(start, ParseErrorKind::IndexOverflow))?;
        pos += 1;
    }
    Ok((value, pos))
}

/// Token-level length: literals, elements, `~`, `#` and `*` count one each;
/// commas are not counted. For a formula this is the number of literals plus
/// the number of `*` separators.
pub fn measure_length(text: &[u8]) -> Result<usize, ParseError> {
    Ok(tokenize(text)?
        .iter()
        .filter(|(_, t)| *t != Token::Comma)
        .count())
}

/// Walks a token list, tracking the offset to report at end of input.
struct Cursor {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Cursor {
    fn new(text: &[u8]) -> Result<Self, ParseError> {
        Ok(Cursor {
            tokens: tokenize(text)?,
            pos: 0,
            end: text.len(),
        })
    }

    fn peek(&self) -> Option<(usize, Token)> {
        self.tokens.get(self.pos).copied()
    }

    fn offset(&self) -> usize {
        self.peek().map_or(self.end, |(o, _)| o)
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Some((o, t)) => ParseError::new(
                o,
                ParseErrorKind::UnexpectedToken {
                    expected,
                    found: t.describe(),
                },
            ),
            None => ParseError::new(self.end, ParseErrorKind::UnexpectedEnd { expected }),
        }
    }
}

/// Recognizes a CNF string and returns its formula.
pub fn parse_cnf(text: &[u8]) -> Result<CnfFormula, ParseError> {
    let mut cur = Cursor::new(text)?;

    // Structure: clauses of comma-separated literals, separated by '*'.
    // A clause with no literals is recorded here and rejected as a clause
    // violation below.
    let mut clauses: Vec<(usize, Vec<(usize, Literal)>)> = Vec::new();
    loop {
        let clause_start = cur.offset();
        let mut lits = Vec::new();
        if let Some((o, Token::Literal(l))) = cur.peek() {
            lits.push((o, l));
            cur.bump();
            while let Some((_, Token::Comma)) = cur.peek() {
                cur.bump();
                match cur.peek() {
                    Some((o, Token::Literal(l))) => {
                        lits.push((o, l));
                        cur.bump();
                    }
                    _ => return Err(cur.unexpected("literal")),
                }
            }
        }
        clauses.push((clause_start, lits));
        match cur.peek() {
            None => break,
            Some((_, Token::Star)) => cur.bump(),
            Some(_) => {
                let expected = if clauses.last().is_some_and(|(_, l)| l.is_empty()) {
                    "literal"
                } else {
                    "',' or '*'"
                };
                return Err(cur.unexpected(expected));
            }
        }
    }

    let mut vars = BTreeSet::new();
    for (j, (start, lits)) in clauses.iter().enumerate() {
        if lits.is_empty() {
            return Err(ParseError::new(
                *start,
                ParseErrorKind::EmptyClause { clause: j },
            ));
        }
        let mut seen = BTreeSet::new();
        for &(o, lit) in lits {
            if seen.contains(&lit) {
                return Err(ParseError::new(
                    o,
                    ParseErrorKind::DuplicateLiteral {
                        clause: j,
                        literal: lit,
                    },
                ));
            }
            if seen.contains(&lit.negated()) {
                return Err(ParseError::new(
                    o,
                    ParseErrorKind::ComplementaryLiterals {
                        clause: j,
                        var: lit.var(),
                    },
                ));
            }
            seen.insert(lit);
            vars.insert(lit.var());
        }
    }

    let n = vars.len();
    for (_, lits) in &clauses {
        if let Some(&(o, lit)) = lits.iter().find(|(_, l)| l.var() > n as u64) {
            return Err(ParseError::new(
                o,
                ParseErrorKind::VariableCountMismatch { var: lit.var(), n },
            ));
        }
    }

    let clauses = clauses
        .into_iter()
        .map(|(_, lits)| lits.into_iter().map(|(_, l)| l).collect())
        .collect();
    Ok(CnfFormula::new(clauses).expect("recognized string yields a valid formula"))
}

struct RawComponent {
    offset: usize,
    elements: Vec<(usize, Element)>,
}

fn parse_component(cur: &mut Cursor) -> Result<RawComponent, ParseError> {
    let offset = cur.offset();
    match cur.peek() {
        Some((_, Token::Epsilon)) => {
            cur.bump();
            Ok(RawComponent {
                offset,
                elements: Vec::new(),
            })
        }
        Some((o, Token::Element(e))) => {
            let mut elements = vec![(o, e)];
            cur.bump();
            while let Some((_, Token::Comma)) = cur.peek() {
                cur.bump();
                match cur.peek() {
                    Some((o, Token::Element(e))) => {
                        elements.push((o, e));
                        cur.bump();
                    }
                    _ => return Err(cur.unexpected("element")),
                }
            }
            Ok(RawComponent { offset, elements })
        }
        _ => Err(cur.unexpected("element or '~'")),
    }
}

/// Recognizes a decomposition string. Every accepted string is a valid
/// special decomposition of the set of elements it mentions.
pub fn parse_decomp(text: &[u8]) -> Result<Decomposition, ParseError> {
    let mut cur = Cursor::new(text)?;

    let mut raw = Vec::new();
    loop {
        let first = parse_component(&mut cur)?;
        match cur.peek() {
            Some((_, Token::Box)) => cur.bump(),
            _ => {
                let expected = if first.elements.is_empty() {
                    "'#'"
                } else {
                    "',' or '#'"
                };
                return Err(cur.unexpected(expected));
            }
        }
        let second = parse_component(&mut cur)?;
        raw.push((first, second));
        match cur.peek() {
            None => break,
            Some((_, Token::Star)) => cur.bump(),
            Some(_) => {
                let expected = if raw.last().is_some_and(|(_, s)| s.elements.is_empty()) {
                    "'*'"
                } else {
                    "',' or '*'"
                };
                return Err(cur.unexpected(expected));
            }
        }
    }

    let mut pairs = Vec::with_capacity(raw.len());
    for (i, (first, second)) in raw.iter().enumerate() {
        let a = component_set(i, first)?;
        let b = component_set(i, second)?;
        if let Some(&(o, e)) = second.elements.iter().find(|(_, e)| a.contains(e)) {
            return Err(ParseError::new(
                o,
                ParseErrorKind::ComponentOverlap {
                    pair: i,
                    element: e,
                },
            ));
        }
        if a.is_empty() && b.is_empty() {
            return Err(ParseError::new(
                first.offset,
                ParseErrorKind::EmptyPair { pair: i },
            ));
        }
        pairs.push(BlockPair::new(a, b));
    }
    Ok(Decomposition::from_pairs(pairs).expect("recognized string yields a valid decomposition"))
}

fn component_set(pair: usize, c: &RawComponent) -> Result<BTreeSet<Element>, ParseError> {
    let mut set = BTreeSet::new();
    for &(o, e) in &c.elements {
        if !set.insert(e) {
            return Err(ParseError::new(
                o,
                ParseErrorKind::DuplicateElement { pair, element: e },
            ));
        }
    }
    Ok(set)
}

/// Canonical text of a formula: clause order kept, literals ascending.
pub fn serialize_cnf(f: &CnfFormula) -> String {
    let mut out = String::new();
    for (j, clause) in f.clauses().iter().enumerate() {
        if j > 0 {
            out.push('*');
        }
        for (k, lit) in clause.literals().iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            let _ = write!(out, "x{}.{:b}", u8::from(lit.is_positive()), lit.var());
        }
    }
    out
}

/// Canonical text of a decomposition: pair order kept, elements ascending,
/// empty components as `~`.
pub fn serialize_decomp(d: &Decomposition) -> String {
    let mut out = String::new();
    for (i, pair) in d.pairs().iter().enumerate() {
        if i > 0 {
            out.push('*');
        }
        write_component(&mut out, &pair.first);
        out.push('#');
        write_component(&mut out, &pair.second);
    }
    out
}

fn write_component(out: &mut String, block: &BTreeSet<Element>) {
    if block.is_empty() {
        out.push('~');
        return;
    }
    for (k, e) in block.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        let _ = write!(out, "e.{:b}", e.index());
    }
}

/// Which of the two languages a string looks like, judged by its first byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    Cnf,
    Decomp,
}

impl InputKind {
    pub fn detect(text: &[u8]) -> Option<InputKind> {
        match text.first() {
            Some(b'x') => Some(InputKind::Cnf),
            Some(b'e' | b'~') => Some(InputKind::Decomp),
            _ => None,
        }
    }
}

impl fmt::Display for InputKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputKind::Cnf => "CNF",
            InputKind::Decomp => "DECOMP",
        })
    }
}
