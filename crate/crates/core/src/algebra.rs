//! Alphabets, multisets, and words over interned symbols.
//!
//! A [`Symbol`] is an index into an [`Alphabet`]; its total order is the
//! declaration order of the names, and every canonical rendering in the crate
//! (multisets, words, graph nodes) is derived from that order. Multisets are
//! the free commutative monoid over an alphabet, words the free monoid, and
//! [`parikh`] is the canonical projection from words to multisets.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// An interned name: a small index into the [`Alphabet`] that declared it.
///
/// Ordering of symbols is ordering of declaration, which makes every
/// `BTreeMap<Symbol, _>` iterate in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(u32);

impl Symbol {
    /// The raw index, mainly useful for table-backed lookups.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Rebuild a symbol from a raw index. The caller is responsible for the
    /// index belonging to the intended alphabet.
    pub fn from_index(ix: usize) -> Self {
        Symbol(ix as u32)
    }
}

/// A finite ordered set of names. Symbols are handed out in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: BTreeMap<String, u32>,
}

/// Errors from alphabet construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NameError {
    /// The name was already declared in this alphabet.
    Duplicate(String),
}

impl fmt::Display for NameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NameError::Duplicate(name) => write!(f, "duplicate name `{name}`"),
        }
    }
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declare a new name, returning its symbol.
    pub fn declare(&mut self, name: &str) -> Result<Symbol, NameError> {
        if self.index.contains_key(name) {
            return Err(NameError::Duplicate(String::from(name)));
        }
        let sym = Symbol(self.names.len() as u32);
        self.names.push(String::from(name));
        self.index.insert(String::from(name), sym.0);
        Ok(sym)
    }

    /// Look a name up.
    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.index.get(name).copied().map(Symbol)
    }

    /// The name behind a symbol. Panics if the symbol is from another
    /// alphabet with more entries; symbols are not self-describing.
    pub fn name(&self, sym: Symbol) -> &str {
        &self.names[sym.index()]
    }

    pub fn contains(&self, sym: Symbol) -> bool {
        sym.index() < self.names.len()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// All symbols in declaration order.
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.names.len() as u32).map(Symbol)
    }

    /// All names in declaration order.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }
}

/// Errors from multiset arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MultisetError {
    /// Subtraction would drive this symbol's count below zero.
    Underflow(Symbol),
}

impl fmt::Display for MultisetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultisetError::Underflow(sym) => {
                write!(f, "multiset underflow at symbol #{}", sym.index())
            }
        }
    }
}

/// A finite multiset of symbols: the free commutative monoid.
///
/// Zero counts are never stored, so structural equality is multiset equality
/// and the derived `Ord` is a canonical total order used for deterministic
/// graph traversal and rendering.
///
/// Counts are `u64`; arithmetic is checked and panics on overflow, which is
/// unreachable for the workloads this crate targets.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multiset {
    counts: BTreeMap<Symbol, u64>,
}

impl Multiset {
    /// The empty multiset (monoid unit), rendered as `0`.
    pub fn zero() -> Self {
        Self::default()
    }

    /// `count` copies of one symbol.
    pub fn singleton(sym: Symbol, count: u64) -> Self {
        let mut m = Self::zero();
        m.insert(sym, count);
        m
    }

    /// Build from `(symbol, count)` pairs; repeated symbols accumulate.
    pub fn from_counts<I: IntoIterator<Item = (Symbol, u64)>>(pairs: I) -> Self {
        let mut m = Self::zero();
        for (sym, count) in pairs {
            m.insert(sym, count);
        }
        m
    }

    /// Add `count` copies of `sym` in place.
    pub fn insert(&mut self, sym: Symbol, count: u64) {
        if count == 0 {
            return;
        }
        let entry = self.counts.entry(sym).or_insert(0);
        *entry = entry.checked_add(count).expect("multiset count overflow");
    }

    /// Multiplicity of a symbol (zero when absent).
    pub fn count(&self, sym: Symbol) -> u64 {
        self.counts.get(&sym).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.counts.is_empty()
    }

    /// Total number of tokens, all symbols together.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Number of distinct symbols present.
    pub fn support_len(&self) -> usize {
        self.counts.len()
    }

    /// `(symbol, count)` pairs in symbol (declaration) order.
    pub fn iter(&self) -> impl Iterator<Item = (Symbol, u64)> + '_ {
        self.counts.iter().map(|(s, c)| (*s, *c))
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Multiset) -> Multiset {
        let mut out = self.clone();
        for (sym, count) in other.iter() {
            out.insert(sym, count);
        }
        out
    }

    /// Pointwise difference; errors on the first symbol that would underflow.
    pub fn sub(&self, other: &Multiset) -> Result<Multiset, MultisetError> {
        let mut out = self.clone();
        for (sym, count) in other.iter() {
            let have = out.count(sym);
            if have < count {
                return Err(MultisetError::Underflow(sym));
            }
            if have == count {
                out.counts.remove(&sym);
            } else {
                out.counts.insert(sym, have - count);
            }
        }
        Ok(out)
    }

    /// Pointwise comparison: does `self` fit inside `other`?
    pub fn leq(&self, other: &Multiset) -> bool {
        self.iter().all(|(sym, count)| count <= other.count(sym))
    }

    /// Canonical text form: counts joined by `+` in symbol order, `1*` elided,
    /// the empty multiset rendered `0`. Example: `2*x+2*y`.
    pub fn render(&self, names: &Alphabet) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let mut out = String::new();
        for (i, (sym, count)) in self.iter().enumerate() {
            if i > 0 {
                out.push('+');
            }
            if count != 1 {
                out.push_str(itoa(count).as_str());
                out.push('*');
            }
            out.push_str(names.name(sym));
        }
        out
    }
}

impl FromIterator<(Symbol, u64)> for Multiset {
    fn from_iter<I: IntoIterator<Item = (Symbol, u64)>>(iter: I) -> Self {
        Multiset::from_counts(iter)
    }
}

fn itoa(n: u64) -> String {
    let mut s = String::new();
    fmt::write(&mut s, format_args!("{n}")).expect("write to String");
    s
}

/// A word over an alphabet: the free monoid.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<Symbol>,
}

impl Word {
    /// The empty word (monoid unit), rendered as `~`.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_letters<I: IntoIterator<Item = Symbol>>(letters: I) -> Self {
        Word {
            letters: letters.into_iter().collect(),
        }
    }

    /// One-letter word.
    pub fn letter(sym: Symbol) -> Self {
        Word {
            letters: alloc::vec![sym],
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Symbol] {
        &self.letters
    }

    pub fn get(&self, ix: usize) -> Option<Symbol> {
        self.letters.get(ix).copied()
    }

    /// Concatenation.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// The sub-word over `range` (half-open, must be in bounds).
    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word {
            letters: self.letters[start..end].to_vec(),
        }
    }

    /// Replace the letters in `[start, end)` with `patch`, returning the new word.
    pub fn splice(&self, start: usize, end: usize, patch: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len() - (end - start) + patch.len());
        letters.extend_from_slice(&self.letters[..start]);
        letters.extend_from_slice(&patch.letters);
        letters.extend_from_slice(&self.letters[end..]);
        Word { letters }
    }

    /// Canonical text form: letters joined by `.`, the empty word rendered
    /// `~`. Example: `x.x.y.y`.
    pub fn render(&self, names: &Alphabet) -> String {
        if self.is_empty() {
            return String::from("~");
        }
        let mut out = String::new();
        for (i, sym) in self.letters.iter().enumerate() {
            if i > 0 {
                out.push('.');
            }
            out.push_str(names.name(*sym));
        }
        out
    }
}

/// Letter-count projection from words to multisets. This is the map that
/// forgets ordering; every translation between the word-level and
/// multiset-level presentations factors through it.
pub fn parikh(word: &Word) -> Multiset {
    let mut m = Multiset::zero();
    for &sym in word.letters() {
        m.insert(sym, 1);
    }
    m
}
