//! Words over a finite alphabet and finite, deduplicated test suites.
//!
//! Every suite is kept in canonical length-lexicographic order (by symbol
//! index), so two suites holding the same set of words are byte-identical
//! once serialized.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Token used for the empty word in files and on the command line.
pub const EPSILON_TOKEN: &str = "-eps-";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("duplicate symbol `{0}` in alphabet")]
    DuplicateSymbol(String),
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(String),
    #[error("symbol index {index} out of range for alphabet of size {size}")]
    SymbolOutOfRange { index: usize, size: usize },
    #[error("suites are over different alphabets")]
    AlphabetMismatch,
    #[error("{0} must contain the empty word")]
    MissingEpsilon(&'static str),
}

/// An ordered set of distinct symbol names. Cloning is cheap.
#[derive(Clone)]
pub struct Alphabet {
    names: Arc<[String]>,
    index: Arc<HashMap<String, usize>>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(WordError::EmptyAlphabet);
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(WordError::DuplicateSymbol(n.clone()));
            }
        }
        Ok(Alphabet {
            names: names.into(),
            index: Arc::new(index),
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, symbol: usize) -> &str {
        &self.names[symbol]
    }

    pub fn symbol(&self, name: &str) -> Result<usize, WordError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| WordError::UnknownSymbol(name.to_string()))
    }

    /// Parses a word written as space-separated symbol names, or [`EPSILON_TOKEN`].
    pub fn parse_word(&self, text: &str) -> Result<Word, WordError> {
        let text = text.trim();
        if text == EPSILON_TOKEN {
            return Ok(Word::empty());
        }
        text.split_whitespace()
            .map(|t| self.symbol(t))
            .collect::<Result<Vec<_>, _>>()
            .map(Word::from)
    }

    /// Parses a word where every symbol name is a single character, e.g. `11c1`.
    pub fn parse_compact(&self, text: &str) -> Result<Word, WordError> {
        if text == EPSILON_TOKEN || text.is_empty() {
            return Ok(Word::empty());
        }
        text.chars()
            .map(|c| self.symbol(c.encode_utf8(&mut [0u8; 4])))
            .collect::<Result<Vec<_>, _>>()
            .map(Word::from)
    }

    fn compact(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Renders a word for human-facing output: symbols are concatenated when
    /// every name is a single character and dot-separated otherwise.
    pub fn render(&self, w: &Word) -> String {
        if w.is_empty() {
            return EPSILON_TOKEN.to_string();
        }
        let sep = if self.compact() { "" } else { "." };
        w.symbols()
            .iter()
            .map(|&s| self.names[s].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Renders a word in suite-file syntax (space-separated).
    pub fn render_spaced(&self, w: &Word) -> String {
        if w.is_empty() {
            return EPSILON_TOKEN.to_string();
        }
        w.symbols()
            .iter()
            .map(|&s| self.names[s].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn check(&self, w: &Word) -> Result<(), WordError> {
        match w.symbols().iter().find(|&&s| s >= self.len()) {
            Some(&index) => Err(WordError::SymbolOutOfRange {
                index,
                size: self.len(),
            }),
            None => Ok(()),
        }
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.names, &other.names) || self.names == other.names
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names.iter()).finish()
    }
}

/// A finite word, stored as symbol indices.
///
/// Ordering is length-lexicographic: shorter words first, then by symbol index.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&self, symbol: usize) -> Word {
        let mut v = self.0.clone();
        v.push(symbol);
        Word(v)
    }

    pub fn prepend(&self, symbol: usize) -> Word {
        let mut v = Vec::with_capacity(self.len() + 1);
        v.push(symbol);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn prefixes(&self) -> impl Iterator<Item = Word> + '_ {
        (0..=self.0.len()).map(move |i| Word(self.0[..i].to_vec()))
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "ε")
        } else {
            write!(f, "{:?}", self.0)
        }
    }
}

/// A finite set of words over one alphabet, in canonical order.
#[derive(Clone, PartialEq, Eq)]
pub struct Suite {
    alphabet: Alphabet,
    words: BTreeSet<Word>,
}

impl Suite {
    pub fn new(alphabet: Alphabet) -> Self {
        Suite {
            alphabet,
            words: BTreeSet::new(),
        }
    }

    /// The suite `{ε}`.
    pub fn unit(alphabet: Alphabet) -> Self {
        let mut s = Suite::new(alphabet);
        s.words.insert(Word::empty());
        s
    }

    pub fn from_words<I>(alphabet: Alphabet, words: I) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = Word>,
    {
        let mut s = Suite::new(alphabet);
        for w in words {
            s.insert(w)?;
        }
        Ok(s)
    }

    /// Builds a suite from compact single-character words such as `"11c1"`;
    /// `""` stands for ε.
    pub fn from_compact(alphabet: Alphabet, words: &[&str]) -> Result<Self, WordError> {
        let ws = words
            .iter()
            .map(|w| alphabet.parse_compact(w))
            .collect::<Result<Vec<_>, _>>()?;
        Suite::from_words(alphabet, ws)
    }

    pub fn insert(&mut self, w: Word) -> Result<bool, WordError> {
        self.alphabet.check(&w)?;
        Ok(self.words.insert(w))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }

    pub fn contains_epsilon(&self) -> bool {
        self.words.contains(&Word::empty())
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> + '_ {
        self.words.iter()
    }

    pub fn to_vec(&self) -> Vec<Word> {
        self.words.iter().cloned().collect()
    }

    pub fn is_subset(&self, other: &Suite) -> bool {
        self.words.is_subset(&other.words)
    }

    pub fn max_len(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }
}

impl fmt::Debug for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.words.iter().map(|w| self.alphabet.render(w)))
            .finish()
    }
}

impl<'a> IntoIterator for &'a Suite {
    type Item = &'a Word;
    type IntoIter = std::collections::btree_set::Iter<'a, Word>;

    fn into_iter(self) -> Self::IntoIter {
        self.words.iter()
    }
}

/// All words of length at most `k`.
pub fn words_upto(alphabet: &Alphabet, k: usize) -> Suite {
    let mut out = Suite::unit(alphabet.clone());
    let mut layer = vec![Word::empty()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for w in &layer {
            for a in 0..alphabet.len() {
                next.push(w.push(a));
            }
        }
        out.words.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// `{ u·v | u ∈ a, v ∈ b }`, deduplicated.
pub fn concat_suites(a: &Suite, b: &Suite) -> Result<Suite, WordError> {
    if a.alphabet != b.alphabet {
        return Err(WordError::AlphabetMismatch);
    }
    let mut out = Suite::new(a.alphabet.clone());
    for u in &a.words {
        for v in &b.words {
            out.words.insert(u.concat(v));
        }
    }
    Ok(out)
}

/// The W suite of order `k`: `p · Σ^{≤k+1} · w`.
pub fn w_suite(p: &Suite, alphabet: &Alphabet, k: usize, w: &Suite) -> Result<Suite, WordError> {
    if !p.contains_epsilon() {
        return Err(WordError::MissingEpsilon("state cover"));
    }
    if !w.contains_epsilon() {
        return Err(WordError::MissingEpsilon("characterization set"));
    }
    if p.alphabet() != alphabet {
        return Err(WordError::AlphabetMismatch);
    }
    let middle = words_upto(alphabet, k + 1);
    concat_suites(&concat_suites(p, &middle)?, w)
}

/// Smallest prefix-closed superset of `t`.
pub fn prefix_close(t: &Suite) -> Suite {
    let mut out = Suite::new(t.alphabet.clone());
    for w in &t.words {
        out.words.extend(w.prefixes());
    }
    out
}

/// Outcome of running one test case against specification and implementation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict<W, O> {
    pub word: W,
    pub spec_out: O,
    pub impl_out: O,
    pub pass: bool,
}

impl<W, O: PartialEq> Verdict<W, O> {
    pub fn new(word: W, spec_out: O, impl_out: O) -> Self {
        let pass = spec_out == impl_out;
        Verdict {
            word,
            spec_out,
            impl_out,
            pass,
        }
    }
}

/// Result of an exact equivalence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence<W> {
    Equivalent,
    /// A shortest word on which the two machines differ.
    Counterexample(W),
}

impl<W> Equivalence<W> {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent)
    }

    pub fn counterexample(&self) -> Option<&W> {
        match self {
            Equivalence::Equivalent => None,
            Equivalence::Counterexample(w) => Some(w),
        }
    }
}

/// True iff every verdict passes.
pub fn all_pass<W, O>(verdicts: &[Verdict<W, O>]) -> bool {
    verdicts.iter().all(|v| v.pass)
}

/// Words of the failing verdicts, in suite order.
pub fn failures<W: Clone, O>(verdicts: &[Verdict<W, O>]) -> Vec<W> {
    verdicts
        .iter()
        .filter(|v| !v.pass)
        .map(|v| v.word.clone())
        .collect()
}
