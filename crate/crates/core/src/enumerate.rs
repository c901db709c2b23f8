//! Pruned backtracking over squarefree words that avoid a set of factors.
//!
//! Partial words are extended one letter at a time, smallest letter first,
//! and a child is kept only when no square and no forbidden factor ends at
//! the new letter. Both constraints are closed under taking prefixes, so the
//! pruning loses nothing and the traversal visits exactly the admissible
//! words in lexicographic order.
//!
//! Every operation works over the alphabet carried by its [`FactorSet`].

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::WordError;
use crate::words::{square_suffix_half, Alphabet, Word};

/// A finite set of nonempty factors over one alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct FactorSet {
    #[serde(skip)]
    alphabet: Alphabet,
    factors: BTreeSet<Word>,
}

impl FactorSet {
    pub fn empty(alphabet: Alphabet) -> Self {
        FactorSet { alphabet, factors: BTreeSet::new() }
    }

    pub fn new(alphabet: Alphabet, factors: impl IntoIterator<Item = Word>) -> Result<Self, WordError> {
        let mut set = FactorSet::empty(alphabet);
        for f in factors {
            set.insert(f)?;
        }
        Ok(set)
    }

    /// Parses a comma-separated list such as `0120,0210`; `""` is the empty set.
    pub fn parse(text: &str, alphabet: Alphabet) -> Result<Self, WordError> {
        if text.is_empty() {
            return Ok(FactorSet::empty(alphabet));
        }
        let words = text.split(',').map(|t| Word::parse(t, alphabet)).collect::<Result<Vec<_>, _>>()?;
        FactorSet::new(alphabet, words)
    }

    /// Adds a factor; returns whether it was new.
    pub fn insert(&mut self, factor: Word) -> Result<bool, WordError> {
        if factor.is_empty() {
            return Err(WordError::EmptyFactor);
        }
        let factor = if factor.alphabet() == self.alphabet {
            factor
        } else {
            factor.with_alphabet(self.alphabet).map_err(|_| WordError::AlphabetMismatch {
                expected: self.alphabet.size(),
                found: factor.alphabet().size(),
                factor: factor.clone(),
            })?
        };
        Ok(self.factors.insert(factor))
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn contains(&self, factor: &Word) -> bool {
        self.factors.contains(factor)
    }

    /// Factors in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.factors.iter()
    }

    pub fn is_subset(&self, other: &FactorSet) -> bool {
        self.factors.is_subset(&other.factors)
    }

    fn raw(&self) -> Vec<Vec<u8>> {
        self.factors.iter().map(|f| f.symbols().to_vec()).collect()
    }
}

impl fmt::Display for FactorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl<'a> IntoIterator for &'a FactorSet {
    type Item = &'a Word;
    type IntoIter = std::collections::btree_set::Iter<'a, Word>;

    fn into_iter(self) -> Self::IntoIter {
        self.factors.iter()
    }
}

/// Population and effort of a search down to `target_length`.
///
/// `nodes_visited` counts admissible partial words of every length up to the
/// target, the empty word included.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationStats {
    pub target_length: usize,
    #[serde(rename = "count")]
    pub count_at_target: u64,
    pub nodes_visited: u64,
    #[serde(rename = "max_depth")]
    pub max_depth_reached: usize,
}

impl EnumerationStats {
    fn merge(self, other: EnumerationStats) -> EnumerationStats {
        EnumerationStats {
            target_length: self.target_length,
            count_at_target: self.count_at_target + other.count_at_target,
            nodes_visited: self.nodes_visited + other.nodes_visited,
            max_depth_reached: self.max_depth_reached.max(other.max_depth_reached),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutcomeKind {
    /// The search tree is finite: no admissible word is longer than `longest_length`.
    Finite,
    /// The depth bound was reached. Evidence of avoidability, not a proof.
    ExceedsCap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub kind: OutcomeKind,
    pub longest_length: usize,
    /// Lexicographically least admissible word of length `longest_length`.
    pub witness: Word,
}

impl SearchOutcome {
    pub fn is_finite(&self) -> bool {
        self.kind == OutcomeKind::Finite
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub word: Word,
    pub missing: Word,
}

/// Result of checking that every admissible word of a length contains
/// every required factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContainmentReport {
    pub target_length: usize,
    pub holds: bool,
    /// Words examined: the full population when `holds`.
    pub words_checked: u64,
    pub counterexample: Option<Counterexample>,
}

/// Resumable depth-first walk over admissible words, in preorder.
pub(crate) struct Dfs {
    k: u8,
    avoid: Vec<Vec<u8>>,
    max_depth: usize,
    root_len: usize,
    buf: Vec<u8>,
    started: bool,
    done: bool,
}

pub(crate) fn admissible(buf: &[u8], avoid: &[Vec<u8>]) -> bool {
    square_suffix_half(buf).is_none() && !avoid.iter().any(|f| buf.ends_with(f))
}

impl Dfs {
    /// `root` must itself be admissible; only its extensions are walked.
    pub(crate) fn new(k: u8, avoid: Vec<Vec<u8>>, root: Vec<u8>, max_depth: usize) -> Self {
        Dfs { k, avoid, max_depth, root_len: root.len(), buf: root, started: false, done: false }
    }

    fn push_from(&mut self, first: u8) -> bool {
        for c in first..self.k {
            self.buf.push(c);
            if admissible(&self.buf, &self.avoid) {
                return true;
            }
            self.buf.pop();
        }
        false
    }

    pub(crate) fn next_node(&mut self) -> Option<&[u8]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.buf);
        }
        if self.buf.len() < self.max_depth && self.push_from(0) {
            return Some(&self.buf);
        }
        while self.buf.len() > self.root_len {
            let last = self.buf.pop().expect("nonempty");
            if self.push_from(last + 1) {
                return Some(&self.buf);
            }
        }
        self.done = true;
        None
    }
}

/// Lazy stream of admissible words of one length, in lexicographic order.
pub struct SquarefreeWords {
    alphabet: Alphabet,
    target: usize,
    dfs: Dfs,
}

impl Iterator for SquarefreeWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        while let Some(node) = self.dfs.next_node() {
            if node.len() == self.target {
                return Some(Word::from_raw(self.alphabet, node.to_vec()));
            }
        }
        None
    }
}

/// All squarefree words of length `n` that avoid every factor of `avoid`,
/// in lexicographic order.
pub fn enumerate_squarefree(n: usize, avoid: &FactorSet) -> SquarefreeWords {
    let alphabet = avoid.alphabet();
    SquarefreeWords { alphabet, target: n, dfs: Dfs::new(alphabet.size(), avoid.raw(), Vec::with_capacity(n), n) }
}

fn walk_stats(k: u8, avoid: Vec<Vec<u8>>, root: Vec<u8>, n: usize) -> EnumerationStats {
    let mut stats = EnumerationStats { target_length: n, count_at_target: 0, nodes_visited: 0, max_depth_reached: 0 };
    let mut dfs = Dfs::new(k, avoid, root, n);
    while let Some(node) = dfs.next_node() {
        stats.nodes_visited += 1;
        stats.max_depth_reached = stats.max_depth_reached.max(node.len());
        if node.len() == n {
            stats.count_at_target += 1;
        }
    }
    stats
}

const SPLIT_DEPTH: usize = 4;

/// Counts the words [`enumerate_squarefree`] would yield.
///
/// Subtrees below depth 4 are searched in parallel on the current rayon
/// pool; the result does not depend on the number of workers.
pub fn count_squarefree(n: usize, avoid: &FactorSet) -> EnumerationStats {
    let k = avoid.alphabet().size();
    let raw = avoid.raw();
    let split = n.min(SPLIT_DEPTH);
    let mut top = EnumerationStats { target_length: n, count_at_target: 0, nodes_visited: 0, max_depth_reached: 0 };
    let mut frontier = Vec::new();
    let mut dfs = Dfs::new(k, raw.clone(), Vec::new(), split);
    while let Some(node) = dfs.next_node() {
        if node.len() == split {
            frontier.push(node.to_vec());
        } else {
            top.nodes_visited += 1;
            top.max_depth_reached = top.max_depth_reached.max(node.len());
        }
    }
    frontier
        .into_par_iter()
        .map(|root| walk_stats(k, raw.clone(), root, n))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(top, EnumerationStats::merge)
}

/// Single-threaded [`count_squarefree`].
pub fn count_squarefree_sequential(n: usize, avoid: &FactorSet) -> EnumerationStats {
    walk_stats(avoid.alphabet().size(), avoid.raw(), Vec::new(), n)
}

/// Checks that every squarefree word of length `n` contains every factor of
/// `required`. Stops at the lexicographically least counterexample.
pub fn all_contain(n: usize, required: &FactorSet) -> ContainmentReport {
    let none = FactorSet::empty(required.alphabet());
    let mut checked = 0;
    for word in enumerate_squarefree(n, &none) {
        checked += 1;
        if let Some(missing) = required.iter().find(|f| !word.contains(f)) {
            return ContainmentReport {
                target_length: n,
                holds: false,
                words_checked: checked,
                counterexample: Some(Counterexample { word, missing: missing.clone() }),
            };
        }
    }
    ContainmentReport { target_length: n, holds: true, words_checked: checked, counterexample: None }
}

/// Searches for the longest squarefree word avoiding `avoid`, up to `cap`.
pub fn max_length_avoiding(avoid: &FactorSet, cap: usize) -> SearchOutcome {
    let alphabet = avoid.alphabet();
    let mut dfs = Dfs::new(alphabet.size(), avoid.raw(), Vec::new(), cap);
    let mut best: Vec<u8> = Vec::new();
    while let Some(node) = dfs.next_node() {
        if node.len() > best.len() {
            best = node.to_vec();
            if best.len() == cap {
                return SearchOutcome {
                    kind: OutcomeKind::ExceedsCap,
                    longest_length: cap,
                    witness: Word::from_raw(alphabet, best),
                };
            }
        }
    }
    SearchOutcome { kind: OutcomeKind::Finite, longest_length: best.len(), witness: Word::from_raw(alphabet, best) }
}
