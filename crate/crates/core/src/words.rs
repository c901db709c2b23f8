//! Finite words over small alphabets, factor search and square detection.
//!
//! A [`Word`] is a sequence of letters `0..k` for an alphabet of size `k`
//! (at most 10, so every letter prints as a single decimal digit). Words
//! compare lexicographically by letter value.
//!
//! Squarefreeness is decided with a Main–Lorentz style divide and conquer
//! over Z-functions, `O(n log n)` in the word length, so prefixes of a
//! million letters are cheap to scan.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::enumerate::FactorSet;
use crate::error::WordError;

/// Largest supported alphabet: letters print as the digits `0..=9`.
pub const MAX_ALPHABET: u8 = 10;

/// An alphabet `{0, 1, ..., k-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet(u8);

impl Alphabet {
    pub const BINARY: Alphabet = Alphabet(2);
    pub const TERNARY: Alphabet = Alphabet(3);

    pub fn new(size: usize) -> Result<Self, WordError> {
        if (1..=MAX_ALPHABET as usize).contains(&size) {
            Ok(Alphabet(size as u8))
        } else {
            Err(WordError::AlphabetSize(size))
        }
    }

    pub fn size(self) -> u8 {
        self.0
    }

    pub fn contains(self, letter: Letter) -> bool {
        letter.0 < self.0
    }

    pub fn letters(self) -> impl Iterator<Item = Letter> {
        (0..self.0).map(Letter)
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Alphabet::TERNARY
    }
}

/// A single letter. Validity is relative to an [`Alphabet`] and checked
/// when the letter is placed in a [`Word`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u8);

impl Letter {
    pub const fn new(value: u8) -> Self {
        Letter(value)
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

impl From<Letter> for u8 {
    fn from(l: Letter) -> u8 {
        l.0
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite word over an [`Alphabet`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<u8>,
    alphabet: Alphabet,
}

impl Word {
    pub fn new(alphabet: Alphabet, letters: impl Into<Vec<u8>>) -> Result<Self, WordError> {
        let letters = letters.into();
        if let Some(&bad) = letters.iter().find(|&&l| l >= alphabet.size()) {
            return Err(WordError::LetterOutOfRange { letter: bad, alphabet: alphabet.size() });
        }
        Ok(Word { letters, alphabet })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Word { letters: Vec::new(), alphabet }
    }

    /// Parses the digit-string text format; `""` is the empty word.
    pub fn parse(text: &str, alphabet: Alphabet) -> Result<Self, WordError> {
        let mut letters = Vec::with_capacity(text.len());
        for (index, ch) in text.chars().enumerate() {
            match ch.to_digit(10) {
                Some(d) if (d as u8) < alphabet.size() => letters.push(d as u8),
                Some(d) => return Err(WordError::LetterOutOfRange { letter: d as u8, alphabet: alphabet.size() }),
                None => return Err(WordError::InvalidCharacter { text: text.to_owned(), ch, index }),
            }
        }
        Ok(Word { letters, alphabet })
    }

    /// Caller guarantees every letter is below `alphabet.size()`.
    pub(crate) fn from_raw(alphabet: Alphabet, letters: Vec<u8>) -> Self {
        debug_assert!(letters.iter().all(|&l| l < alphabet.size()));
        Word { letters, alphabet }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The raw letter values.
    pub fn symbols(&self) -> &[u8] {
        &self.letters
    }

    pub fn letter(&self, index: usize) -> Letter {
        Letter(self.letters[index])
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.letters.iter().map(|&l| Letter(l))
    }

    pub fn factor(&self, range: Range<usize>) -> Word {
        Word { letters: self.letters[range].to_vec(), alphabet: self.alphabet }
    }

    pub fn prefix(&self, n: usize) -> Word {
        self.factor(0..n.min(self.len()))
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { letters, alphabet: self.alphabet.max(other.alphabet) }
    }

    pub fn contains(&self, factor: &Word) -> bool {
        find_factor(&self.letters, &factor.letters, 0).is_some()
    }

    /// The same letters viewed over a different alphabet.
    pub fn with_alphabet(&self, alphabet: Alphabet) -> Result<Word, WordError> {
        Word::new(alphabet, self.letters.clone())
    }
}

impl FromStr for Word {
    type Err = WordError;

    /// Parses a word over the ternary alphabet.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse(s, Alphabet::TERNARY)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(\"{self}\")")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A factor located inside some host word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Occurrence {
    pub position: usize,
    pub factor: Word,
}

impl Occurrence {
    pub fn end(&self) -> usize {
        self.position + self.factor.len()
    }
}

impl fmt::Display for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.factor, self.position)
    }
}

/// True iff `w = xx` for some nonempty `x`.
pub fn is_square(w: &Word) -> bool {
    is_square_slice(w.symbols())
}

/// True iff no factor of `w` is a square.
pub fn is_squarefree(w: &Word) -> bool {
    find_square(w.symbols()).is_none()
}

/// The shortest square ending at the last letter of `w`.
pub fn square_suffix(w: &Word) -> Option<Occurrence> {
    let s = w.symbols();
    square_suffix_half(s).map(|half| {
        let start = s.len() - 2 * half;
        Occurrence { position: start, factor: w.factor(start..s.len()) }
    })
}

/// Some square occurring in `w`, not necessarily the first.
pub fn any_square(w: &Word) -> Option<Occurrence> {
    find_square(w.symbols())
        .map(|(start, half)| Occurrence { position: start, factor: w.factor(start..start + 2 * half) })
}

/// The square that ends earliest in `w`; among those, the shortest.
pub fn first_square(w: &Word) -> Option<Occurrence> {
    let s = w.symbols();
    let (start, half) = find_square(s)?;
    // Squarefreeness of prefixes is monotone, so bisect on the prefix length.
    let (mut lo, mut hi) = (1, start + 2 * half);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if find_square(&s[..mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    square_suffix(&w.prefix(hi))
}

/// All occurrences of `factor` in `host`, by ascending position.
pub fn occurrences(host: &Word, factor: &Word) -> Result<Vec<Occurrence>, WordError> {
    if factor.is_empty() {
        return Err(WordError::EmptyFactor);
    }
    let (h, f) = (host.symbols(), factor.symbols());
    let mut out = Vec::new();
    let mut from = 0;
    while let Some(p) = find_factor(h, f, from) {
        out.push(Occurrence { position: p, factor: factor.clone() });
        from = p + 1;
    }
    Ok(out)
}

/// True iff some factor of `forbidden` occurs in `host`.
pub fn contains_any(host: &Word, forbidden: &FactorSet) -> bool {
    forbidden.iter().any(|f| host.contains(f))
}

pub(crate) fn is_square_slice(s: &[u8]) -> bool {
    let n = s.len();
    n >= 2 && n.is_multiple_of(2) && s[..n / 2] == s[n / 2..]
}

/// Half-length of the shortest square that is a suffix of `s`.
pub(crate) fn square_suffix_half(s: &[u8]) -> Option<usize> {
    let n = s.len();
    (1..=n / 2).find(|&half| s[n - 2 * half..n - half] == s[n - half..])
}

pub(crate) fn find_factor(host: &[u8], factor: &[u8], from: usize) -> Option<usize> {
    if factor.is_empty() {
        return Some(from.min(host.len()));
    }
    if host.len() < factor.len() {
        return None;
    }
    (from..=host.len() - factor.len()).find(|&p| host[p..p + factor.len()] == *factor)
}

fn z_function(s: &[u8]) -> Vec<usize> {
    let n = s.len();
    let mut z = vec![0; n];
    if n == 0 {
        return z;
    }
    z[0] = n;
    let (mut l, mut r) = (0, 0);
    for i in 1..n {
        if i < r {
            z[i] = (r - i).min(z[i - l]);
        }
        while i + z[i] < n && s[z[i]] == s[i + z[i]] {
            z[i] += 1;
        }
        if i + z[i] > r {
            l = i;
            r = i + z[i];
        }
    }
    z
}

const SEPARATOR: u8 = u8::MAX;

/// Returns `(start, half)` of some square in `s`.
pub(crate) fn find_square(s: &[u8]) -> Option<(usize, usize)> {
    let n = s.len();
    if n < 2 {
        return None;
    }
    if n <= 8 {
        for end in 2..=n {
            if let Some(half) = square_suffix_half(&s[..end]) {
                return Some((end - 2 * half, half));
            }
        }
        return None;
    }
    let mid = n / 2;
    let (u, v) = s.split_at(mid);
    if let Some(hit) = crossing_square(u, v, false) {
        return Some(hit);
    }
    let ru: Vec<u8> = u.iter().rev().copied().collect();
    let rv: Vec<u8> = v.iter().rev().copied().collect();
    if let Some((start, half)) = crossing_square(&rv, &ru, true) {
        return Some((n - start - 2 * half, half));
    }
    find_square(u).or_else(|| find_square(v).map(|(start, half)| (start + mid, half)))
}

/// Finds a square in `u·v` that straddles the boundary and whose second
/// half starts inside `u` (at or before the boundary, or strictly before
/// it when `strict`).
fn crossing_square(u: &[u8], v: &[u8], strict: bool) -> Option<(usize, usize)> {
    let (nu, nv) = (u.len(), v.len());
    if nu == 0 || nv == 0 {
        return None;
    }
    let ru: Vec<u8> = u.iter().rev().copied().collect();
    let z_back = z_function(&ru);
    let mut joined = Vec::with_capacity(nu + nv + 1);
    joined.extend_from_slice(v);
    joined.push(SEPARATOR);
    joined.extend_from_slice(u);
    let z_fwd = z_function(&joined);

    for half in 1..=nu {
        let t = nu - half;
        // Matching run backwards from t-1 against nu-1, forwards from t against v.
        let back = z_back.get(half).copied().unwrap_or(0);
        let fwd = z_fwd[nv + 1 + t];
        let lo = (half.saturating_sub(fwd)).max(usize::from(strict));
        let hi = back.min(half - 1);
        if lo <= hi {
            return Some((t - lo, half));
        }
    }
    None
}
