//! Non-erasing endomorphisms of `Σ_k*`: application, prolongability,
//! limit words, bounded squarefreeness testing, factor preimages and
//! avoidance certificates.

mod certificate;
mod preimage;

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

pub use certificate::{
    certify_avoidance, AvoidanceCertificate, Certifier, Defect, FactorArgument, Reason, WitnessArgument,
};
pub use preimage::{exhaustive_source_bound, preimage_factors, PreimageWitness};

use crate::enumerate::{enumerate_squarefree, FactorSet};
use crate::error::MorphismError;
use crate::words::{is_squarefree, Alphabet, Letter, Word};

/// Iterations allowed before [`Morphism::limit_prefix`] gives up.
pub const ITERATION_BUDGET: usize = 64;

/// Default word length for [`Morphism::squarefree_on_bounded`].
pub const DEFAULT_SQUAREFREE_TEST_LENGTH: usize = 5;

/// A morphism `h` with `h(xy) = h(x)h(y)`, given by a nonempty image for
/// every letter of its alphabet.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    alphabet: Alphabet,
    images: Vec<Word>,
}

impl Morphism {
    /// One image per letter `0..images.len()`.
    pub fn new(images: Vec<Word>) -> Result<Self, MorphismError> {
        let alphabet = Alphabet::new(images.len())?;
        let images = images
            .into_iter()
            .enumerate()
            .map(|(letter, image)| {
                if image.is_empty() {
                    Err(MorphismError::EmptyImage(letter as u8))
                } else {
                    Ok(image.with_alphabet(alphabet)?)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Morphism { alphabet, images })
    }

    /// Parses `letter:image` rules separated by commas, e.g. `0:12,1:102,2:0`.
    /// The rules must cover the letters `0..k` exactly once each.
    pub fn parse(rules: &str) -> Result<Self, MorphismError> {
        let mut slots: Vec<Option<&str>> = Vec::new();
        for rule in rules.split(',') {
            let (lhs, rhs) = rule.split_once(':').ok_or_else(|| MorphismError::MalformedRule(rule.to_owned()))?;
            let letter: u8 = match lhs.as_bytes() {
                [d @ b'0'..=b'9'] => d - b'0',
                _ => return Err(MorphismError::MalformedRule(rule.to_owned())),
            };
            let idx = letter as usize;
            if slots.len() <= idx {
                slots.resize(idx + 1, None);
            }
            if slots[idx].replace(rhs).is_some() {
                return Err(MorphismError::DuplicateRule(letter));
            }
        }
        let alphabet = Alphabet::new(slots.len())?;
        let images = slots
            .iter()
            .enumerate()
            .map(|(letter, rhs)| {
                let rhs = rhs.ok_or(MorphismError::MissingRule(letter as u8))?;
                if rhs.is_empty() {
                    return Err(MorphismError::EmptyImage(letter as u8));
                }
                Ok(Word::parse(rhs, alphabet)?)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Morphism { alphabet, images })
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        let images = alphabet.letters().map(|l| Word::from_raw(alphabet, vec![l.value()])).collect();
        Morphism { alphabet, images }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn image(&self, letter: Letter) -> &Word {
        &self.images[letter.value() as usize]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn min_image_len(&self) -> usize {
        self.images.iter().map(Word::len).min().unwrap_or(1)
    }

    pub fn apply(&self, w: &Word) -> Result<Word, MorphismError> {
        let mut out = Vec::with_capacity(w.len() * 2);
        self.apply_into(w.symbols(), &mut out, usize::MAX)?;
        Ok(Word::from_raw(self.alphabet, out))
    }

    /// Appends `h(s)` to `out`, stopping once `out` holds `limit` letters.
    fn apply_into(&self, s: &[u8], out: &mut Vec<u8>, limit: usize) -> Result<(), MorphismError> {
        for &l in s {
            if out.len() >= limit {
                break;
            }
            let image = self
                .images
                .get(l as usize)
                .ok_or(crate::error::WordError::LetterOutOfRange { letter: l, alphabet: self.alphabet.size() })?;
            out.extend_from_slice(image.symbols());
        }
        out.truncate(limit);
        Ok(())
    }

    /// `h(a) = a·x` with `x` nonempty.
    pub fn prolongable_on(&self, a: Letter) -> bool {
        self.alphabet.contains(a) && {
            let image = self.image(a);
            image.len() >= 2 && image.letter(0) == a
        }
    }

    /// The first `n` letters of `lim h^k(seed)`.
    ///
    /// Consecutive iterates are compared and the common prefix is taken as
    /// stable; once a common prefix is shared by two iterates, applying `h`
    /// keeps it shared, so the stable prefix only grows. Iterates are
    /// truncated to `n` letters, which is exact because `h(u)` is a prefix of
    /// `h(uv)`. Lengths of the untruncated iterates are tracked through
    /// letter counts.
    pub fn limit_prefix(&self, seed: &Word, n: usize) -> Result<Word, MorphismError> {
        let k = self.alphabet.size() as usize;
        let mut cur = seed.symbols().to_vec();
        if let Some(&bad) = cur.iter().find(|&&l| l as usize >= k) {
            return Err(crate::error::WordError::LetterOutOfRange { letter: bad, alphabet: k as u8 }.into());
        }
        if n == 0 {
            return Ok(Word::empty(self.alphabet));
        }
        let mut counts = vec![0u64; k];
        for &l in &cur {
            counts[l as usize] += 1;
        }
        let mut full_len = cur.len() as u64;
        let mut stalled = 0;
        let mut stable = 0;
        for _ in 0..ITERATION_BUDGET {
            let mut next = Vec::with_capacity(n);
            self.apply_into(&cur, &mut next, n)?;
            stable = cur.iter().zip(&next).take_while(|(a, b)| a == b).count();
            if stable >= n {
                next.truncate(n);
                return Ok(Word::from_raw(self.alphabet, next));
            }
            let mut next_counts = vec![0u64; k];
            for (letter, &c) in counts.iter().enumerate() {
                for &b in self.images[letter].symbols() {
                    next_counts[b as usize] = next_counts[b as usize].saturating_add(c);
                }
            }
            let next_len = next_counts.iter().fold(0u64, |acc, &c| acc.saturating_add(c));
            // A letter orbit under unit images repeats within k steps.
            if next_len <= full_len {
                stalled += 1;
                if stalled >= k {
                    return Err(MorphismError::NonGrowing { seed: seed.clone(), length: full_len as usize });
                }
            } else {
                stalled = 0;
            }
            counts = next_counts;
            full_len = next_len;
            cur = next;
        }
        Err(MorphismError::NonConverging { seed: seed.clone(), stable, wanted: n, iterations: ITERATION_BUDGET })
    }

    /// Checks that `h(x)` is squarefree for every squarefree `x` with
    /// `|x| <= max_len`, shortest words first.
    pub fn squarefree_on_bounded(&self, max_len: usize) -> BoundedCheck {
        self.squarefree_on_bounded_within(max_len, &FactorSet::empty(self.alphabet))
    }

    /// [`Morphism::squarefree_on_bounded`] restricted to words that also
    /// avoid `domain_avoid`. Limit words avoiding a known set only ever
    /// need the restricted check.
    pub fn squarefree_on_bounded_within(&self, max_len: usize, domain_avoid: &FactorSet) -> BoundedCheck {
        let mut words_checked = 0;
        for len in 1..=max_len {
            for x in enumerate_squarefree(len, domain_avoid) {
                words_checked += 1;
                let image = self.apply(&x).expect("word over the morphism's alphabet");
                if !is_squarefree(&image) {
                    return BoundedCheck { max_len, holds: false, words_checked, counterexample: Some(x) };
                }
            }
        }
        BoundedCheck { max_len, holds: true, words_checked, counterexample: None }
    }
}

/// Outcome of [`Morphism::squarefree_on_bounded`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundedCheck {
    pub max_len: usize,
    pub holds: bool,
    pub words_checked: u64,
    /// Shortest (then lexicographically least) squarefree word whose image has a square.
    pub counterexample: Option<Word>,
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (letter, image) in self.images.iter().enumerate() {
            if letter > 0 {
                f.write_str(",")?;
            }
            write!(f, "{letter}:{image}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism({self})")
    }
}

impl FromStr for Morphism {
    type Err = MorphismError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Morphism::parse(s)
    }
}

impl Serialize for Morphism {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
