//! Avoidability of ternary words in infinite squarefree ternary words.
//!
//! Every word falls in one of three classes:
//!
//! * words containing a square, avoided by any infinite squarefree word;
//! * the sixteen unavoidable words: the empty word, the letters, the six
//!   squarefree words of length two and the six words `abc` with distinct
//!   letters;
//! * everything else, avoided by a renamed copy of the morphism
//!   `0 -> 12, 1 -> 102, 2 -> 0`, whose limit word from `1` avoids `101`,
//!   `202`, `0120` and `0210`.
//!
//! Unavoidable verdicts are backed by exhaustive search over the 34422
//! squarefree words of length 30. Avoidable verdicts carry the renamed
//! morphism, a scanned limit prefix and an [`AvoidanceCertificate`].

use std::fmt;

use itertools::Itertools;
use serde::{Serialize, Serializer};

use crate::enumerate::{all_contain, ContainmentReport, FactorSet};
use crate::error::ClassifyError;
use crate::morphism::{certify_avoidance, AvoidanceCertificate, Morphism};
use crate::words::{first_square, is_squarefree, Alphabet, Letter, Occurrence, Word};

/// Rules of the base morphism.
pub const BASE_MORPHISM: &str = "0:12,1:102,2:0";
/// Letter the base morphism is iterated from.
pub const BASE_SEED: u8 = 1;
/// Length at which every squarefree ternary word contains each `abc` word.
pub const UNAVOIDABILITY_LENGTH: usize = 30;
/// Smallest accepted witness verification depth.
pub const MIN_DEPTH: usize = 30;
/// Default witness verification depth.
pub const DEFAULT_DEPTH: usize = 10_000;

/// `0 -> 12, 1 -> 102, 2 -> 0`.
pub fn base_morphism() -> Morphism {
    Morphism::parse(BASE_MORPHISM).expect("valid rules")
}

/// A bijection on the letters of an alphabet.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn new(images: Vec<u8>) -> Result<Self, ClassifyError> {
        let mut seen = images.clone();
        seen.sort_unstable();
        if images.is_empty() || seen.iter().enumerate().any(|(i, &l)| i != l as usize) {
            return Err(ClassifyError::NotBijective(images));
        }
        Alphabet::new(images.len())?;
        Ok(Permutation { images })
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        Permutation { images: (0..alphabet.size()).collect() }
    }

    pub fn transposition(alphabet: Alphabet, a: Letter, b: Letter) -> Self {
        let mut p = Permutation::identity(alphabet);
        p.images.swap(a.value() as usize, b.value() as usize);
        p
    }

    /// All permutations of the alphabet, in lexicographic order of images.
    pub fn all(alphabet: Alphabet) -> Vec<Permutation> {
        (0..alphabet.size()).permutations(alphabet.size() as usize).map(|images| Permutation { images }).collect()
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.images.len()).expect("validated size")
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &l)| i == l as usize)
    }

    pub fn apply_letter(&self, a: Letter) -> Letter {
        Letter::new(self.images[a.value() as usize])
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Permutation) -> Permutation {
        Permutation { images: first.images.iter().map(|&l| self.images[l as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (a, &b) in self.images.iter().enumerate() {
            images[b as usize] = a as u8;
        }
        Permutation { images }
    }

    /// Letterwise renaming.
    pub fn permute_word(&self, w: &Word) -> Result<Word, ClassifyError> {
        self.check_size(w.alphabet())?;
        let letters = w.symbols().iter().map(|&l| self.images[l as usize]).collect();
        Ok(Word::from_raw(w.alphabet(), letters))
    }

    /// The conjugate `p ∘ h ∘ p⁻¹`, mapping `p(a)` to `p(h(a))`. Its limit
    /// from `p(seed)` is the renamed limit of `h` from `seed`.
    pub fn permute_morphism(&self, h: &Morphism) -> Result<Morphism, ClassifyError> {
        self.check_size(h.alphabet())?;
        let inverse = self.inverse();
        let images = h
            .alphabet()
            .letters()
            .map(|b| self.permute_word(h.image(inverse.apply_letter(b))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Morphism::new(images)?)
    }

    fn check_size(&self, alphabet: Alphabet) -> Result<(), ClassifyError> {
        if alphabet.size() as usize == self.images.len() {
            Ok(())
        } else {
            Err(ClassifyError::SizeMismatch { permutation: self.images.len() as u8, alphabet: alphabet.size() })
        }
    }
}

impl fmt::Display for Permutation {
    /// `012→102` lists the letters, then their images.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.images.len() {
            write!(f, "{i}")?;
        }
        f.write_str("→")?;
        for l in &self.images {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A renamed copy of the base morphism and its seed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Construction {
    pub morphism: Morphism,
    pub seed: Word,
    pub permutation: Permutation,
}

impl Construction {
    pub fn renamed(permutation: Permutation) -> Self {
        let base = base_morphism();
        let seed = Word::from_raw(Alphabet::TERNARY, vec![BASE_SEED]);
        Construction {
            morphism: permutation.permute_morphism(&base).expect("ternary"),
            seed: permutation.permute_word(&seed).expect("ternary"),
            permutation,
        }
    }

    pub fn limit_prefix(&self, n: usize) -> Result<Word, ClassifyError> {
        Ok(self.morphism.limit_prefix(&self.seed, n)?)
    }
}

fn ternary_letter(a: Letter) -> Result<u8, ClassifyError> {
    if Alphabet::TERNARY.contains(a) {
        Ok(a.value())
    } else {
        Err(crate::error::WordError::LetterOutOfRange { letter: a.value(), alphabet: 3 }.into())
    }
}

/// A construction whose limit word avoids `a b a`.
///
/// The base limit avoids `101` and `202`; renaming by the identity,
/// `0↔1` or `0↔2` covers all six words of this shape.
pub fn aba_witness(a: Letter, b: Letter) -> Result<Construction, ClassifyError> {
    let (a, b) = (ternary_letter(a)?, ternary_letter(b)?);
    if a == b {
        return Err(ClassifyError::RepeatedLetters);
    }
    let target = Word::from_raw(Alphabet::TERNARY, vec![a, b, a]);
    let t = Alphabet::TERNARY;
    let candidates = [
        Permutation::identity(t),
        Permutation::transposition(t, Letter::new(0), Letter::new(1)),
        Permutation::transposition(t, Letter::new(0), Letter::new(2)),
    ];
    let avoided = [Word::from_raw(t, vec![1, 0, 1]), Word::from_raw(t, vec![2, 0, 2])];
    let p = candidates
        .into_iter()
        .find(|p| avoided.iter().any(|w| p.permute_word(w).expect("ternary") == target))
        .expect("the three renamings cover every aba word");
    Ok(Construction::renamed(p))
}

/// A construction whose limit word avoids both `a b c a` and `a c b a`:
/// the renaming `0 -> a, 1 -> b, 2 -> c` of the base morphism.
pub fn abca_witness(a: Letter, b: Letter, c: Letter) -> Result<Construction, ClassifyError> {
    let (a, b, c) = (ternary_letter(a)?, ternary_letter(b)?, ternary_letter(c)?);
    if a == b || b == c || a == c {
        return Err(ClassifyError::RepeatedLetters);
    }
    Ok(Construction::renamed(Permutation::new(vec![a, b, c])?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    Avoidable,
    Unavoidable,
    /// The word contains a square, so every squarefree word avoids it.
    TriviallyAvoidable,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::Avoidable => "avoidable",
            VerdictKind::Unavoidable => "unavoidable",
            VerdictKind::TriviallyAvoidable => "trivially-avoidable",
        })
    }
}

/// A construction together with the length of limit prefix that was
/// checked to be squarefree and free of the classified word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub morphism: Morphism,
    pub seed: Word,
    pub permutation: Permutation,
    pub checked_prefix: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// The empty word is a factor of every word.
    Vacuous,
    ContainsSquare {
        square: Occurrence,
    },
    /// Exhaustive check that every squarefree word of the given length contains the word.
    Exhaustive(ContainmentReport),
    /// Morphic avoidance of `reduced`, a factor of the classified word.
    Avoidance {
        reduced: Word,
        certificate: AvoidanceCertificate,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub word: Word,
    pub kind: VerdictKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

/// Shape of a squarefree ternary word of length four.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadrupleClass {
    /// Contains a square.
    Square,
    /// Contains `aba` with `a ≠ b`.
    ContainsAba,
    /// Of the form `abca` with distinct `a, b, c`.
    Abca,
}

/// Classifies a length-four ternary word.
pub fn quadruple_class(x: &Word) -> Option<QuadrupleClass> {
    let s = x.symbols();
    if s.len() != 4 {
        return None;
    }
    if !is_squarefree(x) {
        Some(QuadrupleClass::Square)
    } else if s.windows(3).any(|t| t[0] == t[2]) {
        Some(QuadrupleClass::ContainsAba)
    } else {
        Some(QuadrupleClass::Abca)
    }
}

/// Classifies `x`, verifying any morphic witness on a limit prefix of
/// length `depth`.
pub fn classify(x: &Word, depth: usize) -> Result<Verdict, ClassifyError> {
    if depth < MIN_DEPTH {
        return Err(ClassifyError::DepthTooSmall(depth));
    }
    if x.alphabet() != Alphabet::TERNARY {
        return Err(ClassifyError::NotTernary(x.alphabet().size()));
    }
    if x.is_empty() {
        return Ok(Verdict {
            word: x.clone(),
            kind: VerdictKind::Unavoidable,
            witness: None,
            certificate: Some(Certificate::Vacuous),
        });
    }
    if let Some(square) = first_square(x) {
        let construction = Construction::renamed(Permutation::identity(Alphabet::TERNARY));
        let witness = verified_witness(&construction, x, depth)?;
        return Ok(Verdict {
            word: x.clone(),
            kind: VerdictKind::TriviallyAvoidable,
            witness: Some(witness),
            certificate: Some(Certificate::ContainsSquare { square }),
        });
    }
    let s = x.symbols();
    let forced = s.len() <= 2 || (s.len() == 3 && s[0] != s[2]);
    if forced {
        let required = FactorSet::new(Alphabet::TERNARY, [x.clone()])?;
        let report = all_contain(UNAVOIDABILITY_LENGTH, &required);
        if !report.holds {
            return Err(ClassifyError::CheckFailed {
                word: x.clone(),
                reason: format!("a squarefree word of length {UNAVOIDABILITY_LENGTH} avoids it"),
            });
        }
        return Ok(Verdict {
            word: x.clone(),
            kind: VerdictKind::Unavoidable,
            witness: None,
            certificate: Some(Certificate::Exhaustive(report)),
        });
    }
    let (reduced, construction) = reduce(x)?;
    let witness = verified_witness(&construction, x, depth)?;
    let avoided = FactorSet::new(Alphabet::TERNARY, [reduced.clone()])?;
    let certificate = certify_avoidance(&construction.morphism, &construction.seed, &avoided, depth)?;
    Ok(Verdict {
        word: x.clone(),
        kind: VerdictKind::Avoidable,
        witness: Some(witness),
        certificate: Some(Certificate::Avoidance { reduced, certificate }),
    })
}

/// Picks the factor of a squarefree word (length at least 3, not of shape
/// `abc`) whose avoidance implies avoidance of the word, and a construction
/// avoiding it. Length-four windows are tried left to right.
fn reduce(x: &Word) -> Result<(Word, Construction), ClassifyError> {
    let s = x.symbols();
    if s.len() == 3 {
        return Ok((x.clone(), aba_witness(Letter::new(s[0]), Letter::new(s[1]))?));
    }
    for start in 0..=s.len() - 4 {
        let window = x.factor(start..start + 4);
        let q = window.symbols();
        match quadruple_class(&window) {
            Some(QuadrupleClass::ContainsAba) => {
                let i = (0..2).find(|&i| q[i] == q[i + 2]).expect("aba factor");
                let aba = window.factor(i..i + 3);
                return Ok((aba, aba_witness(Letter::new(q[i]), Letter::new(q[i + 1]))?));
            }
            Some(QuadrupleClass::Abca) => {
                let c = abca_witness(Letter::new(q[0]), Letter::new(q[1]), Letter::new(q[2]))?;
                return Ok((window, c));
            }
            _ => continue,
        }
    }
    Err(ClassifyError::CheckFailed { word: x.clone(), reason: "no usable length-4 factor".into() })
}

fn verified_witness(c: &Construction, x: &Word, depth: usize) -> Result<Witness, ClassifyError> {
    let prefix = c.limit_prefix(depth)?;
    if !is_squarefree(&prefix) {
        return Err(ClassifyError::CheckFailed { word: x.clone(), reason: "witness prefix has a square".into() });
    }
    if prefix.contains(x) {
        return Err(ClassifyError::CheckFailed { word: x.clone(), reason: "witness prefix contains the word".into() });
    }
    Ok(Witness {
        morphism: c.morphism.clone(),
        seed: c.seed.clone(),
        permutation: c.permutation.clone(),
        checked_prefix: depth,
    })
}

/// The sixteen unavoidable ternary words, shortest first: the empty word,
/// the three letters, the six squarefree words of length two and the six
/// words of three distinct letters.
pub fn unavoidable_set() -> Vec<Word> {
    let t = Alphabet::TERNARY;
    let mut out = vec![Word::empty(t)];
    for len in 1..=3 {
        for letters in itertools::repeat_n(0..3u8, len).multi_cartesian_product() {
            let w = Word::from_raw(t, letters);
            let s = w.symbols();
            if is_squarefree(&w) && !(len == 3 && s[0] == s[2]) {
                out.push(w);
            }
        }
    }
    out
}
