use thiserror::Error;

use crate::words::Word;

/// Errors raised while building or inspecting words and factor sets.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("alphabet size {0} is outside 1..=10")]
    AlphabetSize(usize),
    #[error("letter {letter} is not in an alphabet of size {alphabet}")]
    LetterOutOfRange { letter: u8, alphabet: u8 },
    #[error("invalid character {ch:?} at index {index} in word {text:?}")]
    InvalidCharacter { text: String, ch: char, index: usize },
    #[error("empty factor")]
    EmptyFactor,
    #[error("factor {factor} is over an alphabet of size {found}, expected {expected}")]
    AlphabetMismatch { factor: Word, expected: u8, found: u8 },
}

/// Errors raised by morphism construction, iteration and certification.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("malformed rule {0:?}, expected `letter:image`")]
    MalformedRule(String),
    #[error("duplicate rule for letter {0}")]
    DuplicateRule(u8),
    #[error("no rule for letter {0}")]
    MissingRule(u8),
    #[error("empty image for letter {0}")]
    EmptyImage(u8),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("iterating from seed {seed} stopped growing at length {length}")]
    NonGrowing { seed: Word, length: usize },
    #[error("stable prefix from seed {seed} reached only {stable} of {wanted} letters within {iterations} iterations")]
    NonConverging { seed: Word, stable: usize, wanted: usize, iterations: usize },
    #[error("source length bound {given} is below the exhaustive bound {needed}")]
    SourceBoundTooSmall { given: usize, needed: usize },
    #[error("certification failed for {}: {reason}", display_words(.factors))]
    CertificationFailed { factors: Vec<Word>, reason: String },
}

/// Errors raised by the classifier and the renaming helpers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("verification depth {0} is below the minimum of 30")]
    DepthTooSmall(usize),
    #[error("classification is defined over the ternary alphabet, got size {0}")]
    NotTernary(u8),
    #[error("letters must be pairwise distinct")]
    RepeatedLetters,
    #[error("not a permutation: {0:?}")]
    NotBijective(Vec<u8>),
    #[error("permutation of size {permutation} applied to alphabet of size {alphabet}")]
    SizeMismatch { permutation: u8, alphabet: u8 },
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error("internal check failed for {word}: {reason}")]
    CheckFailed { word: Word, reason: String },
}

fn display_words(words: &[Word]) -> String {
    words.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}
