//! Squarefree ternary words: which factors can an infinite squarefree word
//! over `{0, 1, 2}` avoid?
//!
//! * [`words`]: words, factors and square detection.
//! * [`enumerate`]: pruned backtracking over squarefree words avoiding a
//!   set of factors; counting, containment checks and finite-search proofs
//!   of unavoidability.
//! * [`morphism`]: morphisms, limit words, preimage analysis and avoidance
//!   certificates.
//! * [`classify`]: the full avoidable/unavoidable classification with
//!   checkable evidence for each verdict.
//! * [`reproduce`]: the end-to-end checks behind `avoidance-kit reproduce`.

pub mod classify;
pub mod enumerate;
pub mod error;
pub mod morphism;
pub mod reproduce;
pub mod words;

pub use classify::{
    aba_witness, abca_witness, base_morphism, classify, unavoidable_set, Certificate, Construction, Permutation,
    Verdict, VerdictKind, Witness,
};
pub use enumerate::{
    all_contain, count_squarefree, enumerate_squarefree, max_length_avoiding, ContainmentReport, EnumerationStats,
    FactorSet, OutcomeKind, SearchOutcome,
};
pub use error::{ClassifyError, MorphismError, WordError};
pub use morphism::{certify_avoidance, preimage_factors, AvoidanceCertificate, Morphism, PreimageWitness};
pub use words::{
    contains_any, first_square, is_square, is_squarefree, occurrences, square_suffix, Alphabet, Letter, Occurrence,
    Word,
};
