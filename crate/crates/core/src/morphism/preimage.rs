use serde::Serialize;

use super::Morphism;
use crate::error::{MorphismError, WordError};
use crate::words::Word;

/// A minimal source word `u` with the target factor at `offset` inside `h(u)`.
///
/// The occurrence starts inside the image of the first letter of `u` and
/// ends inside the image of the last, so dropping either end letter of `u`
/// loses it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PreimageWitness {
    pub source: Word,
    pub offset: usize,
}

/// Smallest `max_source_len` that cannot cut off any preimage of `factor`.
pub fn exhaustive_source_bound(h: &Morphism, factor: &Word) -> usize {
    factor.len().div_ceil(h.min_image_len()) + 2
}

/// All minimal preimage witnesses of `factor` under `h`, sorted by source
/// then offset. An empty list means `factor` never occurs in any image.
///
/// Sources are built by aligning the factor against letter images: the
/// first letter fixes the offset, each following letter's image must agree
/// with the next uncovered stretch of the factor.
pub fn preimage_factors(
    h: &Morphism,
    factor: &Word,
    max_source_len: usize,
) -> Result<Vec<PreimageWitness>, MorphismError> {
    if factor.is_empty() {
        return Err(WordError::EmptyFactor.into());
    }
    let needed = exhaustive_source_bound(h, factor);
    if max_source_len < needed {
        return Err(MorphismError::SourceBoundTooSmall { given: max_source_len, needed });
    }
    let f = factor.symbols();
    let mut found = Vec::new();
    let mut source = Vec::with_capacity(needed);
    for a in h.alphabet().letters() {
        let image = h.image(a).symbols();
        for offset in 0..image.len() {
            let overlap = (image.len() - offset).min(f.len());
            if image[offset..offset + overlap] != f[..overlap] {
                continue;
            }
            source.push(a.value());
            extend(h, f, overlap, offset, max_source_len, &mut source, &mut found);
            source.pop();
        }
    }
    found.sort();
    Ok(found)
}

fn extend(
    h: &Morphism,
    f: &[u8],
    covered: usize,
    offset: usize,
    max_source_len: usize,
    source: &mut Vec<u8>,
    found: &mut Vec<PreimageWitness>,
) {
    if covered == f.len() {
        found.push(PreimageWitness { source: Word::from_raw(h.alphabet(), source.clone()), offset });
        return;
    }
    if source.len() >= max_source_len {
        return;
    }
    for b in h.alphabet().letters() {
        let image = h.image(b).symbols();
        let overlap = image.len().min(f.len() - covered);
        if image[..overlap] == f[covered..covered + overlap] {
            source.push(b.value());
            extend(h, f, covered + overlap, offset, max_source_len, source, found);
            source.pop();
        }
    }
}
