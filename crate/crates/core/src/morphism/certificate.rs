//! Avoidance certificates for limit words of morphisms.
//!
//! Let `W = lim h^k(seed)`, so `h(W) = W`, and assume `W` is squarefree. If a
//! factor `f` occurs in `W` then, because `W = h(W)`, some minimal preimage
//! witness `u` of `f` is itself a factor of `W`. A factor is therefore absent
//! from `W` when every one of its witnesses contains a square or contains a
//! factor already known to be absent. Factors with no witness at all are
//! absent outright and form stage 0; each later stage only cites factors of
//! strictly smaller stages, so the argument is well founded.
//!
//! Squarefreeness of `W` itself is not proved here. The certificate records
//! how long a prefix of `W` was scanned for squares and for the factors.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use super::preimage::{exhaustive_source_bound, preimage_factors, PreimageWitness};
use super::Morphism;
use crate::enumerate::FactorSet;
use crate::error::MorphismError;
use crate::words::{first_square, is_squarefree, occurrences, Occurrence, Word};

/// Cap on the number of factors analysed while closing an argument.
const MAX_POOL: usize = 64;

/// Why a preimage witness cannot occur in the limit word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Defect {
    ContainsSquare { square: Occurrence },
    ContainsAvoidedFactor { factor: Word, position: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessArgument {
    pub source: Word,
    pub offset: usize,
    pub defect: Defect,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    NoPreimageExists,
    AllPreimagesDefective,
}

/// The absence argument for one factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorArgument {
    pub factor: Word,
    /// Not requested by the caller; needed to close the argument.
    pub support: bool,
    pub stage: usize,
    pub reason: Reason,
    pub witnesses: Vec<WitnessArgument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AvoidanceCertificate {
    pub morphism: Morphism,
    pub seed: Word,
    pub avoided: FactorSet,
    pub argument: Vec<FactorArgument>,
    pub checked_prefix_length: usize,
}

impl AvoidanceCertificate {
    pub fn entry(&self, factor: &Word) -> Option<&FactorArgument> {
        self.argument.iter().find(|a| &a.factor == factor)
    }

    /// Re-derives every claim in the certificate from scratch.
    pub fn verify(&self) -> Result<(), MorphismError> {
        let fail = |factors: Vec<Word>, reason: String| Err(MorphismError::CertificationFailed { factors, reason });
        let stages: BTreeMap<&Word, usize> = self.argument.iter().map(|a| (&a.factor, a.stage)).collect();
        for f in &self.avoided {
            if !stages.contains_key(f) {
                return fail(vec![f.clone()], "no argument recorded".into());
            }
        }
        for entry in &self.argument {
            let f = &entry.factor;
            let bound = exhaustive_source_bound(&self.morphism, f);
            let recomputed = preimage_factors(&self.morphism, f, bound)?;
            let recorded: Vec<PreimageWitness> = entry
                .witnesses
                .iter()
                .map(|w| PreimageWitness { source: w.source.clone(), offset: w.offset })
                .collect();
            if recomputed != recorded {
                return fail(vec![f.clone()], "recorded witnesses differ from the preimage analysis".into());
            }
            let expected_reason =
                if recorded.is_empty() { Reason::NoPreimageExists } else { Reason::AllPreimagesDefective };
            if entry.reason != expected_reason || (entry.stage == 0) != recorded.is_empty() {
                return fail(vec![f.clone()], "stage or reason inconsistent with witnesses".into());
            }
            for w in &entry.witnesses {
                let ok = match &w.defect {
                    Defect::ContainsSquare { square } => {
                        square.end() <= w.source.len()
                            && w.source.factor(square.position..square.end()) == square.factor
                            && crate::words::is_square(&square.factor)
                    }
                    Defect::ContainsAvoidedFactor { factor, position } => {
                        stages.get(factor).is_some_and(|&s| s < entry.stage)
                            && position + factor.len() <= w.source.len()
                            && &w.source.factor(*position..position + factor.len()) == factor
                    }
                };
                if !ok {
                    return fail(vec![f.clone()], format!("defect of witness {} does not hold", w.source));
                }
            }
        }
        let closed: Vec<Word> = self.argument.iter().map(|a| a.factor.clone()).collect();
        check_prefix(&self.morphism, &self.seed, &closed, self.checked_prefix_length)
    }
}

/// Builder for [`AvoidanceCertificate`]s.
#[derive(Clone, Debug)]
pub struct Certifier<'a> {
    morphism: &'a Morphism,
    seed: Word,
    support: Vec<Word>,
    prefix_check: usize,
    discover: bool,
}

impl<'a> Certifier<'a> {
    pub fn new(morphism: &'a Morphism, seed: Word) -> Self {
        Certifier { morphism, seed, support: Vec::new(), prefix_check: 100_000, discover: true }
    }

    /// Extra factors the argument may cite.
    pub fn support(mut self, factors: &FactorSet) -> Self {
        self.support.extend(factors.iter().cloned());
        self
    }

    /// Length of the limit-word prefix scanned for squares and factors.
    pub fn prefix_check(mut self, n: usize) -> Self {
        self.prefix_check = n;
        self
    }

    /// When set (the default), squarefree witness sources that block the
    /// argument are themselves tried as support factors.
    pub fn discover_support(mut self, yes: bool) -> Self {
        self.discover = yes;
        self
    }

    pub fn certify(&self, avoided: &FactorSet) -> Result<AvoidanceCertificate, MorphismError> {
        let h = self.morphism;
        let mut pool: BTreeMap<Word, Vec<PreimageWitness>> = BTreeMap::new();
        let mut queue: VecDeque<Word> = avoided.iter().chain(&self.support).cloned().collect();
        let max_len = avoided.iter().chain(&self.support).map(Word::len).max().unwrap_or(0) * 2;
        while let Some(f) = queue.pop_front() {
            if pool.contains_key(&f) {
                continue;
            }
            let witnesses = preimage_factors(h, &f, exhaustive_source_bound(h, &f))?;
            if self.discover {
                for w in &witnesses {
                    if pool.len() + queue.len() < MAX_POOL
                        && w.source.len() <= max_len
                        && !pool.contains_key(&w.source)
                        && !queue.contains(&w.source)
                        && is_squarefree(&w.source)
                    {
                        queue.push_back(w.source.clone());
                    }
                }
            }
            pool.insert(f, witnesses);
        }

        let stages = close(&pool);
        let open: Vec<Word> = avoided.iter().filter(|f| !stages.contains_key(*f)).cloned().collect();
        if !open.is_empty() {
            let blocker = open
                .iter()
                .flat_map(|f| pool[f].iter().map(move |w| (f, w)))
                .find(|(_, w)| defect(&w.source, &stages, usize::MAX).is_none())
                .map(|(f, w)| format!("witness {} of {} has no defect", w.source, f))
                .unwrap_or_else(|| "argument does not close".into());
            return Err(MorphismError::CertificationFailed { factors: open, reason: blocker });
        }

        // Keep the requested factors and whatever they cite, transitively.
        let requested_support: BTreeSet<&Word> = self.support.iter().filter(|f| stages.contains_key(*f)).collect();
        let mut keep: BTreeSet<Word> = avoided.iter().cloned().chain(requested_support.into_iter().cloned()).collect();
        let mut argument = Vec::new();
        let mut todo: Vec<Word> = keep.iter().cloned().collect();
        let mut built: BTreeMap<Word, FactorArgument> = BTreeMap::new();
        while let Some(f) = todo.pop() {
            if built.contains_key(&f) {
                continue;
            }
            let stage = stages[&f];
            let witnesses: Vec<WitnessArgument> = pool[&f]
                .iter()
                .map(|w| WitnessArgument {
                    source: w.source.clone(),
                    offset: w.offset,
                    defect: defect(&w.source, &stages, stage).expect("closed factor has defective witnesses"),
                })
                .collect();
            for w in &witnesses {
                if let Defect::ContainsAvoidedFactor { factor, .. } = &w.defect {
                    if keep.insert(factor.clone()) {
                        todo.push(factor.clone());
                    }
                }
            }
            let reason = if witnesses.is_empty() { Reason::NoPreimageExists } else { Reason::AllPreimagesDefective };
            built.insert(
                f.clone(),
                FactorArgument { support: !avoided.contains(&f), factor: f, stage, reason, witnesses },
            );
        }
        argument.extend(built.into_values());
        argument.sort_by(|a, b| (a.support, a.stage, &a.factor).cmp(&(b.support, b.stage, &b.factor)));

        let closed: Vec<Word> = argument.iter().map(|a| a.factor.clone()).collect();
        check_prefix(h, &self.seed, &closed, self.prefix_check)?;
        Ok(AvoidanceCertificate {
            morphism: h.clone(),
            seed: self.seed.clone(),
            avoided: avoided.clone(),
            argument,
            checked_prefix_length: self.prefix_check,
        })
    }
}

/// Certifies that the limit of `h` from `seed` avoids every factor of
/// `avoided`, discovering support factors as needed.
pub fn certify_avoidance(
    h: &Morphism,
    seed: &Word,
    avoided: &FactorSet,
    prefix_check: usize,
) -> Result<AvoidanceCertificate, MorphismError> {
    Certifier::new(h, seed.clone()).prefix_check(prefix_check).certify(avoided)
}

/// Least fixed point of the absence rule, with the stage at which each
/// factor entered.
fn close(pool: &BTreeMap<Word, Vec<PreimageWitness>>) -> BTreeMap<Word, usize> {
    let mut stages: BTreeMap<Word, usize> =
        pool.iter().filter(|(_, ws)| ws.is_empty()).map(|(f, _)| (f.clone(), 0)).collect();
    for stage in 1.. {
        let added: Vec<Word> = pool
            .iter()
            .filter(|(f, ws)| {
                !stages.contains_key(*f) && ws.iter().all(|w| defect(&w.source, &stages, stage).is_some())
            })
            .map(|(f, _)| f.clone())
            .collect();
        if added.is_empty() {
            break;
        }
        stages.extend(added.into_iter().map(|f| (f, stage)));
    }
    stages
}

/// A square in `source`, else the earliest-staged closed factor below `stage`.
fn defect(source: &Word, stages: &BTreeMap<Word, usize>, stage: usize) -> Option<Defect> {
    if let Some(square) = first_square(source) {
        return Some(Defect::ContainsSquare { square });
    }
    stages
        .iter()
        .filter(|(_, &s)| s < stage)
        .filter_map(|(f, &s)| occurrences(source, f).ok()?.first().map(|o| (s, f, o.position)))
        .min()
        .map(|(_, f, position)| Defect::ContainsAvoidedFactor { factor: f.clone(), position })
}

fn check_prefix(h: &Morphism, seed: &Word, factors: &[Word], n: usize) -> Result<(), MorphismError> {
    let prefix = h.limit_prefix(seed, n)?;
    if let Some(square) = crate::words::any_square(&prefix) {
        return Err(MorphismError::CertificationFailed {
            factors: Vec::new(),
            reason: format!("limit prefix of length {n} contains the square {square}"),
        });
    }
    let present: Vec<Word> = factors.iter().filter(|f| prefix.contains(f)).cloned().collect();
    if !present.is_empty() {
        return Err(MorphismError::CertificationFailed {
            factors: present,
            reason: format!("occurs in the limit prefix of length {n}"),
        });
    }
    Ok(())
}
