//! End-to-end checks of the headline results, shared by the CLI's
//! `reproduce` subcommand and the acceptance tests.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::Serialize;

use crate::classify::{base_morphism, classify, quadruple_class, QuadrupleClass, VerdictKind, BASE_SEED};
use crate::enumerate::{
    all_contain, count_squarefree, enumerate_squarefree, max_length_avoiding, FactorSet, OutcomeKind,
};
use crate::morphism::{certify_avoidance, Defect, Reason};
use crate::words::{is_squarefree, Alphabet, Word};

/// The six words of three distinct ternary letters.
pub const PERMUTATION_WORDS: [&str; 6] = ["012", "021", "102", "120", "201", "210"];
/// Squarefree length-4 words containing some `aba`.
pub const ABA_QUADRUPLES: [&str; 12] =
    ["0102", "0121", "0201", "0212", "1012", "1020", "1202", "1210", "2010", "2021", "2101", "2120"];
/// Squarefree length-4 words of the form `abca`.
pub const ABCA_QUADRUPLES: [&str; 6] = ["0120", "0210", "1021", "1201", "2012", "2102"];

pub const SQUAREFREE_COUNT_30: u64 = 34422;
pub const PREFIX_SCAN_LENGTH: usize = 100_000;
pub const WITNESS_DEPTH: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimResult {
    pub id: &'static str,
    pub claim: &'static str,
    pub check: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub millis: u128,
}

fn ternary(s: &str) -> Word {
    Word::parse(s, Alphabet::TERNARY).expect("ternary literal")
}

fn factors(list: &str) -> FactorSet {
    FactorSet::parse(list, Alphabet::TERNARY).expect("ternary literal list")
}

fn timed(
    id: &'static str,
    claim: &'static str,
    check: &'static str,
    body: impl FnOnce() -> Result<String, String>,
) -> ClaimResult {
    let start = Instant::now();
    let (passed, detail) = match body() {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    ClaimResult { id, claim, check, passed, detail, millis: start.elapsed().as_millis() }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn count_claim() -> ClaimResult {
    timed("count", "there are 34422 squarefree ternary words of length 30", "count_squarefree(30, {})", || {
        let stats = count_squarefree(30, &FactorSet::empty(Alphabet::TERNARY));
        ensure(stats.count_at_target == SQUAREFREE_COUNT_30, || format!("counted {}", stats.count_at_target))?;
        Ok(format!("count {} over {} nodes", stats.count_at_target, stats.nodes_visited))
    })
}

/// Longest squarefree ternary word avoiding each `abc` word.
pub fn permutation_max_lengths() -> Vec<(Word, OutcomeKind, usize)> {
    PERMUTATION_WORDS
        .iter()
        .map(|p| {
            let out = max_length_avoiding(&factors(p), 100);
            (ternary(p), out.kind, out.longest_length)
        })
        .collect()
}

pub fn unavoidable_claim() -> ClaimResult {
    timed(
        "unavoidable-abc",
        "every infinite squarefree ternary word contains 012, 021, 102, 120, 201 and 210",
        "all_contain(30, six words); max_length_avoiding(each, 100) is finite below 30",
        || {
            let report = all_contain(30, &factors(&PERMUTATION_WORDS.join(",")));
            ensure(report.holds, || format!("counterexample {:?}", report.counterexample))?;
            ensure(report.words_checked == SQUAREFREE_COUNT_30, || format!("checked {}", report.words_checked))?;
            let lengths = permutation_max_lengths();
            let mut parts = Vec::new();
            for (w, kind, len) in &lengths {
                ensure(*kind == OutcomeKind::Finite && *len < 30, || format!("{w}: {kind:?} at {len}"))?;
                parts.push(format!("{w}:{len}"));
            }
            Ok(format!("{} words checked; longest avoiders {}", report.words_checked, parts.join(" ")))
        },
    )
}

pub fn morphism_claim() -> ClaimResult {
    timed(
        "avoid-abca-pair",
        "the limit of 0->12, 1->102, 2->0 is squarefree and avoids 0120 and 0210",
        "scan a 10^5 prefix; certify {0120,0210} by preimage analysis",
        || {
            let h = base_morphism();
            let seed = Word::from_raw(Alphabet::TERNARY, vec![BASE_SEED]);
            let prefix = h.limit_prefix(&seed, PREFIX_SCAN_LENGTH).map_err(|e| e.to_string())?;
            ensure(is_squarefree(&prefix), || "prefix has a square".into())?;
            for f in ["101", "202", "0120", "0210"] {
                ensure(!prefix.contains(&ternary(f)), || format!("prefix contains {f}"))?;
            }
            let cert =
                certify_avoidance(&h, &seed, &factors("0120,0210"), PREFIX_SCAN_LENGTH).map_err(|e| e.to_string())?;
            cert.verify().map_err(|e| e.to_string())?;
            let sole = |f: &str| {
                let entry = cert.entry(&ternary(f)).ok_or_else(|| format!("no entry for {f}"))?;
                match entry.witnesses.as_slice() {
                    [only] => Ok(only.clone()),
                    ws => Err(format!("{f} has {} witnesses", ws.len())),
                }
            };
            let w0120 = sole("0120")?;
            ensure(w0120.source == ternary("202") && w0120.offset == 0, || format!("0120 via {}", w0120.source))?;
            ensure(
                matches!(&w0120.defect, Defect::ContainsAvoidedFactor { factor, .. } if *factor == ternary("202")),
                || "0120 witness not blocked by 202".into(),
            )?;
            let e202 = cert.entry(&ternary("202")).ok_or("no entry for 202")?;
            ensure(e202.reason == Reason::NoPreimageExists, || "202 has a preimage".into())?;
            let w0210 = sole("0210")?;
            ensure(w0210.source == ternary("11") && w0210.offset == 1, || format!("0210 via {}", w0210.source))?;
            ensure(
                matches!(&w0210.defect, Defect::ContainsSquare { square } if square.factor == ternary("11")),
                || "0210 witness not blocked by the square 11".into(),
            )?;
            Ok("0120 <- h(202), 202 has no preimage; 0210 <- h(11), 11 is a square".into())
        },
    )
}

pub fn quadruple_claim() -> ClaimResult {
    timed(
        "avoid-length-4",
        "every ternary word of length at least 4 is avoidable",
        "classify all 18 squarefree length-4 words at depth 10^4; check the 12 + 6 split",
        || {
            let words: Vec<Word> = enumerate_squarefree(4, &FactorSet::empty(Alphabet::TERNARY)).collect();
            ensure(words.len() == 18, || format!("{} squarefree words of length 4", words.len()))?;
            let mut aba = BTreeSet::new();
            let mut abca = BTreeSet::new();
            for w in &words {
                match quadruple_class(w) {
                    Some(QuadrupleClass::ContainsAba) => aba.insert(w.to_string()),
                    Some(QuadrupleClass::Abca) => abca.insert(w.to_string()),
                    other => return Err(format!("{w} classed as {other:?}")),
                };
                let v = classify(w, WITNESS_DEPTH).map_err(|e| e.to_string())?;
                ensure(v.kind == VerdictKind::Avoidable, || format!("{w} is {}", v.kind))?;
                let witness = v.witness.ok_or_else(|| format!("{w} has no witness"))?;
                let prefix = witness.morphism.limit_prefix(&witness.seed, WITNESS_DEPTH).map_err(|e| e.to_string())?;
                ensure(is_squarefree(&prefix) && !prefix.contains(w), || format!("{w} witness prefix fails"))?;
            }
            let want_aba: BTreeSet<String> = ABA_QUADRUPLES.iter().map(|s| s.to_string()).collect();
            let want_abca: BTreeSet<String> = ABCA_QUADRUPLES.iter().map(|s| s.to_string()).collect();
            ensure(aba == want_aba, || format!("aba class {aba:?}"))?;
            ensure(abca == want_abca, || format!("abca class {abca:?}"))?;
            Ok(format!("18 avoidable; split {} + {}", aba.len(), abca.len()))
        },
    )
}

pub fn intro_claim() -> ClaimResult {
    timed(
        "binary-and-thue",
        "no binary word of length 4 is squarefree; infinite squarefree ternary words exist",
        "max_length_avoiding({}, 100) over 2 letters is finite at 3, over 3 letters exceeds the cap",
        || {
            let binary = max_length_avoiding(&FactorSet::empty(Alphabet::BINARY), 100);
            ensure(binary.kind == OutcomeKind::Finite && binary.longest_length == 3, || {
                format!("binary: {:?} at {}", binary.kind, binary.longest_length)
            })?;
            let ternary = max_length_avoiding(&FactorSet::empty(Alphabet::TERNARY), 100);
            ensure(ternary.kind == OutcomeKind::ExceedsCap, || {
                format!("ternary stopped at {}", ternary.longest_length)
            })?;
            Ok(format!("binary longest {} ({}); ternary reaches 100", binary.longest_length, binary.witness))
        },
    )
}

/// Runs every check in a fixed order.
pub fn run_all() -> Vec<ClaimResult> {
    vec![count_claim(), unavoidable_claim(), morphism_claim(), quadruple_claim(), intro_claim()]
}
