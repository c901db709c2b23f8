mod common;

use std::collections::BTreeSet;

use avoidance_kit::classify::{quadruple_class, QuadrupleClass};
use avoidance_kit::reproduce::{ABA_QUADRUPLES, ABCA_QUADRUPLES};
use avoidance_kit::{
    base_morphism, classify, enumerate_squarefree, is_squarefree, max_length_avoiding, unavoidable_set, Alphabet,
    Certificate, FactorSet, Permutation, VerdictKind, Word,
};
use common::{all_words, w};

fn ternary(v: Vec<u8>) -> Word {
    Word::new(Alphabet::TERNARY, v).unwrap()
}

/// Unavoidable iff the pruned search tree dies out before depth 60.
fn oracle_unavoidable(x: &Word) -> bool {
    max_length_avoiding(&FactorSet::new(Alphabet::TERNARY, [x.clone()]).unwrap(), 60).is_finite()
}

#[test]
fn verdicts_agree_with_search_oracle_up_to_length_four() {
    let mut unavoidable = BTreeSet::new();
    let mut total = 0;
    for len in 1..=4 {
        for v in all_words(3, len) {
            total += 1;
            let x = ternary(v);
            let verdict = classify(&x, 1000).unwrap();
            let expected = oracle_unavoidable(&x);
            assert_eq!(verdict.kind == VerdictKind::Unavoidable, expected, "{x}");
            if expected {
                unavoidable.insert(x);
            }
        }
    }
    assert_eq!(total, 120);
    unavoidable.insert(Word::empty(Alphabet::TERNARY));
    let listed: BTreeSet<Word> = unavoidable_set().into_iter().collect();
    assert_eq!(unavoidable, listed);
}

#[test]
fn avoidable_witnesses_are_valid() {
    for len in 3..=6 {
        for v in all_words(3, len) {
            let x = ternary(v);
            let verdict = classify(&x, 2000).unwrap();
            if let Some(witness) = verdict.witness {
                let prefix = witness.morphism.limit_prefix(&witness.seed, 2000).unwrap();
                assert!(is_squarefree(&prefix), "{x}");
                assert!(!prefix.contains(&x), "{x}");
                assert_eq!(witness.checked_prefix, 2000);
            }
            match (&verdict.kind, &verdict.certificate) {
                (VerdictKind::Avoidable, Some(Certificate::Avoidance { reduced, certificate })) => {
                    assert!(x.contains(reduced));
                    certificate.verify().unwrap();
                }
                (VerdictKind::TriviallyAvoidable, Some(Certificate::ContainsSquare { square })) => {
                    assert_eq!(x.factor(square.position..square.end()), square.factor);
                }
                (VerdictKind::Unavoidable, Some(Certificate::Exhaustive(report))) => assert!(report.holds),
                other => panic!("{x}: {other:?}"),
            }
        }
    }
}

#[test]
fn renaming_commutes_with_limits() {
    let h = base_morphism();
    let seed = w("1");
    let limit = h.limit_prefix(&seed, 1000).unwrap();
    for p in Permutation::all(Alphabet::TERNARY) {
        let renamed = p.permute_morphism(&h).unwrap();
        let renamed_seed = p.permute_word(&seed).unwrap();
        assert_eq!(p.permute_word(&limit).unwrap(), renamed.limit_prefix(&renamed_seed, 1000).unwrap(), "{p}");
    }
}

#[test]
fn length_four_partition() {
    let mut aba = BTreeSet::new();
    let mut abca = BTreeSet::new();
    for x in enumerate_squarefree(4, &FactorSet::empty(Alphabet::TERNARY)) {
        match quadruple_class(&x).unwrap() {
            QuadrupleClass::ContainsAba => aba.insert(x.to_string()),
            QuadrupleClass::Abca => abca.insert(x.to_string()),
            QuadrupleClass::Square => panic!("{x}"),
        };
    }
    assert_eq!(aba, ABA_QUADRUPLES.iter().map(|s| s.to_string()).collect());
    assert_eq!(abca, ABCA_QUADRUPLES.iter().map(|s| s.to_string()).collect());
}

#[test]
fn classification_is_total_up_to_length_eight() {
    let mut counts = [0usize; 3];
    for len in 0..=8 {
        for v in all_words(3, len) {
            let verdict = classify(&ternary(v), 30).unwrap();
            counts[verdict.kind as usize] += 1;
        }
    }
    assert_eq!(counts[VerdictKind::Unavoidable as usize], 16);
    assert_eq!(counts.iter().sum::<usize>(), (0..=8).map(|n| 3usize.pow(n)).sum::<usize>());
}

#[test]
fn verdict_json_shape() {
    let v = classify(&w("0102"), 100).unwrap();
    let json = serde_json::to_value(&v).unwrap();
    assert_eq!(json["word"], "0102");
    assert_eq!(json["kind"], "avoidable");
    assert_eq!(json["witness"]["permutation"], "012→102");
    assert_eq!(json["witness"]["morphism"], "0:012,1:02,2:1");
    assert_eq!(json["witness"]["seed"], "0");
    assert_eq!(json["witness"]["checked_prefix"], 100);
    assert_eq!(json["certificate"]["kind"], "avoidance");
    let u = serde_json::to_value(classify(&w("012"), 100).unwrap()).unwrap();
    assert!(u.get("witness").is_none());
    assert_eq!(u["certificate"]["kind"], "exhaustive");
    assert_eq!(u["certificate"]["words_checked"], 34422);
}
