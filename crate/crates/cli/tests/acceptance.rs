//! Acceptance suite: one PASS/FAIL line per criterion.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use avoidance_kit::classify::{quadruple_class, QuadrupleClass};
use avoidance_kit::reproduce::{ABA_QUADRUPLES, ABCA_QUADRUPLES, PERMUTATION_WORDS};
use avoidance_kit::{
    base_morphism, classify, enumerate_squarefree, is_squarefree, max_length_avoiding, unavoidable_set, Alphabet,
    FactorSet, Morphism, Permutation, VerdictKind, Word,
};
use common::{all_words, brute_contains, brute_count, brute_squarefree};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const COUNT_LIMIT: Duration = Duration::from_secs(10);
const MORPHISM_LIMIT: Duration = Duration::from_secs(5);
const REPRODUCE_LIMIT: Duration = Duration::from_secs(60);
const COUNT_30: u64 = 34422;
const PREFIX_LENGTH: usize = 100_000;
const WITNESS_DEPTH: usize = 10_000;
const ORACLE_CAP: usize = 60;
const EXHAUSTIVE_LENGTH: usize = 12;
const RANDOM_WORDS: usize = 1000;
const RANDOM_MAX_LENGTH: usize = 200;
const RANDOM_SEED: u64 = 0x5eed_0006;
const PROPTEST_CASES: u32 = 256;
const MAXLEN_CAP: &str = "100";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("avoidance-kit").chain(args.iter().copied());
    let code = avoidance_kit_cli::run(argv, &mut out, &mut err);
    Run { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn cli_json(args: &[&str]) -> Result<Value, String> {
    let run = cli(args);
    if run.code != 0 {
        return Err(format!("{args:?} exited {} ({})", run.code, run.stderr.trim()));
    }
    serde_json::from_str(&run.stdout).map_err(|e| format!("{args:?}: bad JSON {e}"))
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ternary(s: &str) -> Word {
    Word::parse(s, Alphabet::TERNARY).unwrap()
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let elapsed = start.elapsed();
    check(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))?;
    Ok(elapsed)
}

fn count_reproduction() -> Outcome {
    let start = Instant::now();
    let stats = cli_json(&["count", "30"])?;
    let elapsed = within(COUNT_LIMIT, start)?;
    check(stats["target_length"] == 30, || format!("target_length {}", stats["target_length"]))?;
    check(stats["count"] == COUNT_30, || format!("count {}", stats["count"]))?;
    Ok(format!("count 30 = {} in {elapsed:.2?}", stats["count"]))
}

fn abc_words_unavoidable() -> Outcome {
    let list = PERMUTATION_WORDS.join(",");
    let report = cli_json(&["allcontain", "30", "--require", &list, "--output", "json"])?;
    check(report["holds"] == true, || format!("allcontain: {report}"))?;
    let mut lengths = Vec::new();
    for f in PERMUTATION_WORDS {
        let out = cli_json(&["maxlen", "--avoid", f, "--cap", MAXLEN_CAP, "--output", "json"])?;
        let len = out["longest_length"].as_u64().unwrap_or(u64::MAX);
        check(out["kind"] == "finite" && len < 30, || format!("maxlen --avoid {f}: {out}"))?;
        lengths.push(format!("{f}:{len}"));
    }
    Ok(format!("all 34422 contain the six; longest avoiders {}", lengths.join(" ")))
}

fn base_limit_avoids_abca_pair() -> Outcome {
    let start = Instant::now();
    let prefix = cli(&["morphism", "prefix", "--spec", "0:12,1:102,2:0", "--seed", "1", "--length", "100000"]);
    check(prefix.code == 0, || format!("prefix exited {}", prefix.code))?;
    let prefix = ternary(prefix.stdout.trim());
    check(prefix.len() == PREFIX_LENGTH, || format!("prefix length {}", prefix.len()))?;
    check(is_squarefree(&prefix), || "prefix has a square".into())?;
    for f in ["101", "202", "0120", "0210"] {
        check(!brute_contains(prefix.symbols(), ternary(f).symbols()), || format!("prefix contains {f}"))?;
    }
    let cert = cli_json(&[
        "morphism",
        "certify",
        "--spec",
        "0:12,1:102,2:0",
        "--seed",
        "1",
        "--avoid",
        "0120,0210",
        "--output",
        "json",
    ])?;
    let elapsed = within(MORPHISM_LIMIT, start)?;
    let entry = |f: &str| {
        cert["argument"]
            .as_array()
            .and_then(|a| a.iter().find(|e| e["factor"] == f))
            .cloned()
            .ok_or_else(|| format!("no argument for {f}"))
    };
    let sole = |f: &str| -> Result<Value, String> {
        let e = entry(f)?;
        match e["witnesses"].as_array().map(Vec::as_slice) {
            Some([only]) => Ok(only.clone()),
            other => Err(format!("{f} witnesses {other:?}")),
        }
    };
    let w0120 = sole("0120")?;
    check(w0120["source"] == "202" && w0120["offset"] == 0, || format!("0120 via {w0120}"))?;
    let e202 = entry("202")?;
    check(e202["witnesses"].as_array().is_some_and(Vec::is_empty), || format!("202 has preimages: {e202}"))?;
    let w0210 = sole("0210")?;
    check(w0210["source"] == "11", || format!("0210 via {w0210}"))?;
    check(w0210["defect"]["kind"] == "contains-square", || format!("0210 defect {}", w0210["defect"]))?;
    Ok(format!("10^5 prefix clean; 0120 <- 202 (no preimage), 0210 <- 11 (square); {elapsed:.2?}"))
}

fn length_four_avoidable() -> Outcome {
    let mut aba = BTreeSet::new();
    let mut abca = BTreeSet::new();
    let words: Vec<Word> = enumerate_squarefree(4, &FactorSet::empty(Alphabet::TERNARY)).collect();
    check(words.len() == 18, || format!("{} squarefree words of length 4", words.len()))?;
    for x in &words {
        let text = x.to_string();
        let v = cli_json(&["classify", &text, "--depth", "10000", "--output", "json"])?;
        check(v["kind"] == "avoidable", || format!("{x}: {v}"))?;
        let h = Morphism::parse(v["witness"]["morphism"].as_str().unwrap_or_default()).map_err(|e| e.to_string())?;
        let seed = ternary(v["witness"]["seed"].as_str().unwrap_or_default());
        let prefix = h.limit_prefix(&seed, WITNESS_DEPTH).map_err(|e| e.to_string())?;
        check(prefix.len() == WITNESS_DEPTH && is_squarefree(&prefix), || format!("{x}: prefix not squarefree"))?;
        check(!brute_contains(prefix.symbols(), x.symbols()), || format!("{x}: prefix contains it"))?;
        match quadruple_class(x) {
            Some(QuadrupleClass::ContainsAba) => aba.insert(text),
            Some(QuadrupleClass::Abca) => abca.insert(text),
            other => return Err(format!("{x}: class {other:?}")),
        };
    }
    check(aba.iter().map(String::as_str).eq(ABA_QUADRUPLES), || format!("aba class {aba:?}"))?;
    check(abca.iter().map(String::as_str).eq(ABCA_QUADRUPLES), || format!("abca class {abca:?}"))?;
    Ok("18 avoidable with verified 10^4 prefixes; split 12 + 6".into())
}

fn characterization_totality() -> Outcome {
    let mut unavoidable = BTreeSet::from([Word::empty(Alphabet::TERNARY)]);
    let mut total = 0;
    for len in 1..=4 {
        for v in all_words(3, len) {
            total += 1;
            let x = Word::new(Alphabet::TERNARY, v).unwrap();
            let verdict = classify(&x, 1000).map_err(|e| e.to_string())?;
            let avoid = FactorSet::new(Alphabet::TERNARY, [x.clone()]).unwrap();
            let oracle = max_length_avoiding(&avoid, ORACLE_CAP).is_finite();
            check((verdict.kind == VerdictKind::Unavoidable) == oracle, || format!("{x}: {}", verdict.kind))?;
            if oracle {
                unavoidable.insert(x);
            }
        }
    }
    check(total == 120, || format!("{total} words"))?;
    let listed: BTreeSet<Word> = unavoidable_set().into_iter().collect();
    check(listed.len() == 16 && listed == unavoidable, || format!("unavoidable set {listed:?}"))?;
    let from_cli: BTreeSet<String> = cli(&["unavoidable-set"]).stdout.lines().map(str::to_owned).collect();
    check(from_cli.len() == 16, || format!("cli lists {} words", from_cli.len()))?;
    Ok("120 verdicts match the search oracle; 16 unavoidable words".into())
}

fn oracle_equivalence() -> Outcome {
    let mut exhaustive = 0u64;
    for len in 0..=EXHAUSTIVE_LENGTH {
        for v in all_words(3, len) {
            exhaustive += 1;
            let fast = is_squarefree(&Word::new(Alphabet::TERNARY, v.clone()).unwrap());
            check(fast == brute_squarefree(&v), || format!("disagree on {v:?}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    let mut squarefree = 0;
    for i in 0..RANDOM_WORDS {
        // Half the samples are grown squarefree, then perturbed, so both answers are exercised.
        let len = rng.gen_range(0..=RANDOM_MAX_LENGTH);
        let v: Vec<u8> = if i % 2 == 0 {
            (0..len).map(|_| rng.gen_range(0..3)).collect()
        } else {
            let mut v = Vec::with_capacity(len);
            while v.len() < len {
                let start = rng.gen_range(0..3u8);
                let next = (0..3).map(|d| (start + d) % 3).find(|&c| {
                    v.push(c);
                    let ok = brute_squarefree(&v);
                    v.pop();
                    ok
                });
                match next {
                    Some(c) => v.push(c),
                    None => break,
                }
            }
            if !v.is_empty() && rng.gen_bool(0.5) {
                let at = rng.gen_range(0..v.len());
                v[at] = rng.gen_range(0..3);
            }
            v
        };
        let fast = is_squarefree(&Word::new(Alphabet::TERNARY, v.clone()).unwrap());
        let slow = brute_squarefree(&v);
        check(fast == slow, || format!("disagree on {v:?}"))?;
        squarefree += usize::from(slow);
    }
    Ok(format!("{exhaustive} exhaustive + {RANDOM_WORDS} random words agree ({squarefree} random squarefree)"))
}

fn counting_oracle() -> Outcome {
    let mut counts = Vec::new();
    for n in 1..=EXHAUSTIVE_LENGTH {
        let stats = cli_json(&["count", &n.to_string()])?;
        let expected = brute_count(3, n, &[]);
        check(stats["count"] == expected, || format!("n = {n}: {} vs {expected}", stats["count"]))?;
        counts.push(expected);
    }
    check(counts[0] == 3 && counts[1] == 6, || format!("counts {counts:?}"))?;
    Ok(format!("n = 1..12 match the unpruned filter: {counts:?}"))
}

fn morphism_strategy() -> impl Strategy<Value = Morphism> {
    prop::collection::vec(prop::collection::vec(0u8..3, 1..=4), 3).prop_map(|imgs| {
        Morphism::new(imgs.into_iter().map(|v| Word::new(Alphabet::TERNARY, v).unwrap()).collect()).unwrap()
    })
}

fn morphism_algebra() -> Outcome {
    let config = Config { cases: PROPTEST_CASES, failure_persistence: None, ..Config::default() };
    let rng = || TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    let word = || prop::collection::vec(0u8..3, 0..=50).prop_map(|v| Word::new(Alphabet::TERNARY, v).unwrap());

    TestRunner::new_with_rng(config.clone(), rng())
        .run(&(morphism_strategy(), word(), word()), |(h, u, v)| {
            let joined = h.apply(&u.concat(&v)).unwrap();
            prop_assert_eq!(joined, h.apply(&u).unwrap().concat(&h.apply(&v).unwrap()));
            Ok(())
        })
        .map_err(|e| format!("homomorphism: {e}"))?;

    TestRunner::new_with_rng(config, rng())
        .run(&(morphism_strategy(), 1usize..300), |(h, n)| {
            for a in Alphabet::TERNARY.letters() {
                let seed = Word::new(Alphabet::TERNARY, vec![a.value()]).unwrap();
                let image = h.apply(&seed).unwrap();
                prop_assert_eq!(h.prolongable_on(a), image.len() >= 2 && image.letter(0) == a);
                if !h.prolongable_on(a) {
                    continue;
                }
                let mut cur = seed.clone();
                for _ in 0..8 {
                    let next = h.apply(&cur).unwrap();
                    prop_assert_eq!(next.prefix(cur.len()), cur.clone());
                    cur = next.prefix(2000);
                }
                if let Ok(prefix) = h.limit_prefix(&seed, n.max(image.len())) {
                    prop_assert_eq!(prefix.prefix(image.len()), image);
                    prop_assert_eq!(h.apply(&prefix).unwrap().prefix(prefix.len()), prefix);
                }
            }
            Ok(())
        })
        .map_err(|e| format!("prolongability: {e}"))?;

    let h = base_morphism();
    let seed = ternary("1");
    let limit = h.limit_prefix(&seed, 1000).map_err(|e| e.to_string())?;
    let perms = Permutation::all(Alphabet::TERNARY);
    check(perms.len() == 6, || format!("{} permutations", perms.len()))?;
    for p in &perms {
        let renamed = p.permute_morphism(&h).map_err(|e| e.to_string())?;
        let renamed_seed = p.permute_word(&seed).map_err(|e| e.to_string())?;
        let lhs = p.permute_word(&limit).map_err(|e| e.to_string())?;
        let rhs = renamed.limit_prefix(&renamed_seed, 1000).map_err(|e| e.to_string())?;
        check(lhs == rhs, || format!("renaming by {p} does not commute"))?;
    }
    Ok(format!("{PROPTEST_CASES} cases per property; renaming coherent for all 6 permutations"))
}

fn intro_facts() -> Outcome {
    let binary = cli_json(&["--alphabet", "2", "maxlen", "--avoid", "", "--cap", MAXLEN_CAP, "--output", "json"])?;
    check(binary["kind"] == "finite" && binary["longest_length"] == 3, || format!("binary: {binary}"))?;
    let by_levels = common::level_max(2, &[], 100);
    check(by_levels == Some(3), || format!("level oracle says {by_levels:?}"))?;
    let ternary = cli_json(&["maxlen", "--avoid", "", "--cap", MAXLEN_CAP, "--output", "json"])?;
    check(ternary["kind"] == "exceeds-cap", || format!("ternary: {ternary}"))?;
    Ok(format!("binary longest 3 ({}); ternary exceeds cap 100", binary["witness"]))
}

fn reproduce_suite() -> Outcome {
    let start = Instant::now();
    let run = cli(&["reproduce"]);
    let elapsed = within(REPRODUCE_LIMIT, start)?;
    check(run.code == 0, || format!("exit {}: {}", run.code, run.stdout))?;
    let statuses: Vec<&str> = run.stdout.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    check(statuses.len() == 5 && statuses.iter().all(|l| l.starts_with("PASS")), || run.stdout.clone())?;
    Ok(format!("5 claims PASS in {elapsed:.2?}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("count reproduction", count_reproduction),
        ("abc words are unavoidable", abc_words_unavoidable),
        ("base limit avoids 0120 and 0210", base_limit_avoids_abca_pair),
        ("length-4 words are avoidable", length_four_avoidable),
        ("characterization totality", characterization_totality),
        ("squarefree oracle equivalence", oracle_equivalence),
        ("counting oracle", counting_oracle),
        ("morphism algebra", morphism_algebra),
        ("intro facts", intro_facts),
        ("reproduce", reproduce_suite),
    ];
    let mut failed = 0;
    for (i, (name, body)) in criteria.iter().enumerate() {
        match body() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
