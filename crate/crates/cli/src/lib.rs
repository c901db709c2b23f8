//! Command-line front end for `avoidance-kit`.
//!
//! [`run`] takes the full argument vector and writes to the supplied
//! streams, so the binary and the tests share one code path.
//!
//! Exit codes: 0 success (or "yes" answers), 1 usage or input error,
//! 2 negative results (`check` on a word with a square, failed
//! certification, a failing `reproduce` claim).

use std::ffi::OsString;
use std::io::{self, Write};

use avoidance_kit::classify::{self, Certificate, Verdict, VerdictKind};
use avoidance_kit::enumerate::{ContainmentReport, OutcomeKind, SearchOutcome};
use avoidance_kit::morphism::{Certifier, DEFAULT_SQUAREFREE_TEST_LENGTH};
use avoidance_kit::{
    all_contain, count_squarefree, enumerate_squarefree, first_square, max_length_avoiding, preimage_factors,
    reproduce, unavoidable_set, Alphabet, FactorSet, Letter, Morphism, Word,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Environment variable capping internal parallelism.
pub const THREADS_ENV: &str = "AVOIDANCE_KIT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "avoidance-kit", version, about = "Squarefree words and factor avoidance")]
struct Cli {
    #[command(flatten)]
    config: CliConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CliConfig {
    /// Alphabet size for words and factor lists.
    #[arg(long = "alphabet", global = true, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=10))]
    alphabet_size: u8,
    /// Limit-prefix length used to verify witnesses.
    #[arg(long, global = true, default_value_t = classify::DEFAULT_DEPTH, value_parser = parse_depth)]
    depth: usize,
    /// Search depth bound for `maxlen`.
    #[arg(long, global = true, default_value_t = 100, value_parser = parse_cap)]
    cap: usize,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Report whether a word is squarefree.
    Check { word: String },
    /// Count squarefree words of a length (prints JSON stats).
    Count {
        n: usize,
        #[arg(long, default_value = "")]
        avoid: String,
    },
    /// List squarefree words of a length, one per line.
    Enum {
        n: usize,
        #[arg(long, default_value = "")]
        avoid: String,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Longest squarefree word avoiding a set of factors.
    Maxlen {
        #[arg(long, default_value = "")]
        avoid: String,
    },
    /// Check that every squarefree word of a length contains the given factors.
    Allcontain {
        n: usize,
        #[arg(long, required = true)]
        require: String,
    },
    /// Morphism operations.
    Morphism {
        #[command(subcommand)]
        action: MorphismAction,
    },
    /// Decide whether a ternary word is avoidable.
    Classify { word: String },
    /// List the unavoidable ternary words.
    UnavoidableSet,
    /// Re-run the headline checks and print PASS/FAIL for each.
    Reproduce,
}

#[derive(Debug, Args)]
struct SpecArg {
    /// Rules such as `0:12,1:102,2:0`.
    #[arg(long)]
    spec: String,
}

#[derive(Debug, Subcommand)]
enum MorphismAction {
    Apply {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        word: String,
    },
    Prolongable {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        letter: u8,
    },
    Prefix {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        seed: String,
        #[arg(long)]
        length: usize,
    },
    SqfreeTest {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = DEFAULT_SQUAREFREE_TEST_LENGTH)]
        max_len: usize,
        /// Restrict the tested words to those avoiding these factors.
        #[arg(long, default_value = "")]
        avoid: String,
    },
    Preimages {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        factor: String,
        #[arg(long)]
        max_source_len: Option<usize>,
    },
    Certify {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        seed: String,
        #[arg(long)]
        avoid: String,
        #[arg(long, default_value = "")]
        support: String,
        #[arg(long, default_value_t = 100_000)]
        prefix_check: usize,
    },
}

fn parse_depth(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if v < classify::MIN_DEPTH {
        return Err(format!("depth must be at least {}", classify::MIN_DEPTH));
    }
    Ok(v)
}

fn parse_cap(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if v == 0 {
        return Err("cap must be at least 1".into());
    }
    Ok(v)
}

/// A failed command: exit code and message for the error stream.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    fn negative(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: 1, message: format!("write error: {e}") }
    }
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
        }
    };
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            return f.code;
        }
    };
    let mut buffer = Vec::new();
    let result = match pool {
        Some(pool) => pool.install(|| dispatch(&cli, &mut buffer)),
        None => dispatch(&cli, &mut buffer),
    };
    if let Err(e) = out.write_all(&buffer).and_then(|_| out.flush()) {
        let _ = writeln!(err, "error: write error: {e}");
        return 1;
    }
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>, Failure> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::usage(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map(Some)
        .map_err(|e| Failure::usage(format!("cannot build thread pool: {e}")))
}

struct Ctx<'a> {
    alphabet: Alphabet,
    output: Output,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn word(&self, text: &str) -> Result<Word, Failure> {
        Word::parse(text, self.alphabet).map_err(|e| Failure::usage(format!("invalid word {text:?}: {e}")))
    }

    fn factors(&self, text: &str) -> Result<FactorSet, Failure> {
        FactorSet::parse(text, self.alphabet).map_err(|e| Failure::usage(format!("invalid factor list {text:?}: {e}")))
    }

    fn json<T: Serialize>(&mut self, value: &T) -> Result<(), Failure> {
        let line = serde_json::to_string(value).map_err(|e| Failure::usage(e.to_string()))?;
        writeln!(self.out, "{line}")?;
        Ok(())
    }

    fn line(&mut self, text: impl std::fmt::Display) -> Result<(), Failure> {
        writeln!(self.out, "{text}")?;
        Ok(())
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    let config = &cli.config;
    let alphabet = Alphabet::new(config.alphabet_size as usize).map_err(|e| Failure::usage(e.to_string()))?;
    let mut ctx = Ctx { alphabet, output: config.output, out };
    match &cli.command {
        Command::Check { word } => check(&mut ctx, word),
        Command::Count { n, avoid } => {
            let stats = count_squarefree(*n, &ctx.factors(avoid)?);
            ctx.json(&stats)?;
            Ok(0)
        }
        Command::Enum { n, avoid, limit } => {
            let avoid = ctx.factors(avoid)?;
            let words = enumerate_squarefree(*n, &avoid).take(limit.unwrap_or(usize::MAX));
            if ctx.output == Output::Json {
                let all: Vec<Word> = words.collect();
                ctx.json(&all)?;
            } else {
                for w in words {
                    ctx.line(w)?;
                }
            }
            Ok(0)
        }
        Command::Maxlen { avoid } => {
            let outcome = max_length_avoiding(&ctx.factors(avoid)?, config.cap);
            print_outcome(&mut ctx, &outcome)?;
            Ok(0)
        }
        Command::Allcontain { n, require } => {
            let required = ctx.factors(require)?;
            if required.is_empty() {
                return Err(Failure::usage("--require needs at least one factor"));
            }
            let report = all_contain(*n, &required);
            print_containment(&mut ctx, &report)?;
            Ok(0)
        }
        Command::Morphism { action } => morphism(&mut ctx, action),
        Command::Classify { word } => {
            let x = Word::parse(word, Alphabet::TERNARY)
                .map_err(|e| Failure::usage(format!("invalid word {word:?}: {e}")))?;
            let verdict = classify::classify(&x, config.depth).map_err(|e| Failure::usage(e.to_string()))?;
            print_verdict(&mut ctx, &verdict)?;
            Ok(0)
        }
        Command::UnavoidableSet => {
            let set = unavoidable_set();
            if ctx.output == Output::Json {
                ctx.json(&set)?;
            } else {
                for w in set {
                    ctx.line(w)?;
                }
            }
            Ok(0)
        }
        Command::Reproduce => {
            let results = reproduce::run_all();
            let all_passed = results.iter().all(|r| r.passed);
            if ctx.output == Output::Json {
                ctx.json(&results)?;
            } else {
                for r in &results {
                    let status = if r.passed { "PASS" } else { "FAIL" };
                    ctx.line(format_args!("{status}  {:<16} {}", r.id, r.claim))?;
                    ctx.line(format_args!("      check: {}", r.check))?;
                    ctx.line(format_args!("      {}", r.detail))?;
                }
                let passed = results.iter().filter(|r| r.passed).count();
                ctx.line(format_args!("{passed}/{} claims passed", results.len()))?;
            }
            Ok(if all_passed { 0 } else { 2 })
        }
    }
}

#[derive(Serialize)]
struct CheckReport<'a> {
    word: &'a Word,
    squarefree: bool,
    square: Option<avoidance_kit::Occurrence>,
}

fn check(ctx: &mut Ctx<'_>, word: &str) -> CmdResult {
    let w = ctx.word(word)?;
    let square = first_square(&w);
    let code = if square.is_some() { 2 } else { 0 };
    if ctx.output == Output::Json {
        ctx.json(&CheckReport { word: &w, squarefree: square.is_none(), square })?;
    } else {
        match square {
            Some(sq) => ctx.line(format_args!("not squarefree: square {sq}"))?,
            None => ctx.line("squarefree")?,
        }
    }
    Ok(code)
}

fn print_outcome(ctx: &mut Ctx<'_>, outcome: &SearchOutcome) -> Result<(), Failure> {
    if ctx.output == Output::Json {
        return ctx.json(outcome);
    }
    match outcome.kind {
        OutcomeKind::Finite => {
            ctx.line(format_args!("finite: longest {}, witness {}", outcome.longest_length, outcome.witness))
        }
        OutcomeKind::ExceedsCap => {
            ctx.line(format_args!("exceeds cap {}: witness {}", outcome.longest_length, outcome.witness))
        }
    }
}

fn print_containment(ctx: &mut Ctx<'_>, report: &ContainmentReport) -> Result<(), Failure> {
    if ctx.output == Output::Json {
        return ctx.json(report);
    }
    match &report.counterexample {
        None => ctx.line(format_args!(
            "true: all {} squarefree words of length {} contain every factor",
            report.words_checked, report.target_length
        )),
        Some(c) => ctx.line(format_args!("false: {} lacks {}", c.word, c.missing)),
    }
}

fn print_verdict(ctx: &mut Ctx<'_>, v: &Verdict) -> Result<(), Failure> {
    if ctx.output == Output::Json {
        return ctx.json(v);
    }
    let word = if v.word.is_empty() { "ε".to_string() } else { v.word.to_string() };
    match (&v.kind, &v.witness) {
        (VerdictKind::Unavoidable, _) => match &v.certificate {
            Some(Certificate::Exhaustive(r)) => ctx.line(format_args!(
                "{word}: unavoidable (all {} squarefree words of length {} contain it)",
                r.words_checked, r.target_length
            )),
            _ => ctx.line(format_args!("{word}: unavoidable (factor of every word)")),
        },
        (kind, Some(w)) => {
            let reason = match &v.certificate {
                Some(Certificate::ContainsSquare { square }) => format!("contains the square {square}"),
                Some(Certificate::Avoidance { reduced, .. }) => format!("limit avoids {reduced}"),
                _ => String::new(),
            };
            ctx.line(format_args!(
                "{word}: {kind} ({reason}); witness {} from {}, permutation {}, {} letters checked",
                w.morphism, w.seed, w.permutation, w.checked_prefix
            ))
        }
        (kind, None) => ctx.line(format_args!("{word}: {kind}")),
    }
}

fn parse_morphism(spec: &SpecArg) -> Result<Morphism, Failure> {
    Morphism::parse(&spec.spec).map_err(|e| Failure::usage(format!("invalid morphism {:?}: {e}", spec.spec)))
}

fn morphism(ctx: &mut Ctx<'_>, action: &MorphismAction) -> CmdResult {
    match action {
        MorphismAction::Apply { spec, word } => {
            let h = parse_morphism(spec)?;
            let w = parse_over(h.alphabet(), word)?;
            let image = h.apply(&w).map_err(|e| Failure::usage(e.to_string()))?;
            if ctx.output == Output::Json {
                ctx.json(&serde_json::json!({ "word": w, "image": image }))?;
            } else {
                ctx.line(image)?;
            }
            Ok(0)
        }
        MorphismAction::Prolongable { spec, letter } => {
            let h = parse_morphism(spec)?;
            if *letter >= h.alphabet().size() {
                return Err(Failure::usage(format!("letter {letter} is outside the morphism's alphabet")));
            }
            let yes = h.prolongable_on(Letter::new(*letter));
            if ctx.output == Output::Json {
                ctx.json(&serde_json::json!({ "letter": letter, "prolongable": yes }))?;
            } else {
                ctx.line(yes)?;
            }
            Ok(0)
        }
        MorphismAction::Prefix { spec, seed, length } => {
            let h = parse_morphism(spec)?;
            let seed = parse_over(h.alphabet(), seed)?;
            let prefix = h.limit_prefix(&seed, *length).map_err(|e| Failure::negative(e.to_string()))?;
            if ctx.output == Output::Json {
                ctx.json(&serde_json::json!({ "seed": seed, "length": length, "prefix": prefix }))?;
            } else {
                ctx.line(prefix)?;
            }
            Ok(0)
        }
        MorphismAction::SqfreeTest { spec, max_len, avoid } => {
            let h = parse_morphism(spec)?;
            let domain = FactorSet::parse(avoid, h.alphabet())
                .map_err(|e| Failure::usage(format!("invalid factor list: {e}")))?;
            let report = h.squarefree_on_bounded_within(*max_len, &domain);
            if ctx.output == Output::Json {
                ctx.json(&report)?;
            } else if let Some(x) = &report.counterexample {
                let image = h.apply(x).map_err(|e| Failure::usage(e.to_string()))?;
                ctx.line(format_args!("false: counterexample {x} -> {image}"))?;
            } else {
                ctx.line(format_args!("true: {} words up to length {} checked", report.words_checked, max_len))?;
            }
            Ok(0)
        }
        MorphismAction::Preimages { spec, factor, max_source_len } => {
            let h = parse_morphism(spec)?;
            let f = parse_over(h.alphabet(), factor)?;
            if f.is_empty() {
                return Err(Failure::usage("--factor must be nonempty"));
            }
            let bound = max_source_len.unwrap_or_else(|| avoidance_kit::morphism::exhaustive_source_bound(&h, &f));
            let witnesses = preimage_factors(&h, &f, bound).map_err(|e| Failure::usage(e.to_string()))?;
            if ctx.output == Output::Json {
                ctx.json(&witnesses)?;
            } else if witnesses.is_empty() {
                ctx.line(format_args!("no preimage: {f} never occurs in an image"))?;
            } else {
                for w in &witnesses {
                    ctx.line(format_args!("source {} offset {}", w.source, w.offset))?;
                }
            }
            Ok(0)
        }
        MorphismAction::Certify { spec, seed, avoid, support, prefix_check } => {
            let h = parse_morphism(spec)?;
            let seed = parse_over(h.alphabet(), seed)?;
            let parse_set = |text: &str| {
                FactorSet::parse(text, h.alphabet()).map_err(|e| Failure::usage(format!("invalid factor list: {e}")))
            };
            let avoided = parse_set(avoid)?;
            let cert = Certifier::new(&h, seed)
                .support(&parse_set(support)?)
                .prefix_check(*prefix_check)
                .certify(&avoided)
                .map_err(|e| Failure::negative(e.to_string()))?;
            if ctx.output == Output::Json {
                ctx.json(&cert)?;
            } else {
                ctx.line(format_args!(
                    "certified: limit of {} from {} avoids {} ({} letters scanned)",
                    cert.morphism, cert.seed, cert.avoided, cert.checked_prefix_length
                ))?;
                for a in &cert.argument {
                    let role = if a.support { " (support)" } else { "" };
                    if a.witnesses.is_empty() {
                        ctx.line(format_args!("  {}{role}: stage {}, no preimage", a.factor, a.stage))?;
                    }
                    for w in &a.witnesses {
                        let defect = match &w.defect {
                            avoidance_kit::morphism::Defect::ContainsSquare { square } => {
                                format!("contains the square {square}")
                            }
                            avoidance_kit::morphism::Defect::ContainsAvoidedFactor { factor, position } => {
                                format!("contains {factor} at {position}")
                            }
                        };
                        ctx.line(format_args!(
                            "  {}{role}: stage {}, preimage {} offset {}, {defect}",
                            a.factor, a.stage, w.source, w.offset
                        ))?;
                    }
                }
            }
            Ok(0)
        }
    }
}

fn parse_over(alphabet: Alphabet, text: &str) -> Result<Word, Failure> {
    Word::parse(text, alphabet).map_err(|e| Failure::usage(format!("invalid word {text:?}: {e}")))
}
