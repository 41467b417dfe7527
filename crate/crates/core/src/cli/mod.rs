//! The `arnold` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure (including
//! engine disagreement under `--cross-check`), 3 input error. Input errors
//! never leave partial output on stdout.

pub mod bench;
pub mod verify;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::engines::{complexity_fast, run_scheme, synthesize_word, Certificate, Engine, Terminal};
use crate::error::Error;
use crate::planner::{bfs_min_ops, plan_ranks, shannon_exhaustive, ComplexityValue, Subcase};
use crate::thinning::{detect_final, parity_tree, FinalDetection};
use crate::word::{OperatorRank, PeriodicWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Usage = 1,
    Verification = 2,
    Input = 3,
}

/// Everything a command invocation produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: Status,
    pub stdout: String,
    pub stderr: String,
}

/// Envelope of every `--json` output.
#[derive(Debug, Serialize)]
pub struct OutputRecord<I, R> {
    pub command: &'static str,
    pub inputs: I,
    pub results: R,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ns: Option<u64>,
}

#[derive(Debug, Parser)]
#[command(
    name = "arnold",
    version,
    about = "Arnold complexity of length-2^n binary words"
)]
struct Cli {
    /// Emit a JSON record instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for every randomized command.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Complexity of one word or of every word in a file.
    Complexity(ComplexityArgs),
    /// Shortest operator plan from a complexity value to a final value.
    Plan(PlanArgs),
    /// Replay a rank sequence on a word.
    Scheme(SchemeArgs),
    /// Parity tree of all thinned-out words, root level first.
    Parities(WordArg),
    /// Deterministic word with a prescribed complexity.
    Synth(SynthArgs),
    /// Exhaustive Shannon-function table against the closed-form bound.
    Shannon(ShannonArgs),
    /// Run the property suite.
    Verify(VerifyArgs),
    /// Median timing of the naive and fast engines.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct ComplexityArgs {
    /// Word as 0b… or 0x….
    #[arg(long, required_unless_present = "file", conflicts_with = "file")]
    input: Option<String>,
    /// File with one word per line; `#` starts a comment.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "fast")]
    engine: Engine,
    /// Print the certificate ranks and final value.
    #[arg(long)]
    cert: bool,
    /// Run both engines and fail on disagreement.
    #[arg(long)]
    cross_check: bool,
}

#[derive(Debug, Args)]
struct PlanArgs {
    #[arg(long)]
    value: u64,
    #[arg(long)]
    bits: u32,
    /// Append the breadth-first oracle count.
    #[arg(long)]
    bfs: bool,
}

#[derive(Debug, Args)]
struct SchemeArgs {
    #[arg(long)]
    input: String,
    /// Comma-separated ranks, each a power of two.
    #[arg(long, value_delimiter = ',')]
    ranks: Vec<u64>,
}

#[derive(Debug, Args)]
struct WordArg {
    #[arg(long)]
    input: String,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long)]
    bits: u32,
    #[arg(long)]
    value: u64,
    /// Render in hex when the word is long enough.
    #[arg(long)]
    hex: bool,
}

#[derive(Debug, Args)]
struct ShannonArgs {
    #[arg(long = "min", default_value_t = 1)]
    min_n: u32,
    #[arg(long = "max", default_value_t = 14)]
    max_n: u32,
    /// Exit with status 2 on a bound violation or formula mismatch.
    #[arg(long)]
    validate: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "quick")]
    level: verify::Level,
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<verify::Fault>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 14)]
    bits: u32,
    #[arg(long, default_value_t = 100)]
    samples: usize,
}

/// Rendered output of a successful (or verification-failed) command.
struct Report {
    status: Status,
    text: String,
    json: String,
    stderr: String,
}

impl Report {
    fn new<I: Serialize, R: Serialize>(record: OutputRecord<I, R>, text: String) -> Self {
        Report {
            status: Status::Success,
            text,
            json: serde_json::to_string_pretty(&record).expect("records serialize"),
            stderr: String::new(),
        }
    }

    fn failing(mut self, stderr: String) -> Self {
        self.status = Status::Verification;
        self.stderr = stderr;
        self
    }
}

fn input_error(e: impl std::fmt::Display) -> String {
    format!("error: {e}")
}

type CmdResult = Result<Report, String>;

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    status: Status::Usage,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                Outcome {
                    status: Status::Success,
                    stdout: rendered,
                    stderr: String::new(),
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Complexity(args) => cmd_complexity(args),
        Command::Plan(args) => cmd_plan(args),
        Command::Scheme(args) => cmd_scheme(args),
        Command::Parities(args) => cmd_parities(args),
        Command::Synth(args) => cmd_synth(args, cli.seed),
        Command::Shannon(args) => cmd_shannon(args),
        Command::Verify(args) => Ok(cmd_verify(args, cli.seed)),
        Command::Bench(args) => cmd_bench(args, cli.seed),
    };
    match result {
        Ok(report) => {
            let mut stdout = if cli.json { report.json } else { report.text };
            if !stdout.ends_with('\n') {
                stdout.push('\n');
            }
            Outcome {
                status: report.status,
                stdout,
                stderr: report.stderr,
            }
        }
        Err(message) => Outcome {
            status: Status::Input,
            stdout: String::new(),
            stderr: message + "\n",
        },
    }
}

pub fn main<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let outcome = run(args);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    ExitCode::from(outcome.status as u8)
}

/// Parses a words file: one token per line, blank lines and `#` comments
/// ignored. The first bad line aborts the whole file.
pub fn parse_words_file(contents: &str) -> Result<Vec<PeriodicWord>, String> {
    let mut words = Vec::new();
    for (number, line) in contents.lines().enumerate() {
        let token = line.split('#').next().unwrap_or("").trim();
        if token.is_empty() {
            continue;
        }
        let word = token
            .parse()
            .map_err(|e: Error| format!("error: line {}: {e}", number + 1))?;
        words.push(word);
    }
    Ok(words)
}

#[derive(Debug, Serialize)]
struct ComplexityInputs<'a> {
    engine: Engine,
    cross_check: bool,
    file: Option<String>,
    words: &'a [PeriodicWord],
}

#[derive(Debug, Serialize)]
struct ComplexityRow {
    word: PeriodicWord,
    complexity: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    other_engine: Option<u64>,
}

fn cmd_complexity(args: &ComplexityArgs) -> CmdResult {
    let words = match (&args.input, &args.file) {
        (Some(text), _) => vec![PeriodicWord::parse(text).map_err(input_error)?],
        (None, Some(path)) => {
            let contents = std::fs::read_to_string(path)
                .map_err(|e| format!("error: cannot read {}: {e}", path.display()))?;
            parse_words_file(&contents)?
        }
        (None, None) => return Err("error: either --input or --file is required".into()),
    };
    let primary = crate::engines::batch_complexity(&words, args.engine);
    let other_engine = match args.engine {
        Engine::Fast => Engine::Naive,
        Engine::Naive => Engine::Fast,
    };
    let secondary = args
        .cross_check
        .then(|| crate::engines::batch_complexity(&words, other_engine));
    let rows: Vec<ComplexityRow> = words
        .iter()
        .zip(&primary)
        .enumerate()
        .map(|(i, (word, &a))| ComplexityRow {
            word: word.clone(),
            complexity: a,
            certificate: args.cert.then(|| complexity_fast(word).1),
            other_engine: secondary.as_ref().map(|s| s[i]),
        })
        .collect();

    let single = args.input.is_some();
    let mut text = String::new();
    let mut mismatches = String::new();
    for row in &rows {
        if !single {
            write!(text, "{} ", row.word).unwrap();
        }
        write!(text, "A={}", row.complexity).unwrap();
        if let Some(cert) = &row.certificate {
            let ranks: Vec<String> = cert.ranks.iter().map(ToString::to_string).collect();
            write!(
                text,
                " ranks=[{}] final={}",
                ranks.join(","),
                cert.final_complexity
            )
            .unwrap();
        }
        if let Some(other) = row.other_engine {
            if other != row.complexity {
                writeln!(
                    mismatches,
                    "mismatch: {} {:?}={} {:?}={}",
                    row.word, args.engine, row.complexity, other_engine, other
                )
                .unwrap();
            }
        }
        text.push('\n');
    }
    let record = OutputRecord {
        command: "complexity",
        inputs: ComplexityInputs {
            engine: args.engine,
            cross_check: args.cross_check,
            file: args.file.as_ref().map(|p| p.display().to_string()),
            words: &words,
        },
        results: &rows,
        timing_ns: None,
    };
    let report = Report::new(record, text);
    Ok(if mismatches.is_empty() {
        report
    } else {
        report.failing(mismatches)
    })
}

#[derive(Debug, Serialize)]
struct PlanInputs {
    value: u64,
    bits: u32,
}

#[derive(Debug, Serialize)]
struct PlanStepView {
    rank: OperatorRank,
    value: u64,
    digits: String,
}

#[derive(Debug, Serialize)]
struct PlanResults {
    start: ComplexityValue,
    subcase: Subcase,
    ranks: Vec<OperatorRank>,
    steps: Vec<PlanStepView>,
    final_value: u64,
    final_digits: String,
    count: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    bfs: Option<u32>,
}

fn cmd_plan(args: &PlanArgs) -> CmdResult {
    let plan = plan_ranks(args.value, args.bits).map_err(input_error)?;
    let view = |v: u64| ComplexityValue::new(v, args.bits).expect("plan values stay in range");
    let start = view(plan.start);
    let steps: Vec<PlanStepView> = plan
        .ranks
        .iter()
        .zip(plan.intermediates())
        .map(|(&rank, value)| PlanStepView {
            rank,
            value,
            digits: view(value).digit_string(),
        })
        .collect();
    let finish = view(plan.final_value);
    let bfs = if args.bfs {
        Some(bfs_min_ops(args.value, args.bits).map_err(input_error)?)
    } else {
        None
    };

    let mut text = String::new();
    writeln!(text, "subcase {}", plan.subcase).unwrap();
    writeln!(
        text,
        "A(w)  = {}  nu={} j={}",
        start, start.nu, start.trailing_zeros
    )
    .unwrap();
    match plan.subcase {
        Subcase::EvenViaOdd => {
            let odd = view(plan.start - 1);
            writeln!(
                text,
                "A(w2) = {}  nu={} l={}",
                odd,
                odd.nu,
                odd.max_run_len()
            )
            .unwrap();
        }
        Subcase::Odd => {
            writeln!(text, "run   l={}", start.max_run_len()).unwrap();
        }
        Subcase::EvenDirect | Subcase::AlreadyFinal => {}
    }
    writeln!(text, "A(v)  = {}  nu={}", finish, finish.nu).unwrap();
    let ranks: Vec<String> = plan.ranks.iter().map(ToString::to_string).collect();
    writeln!(text, "ops   = {}  ranks {}", plan.count, ranks.join(",")).unwrap();
    for (i, step) in steps.iter().enumerate() {
        writeln!(
            text,
            "step {}: rank {} -> {} ({})",
            i + 1,
            step.rank,
            step.value,
            step.digits
        )
        .unwrap();
    }
    writeln!(text, "final {} ({})", plan.final_value, finish).unwrap();
    if let Some(count) = bfs {
        writeln!(text, "bfs   = {count}").unwrap();
    }

    let record = OutputRecord {
        command: "plan",
        inputs: PlanInputs {
            value: args.value,
            bits: args.bits,
        },
        results: PlanResults {
            final_digits: finish.digit_string(),
            start,
            subcase: plan.subcase,
            ranks: plan.ranks.clone(),
            steps,
            final_value: plan.final_value,
            count: plan.count,
            bfs,
        },
        timing_ns: None,
    };
    Ok(Report::new(record, text))
}

#[derive(Debug, Serialize)]
struct SchemeInputs<'a> {
    word: &'a PeriodicWord,
    ranks: &'a [u64],
}

fn describe_terminal(terminal: &Terminal) -> String {
    match terminal {
        Terminal::Zero => "zero".into(),
        Terminal::Final(d) => format!("final A={} (level {})", d.complexity, d.level),
        Terminal::Open => "open".into(),
    }
}

fn cmd_scheme(args: &SchemeArgs) -> CmdResult {
    let word = PeriodicWord::parse(&args.input).map_err(input_error)?;
    let ranks = args
        .ranks
        .iter()
        .map(|&h| OperatorRank::new(h))
        .collect::<Result<Vec<_>, _>>()
        .map_err(input_error)?;
    let trace = run_scheme(&word, &ranks).map_err(input_error)?;
    let mut text = format!("start {}\n", trace.start);
    for step in &trace.steps {
        writeln!(text, "rank {} -> {}", step.rank, step.result).unwrap();
    }
    writeln!(text, "terminal {}", describe_terminal(&trace.terminal)).unwrap();
    let record = OutputRecord {
        command: "scheme",
        inputs: SchemeInputs {
            word: &word,
            ranks: &args.ranks,
        },
        results: &trace,
        timing_ns: None,
    };
    Ok(Report::new(record, text))
}

#[derive(Debug, Serialize)]
struct ParitiesResults {
    levels: Vec<String>,
    xor_count: u64,
    detection: Option<FinalDetection>,
}

fn cmd_parities(args: &WordArg) -> CmdResult {
    let word = PeriodicWord::parse(&args.input).map_err(input_error)?;
    let tree = parity_tree(&word);
    let levels: Vec<String> = tree
        .levels()
        .iter()
        .map(|level| {
            level
                .iter()
                .map(|b| if b { "1" } else { "0" })
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    let text = levels.join("\n");
    let record = OutputRecord {
        command: "parities",
        inputs: &word,
        results: ParitiesResults {
            levels,
            xor_count: tree.xor_count(),
            detection: detect_final(&word),
        },
        timing_ns: None,
    };
    Ok(Report::new(record, text))
}

#[derive(Debug, Serialize)]
struct SynthInputs {
    bits: u32,
    value: u64,
    seed: u64,
}

fn cmd_synth(args: &SynthArgs, seed: u64) -> CmdResult {
    let word = synthesize_word(args.bits, args.value, seed).map_err(input_error)?;
    let rendered = if args.hex {
        word.to_hex_string()
            .unwrap_or_else(|| word.to_binary_string())
    } else {
        word.to_binary_string()
    };
    let record = OutputRecord {
        command: "synth",
        inputs: SynthInputs {
            bits: args.bits,
            value: args.value,
            seed,
        },
        results: &rendered,
        timing_ns: None,
    };
    Ok(Report::new(record, rendered.clone()))
}

#[derive(Debug, Serialize)]
struct ShannonInputs {
    min_n: u32,
    max_n: u32,
    validate: bool,
}

/// Widths the theorem speaks about; smaller rows are informational.
const THEOREM_MIN_BITS: u32 = 5;
const SHANNON_MAX_BITS: u32 = 16;

fn cmd_shannon(args: &ShannonArgs) -> CmdResult {
    if args.min_n < 1 || args.min_n > args.max_n || args.max_n > SHANNON_MAX_BITS {
        return Err(format!(
            "error: need 1 <= min ({}) <= max ({}) <= {SHANNON_MAX_BITS}",
            args.min_n, args.max_n
        ));
    }
    let reports = (args.min_n..=args.max_n)
        .map(shannon_exhaustive)
        .collect::<Result<Vec<_>, _>>()
        .map_err(input_error)?;
    let mut text = String::from("n | max_odd | bound_odd | max_even | bound_even | formula==BFS\n");
    let mut failures = String::new();
    for r in &reports {
        writeln!(
            text,
            "{} | {} | {} | {} | {} | {}",
            r.n,
            r.max_odd,
            r.bound_odd,
            r.max_even,
            r.bound_even,
            if r.consistent { "ok" } else { "MISMATCH" }
        )
        .unwrap();
        if !r.consistent {
            writeln!(
                failures,
                "n={}: formula differs from BFS at {:?}",
                r.n, r.mismatches
            )
            .unwrap();
        }
        if r.n >= THEOREM_MIN_BITS && !r.within_bounds() {
            writeln!(
                failures,
                "n={}: bound violated (odd {:?}, even {:?})",
                r.n, r.witness_odd, r.witness_even
            )
            .unwrap();
        }
    }
    let record = OutputRecord {
        command: "shannon",
        inputs: ShannonInputs {
            min_n: args.min_n,
            max_n: args.max_n,
            validate: args.validate,
        },
        results: &reports,
        timing_ns: None,
    };
    let report = Report::new(record, text);
    Ok(if args.validate && !failures.is_empty() {
        report.failing(failures)
    } else {
        report
    })
}

#[derive(Debug, Serialize)]
struct VerifyInputs {
    level: verify::Level,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    inject_fault: Option<verify::Fault>,
}

fn cmd_verify(args: &VerifyArgs, seed: u64) -> Report {
    let suite = verify::run_suite(args.level, seed, args.inject_fault);
    let mut text = String::new();
    let mut failures = String::new();
    for p in &suite.properties {
        match &p.witness {
            None => writeln!(text, "ok   {} ({} checks)", p.name, p.checks).unwrap(),
            Some(witness) => {
                writeln!(text, "FAIL {}: {}", p.name, witness).unwrap();
                writeln!(failures, "property {} failed: {}", p.name, witness).unwrap();
            }
        }
    }
    for note in &suite.notes {
        writeln!(text, "note {note}").unwrap();
    }
    let held = suite.properties.iter().filter(|p| p.holds()).count();
    if failures.is_empty() {
        writeln!(text, "all {held} properties hold").unwrap();
    } else {
        writeln!(text, "{held} of {} properties hold", suite.properties.len()).unwrap();
    }
    let record = OutputRecord {
        command: "verify",
        inputs: VerifyInputs {
            level: args.level,
            seed,
            inject_fault: args.inject_fault,
        },
        results: &suite,
        timing_ns: None,
    };
    let report = Report::new(record, text);
    if failures.is_empty() {
        report
    } else {
        report.failing(failures)
    }
}

#[derive(Debug, Serialize)]
struct BenchInputs {
    bits: u32,
    samples: usize,
    seed: u64,
}

fn cmd_bench(args: &BenchArgs, seed: u64) -> CmdResult {
    let started = std::time::Instant::now();
    let bench = bench::run_bench(args.bits, args.samples, seed).map_err(input_error)?;
    let elapsed = started.elapsed().as_nanos() as u64;
    let mut text = String::new();
    writeln!(
        text,
        "bits {}  samples {}  A > {}",
        bench.bits, bench.samples, bench.complexity_floor
    )
    .unwrap();
    writeln!(text, "naive median {} ns", bench.naive_median_ns).unwrap();
    writeln!(text, "fast  median {} ns", bench.fast_median_ns).unwrap();
    writeln!(text, "speedup {:.1}x", bench.speedup).unwrap();
    let agree = bench.agree;
    let record = OutputRecord {
        command: "bench",
        inputs: BenchInputs {
            bits: args.bits,
            samples: args.samples,
            seed,
        },
        results: &bench,
        timing_ns: Some(elapsed),
    };
    let report = Report::new(record, text);
    Ok(if agree {
        report
    } else {
        report.failing("engines disagree on a benchmark word\n".into())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("arnold").chain(args.iter().copied()))
    }

    #[test]
    fn words_file_skips_comments() {
        let words = parse_words_file("# corpus\n0b10\n\n0x9  # trailing\n").unwrap();
        assert_eq!(words.len(), 2);
        let err = parse_words_file("0b10\n0b101\n").unwrap_err();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_args(&["frobnicate"]).status, Status::Usage);
        assert_eq!(
            run_args(&["plan", "--value", "x", "--bits", "3"]).status,
            Status::Usage
        );
        assert_eq!(run_args(&["--help"]).status, Status::Success);
    }

    #[test]
    fn complexity_single_word() {
        let out = run_args(&["complexity", "--input", "0b10110100"]);
        assert_eq!(
            (out.status, out.stdout.as_str()),
            (Status::Success, "A=5\n")
        );
        let out = run_args(&["complexity", "--input", "0b101 "]);
        assert_eq!(out.status, Status::Input);
        assert!(out.stdout.is_empty());
    }
}
