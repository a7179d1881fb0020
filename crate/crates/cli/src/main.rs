//! `hyperquad`: expand, predict and verify hyperquadratic continued fractions,
//! and search the families `E(r, l, a, q)` exhaustively.
//!
//! Exit codes: 0 ok, 1 usage, 2 invalid spec, 3 precision shortfall,
//! 4 mismatch.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hyperquad::families::{intro_example, mills_robbins, omega_spec};
use hyperquad::field::FqContext;
use hyperquad::hyperquad::{expand_alpha, HyperquadError, HyperquadSpec};
use hyperquad::laurent::ExpandStop;
use hyperquad::search::{c0_census, counts, run_search_with, SearchError, SearchMode, SearchTask};
use hyperquad::theorem::{check_conditions, predict, prop1_check, verify, TheoremError};

const USAGE: u8 = 1;
const INVALID: u8 = 2;
const PRECISION: u8 = 3;
const MISMATCH: u8 = 4;

#[derive(Parser)]
#[command(name = "hyperquad", version, about = "Hyperquadratic continued fractions over F_q")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct SpecArgs {
    /// Spec file (JSON); `-` reads standard input.
    spec: PathBuf,
    /// Number of partial quotients.
    #[arg(long, short = 'n', default_value_t = 50)]
    terms: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Full,
    E0,
}

#[derive(Subcommand)]
enum Cmd {
    /// Expand a spec with the series oracle.
    Expand(SpecArgs),
    /// Closed-form prediction (requires (C1)-(C3)).
    Predict(SpecArgs),
    /// Compare oracle, step recursion and closed forms.
    Verify(SpecArgs),
    /// Exhaustive search over E(r, l, a, q) or E_0.
    Search {
        /// Characteristic.
        #[arg(long)]
        p: u32,
        /// Field degree: q = p^s.
        #[arg(long, default_value_t = 1)]
        s: usize,
        /// r = p^t.
        #[arg(long, default_value_t = 1)]
        t: u32,
        /// Prefix length.
        #[arg(long)]
        l: usize,
        #[arg(long, value_enum, default_value_t = Mode::Full)]
        mode: Mode,
        /// Certified quotients per spec [default: 4 l r^2].
        #[arg(long)]
        depth: Option<usize>,
        /// Shard `i/k`: indices congruent to i mod k.
        #[arg(long, default_value = "0/1")]
        shard: String,
        /// Restrict to one a, given as a field element index.
        #[arg(long)]
        a: Option<u64>,
        /// Append-only JSON-lines log; an existing log is resumed.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Print chunk progress to standard error.
        #[arg(long)]
        progress: bool,
    },
    /// Check the word W(a, x) and its continuants.
    Prop1 {
        /// Characteristic.
        #[arg(long)]
        p: u32,
        /// Field degree: q = p^s.
        #[arg(long, default_value_t = 1)]
        s: usize,
        /// r = p^t.
        #[arg(long, default_value_t = 1)]
        t: u32,
        /// All (a, x); otherwise all a with x = 0.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Family sizes, per fixed a and summed over a.
    Counts {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long)]
        l: usize,
        /// Also count (C0) solutions by enumeration, with r = p^t.
        #[arg(long)]
        census: bool,
        #[arg(long, default_value_t = 1)]
        t: u32,
    },
    /// Print the spec of a named family member.
    Example {
        #[command(subcommand)]
        which: Example,
    },
}

#[derive(Subcommand)]
enum Example {
    /// l = 1, a = -1, lambda_1 = 1, eps1 = eps(eps - 1), eps2 = eps over F_p.
    Intro {
        #[arg(long)]
        p: u32,
        #[arg(long, allow_hyphen_values = true)]
        eps: i64,
    },
    /// (lambda_1, -lambda_1/(1 + 2 lambda_1), 1, 2) in E_0(p, 2, 4, p).
    MillsRobbins {
        #[arg(long)]
        p: u32,
        #[arg(long, allow_hyphen_values = true)]
        lambda1: i64,
    },
    /// [T, T, ...] with a = 4, eps1 = 1, eps2 = -2.
    Omega {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        t: u32,
        #[arg(long, default_value_t = 1)]
        l: usize,
    },
}

struct Fail(u8, String);

impl From<SearchError> for Fail {
    fn from(e: SearchError) -> Self {
        let code = match e {
            SearchError::Io(_) | SearchError::Checkpoint(_) => USAGE,
            _ => INVALID,
        };
        Fail(code, e.to_string())
    }
}

fn theorem_fail(e: TheoremError) -> Fail {
    let code = match e {
        TheoremError::Spec(_) | TheoremError::Override | TheoremError::ConditionsFail => INVALID,
        _ => MISMATCH,
    };
    Fail(code, e.to_string())
}

fn load_spec(path: &PathBuf) -> Result<HyperquadSpec, Fail> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Fail(USAGE, e.to_string()))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Fail(USAGE, format!("{}: {e}", path.display())))?
    };
    HyperquadSpec::from_json(&text).map_err(|e| Fail(INVALID, e.to_string()))
}

fn field(p: u32, s: usize) -> Result<std::sync::Arc<FqContext>, Fail> {
    FqContext::new(p as u64, s, None).map_err(|e| Fail(INVALID, e.to_string()))
}

fn print_json<T: Serialize>(v: &T) {
    // a closed pipe (e.g. `| head`) is not an error
    let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn cmd_expand(args: &SpecArgs) -> Result<(), Fail> {
    let spec = load_spec(&args.spec)?;
    let report = expand_alpha(&spec, args.terms).map_err(|e| match e {
        HyperquadError::Spec(_) => Fail(INVALID, e.to_string()),
        _ => Fail(PRECISION, e.to_string()),
    })?;
    match args.format {
        Format::Json => print_json(&report.to_record()),
        Format::Text => {
            for (i, a) in report.word.terms().iter().enumerate() {
                println!("a_{} = {}", i + 1, a);
            }
            println!(
                "certified {} / {}, perfect through {}, residual O(T^{})",
                report.certified, args.terms, report.perfect_through, report.residual_valuation
            );
        }
    }
    if report.stop == ExpandStop::Precision && report.certified < args.terms {
        return Err(Fail(PRECISION, format!("only {} quotients certified", report.certified)));
    }
    Ok(())
}

#[derive(Serialize)]
struct PredictOut {
    quotients: Vec<String>,
    overlaps: Vec<usize>,
}

fn cmd_predict(args: &SpecArgs) -> Result<(), Fail> {
    let spec = load_spec(&args.spec)?;
    let pred = predict(&spec, args.terms).map_err(theorem_fail)?;
    match args.format {
        Format::Json => print_json(&PredictOut {
            quotients: pred.word.terms().iter().map(|a| a.to_string()).collect(),
            overlaps: pred.overlaps,
        }),
        Format::Text => {
            for (i, a) in pred.word.terms().iter().enumerate() {
                println!("a_{} = {}", i + 1, a);
            }
        }
    }
    Ok(())
}

fn cmd_verify(args: &SpecArgs) -> Result<(), Fail> {
    let spec = load_spec(&args.spec)?;
    let rep = verify(&spec, args.terms).map_err(theorem_fail)?;
    match args.format {
        Format::Json => print_json(&rep),
        Format::Text => {
            let c = rep.conditions;
            println!(
                "conditions: C1={} C2={} C3={}{}",
                c.c1,
                c.c2,
                c.c3,
                c.c0.map_or(String::new(), |s| format!(" C0={s:?}"))
            );
            println!("certified {}, perfect through {}", rep.certified, rep.perfect_through);
            if let Some(a) = rep.agreement_through {
                println!("closed forms agree through {a}");
            }
            println!("step recursion agrees through {}", rep.step_agreement_through);
            if let Some((s, l)) = rep.period {
                println!("period candidate: start {}, length {}", s + 1, l);
            }
            if let Some(m) = &rep.first_mismatch {
                println!("first mismatch at {}: predicted {}, observed {}", m.index, m.predicted, m.observed);
            }
            if let Some(n) = &rep.note {
                println!("note: {n}");
            }
            println!("status: {:?}", rep.status);
        }
    }
    match rep.status.exit_code() {
        0 => Ok(()),
        code => Err(Fail(code as u8, format!("{:?}", rep.status))),
    }
}

fn parse_shard(s: &str) -> Result<(u64, u64), Fail> {
    let bad = || Fail(USAGE, format!("bad shard `{s}`, expected i/k"));
    let (i, k) = s.split_once('/').ok_or_else(bad)?;
    Ok((i.trim().parse().map_err(|_| bad())?, k.trim().parse().map_err(|_| bad())?))
}

#[derive(Serialize)]
struct Prop1Out {
    p: u32,
    s: usize,
    t: u32,
    pairs: u64,
    coprime_pairs: u64,
    omega_zero_pairs: u64,
    failures: Vec<(String, String)>,
}

fn cmd_prop1(p: u32, s: usize, t: u32, exhaustive: bool) -> Result<(), Fail> {
    let f = field(p, s)?;
    let mut out = Prop1Out { p, s, t, pairs: 0, coprime_pairs: 0, omega_zero_pairs: 0, failures: Vec::new() };
    for a in f.nonzero_elements() {
        let xs: Vec<_> = if exhaustive { f.elements().collect() } else { vec![f.zero()] };
        for x in xs {
            let c = prop1_check(&f, a, x, t).map_err(theorem_fail)?;
            out.pairs += 1;
            if c.omega_zero {
                out.omega_zero_pairs += 1;
            } else {
                out.coprime_pairs += 1;
            }
            if !c.holds() {
                out.failures.push((f.render(a), f.render(x)));
            }
        }
    }
    print_json(&out);
    if out.failures.is_empty() {
        Ok(())
    } else {
        Err(Fail(MISMATCH, format!("{} pairs fail", out.failures.len())))
    }
}

#[derive(Serialize)]
struct CountsOut {
    #[serde(flatten)]
    counts: hyperquad::search::Counts,
    /// Members of E_0 satisfying (C0), by enumeration, per a.
    #[serde(skip_serializing_if = "Option::is_none")]
    c0_census: Option<Vec<(String, u64)>>,
}

fn run(cli: Cli) -> Result<(), Fail> {
    match cli.cmd {
        Cmd::Expand(a) => cmd_expand(&a),
        Cmd::Predict(a) => cmd_predict(&a),
        Cmd::Verify(a) => cmd_verify(&a),
        Cmd::Search { p, s, t, l, mode, depth, shard, a, checkpoint, progress } => {
            let mode = match mode {
                Mode::Full => SearchMode::Full,
                Mode::E0 => SearchMode::E0,
            };
            let mut task = SearchTask::new(p, s, t, l, mode);
            if let Some(d) = depth {
                task.depth = d;
            }
            task.shard = parse_shard(&shard)?;
            task.a = a;
            let summary = run_search_with(&task, checkpoint.as_deref(), |done, all| {
                if progress {
                    eprintln!("chunk {done}/{all}");
                }
            })?;
            print_json(&summary);
            if !summary.mismatches.is_empty() {
                return Err(Fail(MISMATCH, format!("{} mismatches", summary.mismatches.len())));
            }
            if !summary.shortfalls.is_empty() {
                return Err(Fail(PRECISION, format!("{} specs undecided", summary.shortfalls.len())));
            }
            Ok(())
        }
        Cmd::Prop1 { p, s, t, exhaustive } => cmd_prop1(p, s, t, exhaustive),
        Cmd::Counts { p, s, l, census, t } => {
            let f = field(p, s)?;
            let census = census.then(|| c0_census(&f, t, l).into_iter().map(|(a, n)| (f.render(a), n)).collect());
            print_json(&CountsOut { counts: counts(f.order(), l), c0_census: census });
            Ok(())
        }
        Cmd::Example { which } => {
            let spec = match which {
                Example::Intro { p, eps } => {
                    let f = field(p, 1)?;
                    intro_example(&f, f.from_int(eps))
                }
                Example::MillsRobbins { p, lambda1 } => {
                    let f = field(p, 1)?;
                    mills_robbins(&f, f.from_int(lambda1))
                }
                Example::Omega { p, t, l } => omega_spec(&field(p, 1)?, t, l),
            }
            .map_err(|e| Fail(INVALID, e.to_string()))?;
            // validate the conditions eagerly so a bad example is reported here
            check_conditions(&spec).map_err(theorem_fail)?;
            println!("{}", spec.to_json());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
