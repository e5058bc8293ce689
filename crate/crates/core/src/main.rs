use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use tropid::dominance::{dominantize, DominanceParams, Dominantized};
use tropid::factor3::factor_rank2;
use tropid::harness::{
    replay, run_suite, selftest, GenConfig, PropertyReport, Suite, TrialOutcome, Verdict,
    DEFAULT_SEED,
};
use tropid::permanent::permanent_with_witnesses;
use tropid::tropcore::{parse_matrices, parse_matrix};
use tropid::words::{build_identity3, gamma, WordExpr};
use tropid::{TropError, TropMatrix, TropScalar};

const EXIT_OK: u8 = 0;
const EXIT_VIOLATED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "tropid", version, about = "Exact min-plus matrix tools and identity verifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tropical permanent, optimal permutations and sign-singularity.
    Perm {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Similarity to a diagonally H-dominant matrix, or a violated cycle.
    Dominantize {
        file: PathBuf,
        #[arg(long = "H", value_name = "RATIONAL")]
        h: TropScalar,
        #[arg(long)]
        json: bool,
    },
    /// Rank-2 factorization of a sign-singular 3x3 matrix.
    Factor {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Inspect the words used by the identities.
    Word {
        #[command(subcommand)]
        word: WordCommand,
    },
    /// Run one randomized property suite.
    Verify(VerifyArgs),
    /// Run every suite at a small trial count.
    Selftest {
        #[arg(long, env = "TROPID_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy)]
enum WordOutput {
    Count,
    Emit,
}

#[derive(Args)]
#[group(required = false, multiple = false)]
struct WordMode {
    /// Print lengths (and, for identity3, the first differing position).
    #[arg(long)]
    count: bool,
    /// Print the letters on one line as A/B.
    #[arg(long)]
    emit: bool,
}

impl WordMode {
    fn output(&self) -> WordOutput {
        if self.emit {
            WordOutput::Emit
        } else {
            WordOutput::Count
        }
    }
}

#[derive(Subcommand)]
enum WordCommand {
    /// Concatenation of all words of length n in lexicographic order.
    Gamma {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        mode: WordMode,
    },
    /// Both sides of the 3x3 identity.
    Identity3 {
        #[command(flatten)]
        mode: WordMode,
    },
}

#[derive(Args)]
struct VerifyArgs {
    suite: Suite,
    #[arg(long, env = "TROPID_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    range: Option<i64>,
    #[arg(long)]
    denom: Option<i64>,
    /// Matrix order for suites that allow a choice.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long = "H", value_name = "RATIONAL")]
    h: Option<TropScalar>,
    /// Check only the instance in FILE (matrices in the suite's instance order).
    #[arg(long, value_name = "FILE")]
    replay: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn read_file(path: &Path) -> Result<String, TropError> {
    std::fs::read_to_string(path)
        .map_err(|e| TropError::Parameter(format!("cannot read {}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> Result<TropMatrix, TropError> {
    parse_matrix(&read_file(path)?)
}

fn print_json(value: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn run(command: Command) -> Result<u8, TropError> {
    match command {
        Command::Perm { file, json } => cmd_perm(&read_matrix(&file)?, json),
        Command::Dominantize { file, h, json } => {
            cmd_dominantize(&read_matrix(&file)?, DominanceParams::new(h)?, json)
        }
        Command::Factor { file, json } => cmd_factor(&read_matrix(&file)?, json),
        Command::Word { word } => cmd_word(word),
        Command::Verify(args) => cmd_verify(args),
        Command::Selftest { seed, trials, json } => cmd_selftest(seed, trials, json),
    }
}

fn cmd_perm(a: &TropMatrix, json: bool) -> Result<u8, TropError> {
    let rep = permanent_with_witnesses(a)?;
    if json {
        print_json(&rep);
        return Ok(EXIT_OK);
    }
    println!("perm = {}", rep.value);
    println!("witnesses ({}):", rep.witnesses.len());
    for p in &rep.witnesses {
        println!("  {p}  {:?}", p.parity());
    }
    println!(
        "{}",
        if rep.sign_singular {
            "sign-singular"
        } else {
            "sign-nonsingular"
        }
    );
    Ok(EXIT_OK)
}

fn cmd_dominantize(c: &TropMatrix, h: DominanceParams, json: bool) -> Result<u8, TropError> {
    let out = dominantize(c, &h)?;
    if json {
        print_json(&out);
        return Ok(EXIT_OK);
    }
    match out {
        Dominantized::Normalized { potentials, matrix } => {
            let r: Vec<String> = potentials.as_slice().iter().map(|v| v.to_string()).collect();
            println!("potentials: {}", r.join(" "));
            print!("{matrix}");
        }
        Dominantized::Violated { witness } => println!("violated: {witness}"),
    }
    Ok(EXIT_OK)
}

fn cmd_factor(a: &TropMatrix, json: bool) -> Result<u8, TropError> {
    match factor_rank2(a)? {
        Ok(f) => {
            if json {
                print_json(&json!({ "status": "ok", "p": f.p, "q": f.q }));
            } else {
                print!("{}{}", f.p, f.q);
            }
            Ok(EXIT_OK)
        }
        Err(why) => {
            if json {
                print_json(&json!({ "status": why }));
            } else {
                println!("{why}");
            }
            Ok(EXIT_VIOLATED)
        }
    }
}

fn emit(w: &WordExpr) -> Result<(), TropError> {
    let stdout = io::stdout();
    let mut out = BufWriter::with_capacity(1 << 16, stdout.lock());
    let io_err = |e: io::Error| TropError::Parameter(format!("write failed: {e}"));
    for l in w.expand_stream() {
        out.write_all(&[l.as_matrix_char() as u8]).map_err(io_err)?;
    }
    out.write_all(b"\n").map_err(io_err)?;
    out.flush().map_err(io_err)
}

fn cmd_word(word: WordCommand) -> Result<u8, TropError> {
    match word {
        WordCommand::Gamma { n, mode } => {
            let g = gamma(n)?;
            match mode.output() {
                WordOutput::Count => println!("length {}", g.expand_stream().count()),
                WordOutput::Emit => emit(&g)?,
            }
        }
        WordCommand::Identity3 { mode } => {
            let id = build_identity3();
            match mode.output() {
                WordOutput::Count => {
                    println!("lhs length {}", id.lhs.expand_stream().count());
                    println!("rhs length {}", id.rhs.expand_stream().count());
                    match id.first_difference() {
                        Some(p) => println!("first difference at letter {}", p + 1),
                        None => println!("sides are identical"),
                    }
                }
                WordOutput::Emit => {
                    emit(&id.lhs)?;
                    emit(&id.rhs)?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn report_exit(verdict: Verdict) -> u8 {
    match verdict {
        Verdict::Pass => EXIT_OK,
        Verdict::Fail | Verdict::Inconclusive => EXIT_VIOLATED,
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, TropError> {
    let defaults = args.suite.default_config();
    let cfg = GenConfig {
        seed: args.seed,
        n: args.n.unwrap_or(defaults.n),
        range: args.range.unwrap_or(defaults.range),
        denom: args.denom.unwrap_or(defaults.denom),
        trials: args.trials.unwrap_or(defaults.trials),
    };
    if let Some(path) = &args.replay {
        let inst = parse_matrices(&read_file(path)?)?;
        let outcome = replay(args.suite, cfg.n, args.h, &inst)?;
        let (status, code) = match &outcome {
            TrialOutcome::Pass | TrialOutcome::Tagged(_) => ("pass", EXIT_OK),
            TrialOutcome::Vacuous => ("vacuous", EXIT_OK),
            TrialOutcome::Fail { .. } => ("fail", EXIT_VIOLATED),
        };
        if args.json {
            let mut v = json!({ "property_id": args.suite.id(), "status": status });
            if let TrialOutcome::Fail { expected, actual } = &outcome {
                v["expected"] = json!(expected);
                v["actual"] = json!(actual);
            }
            print_json(&v);
        } else {
            println!("{}: {status}", args.suite);
            if let TrialOutcome::Fail { expected, actual } = &outcome {
                println!("  expected: {expected}");
                println!("  actual:   {actual}");
            }
        }
        return Ok(code);
    }
    let report = run_suite(args.suite, &cfg, args.h)?;
    if args.json {
        print_json(&report);
    } else {
        print!("{report}");
    }
    Ok(report_exit(report.verdict))
}

fn cmd_selftest(seed: u64, trials: u64, json: bool) -> Result<u8, TropError> {
    let reports: Vec<PropertyReport> = selftest(seed, trials)?;
    if json {
        print_json(&reports);
    } else {
        for r in &reports {
            if r.passed() {
                println!("{}", r.summary_line());
            } else {
                print!("{r}");
            }
        }
    }
    let worst = reports.iter().map(|r| report_exit(r.verdict)).max().unwrap_or(EXIT_OK);
    Ok(worst)
}
