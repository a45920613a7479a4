use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ratform::report::{analyze_batch, parse_corpus, split_vars, Entry, Options, Outcome};
use ratform::Settings;

#[derive(Parser)]
#[command(name = "ratform", version, about = "Classify rational functions by the algebraic constraints of their doubling maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one or more functions.
    Analyze(AnalyzeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Expression to analyze; may be given several times.
    #[arg(long = "function", value_name = "EXPR")]
    functions: Vec<String>,
    /// Comma-separated variable order. Defaults to order of first appearance.
    #[arg(long, value_name = "LIST")]
    vars: Option<String>,
    /// File with one expression per line; `#` starts a comment and an
    /// optional `x,y,z:` prefix sets the variables for that line.
    #[arg(long, value_name = "PATH")]
    corpus: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Size of the working primes.
    #[arg(long, value_name = "BITS", default_value_t = 31)]
    prime_bits: u32,
    /// Random points per prime for rank estimates.
    #[arg(long, default_value_t = 16)]
    samples: usize,
    /// Degree bound for dependence certificates (automatic if omitted).
    #[arg(long, value_name = "D")]
    max_degree: Option<usize>,
    /// Experimental: test whether a polynomial input has the shape u(s) with
    /// polynomial components. Reports fit or no fit only.
    #[arg(long)]
    probe_conjecture: bool,
    /// Include wall-clock seconds per report.
    #[arg(long)]
    timing: bool,
}

fn usage(flag: &str, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {flag}: {msg}");
    ExitCode::from(1)
}

fn run(args: AnalyzeArgs) -> ExitCode {
    if args.samples == 0 {
        return usage("--samples", "must be positive");
    }
    let settings = match Settings::with_seed(args.seed).with_prime_bits(args.prime_bits) {
        Ok(s) => Settings {
            samples: args.samples,
            max_degree: args.max_degree,
            ..s
        },
        Err(e) => return usage("--prime-bits", e),
    };
    let vars = args.vars.as_deref().map(split_vars);
    if vars.as_ref().is_some_and(|v| v.is_empty()) {
        return usage("--vars", "empty variable list");
    }

    let mut entries: Vec<Entry> = args
        .functions
        .iter()
        .map(|f| Entry {
            expr: f.clone(),
            vars: None,
        })
        .collect();
    if let Some(path) = &args.corpus {
        match std::fs::read_to_string(path) {
            Ok(text) => entries.extend(parse_corpus(&text)),
            Err(e) => return usage("--corpus", format!("{}: {e}", path.display())),
        }
    }
    if entries.is_empty() {
        return usage("--function", "no input; pass --function or --corpus");
    }

    let opts = Options {
        probe_conjecture: args.probe_conjecture,
        timing: args.timing,
    };
    let results = analyze_batch(&entries, vars.as_deref(), &settings, opts);

    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut failed = false;
    let mut undecided = false;
    for (i, (entry, result)) in entries.iter().zip(results).enumerate() {
        match result {
            Ok(report) => {
                undecided |= report.outcome() == Outcome::Undecided;
                let text = match args.format {
                    Format::Json => report.to_json() + "\n",
                    Format::Text if i > 0 => format!("\n{}", report.to_text()),
                    Format::Text => report.to_text(),
                };
                if out.write_all(text.as_bytes()).is_err() {
                    return ExitCode::from(1);
                }
            }
            Err(e) => {
                failed = true;
                eprintln!("error: {}: {e}", entry.expr);
            }
        }
    }
    let _ = out.flush();
    if failed {
        ExitCode::from(1)
    } else if undecided {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Analyze(args) => run(args),
    }
}
