use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use formula_forge::{CanonicalForm, Metric, Notation};
use formula_forge_cli::{
    cmd_encode, cmd_eval, cmd_generate, cmd_rationals, cmd_sieve, cmd_stats, CliError, CliResult, RunReport,
};

#[derive(Parser)]
#[command(name = "formula-forge", version, about = "Encode naturals as formulas over 1, +, * and ^")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical encoding of N.
    Encode {
        n: String,
        #[arg(long, default_value = "fcf")]
        form: CanonicalForm,
        #[arg(long, default_value = "infix")]
        notation: Notation,
        /// Write x as (1+1).
        #[arg(long)]
        expand_x: bool,
    },
    /// Evaluate a formula given as an argument or on stdin.
    Eval {
        expr: Option<String>,
        #[arg(long, default_value = "infix")]
        notation: Notation,
        /// Largest intermediate value, in bits.
        #[arg(long, env = "FORMULA_FORGE_MAX_BITS", default_value_t = formula_forge::expr::DEFAULT_MAX_BITS)]
        max_bits: u64,
    },
    /// Write canonical encodings of 1..=MAX, one `value<TAB>formula` per line.
    Generate {
        #[arg(long)]
        form: CanonicalForm,
        #[arg(long)]
        max: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        expand_x: bool,
        /// Also write the run report as CSV.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Primes up to 2^BITS by the symbolic sieve.
    Sieve {
        #[arg(long)]
        bits: u32,
        /// Check the result against a sieve of Eratosthenes.
        #[arg(long)]
        compare: bool,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Compare FCF and SCF lengths over 1..=MAX and write a CSV.
    Stats {
        #[arg(long)]
        max: u64,
        #[arg(long, default_value = "leaves")]
        metric: Metric,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Positive rationals built from the state after K improved steps.
    Rationals {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        cap: u64,
    },
}

fn batch(
    mut report: RunReport,
    csv: Option<PathBuf>,
    run: impl FnOnce(&mut RunReport) -> CliResult<()>,
) -> CliResult<()> {
    let result = run(&mut report);
    report.finish(&result);
    eprint!("{}", report.summary());
    if let Some(path) = csv {
        report.write_csv(&path)?;
    }
    result
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Encode {
            n,
            form,
            notation,
            expand_x,
        } => println!("{}", cmd_encode(&n, form, notation, expand_x)?),
        Command::Eval {
            expr,
            notation,
            max_bits,
        } => {
            let text = match expr {
                Some(t) => t,
                None => {
                    let mut buf = String::new();
                    std::io::stdin()
                        .read_to_string(&mut buf)
                        .map_err(|e| CliError::Input(format!("reading stdin: {e}")))?;
                    buf
                }
            };
            println!("{}", cmd_eval(&text, notation, max_bits)?);
        }
        Command::Generate {
            form,
            max,
            out,
            expand_x,
            report,
        } => {
            let r = RunReport::new("generate")
                .param("form", format!("{form:?}").to_lowercase())
                .param("max", max);
            batch(r, report, |r| cmd_generate(form, max, &out, expand_x, r))?;
        }
        Command::Sieve { bits, compare, report } => {
            let r = RunReport::new("sieve").param("bits", bits);
            batch(r, report, |r| {
                let primes = cmd_sieve(bits, compare, r)?;
                let line: Vec<String> = primes.iter().map(u64::to_string).collect();
                println!("{}", line.join(" "));
                Ok(())
            })?;
        }
        Command::Stats {
            max,
            metric,
            csv,
            report,
        } => {
            let r = RunReport::new("stats").param("max", max).param("metric", metric.name());
            batch(r, report, |r| cmd_stats(max, metric, &csv, r).map(drop))?;
        }
        Command::Rationals { k, cap } => print!("{}", cmd_rationals(k, cap)?),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
