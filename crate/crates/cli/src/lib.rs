//! Commands behind the `formula-forge` binary.
//!
//! Each command is a plain function so it can be driven from tests as well as
//! from the argument parser in `main.rs`. Batch commands fill a [`RunReport`]
//! as they go, so a report exists even when the command aborts.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use formula_forge::arith::eratosthenes;
use formula_forge::canonical::{is_fcf, is_scf};
use formula_forge::meter::{IterationStats, Tally};
use formula_forge::notation::parse;
use formula_forge::size::size;
use formula_forge::{fcf_gen, zeta, CanonicalForm, Error, ExprSet, Metric, Natural, Notation};

/// Default cap on records written by `generate` and `stats`.
pub const DEFAULT_RECORD_CAP: u64 = 1 << 24;

/// Largest `k` accepted by `rationals`.
pub const MAX_RATIONAL_K: usize = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),

    #[error("{0}")]
    Input(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("oracle mismatch: {0}")]
    Oracle(String),
}

impl CliError {
    /// 2 input error, 3 resource limit, 4 soundness or oracle failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::ResourceLimit(_)) => 3,
            CliError::Core(Error::Soundness(_) | Error::Completeness(_)) | CliError::Oracle(_) => 4,
            CliError::Core(_) | CliError::Input(_) | CliError::Io { .. } => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Running,
    Ok,
    Failed { exit_code: i32, message: String },
}

/// Measurements for one batch command.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub command: String,
    pub parameters: Vec<(String, String)>,
    pub iterations: usize,
    /// Per-iteration counters, each tagged with the recurrence that produced it.
    pub per_iteration: Vec<(String, IterationStats)>,
    pub wall_time: Duration,
    pub output: Option<PathBuf>,
    pub status: Status,
    pub notes: Vec<String>,
    started: Instant,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            parameters: Vec::new(),
            iterations: 0,
            per_iteration: Vec::new(),
            wall_time: Duration::ZERO,
            output: None,
            status: Status::Running,
            notes: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.push((key.to_string(), value.to_string()));
        self
    }

    pub fn tally(&self) -> Tally {
        self.per_iteration.iter().fold(Tally::default(), |acc, (_, s)| acc + s.tally)
    }

    pub fn manipulations(&self) -> u64 {
        self.tally().manipulations()
    }

    /// Records the outcome of a command and stops the clock.
    pub fn finish<T>(&mut self, result: &CliResult<T>) {
        self.wall_time = self.started.elapsed();
        self.status = match result {
            Ok(_) => Status::Ok,
            Err(e) => Status::Failed {
                exit_code: e.exit_code(),
                message: e.to_string(),
            },
        };
    }

    fn status_label(&self) -> &'static str {
        match self.status {
            Status::Running => "running",
            Status::Ok => "ok",
            Status::Failed { .. } => "failed",
        }
    }

    /// One human-readable line per field.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        for (k, v) in &self.parameters {
            let _ = writeln!(s, "param {k}: {v}");
        }
        let _ = writeln!(s, "status: {}", self.status_label());
        if let Status::Failed { exit_code, message } = &self.status {
            let _ = writeln!(s, "error (exit {exit_code}): {message}");
        }
        let _ = writeln!(s, "iterations: {}", self.iterations);
        let _ = writeln!(s, "manipulations: {}", self.manipulations());
        for (phase, it) in &self.per_iteration {
            let _ = writeln!(
                s,
                "  {phase} iteration {}: coverage {} produced {} manipulations {}",
                it.iteration,
                it.coverage,
                it.produced,
                it.tally.manipulations()
            );
        }
        let _ = writeln!(s, "wall time: {:.3} ms", self.wall_time.as_secs_f64() * 1e3);
        if let Some(p) = &self.output {
            let _ = writeln!(s, "output: {}", p.display());
        }
        for n in &self.notes {
            let _ = writeln!(s, "{n}");
        }
        s
    }

    /// Per-iteration counters as CSV. Wall time is left out so the file is
    /// identical across runs with the same inputs.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("command,status,phase,iteration,coverage,produced,insertions,assemblies,manipulations\n");
        for (phase, it) in &self.per_iteration {
            let _ = writeln!(
                s,
                "{},{},{phase},{},{},{},{},{},{}",
                self.command,
                self.status_label(),
                it.iteration,
                it.coverage,
                it.produced,
                it.tally.insertions,
                it.tally.assemblies,
                it.tally.manipulations()
            );
        }
        let t = self.tally();
        let _ = writeln!(
            s,
            "{},{},all,total,,,{},{},{}",
            self.command,
            self.status_label(),
            t.insertions,
            t.assemblies,
            t.manipulations()
        );
        s
    }

    pub fn write_csv(&self, path: &Path) -> CliResult<()> {
        write_atomically(path, self.to_csv().as_bytes())
    }
}

/// Writes via a temporary file in the target directory, renamed into place
/// only once complete.
pub fn write_atomically(path: &Path, contents: &[u8]) -> CliResult<()> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn parse_natural(text: &str) -> CliResult<Natural> {
    text.trim()
        .parse::<Natural>()
        .map_err(|_| CliError::Input(format!("`{text}` is not a nonnegative decimal integer")))
}

pub fn cmd_encode(n: &str, form: CanonicalForm, notation: Notation, expand_x: bool) -> CliResult<String> {
    let n = parse_natural(n)?;
    Ok(form.encode(&n)?.render(notation, expand_x))
}

pub fn cmd_eval(text: &str, notation: Notation, max_bits: u64) -> CliResult<String> {
    let e = parse(text, notation)?;
    Ok(e.evaluate_capped(max_bits)?.to_string())
}

/// Canonical encodings of `1..=max_n` from the batch generator for `form`.
pub fn batch_encodings(form: CanonicalForm, max_n: u64, report: &mut RunReport) -> CliResult<ExprSet> {
    if max_n == 0 {
        return Err(CliError::Input("--max must be at least 1".into()));
    }
    if max_n > DEFAULT_RECORD_CAP {
        return Err(Error::ResourceLimit(format!("--max {max_n} exceeds the cap of {DEFAULT_RECORD_CAP}")).into());
    }
    match form {
        CanonicalForm::Fcf => {
            let g = fcf_gen::fcf_generate(max_n)?;
            report.iterations += g.iterations;
            report.per_iteration.extend(g.per_iteration.into_iter().map(|s| ("fcf".to_string(), s)));
            Ok(g.expressions)
        }
        CanonicalForm::Scf => {
            // after j improved iterations the naturals cover 1..=2^(j+1)
            let mut iterations = 0;
            while (2u64 << iterations) < max_n {
                iterations += 1;
            }
            let (state, stats) = zeta::improved_iterations(iterations)?;
            report.iterations += iterations;
            report.per_iteration.extend(stats.into_iter().map(|s| ("scf".to_string(), s)));
            let mut set = state.naturals().clone();
            set.truncate_to_value(max_n);
            Ok(set)
        }
    }
}

pub fn cmd_generate(
    form: CanonicalForm,
    max_n: u64,
    out: &Path,
    expand_x: bool,
    report: &mut RunReport,
) -> CliResult<()> {
    let set = batch_encodings(form, max_n, report)?;
    let mut text = String::new();
    for entry in &set {
        let _ = writeln!(text, "{}\t{}", entry.value, entry.expr.render(Notation::Infix, expand_x));
    }
    write_atomically(out, text.as_bytes())?;
    report.output = Some(out.to_path_buf());
    Ok(())
}

/// Re-reads a `generate` output file, checking every line evaluates to its
/// value and passes the checker for `form`. Returns the number of records.
pub fn verify_generated(path: &Path, form: CanonicalForm) -> CliResult<usize> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut count = 0;
    for (lineno, line) in text.lines().enumerate() {
        let (value, expr) = line
            .split_once('\t')
            .ok_or_else(|| CliError::Input(format!("line {}: missing tab", lineno + 1)))?;
        let value = parse_natural(value)?;
        let e = parse(expr, Notation::Infix)?;
        if e.evaluate()? != value {
            return Err(CliError::Oracle(format!("line {}: {expr} does not evaluate to {value}", lineno + 1)));
        }
        let canonical = match form {
            CanonicalForm::Fcf => is_fcf(&e),
            CanonicalForm::Scf => is_scf(&e)?,
        };
        if !canonical {
            return Err(CliError::Oracle(format!("line {}: {expr} is not in {form:?}", lineno + 1)));
        }
        count += 1;
    }
    Ok(count)
}

pub fn cmd_sieve(bits: u32, compare: bool, report: &mut RunReport) -> CliResult<Vec<u64>> {
    let sieve = zeta::sift_primes(bits)?;
    report.iterations = sieve.per_iteration.len();
    report.per_iteration = sieve.per_iteration.into_iter().map(|s| ("sieve".to_string(), s)).collect();
    if compare {
        let oracle = eratosthenes(1u64 << bits);
        if oracle != sieve.primes {
            let first = sieve
                .primes
                .iter()
                .zip(&oracle)
                .find(|(a, b)| a != b)
                .map(|(a, b)| format!("sifted {a}, sieve {b}"))
                .unwrap_or_else(|| format!("{} sifted vs {} sieved", sieve.primes.len(), oracle.len()));
            return Err(CliError::Oracle(first));
        }
        report
            .notes
            .push(format!("oracle: match ({} primes up to 2^{bits})", oracle.len()));
    }
    Ok(sieve.primes)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatsSummary {
    pub metric: Metric,
    pub rows: Vec<(u64, u64, u64)>,
    pub fcf_mean: f64,
    pub scf_mean: f64,
}

impl StatsSummary {
    /// The form with the smaller mean length, or `None` on a tie.
    pub fn smaller(&self) -> Option<CanonicalForm> {
        if self.scf_mean < self.fcf_mean {
            Some(CanonicalForm::Scf)
        } else if self.fcf_mean < self.scf_mean {
            Some(CanonicalForm::Fcf)
        } else {
            None
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,fcf_len,scf_len\n");
        for (n, f, c) in &self.rows {
            let _ = writeln!(s, "{n},{f},{c}");
        }
        let _ = writeln!(s, "mean,{:.6},{:.6}", self.fcf_mean, self.scf_mean);
        s
    }
}

pub fn cmd_stats(max_n: u64, metric: Metric, out: &Path, report: &mut RunReport) -> CliResult<StatsSummary> {
    let fcf = batch_encodings(CanonicalForm::Fcf, max_n, report)?;
    let scf = batch_encodings(CanonicalForm::Scf, max_n, report)?;
    let rows: Vec<(u64, u64, u64)> = fcf
        .iter()
        .zip(scf.iter())
        .map(|(f, s)| {
            debug_assert_eq!(f.value, s.value);
            (f.value, size(&f.expr, metric), size(&s.expr, metric))
        })
        .collect();
    let mean = |pick: fn(&(u64, u64, u64)) -> u64| rows.iter().map(pick).sum::<u64>() as f64 / rows.len() as f64;
    let summary = StatsSummary {
        metric,
        fcf_mean: mean(|r| r.1),
        scf_mean: mean(|r| r.2),
        rows,
    };
    write_atomically(out, summary.to_csv().as_bytes())?;
    report.output = Some(out.to_path_buf());
    report.notes.push(format!(
        "mean {} over 1..{max_n}: fcf {:.6}, scf {:.6}; smaller: {}",
        metric.name(),
        summary.fcf_mean,
        summary.scf_mean,
        match summary.smaller() {
            Some(CanonicalForm::Scf) => "scf",
            Some(CanonicalForm::Fcf) => "fcf",
            None => "tie",
        }
    ));
    Ok(summary)
}

pub fn cmd_rationals(k: usize, cap: u64) -> CliResult<String> {
    if k > MAX_RATIONAL_K {
        return Err(Error::ResourceLimit(format!("k {k} exceeds the explosion guard of {MAX_RATIONAL_K}")).into());
    }
    let (state, _) = zeta::improved_iterations(k)?;
    let mut out = String::new();
    for q in zeta::rationals(&state, cap)? {
        let _ = writeln!(
            out,
            "{}/{}\t{}\t{}",
            q.numerator_value, q.denominator_value, q.numerator, q.denominator
        );
    }
    Ok(out)
}
