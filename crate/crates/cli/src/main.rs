use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use quasidom::oracle::{self, Mode, BRUTE_FORCE_MAX_CELLS, PROFILE_MAX_ROWS};
use quasidom::solver::{big_grid_value, DEFAULT_MAX_D, DEFAULT_MAX_N};
use quasidom::words::{enumerate_suitable, is_final, is_initial};
use quasidom::{Cost, Error, GridSet};

#[derive(Parser)]
#[command(
    name = "quasidom",
    version,
    about = "Minimum independent [1,2]-sets in grid graphs"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Global {
    /// Print a JSON envelope instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Render sets as '#'/'.' rows.
    #[arg(long, global = true)]
    ascii: bool,
    /// Reserved; every computation is deterministic.
    #[arg(long, global = true, value_name = "SEED")]
    seed: Option<u64>,
    /// Worker threads for the matrix-vector products (default: all cores).
    #[arg(long, global = true, value_name = "T")]
    threads: Option<usize>,
    /// Add wall-clock time to the output.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Optimum by regime: closed forms up to width 13, the pattern value beyond.
    Value { m: usize, n: usize },
    /// Optimum by running the column DP.
    Solve { m: usize, n: usize },
    /// Closed-form value.
    Formula { m: usize, n: usize },
    /// Period certificate (n0, d, c) of the DP for width m.
    Period {
        m: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_D)]
        max_d: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: usize,
    },
    /// Repaired diagonal pattern for 14 <= min(m, n).
    Pattern { m: usize, n: usize },
    /// A minimum set reconstructed from the DP.
    Extract { m: usize, n: usize },
    /// Check a set given as JSON or ASCII (stdin by default).
    Verify {
        #[arg(long, value_name = "PATH")]
        file: Option<String>,
    },
    /// Exhaustive or profile-DP ground truth.
    Oracle {
        m: usize,
        n: usize,
        #[arg(long, default_value = "i12")]
        mode: Mode,
    },
    /// Suitable words of length m.
    Words {
        m: usize,
        #[arg(long)]
        list: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Value { .. } => "value",
            Command::Solve { .. } => "solve",
            Command::Formula { .. } => "formula",
            Command::Period { .. } => "period",
            Command::Pattern { .. } => "pattern",
            Command::Extract { .. } => "extract",
            Command::Verify { .. } => "verify",
            Command::Oracle { .. } => "oracle",
            Command::Words { .. } => "words",
        }
    }

    fn inputs(&self) -> Value {
        match self {
            Command::Value { m, n }
            | Command::Solve { m, n }
            | Command::Formula { m, n }
            | Command::Pattern { m, n }
            | Command::Extract { m, n } => json!({ "m": m, "n": n }),
            Command::Period { m, max_d, max_n } => {
                json!({ "m": m, "max_d": max_d, "max_n": max_n })
            }
            Command::Verify { file } => json!({ "file": file }),
            Command::Oracle { m, n, mode } => json!({ "m": m, "n": n, "mode": mode }),
            Command::Words { m, list } => json!({ "m": m, "list": list }),
        }
    }
}

/// What a command produced: JSON fields, the plain-text rendering and
/// whether the outcome counts as a failure (exit 1).
struct Outcome {
    fields: Map<String, Value>,
    text: String,
    failed: bool,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome {
            fields: Map::new(),
            text: String::new(),
            failed: false,
        }
    }

    fn field(mut self, key: &str, v: impl Serialize) -> Outcome {
        self.fields.insert(
            key.to_string(),
            serde_json::to_value(v).expect("serialisable"),
        );
        self
    }

    fn line(mut self, s: impl AsRef<str>) -> Outcome {
        self.text.push_str(s.as_ref());
        if !self.text.ends_with('\n') {
            self.text.push('\n');
        }
        self
    }

    fn value(self, v: Cost) -> Outcome {
        let failed = !v.is_finite();
        let mut out = self.field("value", v).line(v.to_string());
        out.failed |= failed;
        out
    }

    fn set(self, set: &GridSet, g: Global) -> Outcome {
        let mut out = self.field("size", set.len()).field("set", set);
        if g.ascii {
            out = out.field("ascii", set.to_ascii()).line(set.to_ascii());
        } else {
            let members: Vec<String> = set.members().map(|(i, j)| format!("({i},{j})")).collect();
            out = out
                .line(format!("{}x{}: {} vertices", set.m(), set.n(), set.len()))
                .line(members.join(" "));
        }
        out
    }
}

fn normalise(m: usize, n: usize) -> (usize, usize, bool) {
    if m <= n {
        (m, n, false)
    } else {
        (n, m, true)
    }
}

fn orient(set: GridSet, swapped: bool) -> GridSet {
    if swapped {
        set.transpose()
    } else {
        set
    }
}

fn nonempty(m: usize, n: usize) -> Result<(), Error> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidDimensions {
            m,
            n,
            reason: "empty grid",
        });
    }
    Ok(())
}

fn run_oracle(m: usize, n: usize, mode: Mode) -> Result<oracle::OracleResult, Error> {
    nonempty(m, n)?;
    if m * n <= BRUTE_FORCE_MAX_CELLS {
        return oracle::brute_force_min(m, n, mode);
    }
    let (a, b, swapped) = normalise(m, n);
    if a > PROFILE_MAX_ROWS {
        return Err(Error::InstanceTooLarge {
            m,
            n,
            engine: "oracle",
        });
    }
    let mut r = oracle::profile_dp_min(a, b, mode)?;
    r.witness = r.witness.map(|w| orient(w, swapped));
    Ok(r)
}

fn read_set(file: Option<&str>) -> Result<GridSet, Error> {
    let text = match file {
        Some(path) => fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?,
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
            s
        }
    };
    if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        // Accept a whole envelope from extract or pattern as well.
        let v = match v {
            Value::Object(mut o) if o.contains_key("set") => o.remove("set").expect("checked"),
            other => other,
        };
        serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))
    } else {
        GridSet::from_ascii(&text)
    }
}

fn execute(cmd: &Command, g: Global) -> Result<Outcome, Error> {
    let out = Outcome::new();
    Ok(match *cmd {
        Command::Value { m, n } => out.value(quasidom::value(m, n)?),
        Command::Solve { m, n } => {
            nonempty(m, n)?;
            let (a, b, _) = normalise(m, n);
            let v = if a == 1 {
                oracle::profile_dp_min(1, b, Mode::I12)?.value
            } else {
                quasidom::solve_width(a, b)?
            };
            out.value(v)
        }
        Command::Formula { m, n } => {
            let (a, b, _) = normalise(m, n);
            let v = if a >= quasidom::solver::PATTERN_MIN_WIDTH {
                big_grid_value(a, b)?
            } else {
                quasidom::closed_form(a, b)?
            };
            out.value(v)
        }
        Command::Period { m, max_d, max_n } => {
            let cert = quasidom::detect_period(m, max_d, max_n)?;
            let boundary: Vec<String> = cert
                .boundary
                .iter()
                .map(|(r, v)| format!("f({r})={v}"))
                .collect();
            out.field("certificate", &cert)
                .line(format!("n0={} d={} c={}", cert.n0, cert.d, cert.c))
                .line(boundary.join(" "))
        }
        Command::Pattern { m, n } => {
            nonempty(m, n)?;
            let (a, b, swapped) = normalise(m, n);
            let c = quasidom::construct(a, b)?;
            let set = orient(c.set.clone(), swapped);
            let report = quasidom::verify_set(&set);
            let mut out = out
                .field("residue", c.residue)
                .field("repair", c.repair)
                .field("target", big_grid_value(a, b)?);
            // Keep --ascii output readable by verify.
            if !g.ascii {
                out = out.line(format!("residue {} repair {:?}", c.residue, c.repair));
            }
            let mut out = out.set(&set, g);
            out.failed = !report.is_valid();
            out
        }
        Command::Extract { m, n } => {
            nonempty(m, n)?;
            let (a, b, swapped) = normalise(m, n);
            let set = if a == 1 {
                oracle::profile_dp_min(1, b, Mode::I12)?
                    .witness
                    .ok_or(Error::Infeasible { m, n })?
            } else {
                quasidom::extract_min_set(a, b)?
            };
            out.set(&orient(set, swapped), g)
        }
        Command::Verify { ref file } => {
            let set = read_set(file.as_deref())?;
            let report = quasidom::verify_set(&set);
            let mut out = out
                .field("size", set.len())
                .field("valid", report.is_valid())
                .field("report", &report);
            if report.is_valid() {
                out = out.line(format!(
                    "valid: {}x{} with {} vertices",
                    set.m(),
                    set.n(),
                    set.len()
                ));
            } else {
                out = out.line(format!("invalid: {} violation(s)", report.violations.len()));
                for v in &report.violations {
                    out = out.line(format!(
                        "  ({},{}) {:?}: {}",
                        v.vertex.0, v.vertex.1, v.kind, v.detail
                    ));
                }
                out.failed = true;
            }
            out
        }
        Command::Oracle { m, n, mode } => {
            let r = run_oracle(m, n, mode)?;
            let mut out = out.value(r.value).field("mode", r.mode);
            if let Some(w) = &r.witness {
                out = out.set(w, g);
            }
            out
        }
        Command::Words { m, list } => {
            let table = enumerate_suitable(m)?;
            let initial = table.words().iter().filter(|w| is_initial(w)).count();
            let finals = table.words().iter().filter(|w| is_final(w)).count();
            let mut out = out
                .field("k", table.k())
                .field("initial", initial)
                .field("final", finals)
                .line(format!(
                    "k={} initial={} final={}",
                    table.k(),
                    initial,
                    finals
                ));
            if list {
                let words: Vec<String> = table.words().iter().map(|w| w.to_string()).collect();
                out = out.line(words.join("\n")).field("words", words);
            }
            out
        }
    })
}

fn error_kind(e: &Error) -> (&'static str, u8) {
    match e {
        Error::Infeasible { .. } => ("infeasible", 1),
        Error::InvalidSet(_) => ("invalid-set", 1),
        Error::NoPeriod { .. } => ("no-period", 1),
        Error::ConstructionFailed { .. } => ("construction-failed", 1),
        Error::Internal(_) => ("internal", 1),
        Error::MalformedWord { .. } => ("malformed-word", 2),
        Error::TooManyWords { .. } => ("too-many-words", 2),
        Error::InvalidDimensions { .. } => ("invalid-dimensions", 2),
        Error::BelowPeriodStart { .. } => ("below-period-start", 2),
        Error::InstanceTooLarge { .. } => ("instance-too-large", 2),
        Error::Parse(_) => ("parse", 2),
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = io::stdout().lock().write_all(text.as_bytes());
}

fn print_json(v: &Value) {
    emit(&format!(
        "{}\n",
        serde_json::to_string_pretty(v).expect("serialisable")
    ));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let wants_json = std::env::args().any(|a| a == "--json");
            if wants_json && e.use_stderr() {
                print_json(
                    &json!({ "error": { "kind": "usage", "message": e.to_string().trim() } }),
                );
                return ExitCode::from(2);
            }
            e.exit();
        }
    };
    let g = cli.global;
    if let Some(t) = g.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("warning: {e}");
        }
    }
    let start = Instant::now();
    let result = execute(&cli.command, g);
    let elapsed = start.elapsed().as_secs_f64();

    let mut envelope = Map::new();
    envelope.insert("command".into(), json!(cli.command.name()));
    envelope.insert("inputs".into(), cli.command.inputs());
    match result {
        Ok(out) => {
            let code = if out.failed { 1 } else { 0 };
            if g.json {
                envelope.extend(out.fields);
                if g.timing {
                    envelope.insert("timing".into(), json!({ "seconds": elapsed }));
                }
                print_json(&Value::Object(envelope));
            } else {
                emit(&out.text);
                if g.timing {
                    emit(&format!("time: {elapsed:.3}s\n"));
                }
            }
            ExitCode::from(code)
        }
        Err(e) => {
            let (kind, code) = error_kind(&e);
            if g.json {
                envelope.insert(
                    "error".into(),
                    json!({ "kind": kind, "message": e.to_string() }),
                );
                print_json(&Value::Object(envelope));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(code)
        }
    }
}
