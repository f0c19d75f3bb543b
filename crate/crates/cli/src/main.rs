//! `ffe`: classification runs and single-state queries for bipartite and
//! multipartite FFE states.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use ffe_core::appendix::{verify_appendix, AppendixFixture};
use ffe_core::classify::{
    canonical_representative, classify_lfp, classify_lu, haagerup_histogram, invariant_it, invariant_row_signature,
    lower_bound, membership_check, Scope,
};
use ffe_core::fp::dephase;
use ffe_core::spectral::{is_butson_hadamard, schmidt_rank, singular_values, trace_powers};
use ffe_core::stabilizer::{complete_set, internal_commutativity, unique_fixed_space_dim, CycleSpec};
use ffe_core::{is_polynomial, FfeError, FiniteFunction, Polynomial, SpecialState};

/// Writes a line to stdout, ignoring a closed pipe.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(
    name = "ffe",
    version,
    about = "Finite-function-encoding states: classification and invariants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partition bipartite states into LFP classes, optionally grouped into LU classes.
    Classify {
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum, default_value = "all")]
        scope: ScopeArg,
        /// Also group LFP classes into LU classes.
        #[arg(long)]
        lu: bool,
        /// Output file; `.csv` selects CSV unless --format is given.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Worker threads (FFE_THREADS overrides).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Print invariants of one function as JSON.
    Query {
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Comma-separated: it,rowsig,colsig,haagerup,schmidt,sv,hadamard,is-poly,trace-powers,dephased,canonical
        #[arg(long, default_value = "it,rowsig,colsig,haagerup,schmidt,sv,hadamard,is-poly")]
        ops: String,
    },
    /// Decide LFP or LU equivalence of two bipartite functions.
    Equiv {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long, value_enum, default_value = "lfp")]
        mode: Mode,
    },
    /// Print a complete stabilizer set and its properties.
    Stabilizers {
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// One d-cycle per site, e.g. "1,2,0;2,0,1". Defaults to k -> k+1 everywhere.
        #[arg(long)]
        cycles: Option<String>,
        #[arg(long)]
        check_unique: bool,
        #[arg(long)]
        check_internal: bool,
    },
    /// Lower bound on the number of LFP classes of n qudits.
    LowerBound {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: u32,
    },
    /// Recompute a classification and compare it with a golden class listing.
    VerifyAppendix {
        #[arg(long)]
        d: u32,
        /// Listing file; defaults to the built-in listing for d.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    All,
    Teh,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Lfp,
    Lu,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Budget(String),
    Conformance(String),
}

impl From<FfeError> for Failure {
    fn from(e: FfeError) -> Self {
        match e {
            FfeError::Budget { .. } => Failure::Budget(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Conformance(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Classify {
            d,
            scope,
            lu,
            out,
            format,
            threads,
        } => cmd_classify(d, scope, lu, out, format, threads),
        Command::Query { f, d, n, ops } => cmd_query(&f, d, n, &ops),
        Command::Equiv { f, g, d, mode } => cmd_equiv(&f, &g, d, mode),
        Command::Stabilizers {
            f,
            d,
            n,
            cycles,
            check_unique,
            check_internal,
        } => cmd_stabilizers(&f, d, n, cycles.as_deref(), check_unique, check_internal),
        Command::LowerBound { d, n } => {
            out!("{}", lower_bound(d, n)?);
            Ok(())
        }
        Command::VerifyAppendix { d, fixtures, threads } => cmd_verify(d, fixtures.as_deref(), threads),
    }
}

fn thread_count(flag: Option<usize>) -> Result<usize, Failure> {
    if let Ok(v) = std::env::var("FFE_THREADS") {
        return v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| Failure::Input(format!("FFE_THREADS must be a positive integer, got {v:?}")));
    }
    Ok(flag
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1))
}

/// Reads a function literal: JSON when it starts with `{`, `special:NAME[:k]`,
/// a path to a file holding either, or a polynomial over `Z_d`.
fn parse_function(text: &str, d: u32, n: usize) -> Result<FiniteFunction, Failure> {
    let t = text.trim();
    if t.starts_with('{') {
        return Ok(FiniteFunction::from_json(t)?);
    }
    if let Some(name) = t.strip_prefix("special:") {
        return Ok(name.parse::<SpecialState>()?.function(d)?);
    }
    let path = Path::new(t);
    if path.is_file() {
        let contents = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        return parse_function(&contents, d, n);
    }
    Ok(Polynomial::parse(t, d, n)?.to_function())
}

fn cmd_classify(
    d: u32,
    scope: ScopeArg,
    lu: bool,
    out: Option<PathBuf>,
    format: Option<Format>,
    threads: Option<usize>,
) -> Outcome {
    let threads = thread_count(threads)?;
    let scope = match scope {
        ScopeArg::All => Scope::All,
        ScopeArg::Teh => Scope::Teh,
    };
    eprintln!("classifying d={d} scope={scope} threads={threads}");
    let started = Instant::now();
    let mut cat = classify_lfp(d, scope, threads)?;
    eprintln!("lfp classes: {}", cat.lfp_class_count());
    if lu {
        cat = classify_lu(cat)?;
    }
    let elapsed = started.elapsed();
    if let Some(path) = out {
        let csv = match format {
            Some(f) => f == Format::Csv,
            None => path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")),
        };
        let body = if csv { cat.to_csv()? } else { cat.to_json() + "\n" };
        std::fs::write(&path, body).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        eprintln!("wrote {}", path.display());
    }
    let lu_count = if lu {
        cat.lu_class_count().to_string()
    } else {
        "-".into()
    };
    out!(
        "d={d} scope={scope} lfp_classes={} lu_classes={lu_count} elapsed={:.3}s",
        cat.lfp_class_count(),
        elapsed.as_secs_f64()
    );
    Ok(())
}

fn cmd_query(text: &str, d: u32, n: usize, ops: &str) -> Outcome {
    let f = parse_function(text, d, n)?;
    let mut out = Map::new();
    out.insert("function".into(), f.to_json_value());
    for op in ops.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let v = match op {
            "it" => json!(invariant_it(&f)),
            "rowsig" => json!(invariant_row_signature(&f, 0)?),
            "colsig" => json!(invariant_row_signature(&f, 1)?),
            "haagerup" => json!(haagerup_histogram(&f)?),
            "schmidt" => json!(schmidt_rank(&f)?),
            "sv" => json!(singular_values(&f)?),
            "hadamard" => json!(is_butson_hadamard(&f)?),
            "is-poly" => match is_polynomial(&f) {
                Some(p) => json!({ "polynomial": true, "normal_form": p.to_string() }),
                None => json!({ "polynomial": false }),
            },
            "trace-powers" => json!(trace_powers(&f)?.to_strings()),
            "dephased" => dephase(&f).representative.nested_values(),
            "canonical" => canonical_representative(&f)?.nested_values(),
            other => return Err(Failure::Input(format!("unknown query op {other:?}"))),
        };
        out.insert(op.to_string(), v);
    }
    out!("{}", Value::Object(out));
    Ok(())
}

fn cmd_equiv(a: &str, b: &str, d: u32, mode: Mode) -> Outcome {
    let f = parse_function(a, d, 2)?;
    let g = parse_function(b, d, 2)?;
    if f.d() != g.d() {
        return Err(FfeError::DimensionMismatch {
            expected: f.d(),
            found: g.d(),
        }
        .into());
    }
    match mode {
        Mode::Lfp => {
            let same = membership_check(&f, &g)?;
            let (cf, cg) = (canonical_representative(&f)?, canonical_representative(&g)?);
            out!("{}", if same { "equivalent" } else { "inequivalent" });
            out!("canonical f: {}", cf.nested_values());
            out!("canonical g: {}", cg.nested_values());
        }
        Mode::Lu => {
            let (sf, sg) = (trace_powers(&f)?, trace_powers(&g)?);
            out!("{}", if sf == sg { "equivalent" } else { "inequivalent" });
            out!("trace powers f: {}", sf.to_strings().join(", "));
            out!("trace powers g: {}", sg.to_strings().join(", "));
        }
    }
    Ok(())
}

fn cmd_stabilizers(text: &str, d: u32, n: usize, cycles: Option<&str>, unique: bool, internal: bool) -> Outcome {
    let f = parse_function(text, d, n)?;
    let spec = match cycles {
        Some(c) => CycleSpec::parse(c)?,
        None => CycleSpec::kappa_plus(f.d(), f.n()),
    };
    let set = complete_set(&f, &spec)?;
    let stabilizers: Vec<Value> = spec
        .cycles()
        .iter()
        .zip(&set.elements)
        .enumerate()
        .map(|(site, (cycle, el))| {
            json!({
                "site": site,
                "cycle": cycle.images(),
                "phase": el.phase_fn().nested_values(),
            })
        })
        .collect();
    let mut out = Map::new();
    out.insert("stabilizers".into(), Value::Array(stabilizers));
    if unique {
        out.insert("fixed_space_dim".into(), json!(unique_fixed_space_dim(&set)?));
    }
    if internal {
        out.insert("internal".into(), json!(internal_commutativity(&f, &spec)?));
    }
    out!("{}", Value::Object(out));
    Ok(())
}

fn cmd_verify(d: u32, fixtures: Option<&Path>, threads: Option<usize>) -> Outcome {
    let fixture = match fixtures {
        Some(p) if p.is_dir() => {
            let name = match d {
                3 => "appendix_d3_all.json",
                4 => "appendix_d4_teh.json",
                6 => "appendix_d6_teh.json",
                _ => return Err(Failure::Input(format!("no class listing for d={d}"))),
            };
            AppendixFixture::load(&p.join(name))?
        }
        Some(p) => AppendixFixture::load(p)?,
        None => AppendixFixture::builtin(d)?,
    };
    if fixture.d != d {
        return Err(FfeError::DimensionMismatch {
            expected: d,
            found: fixture.d,
        }
        .into());
    }
    let threads = thread_count(threads)?;
    eprintln!("classifying d={d} scope={} threads={threads}", fixture.scope);
    let cat = classify_lu(classify_lfp(d, fixture.scope, threads)?)?;
    let report = verify_appendix(&fixture, &cat)?;
    out!("{report}");
    if report.is_conformant() {
        Ok(())
    } else {
        Err(Failure::Conformance(format!(
            "listing for d={d} does not match the computed classification"
        )))
    }
}
