//! Command-line front end for `lzero-core`: one subcommand per check or
//! scan, each producing a canonical JSON report (or a CSV table of its
//! records).
//!
//! Exit codes: `0` all assertions passed, `1` a proven statement failed to
//! check (or, with `--strict`, a conjecture-level scan reported an
//! anomaly), `2` invalid input.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use lzero_core::bernoulli::{
    check_von_staudt_clausen, irregular_pairs, l_value_cached, minus_class_number_bernoulli_form,
    minus_class_number_cached, B1Cache,
};
use lzero_core::dirichlet::{enumerate_characters, ParityFilter};
use lzero_core::lab::{self, ScanOptions, VerdictRecord};
use lzero_core::padic::{TowerDescriptor, DEFAULT_PRECISION, PRECISION_CAP};
use lzero_core::{DirichletChar, Error};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Map, Value};

/// Environment variable consulted when `--cache-dir` is not given.
pub const ENV_CACHE_DIR: &str = "LZERO_CACHE_DIR";

pub const TOOL_NAME: &str = "lzero";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const AFTER_HELP: &str = "\
Reports are JSON by default; JSON is the source of truth. CSV output is a \
lossy projection of the JSON report: it keeps only the records table and \
drops the summary, parameters and tower descriptors.

Exit codes: 0 = all assertions passed; 1 = a theorem-level assertion failed \
(or a conjecture-level anomaly was found under --strict); 2 = invalid input.";

#[derive(Parser, Debug)]
#[command(name = TOOL_NAME, version, about = "Integrality of L(0, chi) for odd Dirichlet characters", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format. CSV is a lossy projection of the JSON report.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Directory holding the persistent B_{1,chi} cache (b1chi.jsonl).
    #[arg(long, global = true, env = ENV_CACHE_DIR)]
    cache_dir: Option<PathBuf>,

    /// Worker threads for scans; the output does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Starting p-adic precision (digits); doubled on demand up to 512.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: u32,

    /// Treat conjecture-level anomalies as failures (exit 1).
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrality verdicts for all primitive odd characters of conductor
    /// <= fmax at all odd primes <= pmax.
    Prop1 {
        #[arg(long)]
        fmax: u64,
        #[arg(long)]
        pmax: u64,
    },
    /// Exact L(0, chi) for one character (--chi) or all primitive
    /// nontrivial characters mod f; with -p, also the integrality verdict.
    Lvalue {
        #[arg(short = 'f', long = "modulus")]
        f: u64,
        /// Exponent vector on the canonical generators, e.g. "1,2".
        #[arg(long, value_parser = parse_exponents)]
        chi: Option<Exponents>,
        #[arg(short = 'p', long = "prime")]
        p: Option<u64>,
    },
    /// Minus class number of Q(zeta_p) from the product of odd L-values.
    Hminus {
        #[arg(short = 'p', long = "prime")]
        p: u64,
    },
    /// Irregular pairs (p, k) with p <= pmax, after validating Bernoulli
    /// denominators by von Staudt-Clausen.
    Irregular {
        #[arg(long, default_value_t = 150)]
        pmax: u64,
    },
    /// Kummer congruence B_{1,omega^n} = B_{n+1}/(n+1) mod p for one prime
    /// (-p) or all odd primes <= pmax.
    Kummer {
        #[arg(short = 'p', long = "prime", conflicts_with = "pmax")]
        p: Option<u64>,
        #[arg(long)]
        pmax: Option<u64>,
    },
    /// w * L(0, chi) is an algebraic integer, for one character (-f and
    /// --chi) or all primitive odd characters of conductor <= fmax.
    DeligneRibet {
        #[arg(long, conflicts_with = "f")]
        fmax: Option<u64>,
        #[arg(short = 'f', long = "modulus", requires = "chi")]
        f: Option<u64>,
        #[arg(long, value_parser = parse_exponents)]
        chi: Option<Exponents>,
    },
    /// Pole valuations of L(0, chi) for chi = omega^-1 mod p of conductor
    /// p^r, r <= rmax.
    Remark2 {
        #[arg(short = 'p', long = "prime")]
        p: u64,
        #[arg(long, default_value_t = 2)]
        rmax: u32,
    },
    /// Per-factor valuations of the odd L-values mod p, the unique pole
    /// and the class number product.
    Star {
        #[arg(short = 'p', long = "prime")]
        p: u64,
    },
    /// Reductions mod p of L-values of congruent characters of conductor
    /// <= fmax (report only; --strict fails on anomalies).
    Congruence {
        #[arg(long)]
        fmax: u64,
        #[arg(short = 'p', long = "prime")]
        p: u64,
    },
    /// omega^-1 mod p against its twist by a character of order p mod q.
    Corollary1 {
        #[arg(short = 'p', long = "prime")]
        p: u64,
        #[arg(short = 'q')]
        q: u64,
    },
}

/// Exponent vector of a character on the canonical generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
struct Exponents(Vec<u64>);

fn parse_exponents(s: &str) -> Result<Exponents, String> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    if t.trim().is_empty() {
        return Ok(Exponents(Vec::new()));
    }
    t.split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|e| format!("bad exponent {x:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(Exponents)
}

/// Output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// The report written to standard output. Summary fields are lifted to
/// the top level.
#[derive(Serialize)]
struct Report {
    #[serde(flatten)]
    summary: Map<String, Value>,
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    parameters: Value,
    towers: Vec<TowerDescriptor>,
    records: Vec<Value>,
    status: &'static str,
    exit_code: i32,
}

struct Outcome {
    command: &'static str,
    parameters: Value,
    towers: BTreeSet<TowerDescriptor>,
    records: Vec<Value>,
    summary: Map<String, Value>,
    /// A conjecture-level anomaly was found.
    finding: bool,
}

impl Outcome {
    fn new(command: &'static str, parameters: Value) -> Self {
        Outcome {
            command,
            parameters,
            towers: BTreeSet::new(),
            records: Vec::new(),
            summary: Map::new(),
            finding: false,
        }
    }

    fn records<T: Serialize>(mut self, rows: &[T]) -> Self {
        self.records = rows.iter().map(to_value).collect();
        self
    }

    fn verdict_towers(mut self, rows: &[VerdictRecord]) -> Self {
        self.towers.extend(rows.iter().map(|r| r.tower.clone()));
        self
    }

    fn set(mut self, key: &str, value: impl Serialize) -> Self {
        self.summary.insert(key.to_string(), to_value(&value));
        self
    }
}

fn to_value<T: Serialize + ?Sized>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

/// Exit code for a library error: invalid input is 2, everything else
/// (failed proven statements, precision exhaustion) is 1.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_)
        | Error::NotPrimePower { .. }
        | Error::ImprimitiveInput { .. }
        | Error::NoOrderPCharacter { .. }
        | Error::IncompatibleOrders { .. }
        | Error::Cache(_) => 2,
        _ => 1,
    }
}

/// Parse `argv` (including the program name) and run the subcommand.
pub fn run_cli<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    CliOutput { code: 0, stdout: text, stderr: String::new() }
                }
                _ => CliOutput { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    if cli.jobs == 0 {
        return usage_error("--jobs must be at least 1");
    }
    if cli.precision == 0 || cli.precision > PRECISION_CAP {
        return usage_error(&format!("--precision must be in 1..={PRECISION_CAP}"));
    }
    let cache = match &cli.cache_dir {
        Some(dir) => match B1Cache::open(dir) {
            Ok(c) => Some(c),
            Err(e) => return failure(&e),
        },
        None => None,
    };
    let opts = ScanOptions { precision: cli.precision, jobs: cli.jobs, cache: cache.as_ref() };
    match execute(&cli.command, &opts) {
        Ok(outcome) => render(outcome, cli.format, cli.strict),
        Err(e) => failure(&e),
    }
}

fn usage_error(msg: &str) -> CliOutput {
    CliOutput { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n\nFor more information, try '--help'.\n") }
}

fn failure(err: &Error) -> CliOutput {
    let code = exit_code_for(err);
    let kind = if code == 2 { "invalid input" } else { "assertion failed" };
    CliOutput { code, stdout: String::new(), stderr: format!("{kind}: {err}\n") }
}

fn render(outcome: Outcome, format: Format, strict: bool) -> CliOutput {
    let (code, status) = if strict && outcome.finding { (1, "finding") } else { (0, "ok") };
    let stderr = if code == 1 {
        format!("conjecture-level anomaly reported by {} (--strict)\n", outcome.command)
    } else {
        String::new()
    };
    let stdout = match format {
        Format::Json => {
            let report = Report {
                summary: outcome.summary,
                tool: TOOL_NAME,
                version: VERSION,
                command: outcome.command,
                parameters: outcome.parameters,
                towers: outcome.towers.into_iter().collect(),
                records: outcome.records,
                status,
                exit_code: code,
            };
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => records_to_csv(&outcome.records),
    };
    CliOutput { code, stdout, stderr }
}

/// One row per record; nested values are written as compact JSON.
fn records_to_csv(records: &[Value]) -> String {
    let mut columns: Vec<String> = Vec::new();
    for r in records {
        if let Value::Object(m) = r {
            for k in m.keys() {
                if !columns.contains(k) {
                    columns.push(k.clone());
                }
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    if !columns.is_empty() {
        w.write_record(&columns).expect("in-memory write");
    }
    for r in records {
        let row: Vec<String> = columns
            .iter()
            .map(|c| match r.get(c) {
                None | Some(Value::Null) => String::new(),
                Some(Value::String(s)) => s.clone(),
                Some(v) => v.to_string(),
            })
            .collect();
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn character(f: u64, chi: &Exponents) -> lzero_core::Result<DirichletChar> {
    DirichletChar::new(f, chi.0.clone())
}

fn execute(command: &Command, opts: &ScanOptions) -> lzero_core::Result<Outcome> {
    let precision = opts.precision;
    match command {
        Command::Prop1 { fmax, pmax } => {
            let rep = lab::prop1_scan(*fmax, *pmax, opts)?;
            let s = &rep.summary;
            Ok(Outcome::new("prop1", json!({"fmax": fmax, "pmax": pmax, "precision": precision}))
                .records(&rep.records)
                .verdict_towers(&rep.records)
                .set("characters", s.characters)
                .set("primes", &s.primes)
                .set("record_count", s.records)
                .set("non_integral", s.non_integral)
                .set("loci", &s.loci)
                .set("level_counts", &s.level_counts)
                .set("vanishing_probed", s.vanishing_probed)
                .set("vanishing_zero", s.vanishing_zero))
        }
        Command::Lvalue { f, chi, p } => {
            let chars = match chi {
                Some(e) => vec![character(*f, e)?],
                None => enumerate_characters(*f, true, ParityFilter::All)
                    .into_iter()
                    .filter(|c| !c.is_trivial())
                    .collect(),
            };
            let mut rows = Vec::new();
            let mut verdicts = Vec::new();
            for c in &chars {
                let rec = l_value_cached(c, opts.cache)?;
                let mut row = json!({
                    "character": c.key(),
                    "order": c.value_order(),
                    "parity": c.parity(),
                    "b1": rec.b1chi.to_coord_strings(),
                    "l0": rec.l0.to_coord_strings(),
                    "l0_text": rec.l0.to_string(),
                    "algebraic_integer": rec.l0.is_algebraic_integer(),
                });
                if let Some(p) = p {
                    if c.is_odd() {
                        let v = lab::integrality_verdict(c, *p, opts)?;
                        row["valuation"] = to_value(&v.valuation);
                        row["omega_inverse"] = json!(v.omega_inverse);
                        verdicts.push(v);
                    }
                }
                rows.push(row);
            }
            let count = rows.len();
            let mut out = Outcome::new("lvalue", json!({"f": f, "chi": chi, "p": p, "precision": precision}))
                .verdict_towers(&verdicts)
                .set("f", f)
                .set("characters", count);
            out.records = rows;
            Ok(out)
        }
        Command::Hminus { p } => {
            let h = minus_class_number_cached(*p, opts.cache)?;
            let h_b = minus_class_number_bernoulli_form(*p)?;
            if h != h_b {
                return Err(Error::NonIntegralResult(format!("h-({p}): product {h} != Bernoulli form {h_b}")));
            }
            let rows: Vec<Value> = enumerate_characters(*p, true, ParityFilter::Odd)
                .iter()
                .map(|c| {
                    let rec = l_value_cached(c, opts.cache)?;
                    Ok(json!({"character": c.key(), "order": c.value_order(), "l0": rec.l0.to_coord_strings()}))
                })
                .collect::<lzero_core::Result<_>>()?;
            let mut out = Outcome::new("hminus", json!({"p": p}))
                .set("p", p)
                .set("h_minus", big_to_value(&h))
                .set("factors", rows.len());
            out.records = rows;
            Ok(out)
        }
        Command::Irregular { pmax } => {
            if *pmax < 3 {
                return Err(Error::InvalidArgument(format!("pmax must be at least 3 (got {pmax})")));
            }
            let n_max = (*pmax as usize).saturating_sub(3).max(2);
            if let Err(n) = check_von_staudt_clausen(n_max) {
                return Err(Error::NonIntegralResult(format!("B_{n} denominator fails von Staudt-Clausen")));
            }
            let pairs = irregular_pairs(*pmax);
            let rows: Vec<Value> = pairs.iter().map(|(p, k)| json!({"p": p, "k": k})).collect();
            let primes: BTreeSet<u64> = pairs.iter().map(|&(p, _)| p).collect();
            let mut out = Outcome::new("irregular", json!({"pmax": pmax}))
                .set("pmax", pmax)
                .set("pairs", pairs.len())
                .set("irregular_primes", &primes)
                .set("von_staudt_clausen_checked_to", n_max);
            out.records = rows;
            Ok(out)
        }
        Command::Kummer { p, pmax } => {
            let primes = match (p, pmax) {
                (Some(p), None) => vec![*p],
                (None, Some(m)) => lzero_core::arith::nt::odd_primes_up_to(*m),
                _ => return Err(Error::InvalidArgument("give exactly one of -p and --pmax".into())),
            };
            let mut rows = Vec::new();
            for q in &primes {
                rows.extend(lab::kummer_check(*q)?);
            }
            Ok(Outcome::new("kummer", json!({"p": p, "pmax": pmax}))
                .records(&rows)
                .set("primes", &primes)
                .set("checked", rows.len())
                .set("violations", rows.iter().filter(|r| !r.equal).count()))
        }
        Command::DeligneRibet { fmax, f, chi } => {
            let rows = match (fmax, f, chi) {
                (Some(m), None, None) => lab::deligne_ribet_scan(*m, opts)?,
                (None, Some(f), Some(e)) => vec![lab::deligne_ribet_check(&character(*f, e)?, opts.cache)?],
                _ => return Err(Error::InvalidArgument("give either --fmax or both -f and --chi".into())),
            };
            Ok(Outcome::new("deligne-ribet", json!({"fmax": fmax, "f": f, "chi": chi}))
                .records(&rows)
                .set("checked", rows.len())
                .set("violations", rows.iter().filter(|r| !r.integral).count()))
        }
        Command::Remark2 { p, rmax } => {
            let rows = lab::remark2_check(*p, *rmax, opts)?;
            let mut out = Outcome::new("remark2", json!({"p": p, "rmax": rmax, "precision": precision}))
                .records(&rows)
                .set("p", p)
                .set("checked", rows.len())
                .set("mismatches", rows.iter().filter(|r| !r.equal).count());
            out.towers.extend(rows.iter().map(|r| r.tower.clone()));
            Ok(out)
        }
        Command::Star { p } => {
            let rep = lab::equation_star_check(*p, opts)?;
            Ok(Outcome::new("star", json!({"p": p, "precision": precision}))
                .records(&rep.factors)
                .verdict_towers(&rep.factors)
                .set("p", p)
                .set("h_minus", big_to_value(&rep.h_minus))
                .set("product_identity", rep.product_identity)
                .set("unique_pole", rep.unique_pole))
        }
        Command::Congruence { fmax, p } => {
            let rep = lab::congruence_scan(*fmax, *p, opts)?;
            let excluded: Vec<_> = rep.classes.iter().filter(|c| c.excluded).map(|c| &c.class).collect();
            let mut out = Outcome::new("congruence", json!({"fmax": fmax, "p": p, "precision": precision}))
                .records(&rep.rows)
                .set("p", p)
                .set("fmax", fmax)
                .set("classes", &rep.classes)
                .set("excluded_classes", &excluded)
                .set("pairs", rep.rows.len())
                .set("primitive_differences", rep.primitive_differences)
                .set("non_integral_members", &rep.non_integral)
                .set("anomalies", rep.anomalies);
            out.towers.extend(rep.classes.iter().filter_map(|c| c.tower.clone()));
            out.finding = rep.anomalies > 0;
            Ok(out)
        }
        Command::Corollary1 { p, q } => {
            let w = lab::corollary1_witness(*p, *q, opts)?;
            let rows = [w.omega_inverse.clone(), w.twisted.clone()];
            Ok(Outcome::new("corollary1", json!({"p": p, "q": q, "precision": precision}))
                .records(&rows)
                .verdict_towers(&rows)
                .set("p", p)
                .set("q", q)
                .set("chi2", &w.chi2)
                .set("verified", w.verified))
        }
    }
}

fn big_to_value(n: &BigInt) -> Value {
    match n.to_u64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}
