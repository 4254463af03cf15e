//! `etazeta`: poly-Bernoulli numbers, eta values as MZV combinations, relation
//! matrices and numeric MZVs from the command line.

mod cache;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use etazeta::etareduce::{
    assemble_relation_matrix, duality_list, reduce_eta_with, Branch, EtaError, EtaSpec, MAX_DEPTH,
};
use etazeta::hyperlog::{HyperlogError, Reducer};
use etazeta::mzv::{MzvError, MzvIndex};
use etazeta::mzv_numeric::{mzv_eval, mzv_expr_eval, NumericConfig, NumericError};
use etazeta::polybernoulli::{
    bnum, cnum, duality_scan, eta_nonpositive, star_num, BernoulliError, BernoulliSpec, Permutation,
};

use cache::{write_atomic, Cache};

const MAX_SCAN_DEPTH: usize = 3;
const MAX_SCAN_ENTRY: u32 = 4;

#[derive(Debug, Error)]
enum CliError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid spec: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

impl From<BernoulliError> for CliError {
    fn from(e: BernoulliError) -> Self {
        match e {
            BernoulliError::DivergentSubstitution(_) => CliError::Numeric(e.to_string()),
            BernoulliError::InvalidSpec(m) => CliError::Invalid(m),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<HyperlogError> for CliError {
    fn from(e: HyperlogError) -> Self {
        match e {
            HyperlogError::Parse(_) => CliError::Invalid(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<EtaError> for CliError {
    fn from(e: EtaError) -> Self {
        match e {
            EtaError::Unsupported(m) => CliError::Unsupported(m),
            EtaError::InvalidSpec(m) => CliError::Invalid(m),
            EtaError::Hyperlog(h) => h.into(),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<NumericError> for CliError {
    fn from(e: NumericError) -> Self {
        match e {
            NumericError::NotConverged { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<MzvError> for CliError {
    fn from(e: MzvError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}

/// Comma-separated list of integers, e.g. `1,-2,3`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct IntList(Vec<i64>);

impl FromStr for IntList {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| format!("{t:?} is not an integer")))
            .collect::<Result<_, _>>()
            .map(IntList)
    }
}

impl fmt::Display for IntList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl IntList {
    fn naturals(&self, what: &str) -> Result<Vec<u32>, CliError> {
        self.0
            .iter()
            .map(|&v| u32::try_from(v).map_err(|_| CliError::Invalid(format!("{what} entries must be non-negative, got {self}"))))
            .collect()
    }
}

fn permutation(text: Option<&str>, r: usize) -> Result<Permutation, CliError> {
    Ok(Permutation::parse(text.unwrap_or("id"), r)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BernType {
    B,
    C,
    Star,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BranchArg {
    Star,
    Starstar,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Star => Branch::Star,
            BranchArg::Starstar => Branch::StarStar,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "etazeta", version, about = "Poly-Bernoulli numbers, eta values and MZV relations")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Neither read nor write the results cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact poly-Bernoulli numbers of B, C or star type.
    Bern(BernArgs),
    /// Exhaustive check of the duality B_n^(-k)(sigma;a;b) = B_k^(-n)(sigma^-1;b;a).
    DualityScan(ScanArgs),
    /// An eta value at positive integers as a combination of MZVs.
    Reduce(ReduceArgs),
    /// Relation matrix from the built-in duality list of a weight.
    Relations(RelationsArgs),
    /// Numeric multiple zeta value.
    Mzv(MzvArgs),
}

#[derive(Debug, Args)]
struct BernArgs {
    #[arg(long = "type", value_enum, default_value = "b")]
    kind: BernType,
    /// Upper indices, e.g. `-1,-2`.
    #[arg(long, allow_hyphen_values = true)]
    k: IntList,
    /// Coefficient exponents.
    #[arg(long)]
    m: IntList,
    /// One-line images or `id`.
    #[arg(long)]
    sigma: Option<String>,
    #[arg(long)]
    a: Option<IntList>,
    #[arg(long)]
    b: Option<IntList>,
    /// Number of leading exponential factors for the C type.
    #[arg(long)]
    d: Option<usize>,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long)]
    r: usize,
    #[arg(long)]
    max: u32,
}

#[derive(Debug, Args)]
struct ReduceArgs {
    /// Shorthand branch; takes its single offset vector from `--a` or `--b`.
    /// Without it both `--a` and `--b` are required.
    #[arg(long, value_enum)]
    branch: Option<BranchArg>,
    #[arg(long, allow_hyphen_values = true)]
    u: IntList,
    #[arg(long, allow_hyphen_values = true)]
    s: IntList,
    #[arg(long)]
    sigma: Option<String>,
    #[arg(long)]
    a: Option<IntList>,
    #[arg(long)]
    b: Option<IntList>,
}

#[derive(Debug, Args)]
struct RelationsArgs {
    #[arg(long)]
    weight: u32,
    /// Directory for `relations_w<weight>.json` and `.csv`.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct MzvArgs {
    #[arg(long)]
    index: IntList,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

/// A command resolved to its canonical spec, ready to run or be looked up.
struct Job {
    name: &'static str,
    spec: Value,
    run: Box<dyn FnOnce() -> Result<Value, CliError>>,
}

fn bern_job(args: BernArgs) -> Result<Job, CliError> {
    let k = args.k.0;
    let m = args.m.naturals("m")?;
    let r = k.len();
    if m.len() != r {
        return Err(CliError::Invalid(format!("--k has {r} entries but --m has {}", m.len())));
    }
    match args.kind {
        BernType::B => {
            let ones = || IntList(vec![1; r]);
            let a = args.a.unwrap_or_else(ones).naturals("a")?;
            let b = args.b.unwrap_or_else(ones).naturals("b")?;
            let spec = BernoulliSpec::new(k, permutation(args.sigma.as_deref(), r)?, a, b)?;
            let canon = json!({"type": "b", "k": spec.k, "m": m, "sigma": spec.sigma, "a": spec.a, "b": spec.b});
            Ok(Job { name: "bern", spec: canon, run: Box::new(move || Ok(json!({"value": bnum(&spec, &m)?.to_string()}))) })
        }
        BernType::C => {
            let d = args.d.ok_or_else(|| CliError::Invalid("--type c needs --d".into()))?;
            let canon = json!({"type": "c", "k": k, "m": m, "d": d});
            Ok(Job { name: "bern", spec: canon, run: Box::new(move || Ok(json!({"value": cnum(&k, d, &m)?.to_string()}))) })
        }
        BernType::Star => {
            let canon = json!({"type": "star", "k": k, "m": m});
            Ok(Job { name: "bern", spec: canon, run: Box::new(move || Ok(json!({"value": star_num(&k, &m)?.to_string()}))) })
        }
    }
}

fn scan_job(args: ScanArgs) -> Result<Job, CliError> {
    let ScanArgs { r, max } = args;
    if r == 0 {
        return Err(CliError::Invalid("--r must be at least 1".into()));
    }
    if r > MAX_SCAN_DEPTH || max > MAX_SCAN_ENTRY {
        return Err(CliError::Unsupported(format!(
            "scan limited to r <= {MAX_SCAN_DEPTH} and max <= {MAX_SCAN_ENTRY}, got r = {r}, max = {max}"
        )));
    }
    Ok(Job {
        name: "duality-scan",
        spec: json!({"r": r, "max": max}),
        run: Box::new(move || Ok(serde_json::to_value(duality_scan(r, max)?)?)),
    })
}

fn eta_spec(args: ReduceArgs) -> Result<EtaSpec, CliError> {
    let r = args.u.0.len();
    let sigma = permutation(args.sigma.as_deref(), r)?;
    let (u, s) = (args.u.0, args.s.0);
    match (args.branch, args.a, args.b) {
        (Some(branch), Some(c), None) | (Some(branch), None, Some(c)) => {
            Ok(EtaSpec::from_branch(branch.into(), u, s, sigma, c.naturals("offset")?)?)
        }
        (Some(_), _, _) => Err(CliError::Invalid("--branch takes exactly one of --a or --b".into())),
        (None, Some(a), Some(b)) => Ok(EtaSpec::new(u, s, sigma, a.naturals("a")?, b.naturals("b")?)?),
        (None, _, _) => Err(CliError::Invalid("without --branch both --a and --b are required".into())),
    }
}

fn reduce_job(args: ReduceArgs) -> Result<Job, CliError> {
    let spec = eta_spec(args)?;
    let canon = serde_json::to_value(&spec)?;
    if spec.s.iter().all(|&v| v <= 0) {
        return Ok(Job {
            name: "reduce",
            spec: canon,
            run: Box::new(move || Ok(json!({"spec": spec.to_string(), "value": eta_nonpositive(&spec)?.to_string()}))),
        });
    }
    if spec.depth() > MAX_DEPTH {
        return Err(CliError::Unsupported(format!("depth {} exceeds {MAX_DEPTH}", spec.depth())));
    }
    spec.validate_reduction()?;
    Ok(Job {
        name: "reduce",
        spec: canon,
        run: Box::new(move || {
            let cfg = NumericConfig::default();
            let mut reducer = Reducer::new();
            let expr = reduce_eta_with(&spec, &mut reducer)?;
            let dual = spec.dual();
            let dual_expr = reduce_eta_with(&dual, &mut reducer)?;
            let value = mzv_expr_eval(&expr, &cfg)?;
            let residual = mzv_expr_eval(&(&expr - &dual_expr), &cfg)?;
            Ok(json!({
                "spec": spec.to_string(),
                "expr": expr,
                "text": expr.to_string(),
                "value": value.value,
                "error": value.error,
                "dual": {"spec": dual.to_string(), "expr": dual_expr, "text": dual_expr.to_string()},
                "residual": residual.value,
            }))
        }),
    })
}

fn relations_job(weight: u32) -> Result<Job, CliError> {
    if !(4..=6).contains(&weight) {
        return Err(CliError::Unsupported(format!("relation lists exist for weights 4, 5 and 6, not {weight}")));
    }
    Ok(Job {
        name: "relations",
        spec: json!({"weight": weight}),
        run: Box::new(move || {
            let m = assemble_relation_matrix(weight, &duality_list(weight)?)?;
            let reduced: Vec<Value> = m
                .reduced()
                .into_iter()
                .map(|(pivot, e)| json!({"pivot": pivot.to_string(), "relation": e.to_string()}))
                .collect();
            let mut v = serde_json::to_value(&m)?;
            v["weight"] = json!(weight);
            v["rank"] = json!(m.rank());
            v["reduced"] = json!(reduced);
            v["csv"] = json!(m.to_csv()?);
            Ok(v)
        }),
    })
}

fn mzv_job(args: MzvArgs) -> Result<Job, CliError> {
    let index = MzvIndex::admissible(args.index.naturals("index")?)?;
    if !(args.tol > 0.0) {
        return Err(CliError::Invalid(format!("--tol must be positive, got {}", args.tol)));
    }
    let tol = args.tol;
    Ok(Job {
        name: "mzv",
        spec: json!({"index": index.entries(), "tol": tol}),
        run: Box::new(move || {
            let e = mzv_eval(&index, &NumericConfig::with_tolerance(tol))?;
            Ok(json!({"index": index.entries(), "value": e.value, "error": e.error}))
        }),
    })
}

fn execute(job: Job, cache: Option<&Cache>) -> Result<Value, CliError> {
    if let Some(hit) = cache.and_then(|c| c.get(job.name, &job.spec)) {
        return Ok(hit);
    }
    let payload = (job.run)()?;
    if let Some(c) = cache {
        if let Err(e) = c.put(job.name, &job.spec, &payload) {
            eprintln!("warning: could not write cache: {e}");
        }
    }
    Ok(payload)
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Single-record CSV from the given payload fields.
fn csv_record(payload: &Value, fields: &[&str]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(fields)?;
    w.write_record(fields.iter().map(|f| scalar(&payload[*f])))?;
    Ok(String::from_utf8(w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?).expect("utf-8"))
}

fn render(command: &str, payload: &Value, format: Format) -> Result<String, CliError> {
    if format == Format::Json {
        return Ok(serde_json::to_string_pretty(payload)? + "\n");
    }
    match command {
        "bern" => csv_record(payload, &["value"]),
        "mzv" => {
            let mut p = payload.clone();
            p["index"] = json!(payload["index"].as_array().map(|a| a.iter().map(scalar).collect::<Vec<_>>().join(",")));
            csv_record(&p, &["index", "value", "error"])
        }
        "duality-scan" => {
            let mut p = payload.clone();
            p["failures"] = json!(payload["failures"].as_array().map_or(0, Vec::len));
            csv_record(&p, &["r", "max", "checked", "failures"])
        }
        "reduce" if payload.get("text").is_some() => {
            let mut p = payload.clone();
            p["dual_spec"] = payload["dual"]["spec"].clone();
            p["dual_text"] = payload["dual"]["text"].clone();
            csv_record(&p, &["spec", "text", "value", "error", "dual_spec", "dual_text", "residual"])
        }
        "reduce" => csv_record(payload, &["spec", "value"]),
        "relations" => Ok(scalar(&payload["csv"])),
        _ => unreachable!("known command"),
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    let cache = if cli.no_cache { None } else { Cache::from_env() };
    let (job, out_dir) = match cli.command {
        Command::Bern(a) => (bern_job(a)?, None),
        Command::DualityScan(a) => (scan_job(a)?, None),
        Command::Reduce(a) => (reduce_job(a)?, None),
        Command::Relations(a) => (relations_job(a.weight)?, Some((a.out, a.weight))),
        Command::Mzv(a) => (mzv_job(a)?, None),
    };
    let name = job.name;
    let payload = execute(job, cache.as_ref())?;
    if let Some((dir, weight)) = out_dir {
        std::fs::create_dir_all(&dir)?;
        let mut matrix = payload.clone();
        if let Some(obj) = matrix.as_object_mut() {
            obj.remove("csv");
        }
        write_atomic(&dir.join(format!("relations_w{weight}.json")), &(serde_json::to_string_pretty(&matrix)? + "\n"))?;
        write_atomic(&dir.join(format!("relations_w{weight}.csv")), &scalar(&payload["csv"]))?;
        if cli.format == Format::Json {
            let summary = json!({
                "weight": weight,
                "rows": matrix["rows"].as_array().map_or(0, Vec::len),
                "columns": matrix["basis"].as_array().map_or(0, Vec::len),
                "rank": matrix["rank"],
                "reduced": matrix["reduced"],
            });
            return render(name, &summary, Format::Json);
        }
    }
    render(name, &payload, cli.format)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("etazeta: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
