//! Command-line front end: parses arguments, runs one computation and prints
//! a versioned JSON envelope (or CSV) on stdout.
//!
//! Exit codes: 0 on success, 1 for invalid arguments, 2 when a cap, budget
//! or I/O limit stops the computation.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Map, Value};

use subgrowth::abelian::{
    count_all_subgroups, count_subgroups_index_at_most, count_subgroups_order_at_most, layer_types,
    sub_count_log_bounds, AbelianGroupSpec, CountLimits,
};
use subgrowth::bombieri::{certify, check_cardinality_bound, find_bombieri_prime};
use subgrowth::congruence::{classify_maximal_subgroups, gamma_n, lower_bound_construction, DEFAULT_ORDER_CAP};
use subgrowth::extremal::{
    chevalley_from_letter, gamma, m1_search_with, m2_search_with, maximize_ratio, optimize_sequence_pair,
    searches_exhaustively, m2_trend, GcdProblem, GcdWitness, SearchOptions,
};
use subgrowth::numtheory::{Sieve, DEFAULT_SIEVE_LIMIT};
use subgrowth::Error;

/// Overrides the sieve cache directory.
pub const CACHE_ENV: &str = "SUBGROWTH_CACHE_DIR";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "subgrowth", version, about = "Subgroup growth computations")]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// Directory for the sieve cache (default: $SUBGROWTH_CACHE_DIR, then a temp dir).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Largest group order any enumeration may build.
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER_CAP)]
    group_order_cap: u64,
    /// Node budget for branch-and-bound searches.
    #[arg(long, global = true, default_value_t = SearchOptions::default().node_budget)]
    search_budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Worker threads; 0 means one per core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Accepted for harness compatibility; every algorithm is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub cache_dir: PathBuf,
    pub group_order_cap: u64,
    pub search_budget: u64,
    pub output_format: OutputFormat,
    pub threads: usize,
}

impl RunConfig {
    fn from_args(args: &ConfigArgs) -> Result<Self, Error> {
        if args.group_order_cap == 0 || args.search_budget == 0 {
            return Err(Error::InvalidArgument("caps must be positive".into()));
        }
        let cache_dir = args
            .cache_dir
            .clone()
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .unwrap_or_else(|| std::env::temp_dir().join("subgrowth-cache"));
        Ok(RunConfig {
            cache_dir,
            group_order_cap: args.group_order_cap,
            search_budget: args.search_budget,
            output_format: args.format,
            threads: args.threads,
        })
    }

    fn sieve(&self) -> Sieve {
        Sieve {
            max_limit: DEFAULT_SIEVE_LIMIT,
            cache_dir: Some(self.cache_dir.clone()),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bombieri primes and their certificates.
    #[command(subcommand)]
    Bombieri(BombieriCmd),
    /// Subgroup counts of finite abelian groups.
    #[command(subcommand)]
    Abelian(AbelianCmd),
    /// Extremal constants and optimization problems.
    #[command(subcommand)]
    Extremal(ExtremalCmd),
    /// Congruence subgroups of SL2.
    #[command(subcommand)]
    Congruence(CongruenceCmd),
}

#[derive(Debug, Subcommand)]
enum BombieriCmd {
    /// First Bombieri prime in [x^rho / log x, x^rho].
    Find {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        rho: f64,
    },
    /// Certificate for a single prime q.
    Certify {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        q: u64,
    },
}

#[derive(Debug, Subcommand)]
enum AbelianCmd {
    /// Number of subgroups of the product of cyclic groups of the given orders.
    Count {
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<u64>,
        #[arg(long, conflicts_with = "max_index")]
        max_order: Option<BigUint>,
        #[arg(long)]
        max_index: Option<BigUint>,
    },
}

#[derive(Debug, Subcommand)]
enum ExtremalCmd {
    /// gamma(R) and the numerical maximizer of the ratio objective.
    Gamma {
        #[arg(long = "R")]
        r: f64,
    },
    /// Exact optimum of the gcd-product problem M1 or M2.
    Mn {
        #[arg(long)]
        n: BigUint,
        #[arg(long, default_value = "m2")]
        problem: GcdProblem,
        /// Disable pruning (default: only for small n).
        #[arg(long)]
        exhaustive: Option<bool>,
    },
    /// Optimal sequence pair under the budget sum(R lambda_i + nu_i) <= C.
    SequencePair {
        #[arg(long = "R")]
        r: f64,
        #[arg(long = "C")]
        c: u64,
        #[arg(long)]
        t: u32,
    },
    /// log M2(n) / lambda(n) for each n.
    Trend {
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        ns: Vec<BigUint>,
    },
}

#[derive(Debug, Subcommand)]
enum CongruenceCmd {
    /// gamma_n with a per-modulus breakdown.
    GammaN {
        #[arg(long)]
        n: u64,
        /// Group order cap; defaults to --group-order-cap.
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Maximal subgroups of SL2(F_q) by class.
    Classify {
        #[arg(long)]
        q: u64,
    },
    /// Borel lower-bound construction at x.
    Lowerbound {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value = "A")]
        family: String,
        #[arg(long, default_value_t = 1)]
        rank: u32,
    },
}

/// Everything a run prints, plus its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

/// Result of one command: inputs, outputs and what each output means.
struct Report {
    command: &'static str,
    inputs: Value,
    outputs: Map<String, Value>,
    provenance: Map<String, Value>,
}

impl Report {
    fn new(command: &'static str, inputs: Value) -> Self {
        Report {
            command,
            inputs,
            outputs: Map::new(),
            provenance: Map::new(),
        }
    }

    fn put(&mut self, key: &str, value: impl Serialize, meaning: &str) {
        self.outputs
            .insert(key.into(), serde_json::to_value(value).expect("serializable output"));
        self.provenance.insert(key.into(), Value::String(meaning.into()));
    }
}

fn big_str(n: &BigUint) -> String {
    n.to_str_radix(10)
}

fn witness_json(w: &GcdWitness) -> Value {
    json!({
        "members": w.members,
        "product": big_str(&w.product),
        "objective": big_str(&w.objective),
        "log_objective": w.log_objective(),
        "exhaustive": w.exhaustive,
        "nodes": w.nodes,
    })
}

fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Report, Error> {
    match cmd {
        Command::Bombieri(BombieriCmd::Find { x, rho }) => {
            let table = cfg.sieve().table(*x)?;
            let scan = find_bombieri_prime(&table, *x, *rho)?;
            let mut rep = Report::new("bombieri find", json!({ "x": x, "rho": rho }));
            rep.put("interval", [scan.lower, scan.upper], "scan interval [ceil(x^rho / log x), floor(x^rho)]");
            rep.put("scanned", &scan.scanned, "max |E(y; q, 1)| and its bound for each prime tried");
            if let Some(cert) = &scan.certificate {
                rep.put("certificate", cert, "first prime q in the interval with max |E(y; q, 1)| <= x / (phi(q) (log x)^2)");
                rep.put("cardinality", check_cardinality_bound(cert)?, "|L - x/(phi(q) log x)| <= 3x/(phi(q) (log x)^2)");
            } else {
                rep.put("certificate", Value::Null, "no Bombieri prime in the interval");
            }
            Ok(rep)
        }
        Command::Bombieri(BombieriCmd::Certify { x, q }) => {
            let table = cfg.sieve().table(*x)?;
            let cert = certify(&table, *x, *q)?;
            let mut rep = Report::new("bombieri certify", json!({ "x": x, "q": q }));
            if cert.is_bombieri {
                rep.put("cardinality", check_cardinality_bound(&cert)?, "|L - x/(phi(q) log x)| <= 3x/(phi(q) (log x)^2)");
            }
            rep.put("certificate", cert, "max |E(y; q, 1)| over 1 <= y <= x against x / (phi(q) (log x)^2)");
            Ok(rep)
        }
        Command::Abelian(AbelianCmd::Count { orders, max_order, max_index }) => {
            let spec = AbelianGroupSpec::new_dropping_trivial(orders.iter().copied())?;
            let limits = CountLimits::default();
            let (count, meaning) = match (max_order, max_index) {
                (Some(r), _) => (count_subgroups_order_at_most(&spec, r, limits)?, "subgroups of order at most max_order"),
                (_, Some(n)) => (count_subgroups_index_at_most(&spec, n, limits)?, "subgroups of index at most max_index"),
                _ => (count_all_subgroups(&spec, limits)?, "all subgroups, by the layer-type product formula"),
            };
            let inputs = json!({
                "orders": orders,
                "max_order": max_order.as_ref().map(big_str),
                "max_index": max_index.as_ref().map(big_str),
            });
            let mut rep = Report::new("abelian count", inputs);
            rep.put("group", spec.to_string(), "invariant factor decomposition");
            rep.put("order", big_str(&spec.order()), "|G|");
            rep.put("count", big_str(&count), meaning);
            rep.put("layer_types", layer_types(&spec), "p^lambda_i = |Omega_i / Omega_(i-1)| for each prime p");
            let (lo, hi) = sub_count_log_bounds(&spec);
            rep.put(
                "bounds",
                json!({ "log_lower": lo, "log_upper": hi }),
                "log of |G|^-1 |End G|^(1/4) <= |Sub G| <= |G|^2 |End G|^(1/4)",
            );
            Ok(rep)
        }
        Command::Extremal(ExtremalCmd::Gamma { r }) => {
            let mut rep = Report::new("extremal gamma", json!({ "R": r }));
            rep.put("gamma", gamma(*r)?, "closed form (sqrt(R(R+1)) - R)^2 / (4R^2)");
            rep.put("optimum", maximize_ratio(*r)?, "numerical maximizer (sigma, rho) of the ratio objective");
            Ok(rep)
        }
        Command::Extremal(ExtremalCmd::Mn { n, problem, exhaustive }) => {
            let exhaustive = exhaustive.unwrap_or_else(|| searches_exhaustively(*problem, n));
            let opts = SearchOptions {
                exhaustive,
                node_budget: cfg.search_budget,
            };
            let w = match problem {
                GcdProblem::M1 => m1_search_with(n, opts)?,
                GcdProblem::M2 => m2_search_with(n, opts)?,
            };
            let inputs = json!({ "n": big_str(n), "problem": problem, "exhaustive": exhaustive });
            let mut rep = Report::new("extremal mn", inputs);
            let meaning = match problem {
                GcdProblem::M1 => "max over distinct a_i with prod a_i <= n of prod_(i,j) gcd(a_i, a_j)",
                GcdProblem::M2 => "max over distinct primes with prod p <= n of prod_(p,p') gcd(p - 1, p' - 1)",
            };
            rep.put("witness", witness_json(&w), meaning);
            Ok(rep)
        }
        Command::Extremal(ExtremalCmd::SequencePair { r, c, t }) => {
            let pair = optimize_sequence_pair(*r, *c, *t)?;
            let mut rep = Report::new("extremal sequence-pair", json!({ "R": r, "C": c, "t": t }));
            rep.put("objective", pair.objective(), "max of sum nu_i (lambda_i - nu_i)");
            rep.put("cost", pair.cost(), "sum (R lambda_i + nu_i)");
            rep.put("pair", pair, "maximizer in normal form");
            Ok(rep)
        }
        Command::Extremal(ExtremalCmd::Trend { ns }) => {
            let rows: Vec<Value> = m2_trend(ns)?
                .iter()
                .map(|row| {
                    json!({
                        "n": big_str(&row.n),
                        "log_m2": row.log_m2,
                        "lambda": row.lambda,
                        "ratio": row.ratio,
                        "members": row.witness.members,
                    })
                })
                .collect();
            let inputs = json!({ "ns": ns.iter().map(big_str).collect::<Vec<_>>() });
            let mut rep = Report::new("extremal trend", inputs);
            rep.put("rows", rows, "log M2(n) / lambda(n) with lambda(n) = (log n)^2 / log log n");
            Ok(rep)
        }
        Command::Congruence(CongruenceCmd::GammaN { n, cap }) => {
            let cap = cap.unwrap_or(cfg.group_order_cap);
            let report = gamma_n(*n, cap)?;
            let mut rep = Report::new("congruence gamma-n", json!({ "n": n, "cap": cap }));
            rep.put("gamma", report.gamma, "sum over m <= n of the subgroups of SL2(Z/m) of index <= n");
            rep.put("c_n_proxy", report.c_n_proxy, "the same subgroups counted once, at their exact level");
            rep.put("rows", report.rows, "per-modulus contributions");
            Ok(rep)
        }
        Command::Congruence(CongruenceCmd::Classify { q }) => {
            let report = classify_maximal_subgroups(*q, cfg.group_order_cap)?;
            let mut rep = Report::new("congruence classify", json!({ "q": q }));
            rep.put("fully_classified", report.fully_classified(), "every maximal subgroup falls in a known class");
            rep.put("rows", &report.classes, "maximal subgroups of SL2(F_q) by class and order");
            rep.put("report", report, "full classification summary");
            Ok(rep)
        }
        Command::Congruence(CongruenceCmd::Lowerbound { x, rho, sigma, family, rank }) => {
            let params = chevalley_from_letter(family, *rank)?;
            let table = cfg.sieve().table(*x)?;
            let report = lower_bound_construction(&table, *x, *rho, *sigma, &params)?;
            let inputs = json!({ "x": x, "rho": rho, "sigma": sigma, "family": family, "rank": rank });
            let mut rep = Report::new("congruence lowerbound", inputs);
            rep.put("ratio", report.ratio, "log count / ((log index)^2 / log log index)");
            rep.put("gamma_R", gamma(report.r)?, "limit the ratio approaches");
            rep.put("report", report, "Borel construction over primes 1 mod q");
            Ok(rep)
        }
    }
}

fn command_name(argv: &[String]) -> String {
    argv.iter()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .take(2)
        .cloned()
        .collect::<Vec<_>>()
        .join(" ")
}

fn envelope(command: &str, inputs: Value, body: Map<String, Value>, started: Instant) -> Value {
    let mut env = Map::new();
    env.insert("schema".into(), json!(SCHEMA_VERSION));
    env.insert("command".into(), json!(command));
    env.insert("inputs".into(), inputs);
    env.extend(body);
    env.insert("timing".into(), json!({ "seconds": started.elapsed().as_secs_f64() }));
    Value::Object(env)
}

fn error_outcome(command: &str, started: Instant, err: &Error) -> Outcome {
    let (code, kind) = match err {
        Error::InvalidArgument(_) => (1, "invalid_argument"),
        e if e.is_resource() => (2, "resource"),
        _ => (2, "io"),
    };
    let mut body = Map::new();
    body.insert("error".into(), json!({ "kind": kind, "message": err.to_string() }));
    if let Error::Partial { computed, .. } = err {
        body.insert("partial".into(), json!({ "computed": computed }));
    }
    let env = envelope(command, Value::Null, body, started);
    Outcome {
        code,
        stdout: serde_json::to_string_pretty(&env).expect("json") + "\n",
    }
}

fn csv_field(v: &Value) -> String {
    let raw = match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    };
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw
    }
}

/// A table for `rows` outputs, otherwise one `key,value` line per output.
fn to_csv(outputs: &Map<String, Value>) -> String {
    let mut out = String::new();
    if let Some(Value::Array(rows)) = outputs.get("rows") {
        let header: Vec<String> = match rows.first() {
            Some(Value::Object(first)) => first.keys().cloned().collect(),
            _ => vec![],
        };
        out += &header.join(",");
        out.push('\n');
        for row in rows {
            let cells: Vec<String> = header.iter().map(|k| csv_field(&row[k])).collect();
            out += &cells.join(",");
            out.push('\n');
        }
        return out;
    }
    out += "key,value\n";
    for (k, v) in outputs {
        out += &format!("{},{}\n", csv_field(&Value::String(k.clone())), csv_field(v));
    }
    out
}

/// Runs one command line (including the program name) and returns what it
/// would print.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let started = Instant::now();
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: 0, stdout: e.to_string() };
            }
            let text = e.render().to_string();
            let err = Error::InvalidArgument(text.trim().trim_start_matches("error: ").to_string());
            return error_outcome(&command_name(&argv), started, &err);
        }
    };
    let cfg = match RunConfig::from_args(&cli.config) {
        Ok(cfg) => cfg,
        Err(e) => return error_outcome(&command_name(&argv), started, &e),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build() {
        Ok(p) => p,
        Err(e) => return error_outcome(&command_name(&argv), started, &Error::Resource(e.to_string())),
    };
    let report = match pool.install(|| execute(&cli.command, &cfg)) {
        Ok(r) => r,
        Err(e) => return error_outcome(&command_name(&argv), started, &e),
    };
    let stdout = match cfg.output_format {
        OutputFormat::Csv => to_csv(&report.outputs),
        OutputFormat::Json => {
            let mut body = Map::new();
            body.insert("outputs".into(), Value::Object(report.outputs));
            body.insert("provenance".into(), Value::Object(report.provenance));
            let env = envelope(report.command, report.inputs, body, started);
            serde_json::to_string_pretty(&env).expect("json") + "\n"
        }
    };
    Outcome { code: 0, stdout }
}

/// Runs `argv`, prints the result and returns the exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let outcome = run(argv);
    print!("{}", outcome.stdout);
    outcome.code
}
