use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use involfact::counting::{
    chm_asymptotic, count_factorizations, involution_count, length_factors, ln_big, log_count,
    product_of_cycle_lengths,
};
use involfact::factorize::enumerate_factorizations;
use involfact::oracle::{exhaustive_check_with_limit, DEFAULT_EXHAUSTIVE_LIMIT};
use involfact::stats::{
    clt_experiment, histogram_csv, sandwich_check, tail_experiment, Statistic, StatsError,
    DEFAULT_SANDWICH_CONSTANT,
};
use involfact::{CycleType, Permutation};
use serde::Serialize;
use serde_json::{json, Value};

const VERSION: &str = env!("CARGO_PKG_VERSION");
const SEED_ENV: &str = "INVOLFACT_SEED";

/// Factorizations of permutations into two involutions.
#[derive(Parser, Debug)]
#[command(name = "involfact", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Write the report to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Worker threads for sampling (default: available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact number of factorizations N, the cycle-length product B, and per-length factors.
    Count(PermInput),
    /// List every factorization, one per line.
    Enumerate {
        #[command(flatten)]
        input: PermInput,
        /// Stop after this many factorizations.
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Brute-force check of the product formula and the extremal claims on all of S_n.
    OracleCheck {
        #[arg(long)]
        n: usize,
        /// Largest degree accepted.
        #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_LIMIT)]
        max_degree: usize,
    },
    /// Sample the normalized log-statistic and compare with the standard normal.
    Clt {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, default_value = "logN", value_parser = parse_statistic)]
        statistic: Statistic,
        /// Exit with status 1 when mean, stdev or KS fall outside the sanity bands.
        #[arg(long)]
        check: bool,
    },
    /// Frequencies of the tail events with threshold xi.
    Tail {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        xi: f64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Check B <= N <= B (c xi^xi)^xi on sampled permutations.
    Sandwich {
        #[arg(long)]
        n: usize,
        /// Defaults to sqrt(ln n).
        #[arg(long)]
        xi: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SANDWICH_CONSTANT)]
        c: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Number of involutions of an n-set and its asymptotic approximation.
    Involutions {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args, Debug)]
struct SeedArg {
    /// RNG seed; falls back to $INVOLFACT_SEED, then 0.
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Serialize)]
struct PermInput {
    /// Cycle notation, e.g. "(1,2,3)(4,5,6)".
    #[arg(long, group = "perm")]
    cycles: Option<String>,
    /// Image form: JSON array of 0-based images, e.g. "[1,2,0]".
    #[arg(long, group = "perm")]
    images: Option<String>,
    /// Cycle type as length:count pairs, e.g. "1:4" or "3:2,1:1".
    #[arg(long, group = "perm")]
    cycle_type: Option<String>,
    /// Degree for cycle notation (default: largest label mentioned).
    #[arg(long)]
    degree: Option<usize>,
    /// Labels in cycle notation (input and output) start at 1.
    #[arg(long)]
    one_based: bool,
}

fn parse_statistic(s: &str) -> Result<Statistic, String> {
    s.parse().map_err(|e: StatsError| e.to_string())
}

enum Failure {
    /// Bad input: exit status 2.
    Usage(String),
    /// A check did not hold: exit status 1.
    Assertion(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl PermInput {
    fn permutation(&self) -> Result<Permutation, Failure> {
        let usage = |e: involfact::PermutationError| Failure::Usage(e.to_string());
        match (&self.cycles, &self.images, &self.cycle_type) {
            (Some(c), _, _) => Permutation::parse_cycles(c, self.degree, self.one_based).map_err(usage),
            (_, Some(i), _) => Permutation::parse_images(i).map_err(usage),
            (_, _, Some(t)) => Ok(CycleType::parse(t).map_err(usage)?.representative()),
            _ => Err(Failure::Usage(
                "one of --cycles, --images or --cycle-type is required".into(),
            )),
        }
    }

    fn cycle_type(&self) -> Result<CycleType, Failure> {
        match &self.cycle_type {
            Some(t) => CycleType::parse(t).map_err(|e| Failure::Usage(e.to_string())),
            None => Ok(self.permutation()?.cycle_type()),
        }
    }
}

struct Output {
    sink: Box<dyn Write>,
    format: Format,
}

impl Output {
    fn open(path: &Option<PathBuf>, format: Format) -> Result<Self, Failure> {
        let sink: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Output { sink, format })
    }

    fn envelope(&mut self, command: &str, params: Value, result: Value) -> Result<(), Failure> {
        let env = json!({
            "command": command,
            "params": params,
            "result": result,
            "version": VERSION,
        });
        writeln!(self.sink, "{}", serde_json::to_string_pretty(&env).expect("valid json"))?;
        Ok(())
    }

    fn line(&mut self, text: &str) -> Result<(), Failure> {
        writeln!(self.sink, "{text}")?;
        Ok(())
    }

    /// Emits `rows` as `key,value` CSV, `key: value` text, or the JSON envelope.
    fn record(
        &mut self,
        command: &str,
        params: Value,
        result: Value,
        rows: &[(&str, String)],
    ) -> Result<(), Failure> {
        match self.format {
            Format::Json => self.envelope(command, params, result),
            Format::Csv => {
                self.line("key,value")?;
                for (k, v) in rows {
                    self.line(&format!("{k},{}", csv_field(v)))?;
                }
                Ok(())
            }
            Format::Text => {
                for (k, v) in rows {
                    self.line(&format!("{k}: {v}"))?;
                }
                Ok(())
            }
        }
    }
}

fn csv_field(v: &str) -> String {
    if v.contains([',', '"', '\n']) {
        format!("\"{}\"", v.replace('"', "\"\""))
    } else {
        v.to_string()
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let mut out = Output::open(&cli.out, cli.format)?;
    match cli.command {
        Command::Count(input) => cmd_count(&mut out, &input),
        Command::Enumerate { input, limit } => cmd_enumerate(&mut out, &input, limit),
        Command::OracleCheck { n, max_degree } => cmd_oracle_check(&mut out, n, max_degree),
        Command::Clt { n, samples, seed, statistic, check } => {
            cmd_clt(&mut out, cli.out.is_some(), n, samples, seed.seed, statistic, check)
        }
        Command::Tail { n, xi, samples, seed } => cmd_tail(&mut out, n, xi, samples, seed.seed),
        Command::Sandwich { n, xi, c, samples, seed } => {
            let xi = xi.unwrap_or_else(|| (n as f64).ln().sqrt());
            cmd_sandwich(&mut out, n, xi, c, samples, seed.seed)
        }
        Command::Involutions { n } => cmd_involutions(&mut out, n),
    }?;
    out.sink.flush()?;
    Ok(())
}

fn cmd_count(out: &mut Output, input: &PermInput) -> Result<(), Failure> {
    let t = input.cycle_type()?;
    let n_count = count_factorizations(&t);
    let b = product_of_cycle_lengths(&t);
    let factors: Vec<Value> = length_factors(&t)
        .into_iter()
        .map(|f| json!({"length": f.length, "multiplicity": f.multiplicity, "factor": f.factor.to_string()}))
        .collect();
    let per_k = length_factors(&t)
        .iter()
        .map(|f| format!("{}^{}->{}", f.length, f.multiplicity, f.factor))
        .collect::<Vec<_>>()
        .join(" ");
    let result = json!({
        "degree": t.degree(),
        "cycle_type": t.to_string(),
        "N": n_count.to_string(),
        "B": b.to_string(),
        "log_N": log_count(&t),
        "factors": factors,
    });
    out.record(
        "count",
        to_value(input),
        result,
        &[
            ("degree", t.degree().to_string()),
            ("cycle_type", t.to_string()),
            ("N", n_count.to_string()),
            ("B", b.to_string()),
            ("factors", per_k),
        ],
    )
}

fn cmd_enumerate(out: &mut Output, input: &PermInput, limit: Option<u64>) -> Result<(), Failure> {
    let sigma = input.permutation()?;
    let total = count_factorizations(&sigma.cycle_type());
    if total > 1_000_000u32.into() && limit.is_none() {
        eprintln!("warning: {total} factorizations to list; consider --limit");
    }
    let base = input.one_based;
    let max = limit.unwrap_or(u64::MAX);
    let pairs = enumerate_factorizations(&sigma).take(max.min(usize::MAX as u64) as usize);
    match out.format {
        Format::Json => {
            let list: Vec<Value> = pairs
                .map(|p| json!({"tau1": p.tau1().to_cycle_string(base), "tau2": p.tau2().to_cycle_string(base)}))
                .collect();
            let shown = list.len();
            out.envelope(
                "enumerate",
                json!({"input": to_value(input), "limit": limit}),
                json!({"sigma": sigma.to_cycle_string(base), "total": total.to_string(), "shown": shown, "factorizations": list}),
            )
        }
        Format::Csv => {
            out.line("tau1,tau2")?;
            let mut shown = 0u64;
            for p in pairs {
                out.line(&format!(
                    "{},{}",
                    csv_field(&p.tau1().to_cycle_string(base)),
                    csv_field(&p.tau2().to_cycle_string(base))
                ))?;
                shown += 1;
            }
            out.line(&format!("# shown {shown} of {total}"))
        }
        Format::Text => {
            let mut shown = 0u64;
            for p in pairs {
                out.line(&format!(
                    "{}\t{}",
                    p.tau1().to_cycle_string(base),
                    p.tau2().to_cycle_string(base)
                ))?;
                shown += 1;
            }
            out.line(&format!("# shown {shown} of {total}"))
        }
    }
}

fn cmd_oracle_check(out: &mut Output, n: usize, max_degree: usize) -> Result<(), Failure> {
    let report = exhaustive_check_with_limit(n, max_degree).map_err(|e| Failure::Usage(e.to_string()))?;
    let rows = [
        ("n", report.n.to_string()),
        ("checked", report.checked.to_string()),
        ("mismatches", report.mismatches.len().to_string()),
        ("total_sum", report.total_sum.to_string()),
        ("max", format!("{} ({} attainers)", report.max_value, report.max_attainers)),
        ("min", format!("{} ({} attainers)", report.min_value, report.min_attainers)),
        ("passed", report.passed().to_string()),
    ];
    out.record("oracle-check", json!({"n": n}), to_value(&report), &rows)?;
    if report.passed() {
        return Ok(());
    }
    let reason = match report.mismatches.first() {
        Some(m) => format!(
            "mismatch at {:?}: brute force {}, formula {}",
            m.images, m.brute_force, m.formula
        ),
        None => format!(
            "claim failed: sum_ok={} max_ok={} min_ok={:?}",
            report.sum_ok, report.max_ok, report.min_ok
        ),
    };
    Err(Failure::Assertion(reason))
}

fn cmd_clt(
    out: &mut Output,
    to_file: bool,
    n: usize,
    samples: usize,
    seed: u64,
    statistic: Statistic,
    check: bool,
) -> Result<(), Failure> {
    let report =
        clt_experiment(n, samples, seed, statistic).map_err(|e| Failure::Usage(e.to_string()))?;
    let summary = format!(
        "n={} samples={} seed={} statistic={} mean={:.6} stdev={:.6} ks={:.6}",
        report.n, report.samples, report.seed, report.statistic, report.mean, report.stdev, report.ks_distance
    );
    let params = json!({"n": n, "samples": samples, "seed": seed, "statistic": statistic});
    match out.format {
        Format::Json => out.envelope("clt", params, to_value(&report))?,
        Format::Csv => out.line(histogram_csv(&report.histogram).trim_end())?,
        Format::Text => out.line(&summary)?,
    }
    if to_file {
        println!("{summary}");
    }
    let in_band =
        report.mean.abs() <= 0.1 && (0.85..=1.15).contains(&report.stdev) && report.ks_distance <= 0.1;
    if check && !in_band {
        return Err(Failure::Assertion(format!("outside sanity bands: {summary}")));
    }
    Ok(())
}

fn cmd_tail(out: &mut Output, n: usize, xi: f64, samples: usize, seed: u64) -> Result<(), Failure> {
    let r = tail_experiment(n, xi, samples, seed).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut result = to_value(&r);
    result["within_bound"] = json!(r.within_bound());
    out.record(
        "tail",
        json!({"n": n, "xi": xi, "samples": samples, "seed": seed}),
        result,
        &[
            ("n", n.to_string()),
            ("xi", xi.to_string()),
            ("samples", samples.to_string()),
            ("seed", seed.to_string()),
            ("freq_large_k_repeat", r.freq_large_k_repeat.to_string()),
            ("freq_small_k_crowd", r.freq_small_k_crowd.to_string()),
            ("bound_large_k", r.bound_large_k.to_string()),
            ("standard_error", r.standard_error.to_string()),
            ("within_bound", r.within_bound().to_string()),
        ],
    )
}

fn cmd_sandwich(
    out: &mut Output,
    n: usize,
    xi: f64,
    c: f64,
    samples: usize,
    seed: u64,
) -> Result<(), Failure> {
    let r = match sandwich_check(n, xi, c, samples, seed) {
        Ok(r) => r,
        Err(StatsError::SandwichViolation { counterexample }) => {
            return Err(Failure::Assertion(format!("bound violated: {counterexample}")))
        }
        Err(e) => return Err(Failure::Usage(e.to_string())),
    };
    out.record(
        "sandwich",
        json!({"n": n, "xi": xi, "c": c, "samples": samples, "seed": seed}),
        to_value(&r),
        &[
            ("n", n.to_string()),
            ("xi", xi.to_string()),
            ("c", c.to_string()),
            ("samples", samples.to_string()),
            ("hypotheses_satisfied", r.hypotheses_satisfied.to_string()),
            ("fraction", r.fraction.to_string()),
            ("max_log_excess", r.max_log_excess.to_string()),
            ("log_factor", r.log_factor.to_string()),
            ("violations", "0".to_string()),
        ],
    )
}

fn cmd_involutions(out: &mut Output, n: usize) -> Result<(), Failure> {
    let exact = involution_count(n);
    let (chm_ln, ln_ratio) = if n >= 1 {
        let chm = chm_asymptotic(n).ln_value;
        (Some(chm), Some(ln_big(&exact) - chm))
    } else {
        (None, None)
    };
    let show = |v: Option<f64>| v.map_or_else(|| "undefined".to_string(), |x| x.to_string());
    out.record(
        "involutions",
        json!({"n": n}),
        json!({"count": exact.to_string(), "chm_ln": chm_ln, "ln_ratio": ln_ratio}),
        &[
            ("n", n.to_string()),
            ("count", exact.to_string()),
            ("chm_ln", show(chm_ln)),
            ("ln_ratio", show(ln_ratio)),
        ],
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
