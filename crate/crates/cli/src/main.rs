//! `charlab`: exact checks, sampling and distance experiments from the shell.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use charlab::growth::{self, RngStream};
use charlab::limit::{self, DistanceReport, Method, RateReport};
use charlab::rational::{self, AlphaParam, Rational};
use charlab::verify::{self, CheckResult, SuiteConfig};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "charlab",
    version,
    about = "Character ratio laboratory for Plancherel and Jack measures"
)]
struct Cli {
    /// Worker threads (default: available parallelism). Never changes output.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the exact identity suite and emit JSON check rows.
    Verify {
        #[arg(long, default_value_t = verify::MAX_LEVEL)]
        n_max: usize,
        /// Jack parameter as p/q or an integer; repeatable.
        #[arg(long = "alpha", default_value = "1")]
        alphas: Vec<AlphaParam>,
        /// Largest n for the projection check (path enumeration).
        #[arg(long, default_value_t = 8)]
        path_n_max: usize,
        /// Largest |μ| for the Pieri oracle; omitted skips it.
        #[arg(long)]
        oracle_max: Option<usize>,
        /// m values for the content product identity.
        #[arg(long = "m", value_delimiter = ',', default_value = "1,2,3")]
        m_values: Vec<i64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample growth paths and dump S and T per draw as CSV.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1")]
        alpha: AlphaParam,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample one growth path and print its boxes and increments.
    Path {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1")]
        alpha: AlphaParam,
        #[arg(long)]
        seed: u64,
        /// Stream index within the seed.
        #[arg(long, default_value_t = 0)]
        index: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Kolmogorov distance of T to the standard normal.
    Kolmogorov {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value = "1")]
        alpha: AlphaParam,
        #[arg(long, default_value_t = 200_000)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Use the exact law for n at or below this threshold.
        #[arg(long, default_value_t = 20)]
        exact_below: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact law of T as CSV.
    ExactDist {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1")]
        alpha: AlphaParam,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Log-log rate fit of a distances CSV written by `kolmogorov`.
    Rate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Human,
}

#[derive(Debug)]
enum Failure {
    /// Bad flag values: exit 2.
    Usage(String),
    /// Some check did not hold: exit 1.
    Checks,
    Io(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn usage(flag: &str, msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("invalid value for '--{flag}': {msg}"))
}

fn core_error(flag: &str) -> impl Fn(charlab::Error) -> Failure + '_ {
    move |e| usage(flag, e)
}

fn require_n(flag: &str, n: usize, min: usize) -> Result<(), Failure> {
    if n < min {
        return Err(usage(flag, format!("{n} is below the minimum {min}")));
    }
    Ok(())
}

fn open_out(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.unwrap_or(0);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: invalid value for '--threads': {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Verify {
            n_max,
            alphas,
            path_n_max,
            oracle_max,
            m_values,
            format,
            out,
        } => run_verify(
            SuiteConfig {
                n_max,
                path_n_max,
                m_values,
                oracle_max,
            },
            &alphas,
            format,
            &out,
        ),
        Command::Sample {
            n,
            alpha,
            count,
            seed,
            out,
        } => run_sample(n, &alpha, count, seed, &out),
        Command::Path {
            n,
            alpha,
            seed,
            index,
            out,
        } => run_path(n, &alpha, seed, index, &out),
        Command::Kolmogorov {
            n,
            alpha,
            count,
            seed,
            exact_below,
            out,
        } => run_kolmogorov(&n, &alpha, count, seed, exact_below, &out),
        Command::ExactDist { n, alpha, out } => run_exact_dist(n, &alpha, &out),
        Command::Rate { input, out } => run_rate(&input, &out),
    }
}

#[derive(Serialize)]
struct VerifyDocument<'a> {
    schema: u32,
    checks: &'a [CheckResult],
}

fn run_verify(
    config: SuiteConfig,
    alphas: &[AlphaParam],
    format: Format,
    out: &Option<PathBuf>,
) -> Result<(), Failure> {
    if config.n_max > verify::MAX_LEVEL {
        return Err(usage("n-max", format!("at most {}", verify::MAX_LEVEL)));
    }
    if config.path_n_max > verify::MAX_PATH_LEVEL {
        return Err(usage(
            "path-n-max",
            format!("at most {}", verify::MAX_PATH_LEVEL),
        ));
    }
    if let Some(max) = config.oracle_max {
        if max > charlab::symfun::ORACLE_MAX_SIZE {
            return Err(usage(
                "oracle-max",
                format!("at most {}", charlab::symfun::ORACLE_MAX_SIZE),
            ));
        }
    }
    let start = Instant::now();
    let per_alpha: Vec<Result<Vec<CheckResult>, charlab::Error>> = alphas
        .par_iter()
        .map(|a| verify::run_suite(&config, a))
        .collect();
    let mut results = Vec::new();
    for r in per_alpha {
        results.extend(r.map_err(core_error("n-max"))?);
    }
    verify::sort_results(&mut results);
    let elapsed = start.elapsed();

    let mut table = String::new();
    table.push_str(&format!(
        "{:<34} {:>7} {:>7} {:>7}\n",
        "check", "run", "passed", "failed"
    ));
    for (id, s) in verify::tally(&results) {
        table.push_str(&format!(
            "{id:<34} {:>7} {:>7} {:>7}\n",
            s.run, s.passed, s.failed
        ));
    }
    let total = verify::summarize(&results);
    table.push_str(&format!(
        "{:<34} {:>7} {:>7} {:>7}\nwall time: {:.2}s\n",
        "total",
        total.run,
        total.passed,
        total.failed,
        elapsed.as_secs_f64()
    ));
    for r in results.iter().filter(|r| !r.passed()) {
        table.push_str(&format!("FAILED {r}\n"));
    }

    let mut w = open_out(out)?;
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(
                &mut w,
                &VerifyDocument {
                    schema: SCHEMA,
                    checks: &results,
                },
            )?;
            writeln!(w)?;
            eprint!("{table}");
        }
        Format::Human => w.write_all(table.as_bytes())?,
    }
    w.flush()?;
    if total.failed > 0 {
        return Err(Failure::Checks);
    }
    Ok(())
}

fn run_sample(
    n: usize,
    alpha: &AlphaParam,
    count: usize,
    seed: u64,
    out: &Option<PathBuf>,
) -> Result<(), Failure> {
    require_n("n", n, 2)?;
    let sums = growth::sample_batch(n, alpha, count, seed);
    let mut w = csv::Writer::from_writer(open_out(out)?);
    w.write_record(["n", "alpha", "draw_index", "s_numerator", "t_float"])?;
    let alpha_text = alpha.to_string();
    for (i, s) in sums.iter().enumerate() {
        w.write_record([
            n.to_string(),
            alpha_text.clone(),
            i.to_string(),
            s.s_scaled_numerator(alpha).to_string(),
            s.t_float(alpha, n).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn run_path(
    n: usize,
    alpha: &AlphaParam,
    seed: u64,
    index: u64,
    out: &Option<PathBuf>,
) -> Result<(), Failure> {
    require_n("n", n, 1)?;
    let path =
        growth::sample_path(n, alpha, RngStream::new(seed, index)).map_err(core_error("n"))?;
    let mut w = csv::Writer::from_writer(open_out(out)?);
    w.write_record(["j", "box_row", "box_col", "X_j"])?;
    for (j, (b, x)) in path.boxes.iter().zip(&path.increments).enumerate() {
        w.write_record([
            (j + 1).to_string(),
            b.row.to_string(),
            b.col.to_string(),
            rational::to_text(x),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One row of distances.csv.
#[derive(Debug, Serialize, Deserialize)]
struct DistanceRow {
    n: usize,
    alpha: String,
    method: Method,
    #[serde(rename = "N")]
    sample_count: Option<usize>,
    distance: f64,
    dkw_eps_99: Option<f64>,
    seed: Option<u64>,
}

impl DistanceRow {
    fn from_report(r: &DistanceReport) -> Self {
        DistanceRow {
            n: r.n,
            alpha: rational::to_text(&r.alpha),
            method: r.method,
            sample_count: r.sample_count,
            distance: r.distance,
            dkw_eps_99: r.dkw_eps_99,
            seed: r.seed,
        }
    }

    fn into_report(self) -> Result<DistanceReport, Failure> {
        let alpha = rational::parse(&self.alpha).map_err(|e| usage("input", e))?;
        Ok(DistanceReport {
            n: self.n,
            alpha,
            method: self.method,
            sample_count: self.sample_count,
            distance: self.distance,
            dkw_eps_99: self.dkw_eps_99,
            seed: self.seed,
        })
    }
}

fn run_kolmogorov(
    ns: &[usize],
    alpha: &AlphaParam,
    count: usize,
    seed: u64,
    exact_below: usize,
    out: &Option<PathBuf>,
) -> Result<(), Failure> {
    for &n in ns {
        require_n("n", n, 2)?;
    }
    if exact_below > limit::EXACT_MAX_N {
        return Err(usage(
            "exact-below",
            format!("at most {}", limit::EXACT_MAX_N),
        ));
    }
    let needs_mc = ns.iter().any(|&n| n > exact_below);
    if needs_mc && count < limit::MC_MIN_SAMPLES {
        return Err(usage(
            "count",
            format!("at least {} draws", limit::MC_MIN_SAMPLES),
        ));
    }
    let mut w = csv::Writer::from_writer(open_out(out)?);
    for &n in ns {
        let report = if n <= exact_below {
            limit::kolmogorov_exact(n, alpha)
        } else {
            limit::kolmogorov_mc(n, alpha, count, seed)
        }
        .map_err(core_error("n"))?;
        w.serialize(DistanceRow::from_report(&report))?;
    }
    w.flush()?;
    Ok(())
}

fn run_exact_dist(n: usize, alpha: &AlphaParam, out: &Option<PathBuf>) -> Result<(), Failure> {
    require_n("n", n, 2)?;
    let atoms = limit::exact_cdf(n, alpha).map_err(core_error("n"))?;
    let mut w = csv::Writer::from_writer(open_out(out)?);
    w.write_record([
        "s_numer",
        "s_denom",
        "t_float",
        "prob_numer",
        "prob_denom",
        "cum_float",
    ])?;
    for a in &atoms {
        w.write_record([
            a.exact_s.numer().to_string(),
            a.exact_s.denom().to_string(),
            a.t_value.to_string(),
            a.prob.numer().to_string(),
            a.prob.denom().to_string(),
            rational::to_f64(&a.cum_prob).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct AlphaRate {
    #[serde(serialize_with = "rational::serialize")]
    alpha: Rational,
    #[serde(flatten)]
    report: RateReport,
}

#[derive(Serialize)]
struct RateDocument {
    schema: u32,
    reports: Vec<AlphaRate>,
}

fn run_rate(input: &Path, out: &Option<PathBuf>) -> Result<(), Failure> {
    let mut reader = csv::Reader::from_path(input).map_err(|e| usage("input", e))?;
    let mut groups: Vec<(Rational, Vec<DistanceReport>)> = Vec::new();
    for row in reader.deserialize::<DistanceRow>() {
        let report = row.map_err(|e| usage("input", e))?.into_report()?;
        match groups.iter_mut().find(|(a, _)| a == &report.alpha) {
            Some((_, g)) => g.push(report),
            None => groups.push((report.alpha.clone(), vec![report])),
        }
    }
    if groups.is_empty() {
        return Err(usage("input", "no distance rows"));
    }
    let mut reports = Vec::new();
    for (alpha, group) in groups {
        let report = limit::rate_fit(&group)
            .map_err(|e| usage("input", format!("alpha {}: {e}", rational::to_text(&alpha))))?;
        reports.push(AlphaRate { alpha, report });
    }
    let mut w = open_out(out)?;
    serde_json::to_writer_pretty(
        &mut w,
        &RateDocument {
            schema: SCHEMA,
            reports,
        },
    )?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}
