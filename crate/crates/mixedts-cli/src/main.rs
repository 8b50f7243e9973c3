//! `mixedts` — batch workflows over the MixedTS library.
//!
//! Every command is deterministic given its inputs and the seed; timings
//! go to stderr so output files stay byte-reproducible.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;
use serde_json::json;

use mixedts::estimate::{bootstrap_study, estimate, EstimateConfig};
use mixedts::multivariate::MultivariateParams;
use mixedts::sample::SampleMatrix;
use mixedts::tails;
use mixedts::univariate::UnivariateParams;

/// Fixed default seed so reruns without an explicit seed still reproduce.
const DEFAULT_SEED: u64 = mixedts::estimate::DEFAULT_SEED;

#[derive(Parser)]
#[command(name = "mixedts", version, about = "Mixed Tempered Stable distributions: simulate, fit tails, estimate, invert the Lévy density")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw observations and write them as CSV (header y1,...,yN).
    Simulate(SimulateArgs),
    /// Fit empirical tail exponents per column of a CSV sample.
    Tails(TailsArgs),
    /// Fundamental strip of the moment generating function.
    Strip(ParamsOnlyArgs),
    /// Analytic moments (univariate or multivariate parameters).
    Moments(ParamsOnlyArgs),
    /// Characteristic-function-distance estimation with tail penalty.
    Estimate(EstimateArgs),
    /// Bootstrap distribution of the estimators.
    Bootstrap(BootstrapArgs),
    /// Fourier recovery of the Lévy density, written as CSV (x,g).
    Levy(LevyArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Parameter JSON: {mu,beta,alpha,lambda_plus,lambda_minus,a,b} or
    /// {marginals:[{mu,beta,alpha,lambda_plus,lambda_minus,l,m},...],n,k}
    #[arg(long)]
    params: PathBuf,
    #[arg(long)]
    count: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TailsArgs {
    /// CSV sample, one column per component.
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value_t = 0.01)]
    zeta: f64,
    /// Comma-separated ζ list: emit a per-column sweep table instead.
    #[arg(long)]
    sweep: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ParamsOnlyArgs {
    #[arg(long)]
    params: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long)]
    data: PathBuf,
    /// Estimation config JSON, e.g. {"n0":150,"seed":1,"zeta":0.01,
    /// "penalty_mode":"dynamic","initial_theta":"auto"}.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BootstrapArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    config: PathBuf,
    /// Bootstrap replications (overrides the config value).
    #[arg(long)]
    reps: Option<usize>,
    /// Resample size (defaults to the input sample size).
    #[arg(long)]
    size: Option<usize>,
    /// JSON report path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional summary table CSV (parameter,true,est,median,sd,q1,q3).
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct LevyArgs {
    #[arg(long)]
    params: PathBuf,
    #[arg(long, default_value_t = 200.0)]
    truncation: f64,
    #[arg(long, default_value_t = 16384)]
    nodes: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parameter file payload: the two schemas are told apart by the
/// `marginals` key.
enum ParamsFile {
    Univariate(UnivariateParams),
    Multivariate(MultivariateParams),
}

fn load_params(path: &Path) -> Result<ParamsFile> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading parameter file {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", path.display()))?;
    if value.get("marginals").is_some() {
        let p: MultivariateParams = serde_json::from_value(value)?;
        p.validate().map_err(|e| anyhow!("{e}"))?;
        Ok(ParamsFile::Multivariate(p))
    } else {
        let p: UnivariateParams = serde_json::from_value(value)?;
        p.validate().map_err(|e| anyhow!("{e}"))?;
        Ok(ParamsFile::Univariate(p))
    }
}

fn load_sample(path: &Path) -> Result<SampleMatrix> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading data file {}", path.display()))?;
    SampleMatrix::from_csv(&text).map_err(|e| anyhow!("{e}"))
}

fn load_config(path: &Path) -> Result<EstimateConfig> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}

/// Atomic write: temp file in the target directory, then rename.
fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
            let tmp = match dir {
                Some(d) => d.join(format!(
                    ".{}.tmp",
                    path.file_name().unwrap_or_default().to_string_lossy()
                )),
                None => PathBuf::from(format!(
                    ".{}.tmp",
                    path.file_name().unwrap_or_default().to_string_lossy()
                )),
            };
            fs::write(&tmp, content)
                .with_context(|| format!("writing {}", tmp.display()))?;
            fs::rename(&tmp, path)
                .with_context(|| format!("renaming into {}", path.display()))?;
            Ok(())
        }
    }
}

fn json_report<T: Serialize>(body: &T, seed: Option<u64>) -> Result<String> {
    let mut value = serde_json::to_value(body)?;
    let meta = json!({
        "seed": seed,
        "version": env!("CARGO_PKG_VERSION"),
    });
    if let Some(obj) = value.as_object_mut() {
        obj.insert("meta".into(), meta);
    } else {
        value = json!({ "result": value, "meta": meta });
    }
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    Ok(text)
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    let outcome = run(cli);
    eprintln!("elapsed: {} ms", started.elapsed().as_millis());
    if let Err(e) = outcome {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(args) => {
            let mut rng = ChaCha12Rng::seed_from_u64(args.seed);
            let matrix = match load_params(&args.params)? {
                ParamsFile::Univariate(p) => {
                    SampleMatrix::from_column(p.sample(args.count, &mut rng))
                }
                ParamsFile::Multivariate(p) => p.sample(args.count, &mut rng),
            };
            write_output(args.out.as_deref(), &matrix.to_csv())
        }
        Command::Tails(args) => {
            let sample = load_sample(&args.data)?;
            let body = match &args.sweep {
                None => {
                    let fits: Vec<tails::EmpiricalTailFit> = (0..sample.n_cols())
                        .map(|j| {
                            tails::fit_tail_exponents(&sample.column(j), args.zeta)
                                .map_err(|e| anyhow!("column {}: {e}", j + 1))
                        })
                        .collect::<Result<_>>()?;
                    json!({ "columns": fits })
                }
                Some(list) => {
                    let zetas: Vec<f64> = list
                        .split(',')
                        .map(|z| z.trim().parse::<f64>().context("parsing --sweep"))
                        .collect::<Result<_>>()?;
                    let table: Vec<serde_json::Value> = (0..sample.n_cols())
                        .map(|j| {
                            let entries: Vec<serde_json::Value> =
                                tails::zeta_sweep(&sample.column(j), &zetas)
                                    .into_iter()
                                    .map(|r| match r {
                                        Ok(fit) => json!(fit),
                                        Err(e) => json!({ "error": e.to_string() }),
                                    })
                                    .collect();
                            json!({ "column": j + 1, "sweep": entries })
                        })
                        .collect();
                    json!({ "columns": table })
                }
            };
            write_output(args.out.as_deref(), &json_report(&body, None)?)
        }
        Command::Strip(args) => {
            let p = match load_params(&args.params)? {
                ParamsFile::Univariate(p) => p,
                ParamsFile::Multivariate(_) => {
                    bail!("strip expects univariate parameters; pass one marginal at a time")
                }
            };
            let strip = p.fundamental_strip().map_err(|e| anyhow!("{e}"))?;
            let tails = p.tail_exponents().map_err(|e| anyhow!("{e}"))?;
            let body = json!({
                "lower": strip.lower,
                "upper": strip.upper,
                "case": strip.case_tag,
                "lower_is_solution": strip.lower_is_solution,
                "upper_is_solution": strip.upper_is_solution,
                "q_star": tails.q_star,
                "r_star": tails.r_star,
            });
            write_output(args.out.as_deref(), &json_report(&body, None)?)
        }
        Command::Moments(args) => {
            let body = match load_params(&args.params)? {
                ParamsFile::Univariate(p) => serde_json::to_value(p.moments())?,
                ParamsFile::Multivariate(p) => serde_json::to_value(p.moments())?,
            };
            write_output(args.out.as_deref(), &json_report(&body, None)?)
        }
        Command::Estimate(args) => {
            let sample = load_sample(&args.data)?;
            let config = load_config(&args.config)?;
            let report = estimate(&sample, &config).map_err(|e| anyhow!("{e}"))?;
            write_output(args.out.as_deref(), &json_report(&report, Some(config.seed))?)
        }
        Command::Bootstrap(args) => {
            let sample = load_sample(&args.data)?;
            let config = load_config(&args.config)?;
            let reps = args.reps.unwrap_or(config.replications);
            let size = args
                .size
                .or(config.resample_size)
                .unwrap_or_else(|| sample.n_rows());
            let summary =
                bootstrap_study(&sample, &config, reps, size).map_err(|e| anyhow!("{e}"))?;
            if let Some(csv_path) = &args.csv {
                write_output(Some(csv_path), &summary.to_csv())?;
            }
            write_output(args.out.as_deref(), &json_report(&summary, Some(config.seed))?)
        }
        Command::Levy(args) => {
            let p = match load_params(&args.params)? {
                ParamsFile::Univariate(p) => p,
                ParamsFile::Multivariate(_) => {
                    bail!("levy expects univariate parameters")
                }
            };
            let curve =
                mixedts::levy::levy_density(&p, args.truncation, args.nodes).map_err(|e| anyhow!("{e}"))?;
            if curve.truncation_warning {
                eprintln!(
                    "warning: |Phi''(±T)| above 1e-6·|Phi''(0)|; consider a larger --truncation"
                );
            }
            write_output(args.out.as_deref(), &curve.to_csv())
        }
    }
}
