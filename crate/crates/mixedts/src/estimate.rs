//! Parameter estimation by characteristic-function distance with a
//! tail-matching penalty.
//!
//! The objective is the Monte Carlo approximation
//!
//! ```text
//! (1/n₀) Σ_j |φ̂_m̃(t_j) - φ(t_j; θ)|²  +  λ_k · h(Δq★, Δr★)
//! ```
//!
//! with `t_j` drawn once from an N-variate standard normal (the Gaussian
//! weight π(t) absorbed into the node distribution and then frozen),
//! `φ̂_m̃(t) = (1/m̃) Σ_j e^{-i⟨t, X_j⟩}` compared against the conjugate of
//! the model characteristic function, and
//! `h = Σ_i (Δq★_i)² + (Δr★_i)²` the squared mismatch between the
//! empirical tail exponents of the data and the theoretical exponents of
//! the candidate parameters. λ_k is refreshed each simplex iteration from
//! the previous iteration's mismatch (dynamic mode) or escalated on a
//! geometric schedule (sequential mode).
//!
//! The common-factor rate `k` is a gauge freedom of the model and is fixed
//! at one throughout estimation.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multivariate::{MarginalParams, MultivariateParams};
use crate::sample::SampleMatrix;
use crate::simplex::{self, BiObjective, PenaltySchedule, SimplexOptions};
use crate::tails;
use crate::univariate::TailExponents;
use crate::cts::CtsParams;

/// Default seed stamped on runs that do not specify one.
pub const DEFAULT_SEED: u64 = 20150407;

/// Frozen Monte Carlo evaluation nodes for the CF-distance integral.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    points: Vec<Vec<f64>>,
    seed: u64,
}

impl QuadratureGrid {
    /// Draws `n0` nodes from the `dim`-variate standard normal. The grid is
    /// drawn once per estimation run and never redrawn mid-run.
    pub fn draw(n0: usize, dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let points = (0..n0)
            .map(|_| (0..dim).map(|_| rng.sample(StandardNormal)).collect())
            .collect();
        Self { points, seed }
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    pub fn dimension(&self) -> usize {
        self.points.first().map_or(0, |p| p.len())
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Order-sensitive digest of the node coordinates.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for p in &self.points {
            for &x in p {
                h = (h ^ x.to_bits()).wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        h ^ self.seed
    }
}

/// The frozen ingredients of one estimation problem.
#[derive(Debug, Clone)]
pub struct Objective {
    sample: SampleMatrix,
    grid: QuadratureGrid,
    /// Initial penalty multiplier λ₀.
    pub penalty_weight: f64,
    /// Empirical `(q★, r★)` targets, one per component.
    pub target_tails: Vec<TailExponents>,
    emp_cf: Vec<Complex64>,
}

impl Objective {
    pub fn new(
        sample: SampleMatrix,
        grid: QuadratureGrid,
        penalty_weight: f64,
        target_tails: Vec<TailExponents>,
    ) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::InsufficientData("empty sample".into()));
        }
        if grid.dimension() != sample.n_cols() {
            return Err(Error::InvalidParameter(format!(
                "grid dimension {} does not match sample dimension {}",
                grid.dimension(),
                sample.n_cols()
            )));
        }
        if penalty_weight < 0.0 {
            return Err(Error::InvalidParameter(
                "penalty weight must be nonnegative".into(),
            ));
        }
        if target_tails.len() != sample.n_cols() {
            return Err(Error::InvalidParameter(
                "one tail target per component required".into(),
            ));
        }
        let emp_cf = grid
            .points
            .iter()
            .map(|t| empirical_cf(&sample, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            sample,
            grid,
            penalty_weight,
            target_tails,
            emp_cf,
        })
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn sample(&self) -> &SampleMatrix {
        &self.sample
    }

    #[cfg(test)]
    pub(crate) fn override_empirical_cf(&mut self, values: Vec<Complex64>) {
        assert_eq!(values.len(), self.grid.n_points());
        self.emp_cf = values;
    }
}

/// Empirical characteristic function `φ̂_m̃(t) = (1/m̃) Σ_j e^{-i⟨t, X_j⟩}`.
pub fn empirical_cf(sample: &SampleMatrix, t: &[f64]) -> Result<Complex64> {
    if sample.is_empty() {
        return Err(Error::InsufficientData("empty sample".into()));
    }
    if t.len() != sample.n_cols() {
        return Err(Error::InvalidParameter(format!(
            "frequency vector length {} does not match sample dimension {}",
            t.len(),
            sample.n_cols()
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for row in sample.rows_iter() {
        let dot: f64 = row.iter().zip(t).map(|(x, ti)| x * ti).sum();
        acc += Complex64::from_polar(1.0, -dot);
    }
    Ok(acc / sample.n_rows() as f64)
}

/// `(1/n₀) Σ_j |φ̂(t_j) - conj(φ(t_j; θ))|²` over the frozen grid.
///
/// The conjugate pairs the `e^{-i⟨t,X⟩}` empirical convention with the
/// `e^{+i⟨t,Y⟩}` model convention; it is the unique pairing under which the
/// distance vanishes at the data-generating parameters.
pub fn cf_distance(objective: &Objective, theta: &MultivariateParams) -> f64 {
    debug_assert_eq!(theta.dimension(), objective.grid.dimension());
    let mut acc = 0.0;
    for (t, emp) in objective.grid.points.iter().zip(&objective.emp_cf) {
        let model = theta.joint_characteristic_function(t).conj();
        acc += (emp - model).norm_sqr();
    }
    acc / objective.grid.n_points() as f64
}

/// Tail-mismatch penalty `h = Σ_i (q★ᵗʰᵉᵒ_i - q★ᵉᵐᵖ_i)² + (r★ᵗʰᵉᵒ_i - r★ᵉᵐᵖ_i)²`.
pub fn penalty(theta: &MultivariateParams, target_tails: &[TailExponents]) -> Result<f64> {
    let mut acc = 0.0;
    for (i, target) in target_tails.iter().enumerate() {
        let theo = theta.implied_marginal(i)?.tail_exponents()?;
        acc += (theo.q_star - target.q_star).powi(2) + (theo.r_star - target.r_star).powi(2);
    }
    Ok(acc)
}

/// How the penalty multiplier evolves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PenaltyMode {
    /// λ_k := h_{k-1} within a single simplex run (λ₀ = 1).
    #[default]
    Dynamic,
    /// A sequence of fixed-λ runs with λ escalated tenfold per stage until
    /// the stage objectives agree within 1e-6.
    Sequential,
}

/// Starting point policy.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialTheta {
    /// The literal string "auto": method-of-moments initialization with
    /// α = 1.5, λ₊ = λ₋ = 1.
    Keyword(String),
    Params(MultivariateParams),
}

impl Default for InitialTheta {
    fn default() -> Self {
        InitialTheta::Keyword("auto".into())
    }
}

/// Estimation configuration (also the CLI JSON schema).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimateConfig {
    /// Monte Carlo nodes of the CF-distance integral.
    #[serde(default = "default_n0")]
    pub n0: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Quantile level of the empirical tail regressions.
    #[serde(default = "default_zeta")]
    pub zeta: f64,
    #[serde(default)]
    pub penalty_mode: PenaltyMode,
    #[serde(default)]
    pub initial_theta: InitialTheta,
    /// Simplex iteration budget; defaults to 2000 per free parameter.
    #[serde(default)]
    pub max_iter: Option<usize>,
    /// Stop when the simplex objective spread falls below this.
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Bootstrap replications (bootstrap runs only).
    #[serde(default = "default_replications")]
    pub replications: usize,
    /// Bootstrap resample size; defaults to the input sample size.
    #[serde(default)]
    pub resample_size: Option<usize>,
    /// Reference parameters for the "true" column of bootstrap summaries.
    #[serde(default)]
    pub true_theta: Option<MultivariateParams>,
}

fn default_n0() -> usize {
    150
}
fn default_seed() -> u64 {
    DEFAULT_SEED
}
fn default_zeta() -> f64 {
    0.01
}
fn default_tol() -> f64 {
    1e-8
}
fn default_replications() -> usize {
    100
}

impl Default for EstimateConfig {
    fn default() -> Self {
        Self {
            n0: default_n0(),
            seed: default_seed(),
            zeta: default_zeta(),
            penalty_mode: PenaltyMode::default(),
            initial_theta: InitialTheta::default(),
            max_iter: None,
            tol: default_tol(),
            replications: default_replications(),
            resample_size: None,
            true_theta: None,
        }
    }
}

/// Outcome of one estimation run.
#[derive(Debug, Clone, Serialize)]
pub struct EstimationReport {
    pub theta_hat: MultivariateParams,
    /// Final combined objective (distance + λ·penalty).
    pub objective_value: f64,
    /// Best combined objective per simplex iteration.
    pub objective_trace: Vec<f64>,
    /// Penalty of the best vertex per simplex iteration.
    pub penalty_trace: Vec<f64>,
    /// Multiplier per simplex iteration (constant segments in sequential
    /// mode).
    pub lambda_trace: Vec<f64>,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    /// Digest of the frozen quadrature grid the run used.
    pub grid_fingerprint: u64,
    /// Empirical tail targets the penalty was matched against.
    pub target_tails: Vec<TailExponents>,
}

/// Minimizes the penalized CF distance over the transformed parameter
/// space with Nelder–Mead.
pub fn estimate(sample: &SampleMatrix, config: &EstimateConfig) -> Result<EstimationReport> {
    ensure_two_distinct_rows(sample)?;
    let dim = sample.n_cols();

    let mut target_tails = Vec::with_capacity(dim);
    for j in 0..dim {
        let fit = tails::fit_tail_exponents(&sample.column(j), config.zeta)?;
        target_tails.push(TailExponents {
            q_star: fit.q_star_hat,
            r_star: fit.r_star_hat,
        });
    }

    let grid = QuadratureGrid::draw(config.n0, dim, config.seed);
    let fingerprint = grid.fingerprint();
    let objective = Objective::new(sample.clone(), grid, 1.0, target_tails.clone())?;

    let theta0 = match &config.initial_theta {
        InitialTheta::Keyword(word) if word == "auto" => auto_initial_theta(sample)?,
        InitialTheta::Keyword(word) => {
            return Err(Error::InvalidParameter(format!(
                "unknown initial_theta keyword {word:?} (expected \"auto\")"
            )));
        }
        InitialTheta::Params(p) => {
            p.validate()?;
            if p.dimension() != dim {
                return Err(Error::InvalidParameter(format!(
                    "initial theta has {} components, sample has {dim}",
                    p.dimension()
                )));
            }
            p.clone()
        }
    };

    let layout = ThetaLayout::for_dimension(dim);
    let x0 = layout.pack(&theta0);
    let opts = SimplexOptions {
        max_iter: config.max_iter.unwrap_or(2000 * layout.len()),
        tol: config.tol,
        rel_step: 0.05,
        abs_step: 0.05,
    };
    let eval = |x: &[f64]| {
        let theta = layout.unpack(x);
        BiObjective {
            distance: cf_distance(&objective, &theta),
            penalty: penalty(&theta, &objective.target_tails).unwrap_or(f64::MAX / 4.0),
        }
    };

    let mut objective_trace = Vec::new();
    let mut penalty_trace = Vec::new();
    let mut lambda_trace = Vec::new();
    let mut iterations = 0usize;
    let mut evaluations = 0usize;

    let outcome = match config.penalty_mode {
        PenaltyMode::Dynamic => simplex::nelder_mead(
            eval,
            &x0,
            PenaltySchedule::Dynamic {
                lambda0: objective.penalty_weight,
            },
            &opts,
        ),
        PenaltyMode::Sequential => {
            let mut lambda = objective.penalty_weight.max(1.0);
            let mut x_cur = x0.clone();
            let mut prev_level: Option<f64> = None;
            let mut last = None;
            for _stage in 0..8 {
                let out = simplex::nelder_mead(&eval, &x_cur, PenaltySchedule::Fixed(lambda), &opts);
                for t in &out.trace {
                    objective_trace.push(t.best_objective);
                    penalty_trace.push(t.best_penalty);
                    lambda_trace.push(t.lambda);
                }
                iterations += out.iterations;
                evaluations += out.evaluations;
                x_cur = out.best_x.clone();
                let level = out.best.combined(lambda);
                let done = prev_level.is_some_and(|p| (p - level).abs() <= 1e-6);
                prev_level = Some(level);
                last = Some(out);
                if done {
                    break;
                }
                lambda *= 10.0;
            }
            last.expect("at least one sequential stage runs")
        }
    };

    if config.penalty_mode == PenaltyMode::Dynamic {
        for t in &outcome.trace {
            objective_trace.push(t.best_objective);
            penalty_trace.push(t.best_penalty);
            lambda_trace.push(t.lambda);
        }
        iterations = outcome.iterations;
        evaluations = outcome.evaluations;
    }

    debug_assert_eq!(objective.grid().fingerprint(), fingerprint);
    Ok(EstimationReport {
        theta_hat: layout.unpack(&outcome.best_x),
        objective_value: outcome.best.combined(outcome.lambda_final),
        objective_trace,
        penalty_trace,
        lambda_trace,
        iterations,
        evaluations,
        converged: outcome.converged,
        grid_fingerprint: fingerprint,
        target_tails,
    })
}

fn ensure_two_distinct_rows(sample: &SampleMatrix) -> Result<()> {
    if sample.n_rows() < 2 {
        return Err(Error::InsufficientData(
            "estimation needs at least two observations".into(),
        ));
    }
    let first = sample.row(0);
    if sample.rows_iter().any(|r| r != first) {
        Ok(())
    } else {
        Err(Error::InsufficientData(
            "estimation needs at least two distinct observations".into(),
        ))
    }
}

/// Method-of-moments starting point with α = 1.5, λ₊ = λ₋ = 1 per
/// component and a unit Gamma rate gauge.
fn auto_initial_theta(sample: &SampleMatrix) -> Result<MultivariateParams> {
    let dim = sample.n_cols();
    let n_rows = sample.n_rows() as f64;
    let mut means = vec![0.0; dim];
    let mut vars = vec![0.0; dim];
    let mut m3 = vec![0.0; dim];
    for j in 0..dim {
        let col = sample.column(j);
        let mean = col.iter().sum::<f64>() / n_rows;
        let var = col.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n_rows;
        let third = col.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n_rows;
        means[j] = mean;
        vars[j] = var.max(1e-8);
        m3[j] = third;
    }
    let betas: Vec<f64> = (0..dim)
        .map(|j| (m3[j] / (3.0 * vars[j])).clamp(-2.0, 2.0))
        .collect();
    let shapes: Vec<f64> = (0..dim)
        .map(|j| (vars[j] / (1.0 + betas[j] * betas[j])).max(0.1))
        .collect();
    let min_shape = shapes.iter().cloned().fold(f64::INFINITY, f64::min);

    let n = if dim >= 2 {
        // covariance pairs vote on the common-factor share
        let mut votes = Vec::new();
        for i in 0..dim {
            let ci = sample.column(i);
            for j in (i + 1)..dim {
                if betas[i].abs() * betas[j].abs() < 1e-3 {
                    continue;
                }
                let cj = sample.column(j);
                let cov = ci
                    .iter()
                    .zip(&cj)
                    .map(|(a, b)| (a - means[i]) * (b - means[j]))
                    .sum::<f64>()
                    / n_rows;
                votes.push(cov / (betas[i] * betas[j]));
            }
        }
        if votes.is_empty() {
            0.3 * min_shape
        } else {
            votes.sort_by(|a, b| a.partial_cmp(b).unwrap());
            votes[votes.len() / 2].clamp(0.05, 0.9 * min_shape)
        }
    } else {
        0.0
    };

    let marginals = (0..dim)
        .map(|j| {
            let l = (shapes[j] - n).max(0.05);
            MarginalParams {
                mu: means[j] - betas[j] * (l + n),
                beta: betas[j],
                cts: CtsParams {
                    alpha: 1.5,
                    lambda_plus: 1.0,
                    lambda_minus: 1.0,
                },
                l,
                m: 1.0,
            }
        })
        .collect();
    MultivariateParams::new(marginals, n, 1.0)
}

/// Bijection between a `MultivariateParams` and the unconstrained simplex
/// coordinates: positivity-constrained parameters are log-transformed, α
/// is logit-mapped onto (0, 2) with exclusion bands of width 1e-3 around
/// the singular points 1 and 2.
struct ThetaLayout {
    dim: usize,
    has_factor: bool,
}

const ALPHA_BAND: f64 = 1e-3;

impl ThetaLayout {
    fn for_dimension(dim: usize) -> Self {
        Self {
            dim,
            has_factor: dim >= 2,
        }
    }

    fn len(&self) -> usize {
        7 * self.dim + usize::from(self.has_factor)
    }

    fn pack(&self, theta: &MultivariateParams) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.len());
        for blk in &theta.marginals {
            let alpha = blk.cts.alpha.clamp(ALPHA_BAND, 2.0 - ALPHA_BAND);
            x.push(blk.mu);
            x.push(blk.beta);
            x.push((alpha / (2.0 - alpha)).ln());
            x.push(blk.cts.lambda_plus.ln());
            x.push(blk.cts.lambda_minus.ln());
            x.push(blk.l.ln());
            x.push(blk.m.ln());
        }
        if self.has_factor {
            x.push(theta.n.max(1e-12).ln());
        }
        x
    }

    fn unpack(&self, x: &[f64]) -> MultivariateParams {
        debug_assert_eq!(x.len(), self.len());
        let mut marginals = Vec::with_capacity(self.dim);
        for c in 0..self.dim {
            let base = 7 * c;
            marginals.push(MarginalParams {
                mu: x[base],
                beta: x[base + 1].clamp(-1e6, 1e6),
                cts: CtsParams {
                    alpha: alpha_from_raw(x[base + 2]),
                    lambda_plus: positive_from_raw(x[base + 3]),
                    lambda_minus: positive_from_raw(x[base + 4]),
                },
                l: positive_from_raw(x[base + 5]),
                m: positive_from_raw(x[base + 6]),
            });
        }
        let n = if self.has_factor {
            positive_from_raw(x[7 * self.dim])
        } else {
            0.0
        };
        MultivariateParams { marginals, n, k: 1.0 }
    }
}

fn alpha_from_raw(w: f64) -> f64 {
    let a = 2.0 / (1.0 + (-w).exp());
    let a = a.clamp(ALPHA_BAND, 2.0 - ALPHA_BAND);
    if (a - 1.0).abs() < ALPHA_BAND {
        if a >= 1.0 {
            1.0 + ALPHA_BAND
        } else {
            1.0 - ALPHA_BAND
        }
    } else {
        a
    }
}

fn positive_from_raw(w: f64) -> f64 {
    w.exp().clamp(1e-8, 1e8)
}

/// One row of a bootstrap summary (one row per parameter).
#[derive(Debug, Clone, Serialize)]
pub struct ParameterSummary {
    pub name: String,
    pub true_value: Option<f64>,
    pub mean: f64,
    pub median: f64,
    pub sd: f64,
    pub quartile1: f64,
    pub quartile3: f64,
}

/// Distribution of the estimators over bootstrap replicates.
#[derive(Debug, Clone, Serialize)]
pub struct BootstrapSummary {
    pub rows: Vec<ParameterSummary>,
    pub replications: usize,
    pub failures: usize,
}

impl BootstrapSummary {
    /// Summary-table CSV: `parameter,true,est,median,sd,q1,q3`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("parameter,true,est,median,sd,q1,q3\n");
        for r in &self.rows {
            let true_s = r
                .true_value
                .map_or(String::new(), |v| format!("{v}"));
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.name, true_s, r.mean, r.median, r.sd, r.quartile1, r.quartile3
            ));
        }
        out
    }
}

/// Parameter names in the summary-table order: per component
/// `(mu_i, beta_i, m_i, l_i, alpha_i, lambda_p_i, lambda_m_i)`, then `n`.
pub fn parameter_names(dim: usize) -> Vec<String> {
    let mut names = Vec::with_capacity(7 * dim + 1);
    for i in 1..=dim {
        names.push(format!("mu_{i}"));
        names.push(format!("beta_{i}"));
        names.push(format!("m_{i}"));
        names.push(format!("l_{i}"));
        names.push(format!("alpha_{i}"));
        names.push(format!("lambda_p_{i}"));
        names.push(format!("lambda_m_{i}"));
    }
    if dim >= 2 {
        names.push("n".into());
    }
    names
}

/// Parameter values in the same order as [`parameter_names`].
pub fn parameter_values(theta: &MultivariateParams) -> Vec<f64> {
    let mut v = Vec::new();
    for blk in &theta.marginals {
        v.push(blk.mu);
        v.push(blk.beta);
        v.push(blk.m);
        v.push(blk.l);
        v.push(blk.cts.alpha);
        v.push(blk.cts.lambda_plus);
        v.push(blk.cts.lambda_minus);
    }
    if theta.dimension() >= 2 {
        v.push(theta.n);
    }
    v
}

/// Resamples rows with replacement, estimates each replicate and
/// aggregates the estimator distribution per parameter.
///
/// Replicates run in parallel with per-replicate seeds, so the output is
/// deterministic regardless of thread scheduling. Failed replicates are
/// excluded and counted; more than 20% failures aborts the study.
pub fn bootstrap_study(
    sample: &SampleMatrix,
    config: &EstimateConfig,
    replications: usize,
    resample_size: usize,
) -> Result<BootstrapSummary> {
    if replications == 0 {
        return Err(Error::InvalidParameter(
            "at least one bootstrap replication required".into(),
        ));
    }
    if resample_size < 2 {
        return Err(Error::InvalidParameter(
            "bootstrap resample size must be at least 2".into(),
        ));
    }
    ensure_two_distinct_rows(sample)?;
    let n_rows = sample.n_rows();

    let run_replicate = |rep: usize| {
        let rep_seed = config
            .seed
            .wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(rep as u64 + 1));
        let mut rng = ChaCha12Rng::seed_from_u64(rep_seed);
        let indices: Vec<usize> =
            (0..resample_size).map(|_| rng.random_range(0..n_rows)).collect();
        let resampled = sample.select_rows(&indices);
        let rep_config = EstimateConfig {
            seed: rep_seed,
            ..config.clone()
        };
        estimate(&resampled, &rep_config).map(|r| parameter_values(&r.theta_hat))
    };
    // per-replicate seeds keep the outcome identical with or without the
    // thread pool
    #[cfg(feature = "parallel")]
    let outcomes: Vec<Result<Vec<f64>>> =
        (0..replications).into_par_iter().map(run_replicate).collect();
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<Result<Vec<f64>>> = (0..replications).map(run_replicate).collect();

    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(replications);
    let mut failures = 0usize;
    for o in outcomes {
        match o {
            Ok(v) => vectors.push(v),
            Err(_) => failures += 1,
        }
    }
    if failures * 5 > replications {
        return Err(Error::Numerical(format!(
            "{failures} of {replications} bootstrap replicates failed"
        )));
    }

    let names = parameter_names(sample.n_cols());
    let truth = config.true_theta.as_ref().map(parameter_values);
    let mut rows = Vec::with_capacity(names.len());
    for (idx, name) in names.iter().enumerate() {
        let mut vals: Vec<f64> = vectors.iter().map(|v| v[idx]).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let count = vals.len();
        let mean = vals.iter().sum::<f64>() / count as f64;
        let sd = if count >= 2 {
            (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count as f64 - 1.0)).sqrt()
        } else {
            0.0 // single replicate: dispersion undefined, reported as 0
        };
        rows.push(ParameterSummary {
            name: name.clone(),
            true_value: truth.as_ref().map(|t| t[idx]),
            mean,
            median: sorted_quantile(&vals, 0.5),
            sd,
            quartile1: sorted_quantile(&vals, 0.25),
            quartile3: sorted_quantile(&vals, 0.75),
        });
    }
    Ok(BootstrapSummary {
        rows,
        replications: vectors.len(),
        failures,
    })
}

/// Linear-interpolation quantile of an already sorted slice.
fn sorted_quantile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = p * (n as f64 - 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    let w = h - lo as f64;
    sorted[lo] * (1.0 - w) + sorted[hi] * w
}
