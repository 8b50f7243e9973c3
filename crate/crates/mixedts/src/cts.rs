//! Standardized Classical Tempered Stable (stdCTS) primitives.
//!
//! The stdCTS(α, λ₊, λ₋) law is the zero-mean, unit-variance classical
//! tempered stable distribution with Lévy density
//!
//! ```text
//! ν(x) = c₀ e^{-λ₊ x} x^{-1-α} 1_{x>0} + c₀ e^{-λ₋|x|} |x|^{-1-α} 1_{x<0},
//! c₀   = 1 / (Γ(2-α) (λ₊^{α-2} + λ₋^{α-2})),
//! ```
//!
//! whose cumulant generating function Φ_H and characteristic exponent
//! L_stdCTS(u) = Φ_H(iu) are available in closed form for α ∈ (0,2)\{1}.
//! Every MixedTS quantity in this crate is assembled from these primitives.
//!
//! All transform functions are pure and safe to call concurrently. The
//! samplers touch no state beyond the random generator passed in; parallel
//! callers must supply independently seeded generators.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::fourier;
use crate::gammainc;

/// Tolerance around the α = 1 singularity of the closed-form exponents.
const ALPHA_ONE_TOL: f64 = 1e-9;

/// Per-draw third-cumulant budget of the small-jump Gaussian completion
/// used by the α ∈ (1,2) sampling path.
const SMALL_JUMP_KAPPA3_BUDGET: f64 = 1e-3;

/// Hard ceiling on the expected jump count of a single α ∈ (1,2) draw;
/// the threshold rises (and the Gaussian completion absorbs more) once a
/// parameter corner would otherwise demand unbounded work.
const MAX_EXPECTED_JUMPS: f64 = 20_000.0;

/// Parameters of a standardized Classical Tempered Stable distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CtsParams {
    /// Stability index, `0 < alpha <= 2`. The closed-form transforms
    /// additionally require `alpha != 1`; `alpha = 2` is the Gaussian case
    /// and is only accepted by the sampling and moment paths.
    pub alpha: f64,
    /// Tempering rate of the right tail, `> 0`.
    pub lambda_plus: f64,
    /// Tempering rate of the left tail, `> 0`.
    pub lambda_minus: f64,
}

impl CtsParams {
    pub fn new(alpha: f64, lambda_plus: f64, lambda_minus: f64) -> Result<Self> {
        let p = Self {
            alpha,
            lambda_plus,
            lambda_minus,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || self.alpha <= 0.0 || self.alpha > 2.0 {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 2], got {}",
                self.alpha
            )));
        }
        if !self.lambda_plus.is_finite() || self.lambda_plus <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "lambda_plus must be positive, got {}",
                self.lambda_plus
            )));
        }
        if !self.lambda_minus.is_finite() || self.lambda_minus <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "lambda_minus must be positive, got {}",
                self.lambda_minus
            )));
        }
        Ok(())
    }

    /// Rejects the stability indices not covered by the closed-form
    /// exponents: α = 1 (log case) and α = 2 (Gaussian reduction).
    pub(crate) fn require_transform_alpha(&self) -> Result<()> {
        if (self.alpha - 1.0).abs() < ALPHA_ONE_TOL {
            return Err(Error::UnsupportedAlpha(self.alpha));
        }
        if self.alpha == 2.0 {
            return Err(Error::UnsupportedAlpha(self.alpha));
        }
        Ok(())
    }

    pub(crate) fn is_gaussian(&self) -> bool {
        self.alpha == 2.0
    }

    /// `λ₊^{α-2} + λ₋^{α-2}`, the normalization making the variance one.
    pub(crate) fn tempering_norm(&self) -> f64 {
        self.lambda_plus.powf(self.alpha - 2.0) + self.lambda_minus.powf(self.alpha - 2.0)
    }

    /// Lévy scale `c₀` of the standardized law.
    pub(crate) fn levy_scale(&self) -> f64 {
        1.0 / (gamma(2.0 - self.alpha) * self.tempering_norm())
    }

    /// `(λ₊^{α-3} - λ₋^{α-3}) / (λ₊^{α-2} + λ₋^{α-2})`; third-cumulant shape.
    pub(crate) fn delta3(&self) -> f64 {
        (self.lambda_plus.powf(self.alpha - 3.0) - self.lambda_minus.powf(self.alpha - 3.0))
            / self.tempering_norm()
    }

    /// `(λ₊^{α-4} + λ₋^{α-4}) / (λ₊^{α-2} + λ₋^{α-2})`; fourth-cumulant shape.
    pub(crate) fn delta4(&self) -> f64 {
        (self.lambda_plus.powf(self.alpha - 4.0) + self.lambda_minus.powf(self.alpha - 4.0))
            / self.tempering_norm()
    }

    /// Third and fourth cumulants of stdCTS(α, λ₊, λ₋).
    pub fn standardized_cumulants(&self) -> (f64, f64) {
        let k3 = (2.0 - self.alpha) * self.delta3();
        let k4 = (3.0 - self.alpha) * (2.0 - self.alpha) * self.delta4();
        (k3, k4)
    }

    /// Returns the parameters with both tempering rates scaled by
    /// `sqrt(v)`, the conditional law of `X | V = v` in a MixedTS.
    pub fn scaled_by_sqrt(&self, v: f64) -> Self {
        let s = v.sqrt();
        Self {
            alpha: self.alpha,
            lambda_plus: self.lambda_plus * s,
            lambda_minus: self.lambda_minus * s,
        }
    }
}

/// Cumulant generating function Φ_H(u) of stdCTS on the closed strip
/// `Re(u) ∈ [-λ₋, λ₊]`, principal branch for complex powers.
pub fn cts_cumulant(params: &CtsParams, u: Complex64) -> Result<Complex64> {
    params.validate()?;
    params.require_transform_alpha()?;
    if u.re < -params.lambda_minus || u.re > params.lambda_plus {
        return Err(Error::Domain(format!(
            "Re(u) = {} outside the fundamental strip [{}, {}]",
            u.re, -params.lambda_minus, params.lambda_plus
        )));
    }
    let a = params.alpha;
    let lp = params.lambda_plus;
    let lm = params.lambda_minus;
    let norm = params.tempering_norm();
    let t1 = ((Complex64::new(lp, 0.0) - u).powf(a) - lp.powf(a)
        + (Complex64::new(lm, 0.0) + u).powf(a)
        - lm.powf(a))
        / (a * (a - 1.0) * norm);
    let t2 = u * (lp.powf(a - 1.0) - lm.powf(a - 1.0)) / ((a - 1.0) * norm);
    Ok(t1 + t2)
}

/// Φ_H on the real axis, kept in real arithmetic. Valid on the closed
/// strip `u ∈ [-λ₋, λ₊]` where both power bases are nonnegative.
pub fn cts_cumulant_real(params: &CtsParams, u: f64) -> Result<f64> {
    params.validate()?;
    params.require_transform_alpha()?;
    if u < -params.lambda_minus || u > params.lambda_plus {
        return Err(Error::Domain(format!(
            "u = {} outside the fundamental strip [{}, {}]",
            u, -params.lambda_minus, params.lambda_plus
        )));
    }
    let a = params.alpha;
    let lp = params.lambda_plus;
    let lm = params.lambda_minus;
    let norm = params.tempering_norm();
    let t1 = ((lp - u).powf(a) - lp.powf(a) + (lm + u).powf(a) - lm.powf(a))
        / (a * (a - 1.0) * norm);
    let t2 = u * (lp.powf(a - 1.0) - lm.powf(a - 1.0)) / ((a - 1.0) * norm);
    Ok(t1 + t2)
}

/// Characteristic exponent `L_stdCTS(u) = Φ_H(iu)` for real frequency `u`.
pub fn cts_characteristic_exponent(params: &CtsParams, u: f64) -> Result<Complex64> {
    params.validate()?;
    params.require_transform_alpha()?;
    Ok(char_exponent_unchecked(params, u))
}

/// Characteristic exponent with the Gaussian reduction at α = 2 built in.
/// Callers must have validated the parameters (α ≠ 1).
pub(crate) fn char_exponent_lenient(params: &CtsParams, u: f64) -> Complex64 {
    if params.is_gaussian() {
        Complex64::new(-0.5 * u * u, 0.0)
    } else {
        char_exponent_unchecked(params, u)
    }
}

fn char_exponent_unchecked(params: &CtsParams, u: f64) -> Complex64 {
    let a = params.alpha;
    let lp = params.lambda_plus;
    let lm = params.lambda_minus;
    let norm = params.tempering_norm();
    let iu = Complex64::new(0.0, u);
    let t1 = ((Complex64::new(lp, 0.0) - iu).powf(a) - lp.powf(a)
        + (Complex64::new(lm, 0.0) + iu).powf(a)
        - lm.powf(a))
        / (a * (a - 1.0) * norm);
    let t2 = iu * (lp.powf(a - 1.0) - lm.powf(a - 1.0)) / ((a - 1.0) * norm);
    t1 + t2
}

/// First derivative Φ'_H(u) on the open strip `u ∈ (-λ₋, λ₊)`.
pub fn cts_cumulant_d1(params: &CtsParams, u: f64) -> Result<f64> {
    check_open_strip(params, u)?;
    let a = params.alpha;
    let lp = params.lambda_plus;
    let lm = params.lambda_minus;
    let norm = params.tempering_norm();
    Ok(
        ((lp - u).powf(a - 1.0) - lp.powf(a - 1.0) - (lm + u).powf(a - 1.0) + lm.powf(a - 1.0))
            / ((1.0 - a) * norm),
    )
}

/// Second derivative Φ''_H(u) on the open strip `u ∈ (-λ₋, λ₊)`.
pub fn cts_cumulant_d2(params: &CtsParams, u: f64) -> Result<f64> {
    check_open_strip(params, u)?;
    let a = params.alpha;
    let lp = params.lambda_plus;
    let lm = params.lambda_minus;
    Ok(((lp - u).powf(a - 2.0) + (lm + u).powf(a - 2.0)) / params.tempering_norm())
}

fn check_open_strip(params: &CtsParams, u: f64) -> Result<()> {
    params.validate()?;
    params.require_transform_alpha()?;
    if u <= -params.lambda_minus || u >= params.lambda_plus {
        return Err(Error::Domain(format!(
            "u = {} outside the open strip ({}, {}); the derivatives diverge at the endpoints",
            u, -params.lambda_minus, params.lambda_plus
        )));
    }
    Ok(())
}

/// Which generation algorithm `cts_sample_with` uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplerKind {
    /// Exact exponential-tilting rejection for α < 1; for α ∈ (1,2) the
    /// compensated jumps above an adaptive threshold are drawn exactly and
    /// the sub-threshold remainder is replaced by a Gaussian with matching
    /// mean and variance (third-cumulant defect below
    /// `SMALL_JUMP_KAPPA3_BUDGET` per draw).
    #[default]
    JumpRejection,
    /// Inverse-CDF sampling from an FFT tabulation of `exp(L_stdCTS)`.
    InverseCdf,
}

/// Draws `count` variates from `stdCTS(α, λ₊√scale_v, λ₋√scale_v)` with the
/// default generator.
pub fn cts_sample<R: Rng + ?Sized>(
    params: &CtsParams,
    scale_v: f64,
    count: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    cts_sample_with(params, scale_v, count, rng, SamplerKind::default())
}

/// Draws `count` variates from `stdCTS(α, λ₊√scale_v, λ₋√scale_v)`.
pub fn cts_sample_with<R: Rng + ?Sized>(
    params: &CtsParams,
    scale_v: f64,
    count: usize,
    rng: &mut R,
    kind: SamplerKind,
) -> Result<Vec<f64>> {
    params.validate()?;
    if !scale_v.is_finite() || scale_v <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "scale_v must be positive, got {scale_v}"
        )));
    }
    if !params.is_gaussian() && (params.alpha - 1.0).abs() < ALPHA_ONE_TOL {
        return Err(Error::UnsupportedAlpha(params.alpha));
    }
    match kind {
        SamplerKind::JumpRejection => {
            let sqrt_v = scale_v.sqrt();
            Ok((0..count)
                .map(|_| conditional_scaled_draw(params, scale_v, rng) / sqrt_v)
                .collect())
        }
        SamplerKind::InverseCdf => {
            if params.is_gaussian() {
                return Ok((0..count).map(|_| rng.sample(StandardNormal)).collect());
            }
            let table = InverseCdfTable::build(&params.scaled_by_sqrt(scale_v))?;
            Ok((0..count).map(|_| table.draw(rng)).collect())
        }
    }
}

/// One draw of `W = sqrt(v) X` where `X | V = v ~ stdCTS(α, λ₊√v, λ₋√v)`.
///
/// `W` is a zero-mean CTS variate with unit tempering rates and Lévy scale
/// `v c₀`, i.e. the increment of the unit CTS Lévy process over a time span
/// of length `v`; sampling it directly avoids dividing and re-multiplying
/// by `sqrt(v)` in the MixedTS assembly `Y = μ + βV + W`.
pub(crate) fn conditional_scaled_draw<R: Rng + ?Sized>(
    params: &CtsParams,
    v: f64,
    rng: &mut R,
) -> f64 {
    if params.is_gaussian() {
        let z: f64 = rng.sample(StandardNormal);
        return v.sqrt() * z;
    }
    let v = v.max(1e-300);
    let alpha = params.alpha;
    let c_t = v * params.levy_scale();
    if alpha < 1.0 {
        let g1 = gamma(1.0 - alpha);
        let mean_p = c_t * g1 * params.lambda_plus.powf(alpha - 1.0);
        let mean_m = c_t * g1 * params.lambda_minus.powf(alpha - 1.0);
        let tp = one_sided_subordinated(alpha, params.lambda_plus, c_t, rng);
        let tm = one_sided_subordinated(alpha, params.lambda_minus, c_t, rng);
        (tp - mean_p) - (tm - mean_m)
    } else {
        one_sided_compensated(alpha, params.lambda_plus, c_t, rng)
            - one_sided_compensated(alpha, params.lambda_minus, c_t, rng)
    }
}

/// Standard positive α-stable variate with Laplace transform
/// `E[e^{-sS}] = exp(-s^α)`, α ∈ (0,1), by Kanter's representation.
fn kanter_positive_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let theta = rng.random::<f64>().clamp(1e-12, 1.0 - 1e-12) * std::f64::consts::PI;
    let e = -(rng.random::<f64>().clamp(1e-300, 1.0)).ln();
    let s1 = (alpha * theta).sin() / theta.sin().powf(1.0 / alpha);
    let s2 = (((1.0 - alpha) * theta).sin() / e).powf((1.0 - alpha) / alpha);
    s1 * s2
}

/// One-sided tempered stable variate for α ∈ (0,1): Lévy density
/// `c_t e^{-λx} x^{-1-α}` on `(0,∞)`, no drift. Exact via exponential
/// tilting of a positive stable; the time span is split into chunks so the
/// per-chunk acceptance rate stays at least `e^{-1}`.
fn one_sided_subordinated<R: Rng + ?Sized>(alpha: f64, lam: f64, c_t: f64, rng: &mut R) -> f64 {
    let gamma_rate = c_t * gamma(1.0 - alpha) / alpha;
    let total_tilt = gamma_rate * lam.powf(alpha);
    let n_chunks = (total_tilt.ceil() as usize).max(1);
    let scale = (gamma_rate / n_chunks as f64).powf(1.0 / alpha);
    let mut total = 0.0;
    for _ in 0..n_chunks {
        loop {
            let s = scale * kanter_positive_stable(alpha, rng);
            if rng.random::<f64>() <= (-lam * s).exp() {
                total += s;
                break;
            }
        }
    }
    total
}

/// Fully compensated one-sided tempered stable variate for α ∈ (1,2):
/// cumulant function `c_t Γ(-α) [(λ-u)^α - λ^α + u α λ^{α-1}]`.
///
/// Jumps above an adaptive threshold ε form a compound Poisson part drawn
/// exactly (tempered Pareto rejection); jumps below ε are replaced by a
/// Gaussian with the exact small-jump mean and variance.
fn one_sided_compensated<R: Rng + ?Sized>(alpha: f64, lam: f64, c_t: f64, rng: &mut R) -> f64 {
    let mut eps =
        ((3.0 - alpha) * SMALL_JUMP_KAPPA3_BUDGET / c_t).powf(1.0 / (3.0 - alpha));
    eps = eps.min(0.5 / lam);
    // expected jumps ≈ c_t ε^{-α}/α; keep a single draw's work bounded
    let eps_floor = (c_t / (alpha * MAX_EXPECTED_JUMPS)).powf(1.0 / alpha);
    eps = eps.max(eps_floor);
    let z = lam * eps;
    let rate = c_t * lam.powf(alpha) * gammainc::upper(-alpha, z);
    let mean_tail = c_t * lam.powf(alpha - 1.0) * gammainc::upper(1.0 - alpha, z);
    let var_small = c_t * lam.powf(alpha - 2.0) * gammainc::lower(2.0 - alpha, z);

    let mut total = 0.0;
    if rate > 0.0 {
        let n = Poisson::new(rate).map(|p| p.sample(rng)).unwrap_or(0.0) as u64;
        for _ in 0..n {
            loop {
                let x = eps * rng.random::<f64>().clamp(1e-300, 1.0).powf(-1.0 / alpha);
                if rng.random::<f64>() <= (-lam * (x - eps)).exp() {
                    total += x;
                    break;
                }
            }
        }
    }
    let noise: f64 = rng.sample(StandardNormal);
    total - mean_tail + var_small.max(0.0).sqrt() * noise
}

/// Inverse-CDF table built from an FFT inversion of `exp(L_stdCTS)`.
struct InverseCdfTable {
    xs: Vec<f64>,
    cdf: Vec<f64>,
}

impl InverseCdfTable {
    fn build(params: &CtsParams) -> Result<Self> {
        params.require_transform_alpha()?;
        // frequency truncation: walk out until the CF is negligible
        let mut t = 64.0;
        while char_exponent_unchecked(params, t).re > (1e-12f64).ln() && t < 1e7 {
            t *= 2.0;
        }
        let m = if t > 512.0 { 1 << 16 } else { 1 << 14 };
        let du = 2.0 * t / m as f64;
        let vals: Vec<Complex64> = (0..m)
            .map(|k| char_exponent_unchecked(params, -t + k as f64 * du).exp())
            .collect();
        let (xs, dens) = fourier::transform_on_dual_grid(&vals, du, -t, -1.0);
        let dx = xs[1] - xs[0];
        let dens: Vec<f64> = dens.iter().map(|d| d.re.max(0.0)).collect();
        // trapezoid cumulative mass so cdf[i] approximates F(xs[i])
        let mut cdf = Vec::with_capacity(xs.len());
        let mut acc = 0.0;
        cdf.push(0.0);
        for i in 1..dens.len() {
            acc += 0.5 * (dens[i - 1] + dens[i]) * dx;
            cdf.push(acc);
        }
        let total = *cdf.last().unwrap();
        if !(total.is_finite() && total > 0.5) {
            return Err(Error::Numerical(format!(
                "inverse-CDF tabulation failed: mass {total}"
            )));
        }
        for c in &mut cdf {
            *c /= total;
        }
        Ok(Self { xs, cdf })
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u = rng.random::<f64>();
        let idx = self.cdf.partition_point(|&c| c < u);
        if idx == 0 {
            return self.xs[0];
        }
        if idx >= self.cdf.len() {
            return *self.xs.last().unwrap();
        }
        let (c0, c1) = (self.cdf[idx - 1], self.cdf[idx]);
        let w = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
        self.xs[idx - 1] + w * (self.xs[idx] - self.xs[idx - 1])
    }
}
