//! Univariate MixedTS with Gamma mixing: `Y = μ + βV + √V·X`,
//! `V ~ Γ(a, b)` (shape/rate), `X | V ~ stdCTS(α, λ₊√V, λ₋√V)`.
//!
//! The cumulant function composes as `Φ_Y(u) = μu + Φ_V(βu + Φ_H(u))` with
//! `Φ_V(s) = a·log(b/(b-s))`, which drives everything here: analytic
//! moments, the fundamental strip of the moment generating function and the
//! exponential tail exponents read off its endpoints.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::cts::{self, CtsParams};
use crate::error::{Error, Result};

/// Parameters of a univariate MixedTS–Γ(a,b) law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnivariateParams {
    /// Location.
    pub mu: f64,
    /// Loading of the mixing variable.
    pub beta: f64,
    /// Conditional stdCTS parameters.
    #[serde(flatten)]
    pub cts: CtsParams,
    /// Gamma shape of the mixing variable, `> 0`.
    pub a: f64,
    /// Gamma rate of the mixing variable, `> 0`.
    pub b: f64,
}

/// First four moments (mean, variance, third and fourth central moments).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnivariateMoments {
    pub mean: f64,
    pub variance: f64,
    pub central_m3: f64,
    pub central_m4: f64,
}

/// The four configurations of the fundamental strip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StripCase {
    /// Both endpoints are the tempering rates: strip `[-λ₋, λ₊]`.
    Case1,
    /// Right endpoint solves `βu + Φ_H(u) = b`: strip `[-λ₋, u₊)`.
    Case2,
    /// Left endpoint solves `βu + Φ_H(u) = b`: strip `(u₋, λ₊]`.
    Case3,
    /// Both endpoints solve `βu + Φ_H(u) = b`: strip `(u₋, u₊)`.
    Case4,
}

/// Endpoints of the fundamental strip of `E[e^{uY}]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StripResult {
    pub lower: f64,
    pub upper: f64,
    pub case_tag: StripCase,
    /// Whether `lower` solves `βu + Φ_H(u) = b` (otherwise it is `-λ₋`).
    pub lower_is_solution: bool,
    /// Whether `upper` solves `βu + Φ_H(u) = b` (otherwise it is `λ₊`).
    pub upper_is_solution: bool,
}

/// Exponential decay rates of the two tails:
/// `log F(-x) ~ -q★·x` and `log(1 - F(x)) ~ -r★·x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailExponents {
    pub q_star: f64,
    pub r_star: f64,
}

impl UnivariateParams {
    pub fn new(mu: f64, beta: f64, cts: CtsParams, a: f64, b: f64) -> Result<Self> {
        let p = Self { mu, beta, cts, a, b };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.cts.validate()?;
        if (self.cts.alpha - 1.0).abs() < 1e-9 {
            return Err(Error::UnsupportedAlpha(self.cts.alpha));
        }
        if !self.mu.is_finite() || !self.beta.is_finite() {
            return Err(Error::InvalidParameter(
                "mu and beta must be finite".into(),
            ));
        }
        if !self.a.is_finite() || self.a <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gamma shape a must be positive, got {}",
                self.a
            )));
        }
        if !self.b.is_finite() || self.b <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gamma rate b must be positive, got {}",
                self.b
            )));
        }
        Ok(())
    }

    /// Cumulant function `Φ_Y(u) = μu + a·log(b / (b - (βu + Φ_H(u))))`.
    ///
    /// Errors when `Re(u)` leaves the tempering strip or the inner argument
    /// reaches the moment-explosion boundary `Re(βu + Φ_H(u)) ≥ b`.
    pub fn cumulant(&self, u: Complex64) -> Result<Complex64> {
        let inner = u * self.beta + cts::cts_cumulant(&self.cts, u)?;
        if inner.re >= self.b {
            return Err(Error::Domain(format!(
                "inner argument {} reaches the moment explosion boundary b = {}",
                inner.re, self.b
            )));
        }
        let ratio = Complex64::new(self.b, 0.0) / (Complex64::new(self.b, 0.0) - inner);
        Ok(u * self.mu + ratio.ln() * self.a)
    }

    /// Real-axis cumulant, defined on the interior of the fundamental strip.
    pub fn cumulant_real(&self, u: f64) -> Result<f64> {
        let inner = self.beta * u + cts::cts_cumulant_real(&self.cts, u)?;
        if inner >= self.b {
            return Err(Error::Domain(format!(
                "inner argument {} reaches the moment explosion boundary b = {}",
                inner, self.b
            )));
        }
        Ok(self.mu * u + self.a * (self.b / (self.b - inner)).ln())
    }

    /// Characteristic function `φ_Y(t) = exp(itμ + Φ_V(itβ + L_stdCTS(t)))`.
    ///
    /// Total for all finite `t`; at α = 2 the Gaussian reduction of the
    /// conditional exponent is used.
    pub fn characteristic_function(&self, t: f64) -> Complex64 {
        let s = Complex64::new(0.0, t * self.beta) + cts::char_exponent_lenient(&self.cts, t);
        let ratio = Complex64::new(self.b, 0.0) / (Complex64::new(self.b, 0.0) - s);
        (Complex64::new(0.0, t * self.mu) + ratio.ln() * self.a).exp()
    }

    /// Analytic mean, variance and third/fourth central moments.
    pub fn moments(&self) -> UnivariateMoments {
        let (a, b) = (self.a, self.b);
        let beta = self.beta;
        let alpha = self.cts.alpha;
        let ev = a / b;
        let var_v = a / (b * b);
        let m3_v = 2.0 * a / b.powi(3);
        let m4_v = (3.0 * a * a + 6.0 * a) / b.powi(4);
        let ev2 = a * (a + 1.0) / (b * b);
        // E[(V - E V)^2 V] from the raw Gamma moments
        let cross = a * (a + 2.0) / b.powi(3);
        let d3 = (2.0 - alpha) * self.cts.delta3();
        let d4 = (3.0 - alpha) * (2.0 - alpha) * self.cts.delta4();

        let mean = self.mu + beta * ev;
        let variance = beta * beta * var_v + ev;
        let central_m3 = beta.powi(3) * m3_v + 3.0 * beta * var_v + d3 * ev;
        let central_m4 = beta.powi(4) * m4_v
            + 6.0 * beta * beta * cross
            + 4.0 * beta * d3 * var_v
            + 3.0 * ev2
            + d4 * ev;
        UnivariateMoments {
            mean,
            variance,
            central_m3,
            central_m4,
        }
    }

    /// `G(u) = βu + Φ_H(u) - b`, the function whose roots bound the strip.
    fn strip_function(&self, u: f64) -> f64 {
        self.beta * u + cts::cts_cumulant_real(&self.cts, u).expect("u inside tempering strip")
            - self.b
    }

    /// Classifies the fundamental strip of `E[e^{uY}]` and solves for the
    /// interior endpoints where the classification requires it.
    ///
    /// `G` is convex with `G(0) = -b < 0`, so each sign change against an
    /// endpoint brackets exactly one root; bisection is run to `1e-12`.
    pub fn fundamental_strip(&self) -> Result<StripResult> {
        self.validate()?;
        self.cts.require_transform_alpha()?;
        let lo_end = -self.cts.lambda_minus;
        let hi_end = self.cts.lambda_plus;
        let g_lo = self.strip_function(lo_end);
        let g_hi = self.strip_function(hi_end);

        let solve = |a: f64, b: f64| -> Result<f64> {
            bisect(|u| self.strip_function(u), a, b)
        };

        let (lower, upper, case_tag, lower_is_solution, upper_is_solution) =
            match (g_lo < 0.0, g_hi < 0.0) {
                (true, true) => (lo_end, hi_end, StripCase::Case1, false, false),
                (true, false) => (lo_end, solve(0.0, hi_end)?, StripCase::Case2, false, true),
                (false, true) => (solve(lo_end, 0.0)?, hi_end, StripCase::Case3, true, false),
                (false, false) => (
                    solve(lo_end, 0.0)?,
                    solve(0.0, hi_end)?,
                    StripCase::Case4,
                    true,
                    true,
                ),
            };
        Ok(StripResult {
            lower,
            upper,
            case_tag,
            lower_is_solution,
            upper_is_solution,
        })
    }

    /// Exponential tail decay rates, the strip endpoints with flipped sign
    /// on the left: `q★ = -lower`, `r★ = upper`.
    pub fn tail_exponents(&self) -> Result<TailExponents> {
        let strip = self.fundamental_strip()?;
        Ok(TailExponents {
            q_star: -strip.lower,
            r_star: strip.upper,
        })
    }

    /// Draws `count` independent variates.
    pub fn sample<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<f64> {
        let gamma = Gamma::new(self.a, 1.0 / self.b).expect("validated shape/scale");
        (0..count)
            .map(|_| {
                let v: f64 = gamma.sample(rng);
                self.mu + self.beta * v + cts::conditional_scaled_draw(&self.cts, v, rng)
            })
            .collect()
    }

    /// Parameters of the Lévy-process increment over a span of length `t`:
    /// `Y_t ~ MixedTS(μt, β, α, λ₊, λ₋) - Γ(at, b)`.
    pub fn levy_increment_params(&self, t: f64) -> Result<UnivariateParams> {
        if !t.is_finite() || t <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "increment span must be positive, got {t}"
            )));
        }
        Ok(Self {
            mu: self.mu * t,
            beta: self.beta,
            cts: self.cts,
            a: self.a * t,
            b: self.b,
        })
    }
}

/// Bisection on a bracketing interval `[lo, hi]` with `f(lo)·f(hi) ≤ 0`.
fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Numerical(format!(
            "bisection bracket [{lo}, {hi}] does not straddle a root"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo < 1e-12 {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
