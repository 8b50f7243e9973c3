//! Multivariate MixedTS with common-factor Gamma mixing.
//!
//! Component `i` reads `Y_i = μ_i + β_i V_i + √V_i · X_i` with
//! `V_i = G_i + a_i Z`, `G_i ~ Γ(l_i, m_i)`, `Z ~ Γ(n, k)` independent and
//! `a_i = k / m_i`, so that `a_i Z ~ Γ(n, m_i)` and the marginal mixing law
//! closes to `V_i ~ Γ(l_i + n, m_i)`. The shared factor `Z` is the sole
//! source of cross-component dependence; `k` is a pure gauge (it cancels
//! from every observable quantity) and is conventionally set to one.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::cts::{self, CtsParams};
use crate::error::{Error, Result};
use crate::sample::SampleMatrix;
use crate::univariate::UnivariateParams;

/// Parameter block of one component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginalParams {
    pub mu: f64,
    pub beta: f64,
    #[serde(flatten)]
    pub cts: CtsParams,
    /// Idiosyncratic Gamma shape, `> 0`.
    pub l: f64,
    /// Gamma rate shared by `G_i` and `a_i Z`, `> 0`.
    pub m: f64,
}

/// Parameters of an N-dimensional MixedTS–Γ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultivariateParams {
    pub marginals: Vec<MarginalParams>,
    /// Common-factor Gamma shape, `> 0`.
    pub n: f64,
    /// Common-factor Gamma rate, `> 0` (gauge parameter; defaults to one).
    #[serde(default = "default_k")]
    pub k: f64,
}

fn default_k() -> f64 {
    1.0
}

/// Analytic means, covariance matrix and marginal third/fourth central
/// moments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSummary {
    pub means: Vec<f64>,
    pub covariance: Vec<Vec<f64>>,
    pub central_m3: Vec<f64>,
    pub central_m4: Vec<f64>,
}

/// Skewness-sign regime governing which covariance bound is finite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SkewRegime {
    BothNonneg,
    BothNonpos,
    Mixed,
}

/// Covariance bounds between two components; infinite endpoints are
/// represented by `±f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovarianceBounds {
    pub lower: f64,
    pub upper: f64,
    pub beta_star_i: f64,
    pub beta_star_j: f64,
    pub skew_regime: SkewRegime,
}

impl MultivariateParams {
    pub fn new(marginals: Vec<MarginalParams>, n: f64, k: f64) -> Result<Self> {
        let p = Self { marginals, n, k };
        p.validate()?;
        Ok(p)
    }

    /// The common-factor construction is stated for N ≥ 2; N = 1 is
    /// accepted so the estimation layer can reuse this type for univariate
    /// fits (the factor then merely splits the marginal Gamma shape).
    pub fn validate(&self) -> Result<()> {
        if self.marginals.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one marginal block required".into(),
            ));
        }
        for (i, blk) in self.marginals.iter().enumerate() {
            blk.cts.validate()?;
            if (blk.cts.alpha - 1.0).abs() < 1e-9 {
                return Err(Error::UnsupportedAlpha(blk.cts.alpha));
            }
            if !blk.mu.is_finite() || !blk.beta.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "marginal {i}: mu and beta must be finite"
                )));
            }
            if !blk.l.is_finite() || blk.l <= 0.0 || !blk.m.is_finite() || blk.m <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "marginal {i}: gamma shape l and rate m must be positive"
                )));
            }
        }
        // n = 0 is the degenerate no-common-factor case; the estimation
        // layer relies on it for univariate fits
        if !self.n.is_finite() || self.n < 0.0 || !self.k.is_finite() || self.k <= 0.0 {
            return Err(Error::InvalidParameter(
                "common factor shape n must be nonnegative and rate k positive".into(),
            ));
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.marginals.len()
    }

    /// `a_i = k / m_i`, the factor loading making `a_i Z ~ Γ(n, m_i)`.
    pub fn factor_loading(&self, i: usize) -> f64 {
        self.k / self.marginals[i].m
    }

    /// The implied univariate law of component `i`:
    /// `MixedTS(μ_i, β_i, α_i, λ₊,i, λ₋,i) – Γ(l_i + n, m_i)`.
    pub fn implied_marginal(&self, i: usize) -> Result<UnivariateParams> {
        let blk = &self.marginals[i];
        UnivariateParams::new(blk.mu, blk.beta, blk.cts, blk.l + self.n, blk.m)
    }

    /// Joint characteristic function
    /// `φ_Y(t) = e^{iΣ t_h μ_h} · e^{Φ_Z(Σ_h a_h s_h)} · Π_h e^{Φ_{G_h}(s_h)}`
    /// with `s_h = i t_h β_h + L_stdCTS(t_h)`.
    ///
    /// `Re(s_h) ≤ 0` keeps both Gamma cumulants on the principal branch.
    pub fn joint_characteristic_function(&self, t: &[f64]) -> Complex64 {
        assert_eq!(t.len(), self.dimension(), "frequency vector length");
        let mut drift = Complex64::new(0.0, 0.0);
        let mut factor_arg = Complex64::new(0.0, 0.0);
        let mut idio = Complex64::new(0.0, 0.0);
        for (h, blk) in self.marginals.iter().enumerate() {
            let s = Complex64::new(0.0, t[h] * blk.beta)
                + cts::char_exponent_lenient(&blk.cts, t[h]);
            drift += Complex64::new(0.0, t[h] * blk.mu);
            factor_arg += s * self.factor_loading(h);
            let ratio = Complex64::new(blk.m, 0.0) / (Complex64::new(blk.m, 0.0) - s);
            idio += ratio.ln() * blk.l;
        }
        let factor_ratio =
            Complex64::new(self.k, 0.0) / (Complex64::new(self.k, 0.0) - factor_arg);
        (drift + factor_ratio.ln() * self.n + idio).exp()
    }

    /// Means, covariance matrix and marginal third/fourth central moments.
    #[allow(clippy::needless_range_loop)]
    pub fn moments(&self) -> MomentSummary {
        let dim = self.dimension();
        let mut means = Vec::with_capacity(dim);
        let mut m3 = Vec::with_capacity(dim);
        let mut m4 = Vec::with_capacity(dim);
        let mut cov = vec![vec![0.0; dim]; dim];
        for (i, blk) in self.marginals.iter().enumerate() {
            let s = blk.l + self.n; // marginal Gamma shape
            let m = blk.m;
            let beta = blk.beta;
            let alpha = blk.cts.alpha;
            let d3 = (2.0 - alpha) * blk.cts.delta3();
            let d4 = (3.0 - alpha) * (2.0 - alpha) * blk.cts.delta4();
            means.push(blk.mu + beta * s / m);
            cov[i][i] = (1.0 + beta * beta / m) * s / m;
            m3.push((d3 + (3.0 + 2.0 * beta * beta / m) * beta / m) * s / m);
            m4.push(
                beta.powi(4) * (3.0 + 6.0 / s) * (s / (m * m)).powi(2)
                    + 6.0 * beta * beta * s * (s + 2.0) / m.powi(3)
                    + 4.0 * beta * d3 * s / (m * m)
                    + d4 * s / m
                    + 3.0 * s * (s + 1.0) / (m * m),
            );
            for j in 0..i {
                let cij = beta * self.marginals[j].beta * self.n / (m * self.marginals[j].m);
                cov[i][j] = cij;
                cov[j][i] = cij;
            }
        }
        MomentSummary {
            means,
            covariance: cov,
            central_m3: m3,
            central_m4: m4,
        }
    }

    /// Bounds of the covariance `σ_ij` as `β_i, β_j` range over the region
    /// keeping the current marginal skewness signs.
    ///
    /// `β★` is the unique root of the strictly increasing cubic
    /// `g(β) = (2-α)·(λ₊^{α-3} - λ₋^{α-3})/(λ₊^{α-2} + λ₋^{α-2}) + 3β/m + 2β³/m²`.
    pub fn covariance_bounds(&self, i: usize, j: usize) -> Result<CovarianceBounds> {
        if i == j {
            return Err(Error::InvalidParameter(
                "covariance bounds need two distinct components".into(),
            ));
        }
        let dim = self.dimension();
        if i >= dim || j >= dim {
            return Err(Error::InvalidParameter(format!(
                "component index out of range: ({i}, {j}) with N = {dim}"
            )));
        }
        let beta_star_i = beta_star(&self.marginals[i].cts, self.marginals[i].m)?;
        let beta_star_j = beta_star(&self.marginals[j].cts, self.marginals[j].m)?;
        let moments = self.moments();
        let sign = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x.signum() };
        let (si, sj) = (sign(moments.central_m3[i]), sign(moments.central_m3[j]));
        // exact zeros sit on the boundary of both one-sided regimes; they
        // are reported as BothNonneg by convention
        let regime = if si >= 0.0 && sj >= 0.0 {
            SkewRegime::BothNonneg
        } else if si <= 0.0 && sj <= 0.0 {
            SkewRegime::BothNonpos
        } else {
            SkewRegime::Mixed
        };
        let finite = beta_star_i * beta_star_j * self.n
            / (self.marginals[i].m * self.marginals[j].m);
        let (lower, upper) = match regime {
            SkewRegime::BothNonneg => (finite, f64::INFINITY),
            SkewRegime::BothNonpos => (f64::NEG_INFINITY, finite),
            SkewRegime::Mixed => (f64::NEG_INFINITY, f64::INFINITY),
        };
        Ok(CovarianceBounds {
            lower,
            upper,
            beta_star_i,
            beta_star_j,
            skew_regime: regime,
        })
    }

    /// Draws `count` i.i.d. vectors:
    /// `G_i ~ Γ(l_i, m_i)`, `Z ~ Γ(n, k)`, `V_i = G_i + a_i Z`,
    /// `X_i | V_i ~ stdCTS`, `Y_i = μ_i + β_i V_i + √V_i X_i`.
    pub fn sample<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> SampleMatrix {
        let dim = self.dimension();
        let idio: Vec<Gamma<f64>> = self
            .marginals
            .iter()
            .map(|blk| Gamma::new(blk.l, 1.0 / blk.m).expect("validated shape/scale"))
            .collect();
        let factor = (self.n > 0.0).then(|| Gamma::new(self.n, 1.0 / self.k).expect("validated shape/scale"));
        let mut data = Vec::with_capacity(count * dim);
        for _ in 0..count {
            let z: f64 = factor.as_ref().map_or(0.0, |f| f.sample(rng));
            for (i, blk) in self.marginals.iter().enumerate() {
                let g: f64 = idio[i].sample(rng);
                let v = g + self.factor_loading(i) * z;
                data.push(blk.mu + blk.beta * v + cts::conditional_scaled_draw(&blk.cts, v, rng));
            }
        }
        SampleMatrix::from_flat(data, count, dim)
    }
}

/// Unique real root of the skewness cubic, closed form with a bisection
/// fallback on a geometrically grown bracket.
fn beta_star(cts: &CtsParams, m: f64) -> Result<f64> {
    let c0 = (2.0 - cts.alpha) * cts.delta3();
    // 2β³/m² + 3β/m + c0 = 0  ⇔  β³ + pβ + q = 0
    let p = 3.0 * m / 2.0;
    let q = c0 * m * m / 2.0;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3); // > 0: one real root
    let sq = disc.sqrt();
    let root = (-q / 2.0 + sq).cbrt() + (-q / 2.0 - sq).cbrt();
    let g = |beta: f64| c0 + 3.0 * beta / m + 2.0 * beta.powi(3) / (m * m);
    if root.is_finite() && g(root).abs() < 1e-9 * (1.0 + c0.abs()) {
        return Ok(root);
    }
    let mut half_width = 1.0 + c0.abs();
    for _ in 0..200 {
        if g(-half_width) < 0.0 && g(half_width) > 0.0 {
            let (mut lo, mut hi) = (-half_width, half_width);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if g(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-14 * half_width {
                    break;
                }
            }
            return Ok(0.5 * (lo + hi));
        }
        half_width *= 2.0;
    }
    Err(Error::Numerical("beta-star bracket not found".into()))
}
