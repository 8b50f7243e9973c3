//! Empirical tail-exponent estimation.
//!
//! For exponentially decaying tails, `log F(x) ≈ q★·x + const` as
//! `x → -∞` and `log(1 - F(x)) ≈ -r★·x + const` as `x → +∞`. The
//! estimators regress the log-ECDF (resp. log survival) on the
//! observations inside the lower (resp. upper) ζ-quantile window and read
//! the exponent off the slope. Both regressions carry an intercept: the
//! `o(x)` remainder of the asymptotic expansion otherwise biases the slope
//! at finite range.

use serde::Serialize;

use crate::error::{Error, Result};

/// Right-continuous empirical distribution function.
#[derive(Debug, Clone)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

/// Builds the ECDF `F̂(x) = (1/n) Σ 1{x_i ≤ x}` of a nonempty sample.
pub fn ecdf(sample: &[f64]) -> Result<Ecdf> {
    if sample.is_empty() {
        return Err(Error::InsufficientData("ecdf of an empty sample".into()));
    }
    if sample.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("non-finite observation".into()));
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(Ecdf { sorted })
}

impl Ecdf {
    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// `F̂(x)`, the fraction of observations `≤ x`.
    pub fn value(&self, x: f64) -> f64 {
        let count = self.sorted.partition_point(|&v| v <= x);
        count as f64 / self.sorted.len() as f64
    }

    /// Distinct observations paired with their ECDF values, ascending.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let n = self.sorted.len() as f64;
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(self.sorted.len());
        for (i, &x) in self.sorted.iter().enumerate() {
            // with ties, F̂ jumps to the rank of the last equal value
            if i + 1 < self.sorted.len() && self.sorted[i + 1] == x {
                continue;
            }
            out.push((x, (i + 1) as f64 / n));
        }
        out
    }

    /// Empirical quantile `x̂_ζ = inf{x_i : F̂(x_i) ≥ ζ}`.
    pub fn quantile_point(&self, zeta: f64) -> f64 {
        let n = self.sorted.len() as f64;
        let idx = ((zeta * n).ceil() as usize).clamp(1, self.sorted.len());
        self.sorted[idx - 1]
    }
}

/// Result of the two windowed log-linear regressions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalTailFit {
    pub q_star_hat: f64,
    pub r_star_hat: f64,
    pub zeta: f64,
    /// Points entering the left regression.
    pub n_left: usize,
    /// Points entering the right regression (the top observation, where
    /// the survival function vanishes, never enters).
    pub n_right: usize,
}

/// Estimates `(q★, r★)` from the ζ- and (1-ζ)-quantile windows.
///
/// Points exactly at the quantile cut are included in their window (the
/// windows are closed intervals).
pub fn fit_tail_exponents(sample: &[f64], zeta: f64) -> Result<EmpiricalTailFit> {
    if !(zeta > 0.0 && zeta < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "zeta must lie in (0, 0.5), got {zeta}"
        )));
    }
    let ecdf = ecdf(sample)?;
    let points = ecdf.points();

    let x_lo = ecdf.quantile_point(zeta);
    let x_hi = ecdf.quantile_point(1.0 - zeta);

    let left: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, _)| *x <= x_lo)
        .map(|&(x, f)| (x, f.ln()))
        .collect();
    let right: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, f)| *x >= x_hi && *f < 1.0)
        .map(|&(x, f)| (x, (1.0 - f).ln()))
        .collect();

    // log F̂ increases towards the bulk on the left window, so its slope is
    // +q★; the survival slope on the right window is -r★.
    let q_star_hat = ols_slope(&left).map_err(|e| left_err(e, left.len()))?;
    let r_star_hat = -ols_slope(&right).map_err(|e| right_err(e, right.len()))?;

    Ok(EmpiricalTailFit {
        q_star_hat,
        r_star_hat,
        zeta,
        n_left: left.len(),
        n_right: right.len(),
    })
}

fn left_err(e: Error, n: usize) -> Error {
    match e {
        Error::InsufficientData(_) => {
            Error::InsufficientData(format!("left tail window holds {n} point(s), need 2"))
        }
        other => other,
    }
}

fn right_err(e: Error, n: usize) -> Error {
    match e {
        Error::InsufficientData(_) => {
            Error::InsufficientData(format!("right tail window holds {n} point(s), need 2"))
        }
        other => other,
    }
}

/// Applies [`fit_tail_exponents`] for each ζ; per-entry failures are kept
/// in place so one bad level does not abort the sweep.
pub fn zeta_sweep(sample: &[f64], zetas: &[f64]) -> Vec<Result<EmpiricalTailFit>> {
    zetas
        .iter()
        .map(|&z| fit_tail_exponents(sample, z))
        .collect()
}

/// Least-squares slope of `y` on `x` with intercept.
fn ols_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::InsufficientData("regression needs 2 points".into()));
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &(x, y) in points {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if sxx == 0.0 {
        return Err(Error::Numerical(
            "degenerate regression window: all abscissae equal".into(),
        ));
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;
    use rand_distr::{Distribution, Exp};

    #[test]
    fn ecdf_basics() {
        let e = ecdf(&[3.0, 1.0, 2.0]).unwrap();
        assert_relative_eq!(e.value(2.0), 2.0 / 3.0);
        assert_relative_eq!(e.value(3.0), 1.0);
        assert_relative_eq!(e.value(0.5), 0.0);
        assert!(ecdf(&[]).is_err());
    }

    #[test]
    fn ecdf_quantile_matches_naive_double_loop() {
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        let sample: Vec<f64> = (0..257).map(|_| rng.random::<f64>() * 10.0 - 5.0).collect();
        let e = ecdf(&sample).unwrap();
        for &zeta in &[0.013, 0.1, 0.5, 0.97] {
            // inf{x_i : F̂(x_i) ≥ ζ} by brute force
            let mut best = f64::INFINITY;
            for &xi in &sample {
                let count = sample.iter().filter(|&&xj| xj <= xi).count();
                if count as f64 / sample.len() as f64 >= zeta && xi < best {
                    best = xi;
                }
            }
            assert_eq!(e.quantile_point(zeta), best, "zeta = {zeta}");
        }
    }

    #[test]
    fn exact_linear_tails_recovered() {
        // construct a sample whose ECDF satisfies log F̂ = 2x on the left
        // window and log(1-F̂) = -3x on the right window exactly
        let n = 200usize;
        let mut xs = Vec::with_capacity(n);
        for i in 1..=n {
            let f = i as f64 / n as f64;
            if f <= 0.5 {
                xs.push(f.ln() / 2.0);
            } else {
                // 1 - F̂(x_i) = (n - i)/n
                let surv = (n - i) as f64 / n as f64;
                if surv > 0.0 {
                    xs.push(-surv.ln() / 3.0);
                } else {
                    xs.push(10.0); // top observation, excluded from the fit
                }
            }
        }
        let fit = fit_tail_exponents(&xs, 0.05).unwrap();
        assert_relative_eq!(fit.q_star_hat, 2.0, max_relative = 1e-10);
        assert_relative_eq!(fit.r_star_hat, 3.0, max_relative = 1e-10);
    }

    #[test]
    fn exponential_rate_recovered() {
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        let exp = Exp::new(3.0).unwrap();
        let sample: Vec<f64> = (0..100_000).map(|_| exp.sample(&mut rng)).collect();
        let fit = fit_tail_exponents(&sample, 0.02).unwrap();
        assert!(
            (fit.r_star_hat - 3.0).abs() < 0.3,
            "r_hat = {}",
            fit.r_star_hat
        );
        assert!(fit.n_right >= 2);
    }

    #[test]
    fn scale_equivariance_and_translation_invariance() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let sample: Vec<f64> = (0..5_000)
            .map(|_| rng.random::<f64>().ln() - rng.random::<f64>().ln())
            .collect();
        let base = fit_tail_exponents(&sample, 0.03).unwrap();

        let c = 2.5;
        let scaled: Vec<f64> = sample.iter().map(|x| c * x).collect();
        let fs = fit_tail_exponents(&scaled, 0.03).unwrap();
        assert_relative_eq!(fs.q_star_hat, base.q_star_hat / c, max_relative = 1e-10);
        assert_relative_eq!(fs.r_star_hat, base.r_star_hat / c, max_relative = 1e-10);

        let shifted: Vec<f64> = sample.iter().map(|x| x + 7.25).collect();
        let ft = fit_tail_exponents(&shifted, 0.03).unwrap();
        assert_relative_eq!(ft.q_star_hat, base.q_star_hat, max_relative = 1e-10);
        assert_relative_eq!(ft.r_star_hat, base.r_star_hat, max_relative = 1e-10);
    }

    #[test]
    fn top_observation_never_enters_survival_fit() {
        // 40 points, zeta wide enough that the window includes the maximum
        let xs: Vec<f64> = (0..40).map(|i| i as f64).collect();
        let fit = fit_tail_exponents(&xs, 0.2).unwrap();
        // window [x̂_0.8, x_max] holds 9 points once the max is dropped
        assert_eq!(fit.n_right, 8);
    }

    #[test]
    fn sweep_is_per_entry() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64 * 0.7).sin() * 3.0 + i as f64 * 0.01).collect();
        let out = zeta_sweep(&xs, &[0.05, 0.4, 0.05]);
        assert_eq!(out.len(), 3);
        assert!(out[0].is_ok());
        let single = fit_tail_exponents(&xs, 0.05).unwrap();
        assert_eq!(*out[0].as_ref().unwrap(), single);
        assert_eq!(*out[2].as_ref().unwrap(), single);
        assert!(zeta_sweep(&xs, &[]).is_empty());
        // invalid zeta recorded, not fatal
        let bad = zeta_sweep(&xs, &[0.7]);
        assert!(bad[0].is_err());
    }

    #[test]
    fn degenerate_window_reports_error() {
        let xs = vec![1.0; 50];
        assert!(fit_tail_exponents(&xs, 0.1).is_err());
    }
}
