//! Browser bindings for the interactive MixedTS demo page.
//!
//! Three operations are exposed: the recovered Lévy density curve, the
//! empirical/theoretical tail diagnostic, and a sampling histogram with
//! moment comparison. Each returns JSON so the page stays a plain static
//! file with no framework.

// the exported functions take flat scalar parameter lists on purpose: the
// page calls them straight from sliders
#![allow(clippy::too_many_arguments)]

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;
use wasm_bindgen::prelude::*;

use mixedts::cts::CtsParams;
use mixedts::tails;
use mixedts::univariate::UnivariateParams;

fn params(
    mu: f64,
    beta: f64,
    alpha: f64,
    lambda_plus: f64,
    lambda_minus: f64,
    a: f64,
    b: f64,
) -> Result<UnivariateParams, String> {
    UnivariateParams::new(
        mu,
        beta,
        CtsParams::new(alpha, lambda_plus, lambda_minus).map_err(|e| e.to_string())?,
        a,
        b,
    )
    .map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct LevyCurveOut {
    x: Vec<f64>,
    g: Vec<f64>,
    truncation_warning: bool,
}

/// Lévy density on a symmetric grid, `|x| <= x_max`, as JSON
/// `{x: [...], g: [...], truncation_warning}`.
pub fn levy_curve_json(
    mu: f64,
    beta: f64,
    alpha: f64,
    lambda_plus: f64,
    lambda_minus: f64,
    a: f64,
    b: f64,
    x_max: f64,
) -> Result<String, String> {
    let p = params(mu, beta, alpha, lambda_plus, lambda_minus, a, b)?;
    let curve = mixedts::levy::levy_density(&p, 200.0, 1 << 13).map_err(|e| e.to_string())?;
    let mut out = LevyCurveOut {
        x: Vec::new(),
        g: Vec::new(),
        truncation_warning: curve.truncation_warning,
    };
    for (x, g) in curve.abscissae.iter().zip(curve.values.iter()) {
        if x.abs() <= x_max {
            out.x.push(*x);
            out.g.push(g.max(0.0));
        }
    }
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct TailOut {
    left_x: Vec<f64>,
    left_log_cdf: Vec<f64>,
    right_x: Vec<f64>,
    right_log_surv: Vec<f64>,
    q_hat: f64,
    r_hat: f64,
    q_star: f64,
    r_star: f64,
    strip_case: String,
}

/// Simulates `count` draws and reports the log-tail point clouds, the
/// regression estimates and the theoretical strip exponents.
pub fn tail_diagnostic_json(
    mu: f64,
    beta: f64,
    alpha: f64,
    lambda_plus: f64,
    lambda_minus: f64,
    a: f64,
    b: f64,
    count: usize,
    seed: u64,
    zeta: f64,
) -> Result<String, String> {
    let p = params(mu, beta, alpha, lambda_plus, lambda_minus, a, b)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let xs = p.sample(count.clamp(100, 2_000_000), &mut rng);
    let fit = tails::fit_tail_exponents(&xs, zeta).map_err(|e| e.to_string())?;
    let strip = p.fundamental_strip().map_err(|e| e.to_string())?;
    let exps = p.tail_exponents().map_err(|e| e.to_string())?;

    let ecdf = tails::ecdf(&xs).map_err(|e| e.to_string())?;
    let points = ecdf.points();
    let x_lo = ecdf.quantile_point(zeta);
    let x_hi = ecdf.quantile_point(1.0 - zeta);
    let mut out = TailOut {
        left_x: Vec::new(),
        left_log_cdf: Vec::new(),
        right_x: Vec::new(),
        right_log_surv: Vec::new(),
        q_hat: fit.q_star_hat,
        r_hat: fit.r_star_hat,
        q_star: exps.q_star,
        r_star: exps.r_star,
        strip_case: format!("{:?}", strip.case_tag),
    };
    for &(x, f) in &points {
        if x <= x_lo {
            out.left_x.push(x);
            out.left_log_cdf.push(f.ln());
        }
        if x >= x_hi && f < 1.0 {
            out.right_x.push(x);
            out.right_log_surv.push((1.0 - f).ln());
        }
    }
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct HistogramOut {
    edges: Vec<f64>,
    density: Vec<f64>,
    sample_moments: [f64; 4],
    analytic_moments: [f64; 4],
}

/// Histogram of `count` draws plus the first four sample vs analytic
/// moments (mean, variance, m3, m4).
pub fn histogram_json(
    mu: f64,
    beta: f64,
    alpha: f64,
    lambda_plus: f64,
    lambda_minus: f64,
    a: f64,
    b: f64,
    count: usize,
    seed: u64,
    bins: usize,
) -> Result<String, String> {
    let p = params(mu, beta, alpha, lambda_plus, lambda_minus, a, b)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let xs = p.sample(count.clamp(100, 2_000_000), &mut rng);
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m3 = xs.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n;
    let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;

    // clip the plotted range to ±6 standard deviations around the mean
    let lo = mean - 6.0 * var.sqrt();
    let hi = mean + 6.0 * var.sqrt();
    let bins = bins.clamp(10, 400);
    let width = (hi - lo) / bins as f64;
    let mut density = vec![0.0; bins];
    for &x in &xs {
        if x >= lo && x < hi {
            density[((x - lo) / width) as usize] += 1.0;
        }
    }
    for d in &mut density {
        *d /= n * width;
    }
    let edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * width).collect();
    let am = p.moments();
    let out = HistogramOut {
        edges,
        density,
        sample_moments: [mean, var, m3, m4],
        analytic_moments: [am.mean, am.variance, am.central_m3, am.central_m4],
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn levy_curve(
    mu: f64,
    beta: f64,
    alpha: f64,
    lambda_plus: f64,
    lambda_minus: f64,
    a: f64,
    b: f64,
    x_max: f64,
) -> Result<String, JsValue> {
    levy_curve_json(mu, beta, alpha, lambda_plus, lambda_minus, a, b, x_max)
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn tail_diagnostic(
    mu: f64,
    beta: f64,
    alpha: f64,
    lambda_plus: f64,
    lambda_minus: f64,
    a: f64,
    b: f64,
    count: usize,
    seed: u64,
    zeta: f64,
) -> Result<String, JsValue> {
    tail_diagnostic_json(
        mu,
        beta,
        alpha,
        lambda_plus,
        lambda_minus,
        a,
        b,
        count,
        seed,
        zeta,
    )
    .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn histogram(
    mu: f64,
    beta: f64,
    alpha: f64,
    lambda_plus: f64,
    lambda_minus: f64,
    a: f64,
    b: f64,
    count: usize,
    seed: u64,
    bins: usize,
) -> Result<String, JsValue> {
    histogram_json(
        mu, beta, alpha, lambda_plus, lambda_minus, a, b, count, seed, bins,
    )
    .map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levy_curve_json_is_well_formed() {
        let text = levy_curve_json(0.0, 0.0, 1.25, 1.9, 1.9, 1.0, 1.0, 6.0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let xs = v["x"].as_array().unwrap();
        let gs = v["g"].as_array().unwrap();
        assert_eq!(xs.len(), gs.len());
        assert!(xs.len() > 50);
        assert!(gs.iter().all(|g| g.as_f64().unwrap() >= 0.0));
    }

    #[test]
    fn tail_diagnostic_reports_both_windows() {
        let text =
            tail_diagnostic_json(0.0, 0.0, 1.25, 1.2, 1.9, 1.0, 1.0, 20_000, 5, 0.02).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!((v["q_star"].as_f64().unwrap() - 1.4105).abs() < 1e-3);
        assert_eq!(v["r_star"].as_f64().unwrap(), 1.2);
        assert_eq!(v["strip_case"], "Case3");
        assert!(v["left_x"].as_array().unwrap().len() >= 2);
        assert!(v["right_x"].as_array().unwrap().len() >= 2);
    }

    #[test]
    fn histogram_matches_moments_roughly() {
        let text = histogram_json(1.0, 0.0, 1.25, 1.5, 1.5, 1.0, 1.0, 50_000, 3, 60).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let sm = v["sample_moments"].as_array().unwrap();
        let am = v["analytic_moments"].as_array().unwrap();
        assert!((sm[0].as_f64().unwrap() - am[0].as_f64().unwrap()).abs() < 0.05);
        assert!((sm[1].as_f64().unwrap() - am[1].as_f64().unwrap()).abs() < 0.1);
        // the histogram integrates to roughly one
        let edges = v["edges"].as_array().unwrap();
        let width = edges[1].as_f64().unwrap() - edges[0].as_f64().unwrap();
        let mass: f64 = v["density"]
            .as_array()
            .unwrap()
            .iter()
            .map(|d| d.as_f64().unwrap() * width)
            .sum();
        assert!((mass - 1.0).abs() < 0.05, "mass {mass}");
    }
}
