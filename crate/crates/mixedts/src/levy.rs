//! Numerical recovery of the MixedTS Lévy density.
//!
//! Writing `Φ_Y(u) = log φ_Y(u)` for the characteristic exponent, the
//! Lévy–Khintchine representation gives
//!
//! ```text
//! Φ_Y''(u) = -∫ e^{iux} x² g_Y(x) dx,
//! ```
//!
//! so `x² g_Y(x)` is recovered by a plain Fourier inversion of `-Φ_Y''`
//! sampled on `[-T, T]`. Division by `x²` amplifies discretization noise
//! near the origin, hence a small window around zero is excluded from the
//! reported curve (its second moment is still reported so downstream
//! quadrature can account for the excluded mass).

use num_complex::Complex64;
use serde::Serialize;

use crate::cts::CtsParams;
use crate::error::{Error, Result};
use crate::fourier;
use crate::univariate::UnivariateParams;

/// Recovered Lévy density curve on a symmetric grid with the origin window
/// removed.
#[derive(Debug, Clone, Serialize)]
pub struct LevyDensityCurve {
    /// Grid abscissae, ascending, excluding `|x| <= delta`.
    pub abscissae: Vec<f64>,
    /// `g_Y` at the abscissae; ringing in `[-eps_neg, 0)` is clipped to 0.
    pub values: Vec<f64>,
    /// Frequency truncation `T` of the inversion.
    pub truncation: f64,
    /// Node count `M` (a power of two).
    pub nodes: usize,
    /// Half-width of the excluded origin window (four grid steps).
    pub delta: f64,
    /// `∫_{|x|<=delta} x² g_Y(x) dx`, the second moment of the excluded
    /// window, estimated from the recovered transform.
    pub origin_second_moment: f64,
    /// Set when `|Φ_Y''(±T)| > 1e-6 |Φ_Y''(0)|`, i.e. the truncation left
    /// visible mass outside `[-T, T]`.
    pub truncation_warning: bool,
}

/// Second derivative of the characteristic exponent `log φ_Y` at real `u`,
/// assembled by the chain rule through the Gamma cumulant:
/// `Φ_Y'' = Φ_V''(g)·(g')² + Φ_V'(g)·g''` with `g(u) = iuβ + L_stdCTS(u)`.
pub fn cumulant_second_derivative(params: &UnivariateParams, u: f64) -> Complex64 {
    let (l, l1, l2) = char_exponent_with_derivatives(&params.cts, u);
    let g = Complex64::new(0.0, u * params.beta) + l;
    let g1 = Complex64::new(0.0, params.beta) + l1;
    let denom = Complex64::new(params.b, 0.0) - g;
    params.a * (l2 * denom + g1 * g1) / (denom * denom)
}

/// `L_stdCTS` and its first two derivatives in the real frequency, with the
/// Gaussian reduction at α = 2.
fn char_exponent_with_derivatives(cts: &CtsParams, u: f64) -> (Complex64, Complex64, Complex64) {
    if cts.alpha == 2.0 {
        return (
            Complex64::new(-0.5 * u * u, 0.0),
            Complex64::new(-u, 0.0),
            Complex64::new(-1.0, 0.0),
        );
    }
    let a = cts.alpha;
    let lp = cts.lambda_plus;
    let lm = cts.lambda_minus;
    let norm = lp.powf(a - 2.0) + lm.powf(a - 2.0);
    let iu = Complex64::new(0.0, u);
    let zp = Complex64::new(lp, 0.0) - iu;
    let zm = Complex64::new(lm, 0.0) + iu;

    let l = (zp.powf(a) - lp.powf(a) + zm.powf(a) - lm.powf(a)) / (a * (a - 1.0) * norm)
        + iu * (lp.powf(a - 1.0) - lm.powf(a - 1.0)) / ((a - 1.0) * norm);
    // dL/du = i Φ_H'(iu), d²L/du² = -Φ_H''(iu)
    let d1_h = (zp.powf(a - 1.0) - lp.powf(a - 1.0) - zm.powf(a - 1.0) + lm.powf(a - 1.0))
        / ((1.0 - a) * norm);
    let d2_h = (zp.powf(a - 2.0) + zm.powf(a - 2.0)) / norm;
    (l, Complex64::new(0.0, 1.0) * d1_h, -d2_h)
}

/// Inverts `-Φ_Y''` on `[-T, T]` with `M` nodes and returns the Lévy
/// density `g_Y(x) = h(x)/x²` away from the origin window.
pub fn levy_density(params: &UnivariateParams, truncation: f64, nodes: usize) -> Result<LevyDensityCurve> {
    params.validate()?;
    if !truncation.is_finite() || truncation <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "truncation must be positive, got {truncation}"
        )));
    }
    if !nodes.is_power_of_two() || nodes < 1 << 10 {
        return Err(Error::InvalidParameter(format!(
            "nodes must be a power of two >= 1024, got {nodes}"
        )));
    }
    let m = nodes;
    let du = 2.0 * truncation / m as f64;
    let vals: Vec<Complex64> = (0..m)
        .map(|k| -cumulant_second_derivative(params, -truncation + k as f64 * du))
        .collect();
    let center = cumulant_second_derivative(params, 0.0).norm();
    let boundary = vals[0].norm().max(vals[m - 1].norm());
    let truncation_warning = boundary > 1e-6 * center;

    // h(x) = (1/2π) ∫ e^{-iux} (-Φ_Y''(u)) du = x² g_Y(x)
    let (xs, h) = fourier::transform_on_dual_grid(&vals, du, -truncation, -1.0);
    let dx = xs[1] - xs[0];
    let delta = 4.0 * dx;

    let mut origin_second_moment = 0.0;
    let mut raw: Vec<(f64, f64)> = Vec::with_capacity(m);
    for (x, hv) in xs.iter().zip(h.iter()) {
        if x.abs() <= delta {
            origin_second_moment += hv.re * dx;
        } else {
            raw.push((*x, hv.re / (x * x)));
        }
    }
    let peak = raw.iter().fold(0.0f64, |acc, &(_, v)| acc.max(v));
    let eps_neg = 1e-8 * peak;
    let mut abscissae = Vec::with_capacity(raw.len());
    let mut values = Vec::with_capacity(raw.len());
    for (x, v) in raw {
        abscissae.push(x);
        values.push(if v < 0.0 && v >= -eps_neg { 0.0 } else { v });
    }
    Ok(LevyDensityCurve {
        abscissae,
        values,
        truncation,
        nodes,
        delta,
        origin_second_moment,
        truncation_warning,
    })
}

impl LevyDensityCurve {
    /// Writes the curve as a two-column CSV `x,g`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,g\n");
        for (x, v) in self.abscissae.iter().zip(self.values.iter()) {
            out.push_str(&format!("{x},{v}\n"));
        }
        out
    }

    /// `∫ (e^{iux} - 1 - iux·1_{|x|<=1}) g(x) dx + iμu`, the
    /// Lévy–Khintchine reassembly of the characteristic exponent from the
    /// recovered curve (trapezoid over the curve plus the small-`x`
    /// quadratic contribution of the excluded window).
    pub fn levy_khintchine_exponent(&self, mu: f64, u: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let kernel = |x: f64| {
            let e = Complex64::from_polar(1.0, u * x);
            let comp = if x.abs() <= 1.0 {
                Complex64::new(1.0, u * x)
            } else {
                Complex64::new(1.0, 0.0)
            };
            e - comp
        };
        // trapezoid per side (the grid has a hole around the origin)
        let split = self.abscissae.partition_point(|&x| x < 0.0);
        for side in [0..split, split..self.abscissae.len()] {
            for i in side.skip(1) {
                let (x0, x1) = (self.abscissae[i - 1], self.abscissae[i]);
                let (g0, g1) = (self.values[i - 1], self.values[i]);
                acc += 0.5 * (kernel(x0) * g0 + kernel(x1) * g1) * (x1 - x0);
            }
        }
        // excluded window: e^{iux} - 1 - iux ≈ -u²x²/2
        acc += Complex64::new(-0.5 * u * u * self.origin_second_moment, 0.0);
        acc + Complex64::new(0.0, mu * u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cts::CtsParams;
    use approx::assert_relative_eq;

    fn symmetric_benchmark_params() -> UnivariateParams {
        UnivariateParams::new(0.0, 0.0, CtsParams::new(1.25, 1.9, 1.9).unwrap(), 1.0, 1.0)
            .unwrap()
    }

    #[test]
    fn second_derivative_at_origin_is_minus_variance() {
        let p = UnivariateParams::new(
            0.3,
            -0.6,
            CtsParams::new(1.25, 1.2, 1.9).unwrap(),
            1.4,
            0.9,
        )
        .unwrap();
        let v = cumulant_second_derivative(&p, 0.0);
        let m = p.moments();
        assert_relative_eq!(v.re, -m.variance, max_relative = 1e-12);
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn second_derivative_matches_finite_difference_of_log_cf() {
        let p = UnivariateParams::new(
            0.2,
            0.4,
            CtsParams::new(1.25, 1.2, 1.9).unwrap(),
            1.1,
            1.3,
        )
        .unwrap();
        let u = 0.7;
        let h = 1e-4;
        let f = |t: f64| p.characteristic_function(t).ln();
        let fd = (f(u + h) - 2.0 * f(u) + f(u - h)) / (h * h);
        let v = cumulant_second_derivative(&p, u);
        assert!((v - fd).norm() < 1e-5 * v.norm(), "{v} vs {fd}");
    }

    #[test]
    fn second_derivative_hermitian() {
        let p = UnivariateParams::new(
            0.2,
            0.4,
            CtsParams::new(0.8, 1.2, 1.9).unwrap(),
            1.1,
            1.3,
        )
        .unwrap();
        for &u in &[0.3, 1.7, 6.0] {
            let a = cumulant_second_derivative(&p, u);
            let b = cumulant_second_derivative(&p, -u);
            assert!((a.conj() - b).norm() < 1e-13);
        }
    }

    #[test]
    fn truncation_warning_set_when_window_too_narrow() {
        // |Φ''(±5)| is nowhere near negligible for these parameters
        let c = levy_density(&symmetric_benchmark_params(), 5.0, 1 << 10).unwrap();
        assert!(c.truncation_warning);
    }

    #[test]
    fn rejects_bad_node_count() {
        let p = symmetric_benchmark_params();
        assert!(levy_density(&p, 200.0, 1000).is_err());
        assert!(levy_density(&p, 200.0, 3000).is_err());
        assert!(levy_density(&p, -5.0, 4096).is_err());
    }

    #[test]
    fn symmetric_parameters_give_symmetric_density() {
        let c = levy_density(&symmetric_benchmark_params(), 200.0, 1 << 14).unwrap();
        let n = c.abscissae.len();
        // grid is symmetric except possibly the first point
        for i in 0..n {
            let x = c.abscissae[i];
            if x <= 0.0 {
                continue;
            }
            let j = c.abscissae.partition_point(|&y| y < -x - 1e-12);
            if j < n && (c.abscissae[j] + x).abs() < 1e-9 {
                let (a, b) = (c.values[i], c.values[j]);
                if a.max(b) > 1e-12 {
                    assert!(
                        (a - b).abs() <= 1e-6 * a.abs().max(b.abs()),
                        "x = {x}: {a} vs {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn asymmetric_tempering_breaks_symmetry() {
        let p = UnivariateParams::new(0.0, 0.0, CtsParams::new(1.25, 1.2, 1.9).unwrap(), 1.0, 1.0)
            .unwrap();
        let c = levy_density(&p, 200.0, 1 << 14).unwrap();
        let at = |x: f64| {
            let i = c
                .abscissae
                .iter()
                .position(|&y| (y - x).abs() < c.delta)
                .unwrap();
            c.values[i]
        };
        // λ₋ > λ₊ tempers the left tail harder; the gap widens with |x|
        assert!(at(2.0) > 1.1 * at(-2.0));
        assert!(at(4.0) > 1.4 * at(-4.0));
    }

    #[test]
    fn density_positive_and_decaying_per_side() {
        let c = levy_density(&symmetric_benchmark_params(), 200.0, 1 << 14).unwrap();
        let at = |x: f64| {
            let i = c
                .abscissae
                .iter()
                .position(|&y| (y - x).abs() < c.delta)
                .unwrap();
            c.values[i]
        };
        for &x in &[0.3, 0.7, 1.0, 2.0, 4.0] {
            assert!(at(x) > 0.0, "g({x}) = {}", at(x));
        }
        assert!(at(0.3) > at(1.0));
        assert!(at(1.0) > at(2.0));
        assert!(at(2.0) > at(4.0));
    }

    #[test]
    fn levy_integrability_stable_under_refinement() {
        let p = symmetric_benchmark_params();
        let integral = |c: &LevyDensityCurve| {
            let mut acc = 0.0;
            for i in 1..c.abscissae.len() {
                let (x0, x1) = (c.abscissae[i - 1], c.abscissae[i]);
                if x1 - x0 > 2.0 * c.delta {
                    continue; // origin gap
                }
                let f0 = x0.abs().min(1.0).powi(2).min(1.0) * c.values[i - 1].max(0.0);
                let f1 = x1.abs().min(1.0).powi(2).min(1.0) * c.values[i].max(0.0);
                acc += 0.5 * (f0 + f1) * (x1 - x0);
            }
            acc + c.origin_second_moment
        };
        let coarse = integral(&levy_density(&p, 200.0, 1 << 14).unwrap());
        let fine = integral(&levy_density(&p, 400.0, 1 << 15).unwrap());
        assert!(coarse.is_finite() && fine.is_finite());
        assert!(
            (coarse - fine).abs() < 0.02 * coarse.abs(),
            "coarse {coarse}, fine {fine}"
        );
    }

    #[test]
    fn round_trip_reproduces_log_cf() {
        let p = symmetric_benchmark_params();
        let c = levy_density(&p, 800.0, 1 << 16).unwrap();
        for &u in &[0.5, 1.0] {
            let rebuilt = c.levy_khintchine_exponent(p.mu, u);
            let direct = p.characteristic_function(u).ln();
            assert!(
                (rebuilt - direct).norm() < 0.01 * direct.norm(),
                "u = {u}: {rebuilt} vs {direct}"
            );
        }
    }
}
