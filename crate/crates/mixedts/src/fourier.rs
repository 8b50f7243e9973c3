//! Discrete approximation of continuous Fourier integrals on symmetric grids.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Approximates `h(x_m) = (delta_u / 2π) Σ_k vals[k] · exp(sign · i u_k x_m)`
/// for `u_k = u_min + k·delta_u` and the dual grid
/// `x_m = 2π (m - M/2) / (M·delta_u)`, `m = 0..M`.
///
/// Returns `(xs, h)` with `xs` increasing. `sign` must be `+1.0` or `-1.0`.
pub(crate) fn transform_on_dual_grid(
    vals: &[Complex64],
    delta_u: f64,
    u_min: f64,
    sign: f64,
) -> (Vec<f64>, Vec<Complex64>) {
    let m = vals.len();
    debug_assert!(m.is_power_of_two());
    debug_assert!(sign == 1.0 || sign == -1.0);

    // exp(sign i u_k x_m) = exp(sign i u_min x_m) exp(sign 2πi k (m - M/2)/M)
    //                     = exp(sign i u_min x_m) (-1)^k exp(sign 2πi k m / M)
    let mut buf: Vec<Complex64> = vals
        .iter()
        .enumerate()
        .map(|(k, &v)| if k % 2 == 0 { v } else { -v })
        .collect();

    let mut planner = FftPlanner::<f64>::new();
    let fft = if sign > 0.0 {
        planner.plan_fft_inverse(m)
    } else {
        planner.plan_fft_forward(m)
    };
    fft.process(&mut buf);

    let scale = delta_u / (2.0 * std::f64::consts::PI);
    let dx = 2.0 * std::f64::consts::PI / (m as f64 * delta_u);
    // with the (-1)^k input twist, slot idx holds the sum for
    // x = (idx - M/2)·dx already
    let mut xs = Vec::with_capacity(m);
    let mut out = Vec::with_capacity(m);
    for (idx, value) in buf.iter().enumerate() {
        let x = (idx as f64 - m as f64 / 2.0) * dx;
        let phase = Complex64::from_polar(1.0, sign * u_min * x);
        xs.push(x);
        out.push(value * phase * scale);
    }
    (xs, out)
}
