//! Normal-distribution helpers and the exponentially modified Gaussian used
//! for IRF-convolved decays.

use statrs::function::erf::erfc;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// FWHM of a Gaussian divided by its standard deviation.
pub const FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949_3;

pub fn sigma_from_fwhm(fwhm: f64) -> f64 {
    fwhm / FWHM_PER_SIGMA
}

/// Standard normal CDF.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal upper tail, `1 - norm_cdf(x)`, without cancellation.
pub fn norm_sf(x: f64) -> f64 {
    0.5 * erfc(x * FRAC_1_SQRT_2)
}

pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Probability mass of the standard normal in `[a, b]`.
pub fn norm_interval(a: f64, b: f64) -> f64 {
    if a > 0.0 {
        norm_sf(a) - norm_sf(b)
    } else {
        norm_cdf(b) - norm_cdf(a)
    }
}

/// Mills ratio `(1 - Phi(x)) / phi(x)` for `x >= 5`, by backward evaluation of
/// the continued fraction `1/(x + 1/(x + 2/(x + ...)))`.
fn mills_ratio(x: f64) -> f64 {
    let mut tail = x;
    for k in (1..=120).rev() {
        tail = x + k as f64 / tail;
    }
    1.0 / tail
}

/// `exp(-u/tau + sigma^2/(2 tau^2)) * Phi(u/sigma - sigma/tau)`.
///
/// This is the unit-amplitude exponential `exp(-u/tau)` (for `u >= 0`)
/// convolved with a unit-area Gaussian of width `sigma`. With `sigma == 0`
/// it reduces to the one-sided exponential.
pub fn emg(u: f64, tau: f64, sigma: f64) -> f64 {
    if sigma <= 0.0 {
        return if u >= 0.0 { (-u / tau).exp() } else { 0.0 };
    }
    let z = u / sigma - sigma / tau;
    if z >= -5.0 {
        (-u / tau + 0.5 * (sigma / tau).powi(2)).exp() * norm_cdf(z)
    } else {
        // exp(A) * phi(z) collapses to the Gaussian in u.
        let g = (-0.5 * (u / sigma).powi(2)).exp() / (2.0 * PI).sqrt();
        g * mills_ratio(-z)
    }
}

/// CDF of the unit-area exponential (mean `tau`) convolved with the Gaussian:
/// `Phi(u/sigma) - emg(u)`.
pub fn emg_cdf(u: f64, tau: f64, sigma: f64) -> f64 {
    if sigma <= 0.0 {
        return if u >= 0.0 { -(-u / tau).exp_m1() } else { 0.0 };
    }
    norm_cdf(u / sigma) - emg(u, tau, sigma)
}

/// `emg_cdf(b) - emg_cdf(a)` evaluated without catastrophic cancellation in
/// the far tail.
pub fn emg_interval(a: f64, b: f64, tau: f64, sigma: f64) -> f64 {
    if sigma <= 0.0 {
        if b <= 0.0 {
            return 0.0;
        }
        let lo = a.max(0.0);
        return (-lo / tau).exp() - (-b / tau).exp();
    }
    norm_interval(a / sigma, b / sigma) - (emg(b, tau, sigma) - emg(a, tau, sigma))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn emg_branches_join_smoothly() {
        let (tau, sigma) = (0.73, 0.064);
        // z = -5 at u = sigma * (sigma/tau - 5)
        let u0 = sigma * (sigma / tau - 5.0);
        let below = emg(u0 - 1e-13, tau, sigma);
        let above = emg(u0 + 1e-13, tau, sigma);
        assert!((below - above).abs() / above < 1e-10, "{below} vs {above}");
    }

    #[test]
    fn emg_matches_numeric_convolution() {
        let (tau, sigma) = (0.5, 0.2);
        for &u in &[-0.6, -0.1, 0.0, 0.3, 1.5] {
            // midpoint quadrature over the Gaussian kernel
            let n = 20_000;
            let lo = -8.0 * sigma;
            let h = 16.0 * sigma / n as f64;
            let mut acc = 0.0;
            for i in 0..n {
                let s = lo + (i as f64 + 0.5) * h;
                let x = u - s;
                if x >= 0.0 {
                    acc += (-x / tau).exp() * norm_pdf(s / sigma) / sigma * h;
                }
            }
            assert!((acc - emg(u, tau, sigma)).abs() < 1e-6, "u={u}");
        }
    }

    #[test]
    fn emg_cdf_limits() {
        assert!(emg_cdf(-10.0, 1.0, 0.1).abs() < 1e-15);
        assert!((emg_cdf(100.0, 1.0, 0.1) - 1.0).abs() < 1e-12);
        assert_eq!(emg(-1.0, 1.0, 0.0), 0.0);
        assert!((emg_interval(-1.0, 1.0, 1.0, 0.0) - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn far_left_tail_is_finite() {
        let v = emg(-5000.0, 0.73, 0.064);
        assert!(v.is_finite() && v >= 0.0);
    }
}
