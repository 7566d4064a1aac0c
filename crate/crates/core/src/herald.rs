//! Heralded single-photon state model.
//!
//! A detection window of length `t_w` holds an SPDC pair with probability
//! `P_S = R_S t_w` and a luminescence photon in each mode with probability
//! `P_L = R_L t_w`. Conditioned on an idler click the signal mode is in a
//! mixture of zero, one and two photons.

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};
use crate::parallel::map_indexed;

/// Upper limit on any per-window probability; beyond it double events are no
/// longer negligible.
pub const VALIDITY_LIMIT: f64 = 0.05;

pub const MIN_MONTE_CARLO_WINDOWS: u64 = 10_000;

const WINDOWS_PER_SHARD: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeraldParams {
    pub r_s_hz: f64,
    /// Luminescence rate in the signal mode.
    pub r_l_hz: f64,
    /// Luminescence rate in the idler mode; equal to `r_l_hz` unless set.
    pub r_l_idler_hz: Option<f64>,
    pub t_w_ns: f64,
    /// Detector efficiency applied to every rate.
    pub efficiency: f64,
}

impl HeraldParams {
    pub fn new(r_s_hz: f64, r_l_hz: f64, t_w_ns: f64) -> Self {
        Self {
            r_s_hz,
            r_l_hz,
            r_l_idler_hz: None,
            t_w_ns,
            efficiency: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("signal rate", self.r_s_hz),
            ("luminescence rate", self.r_l_hz),
            ("idler luminescence rate", self.r_l_idler_hz.unwrap_or(0.0)),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(domain(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        if !(self.t_w_ns > 0.0 && self.t_w_ns.is_finite()) {
            return Err(domain(format!("detection window must be > 0 ns, got {}", self.t_w_ns)));
        }
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return Err(domain(format!("efficiency must lie in (0, 1], got {}", self.efficiency)));
        }
        Ok(())
    }
}

fn window_probability(name: &'static str, rate_hz: f64, t_w_ns: f64) -> Result<f64> {
    let p = rate_hz * t_w_ns / 1e9;
    check_probability(name, p)?;
    Ok(p)
}

fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if !(p >= 0.0 && p.is_finite()) {
        return Err(domain(format!("{name} must be a probability >= 0, got {p}")));
    }
    if p > VALIDITY_LIMIT {
        return Err(Error::ValidityBound {
            name,
            value: p,
            limit: VALIDITY_LIMIT,
            reason: "double events per window are neglected by the model",
        });
    }
    Ok(())
}

/// Per-window probabilities `(P_S, P_L)` for the signal mode.
pub fn pair_probability(params: &HeraldParams) -> Result<(f64, f64)> {
    params.validate()?;
    let eta = params.efficiency;
    Ok((
        window_probability("P_S", eta * params.r_s_hz, params.t_w_ns)?,
        window_probability("P_L", eta * params.r_l_hz, params.t_w_ns)?,
    ))
}

/// Idler-mode luminescence probability.
pub fn idler_probability(params: &HeraldParams) -> Result<f64> {
    params.validate()?;
    let r = params.r_l_idler_hz.unwrap_or(params.r_l_hz);
    window_probability("P_L (idler)", params.efficiency * r, params.t_w_ns)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeraldOutcome {
    pub p0: f64,
    pub p1: f64,
    pub p2: f64,
    pub n: f64,
    pub fidelity: f64,
}

/// Heralded outcome probabilities with a single luminescence probability for
/// both modes.
pub fn outcome_probabilities(p_s: f64, p_l: f64) -> Result<HeraldOutcome> {
    outcome_probabilities_asym(p_s, p_l, p_l)
}

/// As [`outcome_probabilities`], with separate signal and idler luminescence.
pub fn outcome_probabilities_asym(p_s: f64, p_l_signal: f64, p_l_idler: f64) -> Result<HeraldOutcome> {
    check_probability("P_S", p_s)?;
    check_probability("P_L", p_l_signal)?;
    check_probability("P_L (idler)", p_l_idler)?;
    let p0 = p_l_idler * (1.0 - p_s);
    let p1 = p_s * (1.0 - p_l_signal);
    let p2 = p_s * p_l_signal;
    let n = p0 + p1 + p2;
    let fidelity = if n > 0.0 { p1 / n } else { 0.0 };
    Ok(HeraldOutcome { p0, p1, p2, n, fidelity })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityEstimate {
    pub exact: f64,
    pub approx: f64,
    /// The exact expression came out nonpositive and was clamped to 0.
    pub flagged: bool,
}

/// Fidelity from the SPDC-to-luminescence ratio. `snr = f64::INFINITY`
/// stands for a luminescence-free source.
pub fn fidelity_from_snr(snr: f64, t_w_ns: f64, r_s_hz: f64) -> Result<FidelityEstimate> {
    if snr.is_nan() || snr <= 0.0 {
        return Err(domain(format!("SNR must be > 0, got {snr}")));
    }
    let x = window_probability("P_S", r_s_hz, t_w_ns)?;
    if snr.is_infinite() {
        return Ok(FidelityEstimate {
            exact: 1.0,
            approx: 1.0,
            flagged: false,
        });
    }
    let raw = (snr - x) / (1.0 + snr - x);
    Ok(FidelityEstimate {
        exact: raw.max(0.0),
        approx: snr / (1.0 + snr),
        flagged: raw <= 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloOutcome {
    pub windows: u64,
    pub heralded: u64,
    pub counts: [u64; 3],
    /// Each `counts[i] / windows`.
    pub p: [f64; 3],
    pub p_se: [f64; 3],
    pub fidelity: f64,
    pub fidelity_se: f64,
}

impl MonteCarloOutcome {
    /// Number of standard errors separating the estimate from `fidelity`.
    pub fn z_score(&self, fidelity: f64) -> f64 {
        let d = self.fidelity - fidelity;
        if d == 0.0 {
            0.0
        } else {
            d.abs() / self.fidelity_se
        }
    }
}

fn threshold(p: f64) -> u64 {
    // P(next_u64 < t) = t / 2^64
    (p * 18_446_744_073_709_551_616.0) as u64
}

fn run_shard(seed: u64, shard: u64, windows: u64, t: [u64; 3]) -> [u64; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    let mut counts = [0u64; 3];
    for _ in 0..windows {
        let spdc = rng.next_u64() < t[0];
        let idler_lum = rng.next_u64() < t[1];
        let signal_lum = rng.next_u64() < t[2];
        if spdc || idler_lum {
            let k = if !spdc {
                0
            } else if signal_lum {
                2
            } else {
                1
            };
            counts[k] += 1;
        }
    }
    counts
}

/// Event-level simulation of heralded windows.
pub fn monte_carlo_herald(params: &HeraldParams, n_windows: u64, seed: u64) -> Result<MonteCarloOutcome> {
    let (p_s, p_l) = pair_probability(params)?;
    let p_li = idler_probability(params)?;
    monte_carlo_probabilities(p_s, p_l, p_li, n_windows, seed)
}

/// Simulation from window probabilities directly.
pub fn monte_carlo_probabilities(
    p_s: f64,
    p_l_signal: f64,
    p_l_idler: f64,
    n_windows: u64,
    seed: u64,
) -> Result<MonteCarloOutcome> {
    check_probability("P_S", p_s)?;
    check_probability("P_L", p_l_signal)?;
    check_probability("P_L (idler)", p_l_idler)?;
    if n_windows < MIN_MONTE_CARLO_WINDOWS {
        return Err(domain(format!(
            "Monte Carlo needs at least {MIN_MONTE_CARLO_WINDOWS} windows, got {n_windows}"
        )));
    }
    let t = [threshold(p_s), threshold(p_l_idler), threshold(p_l_signal)];
    let shards = n_windows.div_ceil(WINDOWS_PER_SHARD);
    let parts = map_indexed(shards as usize, |s| {
        let s = s as u64;
        let len = WINDOWS_PER_SHARD.min(n_windows - s * WINDOWS_PER_SHARD);
        run_shard(seed, s, len, t)
    });
    let mut counts = [0u64; 3];
    for c in parts {
        for i in 0..3 {
            counts[i] += c[i];
        }
    }
    let n = n_windows as f64;
    let p = counts.map(|c| c as f64 / n);
    let p_se = p.map(|q| (q * (1.0 - q) / n).sqrt());
    let heralded: u64 = counts.iter().sum();
    let (fidelity, fidelity_se) = if heralded == 0 {
        (f64::NAN, f64::NAN)
    } else {
        let f = counts[1] as f64 / heralded as f64;
        (f, (f * (1.0 - f) / heralded as f64).sqrt())
    };
    Ok(MonteCarloOutcome {
        windows: n_windows,
        heralded,
        counts,
        p,
        p_se,
        fidelity,
        fidelity_se,
    })
}
