//! Forward model for streak-camera recordings.
//!
//! Expected counts factorize into a spectral and a temporal part for each of
//! the two emission channels. SPDC is an IRF-shaped pulse at t = 0;
//! luminescence is the multi-exponential decay convolved with the IRF, in
//! periodic steady state so that slow tails from earlier pulses are included.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::emission::{DecayModel, EmissionModel};
use crate::error::{domain, Result};
use crate::grid::UniformGrid;
use crate::image::{Metadata, StreakImage};
use crate::parallel::map_indexed;
use crate::special::{emg_interval, norm_interval, sigma_from_fwhm};

/// Steady-state intensity relative to a single pulse, `1 / (1 - exp(-P/tau))`.
pub fn pileup_enhancement(lifetime_ns: f64, period_ns: f64) -> f64 {
    -1.0 / (-period_ns / lifetime_ns).exp_m1()
}

/// Contribution of all earlier pulses relative to the current one,
/// `1 / (exp(P/tau) - 1)`.
pub fn pileup_excess(lifetime_ns: f64, period_ns: f64) -> f64 {
    1.0 / (period_ns / lifetime_ns).exp_m1()
}

/// Fraction of each pulse's SPDC photons detected in `[a, b]` ns.
pub fn spdc_time_fraction(irf_fwhm_ns: f64, a: f64, b: f64) -> f64 {
    if irf_fwhm_ns <= 0.0 {
        return if a <= 0.0 && 0.0 < b { 1.0 } else { 0.0 };
    }
    let s = sigma_from_fwhm(irf_fwhm_ns);
    norm_interval(a / s, b / s)
}

/// Fraction of steady-state luminescence photons detected in `[a, b]` ns
/// within one pulse period (pulse at t = 0).
///
/// Earlier pulses are summed as a geometric series. The interval must satisfy
/// `a > -period` and `b <= period`.
pub fn lum_time_fraction(decay: &DecayModel, period_ns: f64, a: f64, b: f64) -> f64 {
    let sigma = sigma_from_fwhm(decay.irf_fwhm_ns);
    decay
        .components
        .iter()
        .zip(decay.photon_weights())
        .map(|(c, w)| {
            let tau = c.lifetime_ns;
            let current = emg_interval(a, b, tau, sigma);
            // Earlier pulses sit far from their onset, where the IRF only
            // rescales the exponential by exp(sigma^2 / 2 tau^2).
            let gauss = (0.5 * (sigma / tau).powi(2)).exp();
            let earlier = gauss * ((-(a + period_ns) / tau).exp() - (-(b + period_ns) / tau).exp())
                / -(-period_ns / tau).exp_m1();
            w * (current + earlier)
        })
        .sum()
}

fn check_time_grid(model: &EmissionModel, grid: &UniformGrid) -> Result<()> {
    let period = model.pump.period_ns();
    let sigma = sigma_from_fwhm(model.lum_decay.irf_fwhm_ns);
    if grid.start <= -period + 10.0 * sigma || grid.end() > period {
        return Err(domain(format!(
            "time grid [{}, {}] ns does not fit inside one pulse period ({} ns)",
            grid.start,
            grid.end(),
            period
        )));
    }
    Ok(())
}

/// Separable expected counts for a whole image.
#[derive(Debug, Clone)]
pub struct ExpectedImage {
    pub wavelength_grid: UniformGrid,
    pub time_grid: UniformGrid,
    /// Expected SPDC photons over the exposure.
    pub spdc_total: f64,
    /// Expected luminescence photons over the exposure.
    pub lum_total: f64,
    pub spdc_spectral: Vec<f64>,
    pub lum_spectral: Vec<f64>,
    pub spdc_temporal: Vec<f64>,
    pub lum_temporal: Vec<f64>,
}

impl ExpectedImage {
    pub fn new(
        model: &EmissionModel,
        wavelength_grid: &UniformGrid,
        time_grid: &UniformGrid,
        exposure: u64,
    ) -> Result<Self> {
        model.validate()?;
        if exposure == 0 {
            return Err(domain("exposure must be at least one pulse"));
        }
        check_time_grid(model, time_grid)?;
        let support = model.support();
        let seconds = exposure as f64 / model.pump.repetition_rate_hz;
        let period = model.pump.period_ns();
        let spectral = |f: &dyn Fn(f64, f64) -> f64| -> Vec<f64> {
            (0..wavelength_grid.len())
                .map(|i| {
                    let (lo, hi) = wavelength_grid.edges(i);
                    f(lo, hi)
                })
                .collect()
        };
        let temporal = |f: &dyn Fn(f64, f64) -> f64| -> Vec<f64> {
            (0..time_grid.len())
                .map(|i| {
                    let (lo, hi) = time_grid.edges(i);
                    f(lo, hi)
                })
                .collect()
        };
        Ok(Self {
            wavelength_grid: *wavelength_grid,
            time_grid: *time_grid,
            spdc_total: model.effective_spdc_rate() * seconds,
            lum_total: model.lum_rate_hz * seconds,
            spdc_spectral: spectral(&|lo, hi| model.spdc_spectrum.mass(lo, hi, support)),
            lum_spectral: spectral(&|lo, hi| model.lum_spectrum.mass(lo, hi, support)),
            spdc_temporal: temporal(&|a, b| spdc_time_fraction(model.lum_decay.irf_fwhm_ns, a, b)),
            lum_temporal: temporal(&|a, b| lum_time_fraction(&model.lum_decay, period, a, b)),
        })
    }

    /// Expected counts in time bin `t` and wavelength bin `w`.
    pub fn at(&self, t: usize, w: usize) -> f64 {
        self.spdc_total * self.spdc_temporal[t] * self.spdc_spectral[w]
            + self.lum_total * self.lum_temporal[t] * self.lum_spectral[w]
    }

    pub fn n_time(&self) -> usize {
        self.time_grid.len()
    }

    pub fn n_wavelength(&self) -> usize {
        self.wavelength_grid.len()
    }

    pub fn total(&self) -> f64 {
        (0..self.n_time())
            .flat_map(|t| (0..self.n_wavelength()).map(move |w| (t, w)))
            .map(|(t, w)| self.at(t, w))
            .sum()
    }
}

/// Expected counts per bin for the bin `[lambda_lo, lambda_hi] x [t_lo, t_hi]`.
pub fn expected_intensity(
    model: &EmissionModel,
    wavelength_bin: (f64, f64),
    time_bin: (f64, f64),
    exposure: u64,
) -> Result<f64> {
    let wg = UniformGrid::new(wavelength_bin.0, wavelength_bin.1, wavelength_bin.1 - wavelength_bin.0)?;
    let tg = UniformGrid::new(time_bin.0, time_bin.1, time_bin.1 - time_bin.0)?;
    Ok(ExpectedImage::new(model, &wg, &tg, exposure)?.at(0, 0))
}

/// Short stable fingerprint of an arbitrary description string.
pub fn fingerprint(text: &str) -> String {
    use sha2::{Digest, Sha256};
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Draw a Poisson-noisy streak image. Each time row uses its own ChaCha
/// stream keyed by `(seed, row)`, so the result does not depend on threading.
pub fn synthesize(
    model: &EmissionModel,
    wavelength_grid: &UniformGrid,
    time_grid: &UniformGrid,
    exposure: u64,
    seed: u64,
) -> Result<StreakImage> {
    let expected = ExpectedImage::new(model, wavelength_grid, time_grid, exposure)?;
    let nw = expected.n_wavelength();
    let rows = map_indexed(expected.n_time(), |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        (0..nw)
            .map(|w| sample_poisson(expected.at(t, w), &mut rng))
            .collect::<Vec<u64>>()
    });
    let mut warnings = Vec::new();
    if model.lum_decay.irf_fwhm_ns > 0.0 && time_grid.step > model.lum_decay.irf_fwhm_ns {
        warnings.push(format!(
            "time bin {} ns is wider than the IRF FWHM {} ns; the IRF is not resolved",
            time_grid.step, model.lum_decay.irf_fwhm_ns
        ));
    }
    let metadata = Metadata {
        seed: Some(seed),
        model_hash: Some(fingerprint(&format!("{model:?}"))),
        wavelength_grid: Some(*wavelength_grid),
        time_grid: Some(*time_grid),
        warnings,
        extra: Vec::new(),
    };
    StreakImage::new(
        rows.into_iter().flatten().collect(),
        wavelength_grid.centers(),
        time_grid.centers(),
        exposure,
        metadata,
    )
}

fn sample_poisson(mean: f64, rng: &mut ChaCha8Rng) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    match Poisson::new(mean) {
        Ok(d) => d.sample(rng) as u64,
        Err(_) => mean.round() as u64,
    }
}
