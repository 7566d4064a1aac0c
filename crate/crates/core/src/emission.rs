//! Parametric model of the light leaving the pumped crystal.
//!
//! The model has two parts: an instantaneous SPDC line at twice the pump
//! wavelength, and crystal luminescence with a fixed skewed spectrum and a
//! multi-exponential decay. Luminescence is unpolarized and scales linearly
//! with pump power; its spectrum and lifetimes do not depend on the pump.

use crate::error::{domain, Result};
use crate::grid::UniformGrid;
use crate::spectrum::SpectralProfile;

pub const PUMP_MIN_NM: f64 = 240.0;
pub const PUMP_MAX_NM: f64 = 300.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpConfig {
    pub wavelength_nm: f64,
    pub power_mw: f64,
    pub repetition_rate_hz: f64,
    /// Pump polarization relative to the phase-matched orientation, degrees.
    pub polarization_deg: f64,
}

impl Default for PumpConfig {
    fn default() -> Self {
        Self {
            wavelength_nm: 267.0,
            power_mw: 100.0,
            repetition_rate_hz: 1_000.0,
            polarization_deg: 0.0,
        }
    }
}

impl PumpConfig {
    pub fn validate(&self) -> Result<()> {
        if !(PUMP_MIN_NM..=PUMP_MAX_NM).contains(&self.wavelength_nm) {
            return Err(domain(format!(
                "pump wavelength {} nm outside [{PUMP_MIN_NM}, {PUMP_MAX_NM}] nm",
                self.wavelength_nm
            )));
        }
        if !(self.power_mw > 0.0 && self.power_mw.is_finite()) {
            return Err(domain(format!("pump power must be > 0, got {}", self.power_mw)));
        }
        if !(self.repetition_rate_hz > 0.0 && self.repetition_rate_hz.is_finite()) {
            return Err(domain(format!(
                "repetition rate must be > 0, got {}",
                self.repetition_rate_hz
            )));
        }
        if !self.polarization_deg.is_finite() {
            return Err(domain("pump polarization angle must be finite"));
        }
        Ok(())
    }

    /// Inter-pulse period in nanoseconds.
    pub fn period_ns(&self) -> f64 {
        1e9 / self.repetition_rate_hz
    }
}

/// Degenerate type-I phase matching puts the SPDC line at twice the pump
/// wavelength.
pub fn spdc_center_wavelength(pump: &PumpConfig) -> Result<f64> {
    pump.validate()?;
    Ok(2.0 * pump.wavelength_nm)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayComponent {
    /// Fraction of the t = 0 intensity carried by this component.
    pub amplitude: f64,
    pub lifetime_ns: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayModel {
    pub components: Vec<DecayComponent>,
    pub irf_fwhm_ns: f64,
}

impl Default for DecayModel {
    fn default() -> Self {
        Self::new(&[(0.90, 0.73), (0.07, 1850.0), (0.03, 9950.0)], 0.15)
    }
}

impl DecayModel {
    pub fn new(components: &[(f64, f64)], irf_fwhm_ns: f64) -> Self {
        Self {
            components: components
                .iter()
                .map(|&(amplitude, lifetime_ns)| DecayComponent {
                    amplitude,
                    lifetime_ns,
                })
                .collect(),
            irf_fwhm_ns,
        }
    }

    pub fn single(lifetime_ns: f64, irf_fwhm_ns: f64) -> Self {
        Self::new(&[(1.0, lifetime_ns)], irf_fwhm_ns)
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(domain("decay model needs at least one component"));
        }
        for c in &self.components {
            if !(c.lifetime_ns > 0.0 && c.lifetime_ns.is_finite()) {
                return Err(domain(format!("lifetime must be > 0, got {}", c.lifetime_ns)));
            }
            if !(c.amplitude > 0.0 && c.amplitude.is_finite()) {
                return Err(domain(format!("amplitude must be > 0, got {}", c.amplitude)));
            }
        }
        let sum: f64 = self.components.iter().map(|c| c.amplitude).sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(domain(format!("decay amplitudes must sum to 1, got {sum}")));
        }
        if self
            .components
            .windows(2)
            .any(|w| w[1].lifetime_ns <= w[0].lifetime_ns)
        {
            return Err(domain("lifetimes must be strictly increasing"));
        }
        if !(self.irf_fwhm_ns >= 0.0 && self.irf_fwhm_ns.is_finite()) {
            return Err(domain(format!("IRF FWHM must be >= 0, got {}", self.irf_fwhm_ns)));
        }
        Ok(())
    }

    /// Pre-IRF intensity `sum a_i exp(-t/tau_i)`, equal to 1 at t = 0.
    pub fn intensity(&self, t_ns: f64) -> Result<f64> {
        if !(t_ns >= 0.0) {
            return Err(domain(format!("decay time must be >= 0, got {t_ns}")));
        }
        Ok(self
            .components
            .iter()
            .map(|c| c.amplitude * (-t_ns / c.lifetime_ns).exp())
            .sum())
    }

    /// Share of emitted photons carried by each component (`a_i tau_i`,
    /// normalized).
    pub fn photon_weights(&self) -> Vec<f64> {
        let total: f64 = self
            .components
            .iter()
            .map(|c| c.amplitude * c.lifetime_ns)
            .sum();
        self.components
            .iter()
            .map(|c| c.amplitude * c.lifetime_ns / total)
            .collect()
    }

    pub fn longest_lifetime(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.lifetime_ns)
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmissionModel {
    pub pump: PumpConfig,
    pub spdc_spectrum: SpectralProfile,
    pub lum_spectrum: SpectralProfile,
    pub lum_decay: DecayModel,
    /// Pair-generation rate R_S at the phase-matched orientation, Hz.
    pub spdc_rate_hz: f64,
    /// Luminescence photon rate R_L per collected mode, Hz.
    pub lum_rate_hz: f64,
    /// SPDC leaves the crystal linearly polarized.
    pub spdc_polarized: bool,
    /// Exponent of the SPDC-rate power law used by [`EmissionModel::scale_power`].
    pub spdc_power_exponent: f64,
    pub wavelength_grid: UniformGrid,
}

impl Default for EmissionModel {
    fn default() -> Self {
        let pump = PumpConfig::default();
        Self {
            spdc_spectrum: SpectralProfile::spdc(2.0 * pump.wavelength_nm, 10.0),
            pump,
            lum_spectrum: SpectralProfile::luminescence(430.0, 60.0, 0.4),
            lum_decay: DecayModel::default(),
            spdc_rate_hz: 100_000.0,
            lum_rate_hz: 60_000.0,
            spdc_polarized: true,
            spdc_power_exponent: 1.0,
            wavelength_grid: UniformGrid {
                start: 300.0,
                stop: 700.0,
                step: 1.0,
            },
        }
    }
}

impl EmissionModel {
    pub fn validate(&self) -> Result<()> {
        self.pump.validate()?;
        self.spdc_spectrum.validate()?;
        self.lum_spectrum.validate()?;
        self.lum_decay.validate()?;
        if self.spdc_spectrum.kind != crate::spectrum::ProfileKind::SpdcGaussian {
            return Err(domain("SPDC spectrum must be the spdc_gaussian shape"));
        }
        if self.lum_spectrum.kind != crate::spectrum::ProfileKind::LuminescenceSkewed {
            return Err(domain("luminescence spectrum must be the luminescence_skewed shape"));
        }
        if self.spdc_spectrum.center != 2.0 * self.pump.wavelength_nm {
            return Err(domain(format!(
                "SPDC center {} nm is not twice the pump wavelength {} nm",
                self.spdc_spectrum.center, self.pump.wavelength_nm
            )));
        }
        for (name, r) in [("spdc rate", self.spdc_rate_hz), ("luminescence rate", self.lum_rate_hz)] {
            if !(r >= 0.0 && r.is_finite()) {
                return Err(domain(format!("{name} must be >= 0, got {r}")));
            }
        }
        if !(self.spdc_power_exponent.is_finite()) {
            return Err(domain("SPDC power exponent must be finite"));
        }
        UniformGrid::new(
            self.wavelength_grid.start,
            self.wavelength_grid.stop,
            self.wavelength_grid.step,
        )?;
        Ok(())
    }

    /// Copy of the model with a new pump wavelength and the SPDC line
    /// re-centered on it.
    pub fn with_pump_wavelength(&self, wavelength_nm: f64) -> Result<Self> {
        let mut m = self.clone();
        m.pump.wavelength_nm = wavelength_nm;
        m.pump.validate()?;
        m.spdc_spectrum.center = 2.0 * wavelength_nm;
        Ok(m)
    }

    pub fn support(&self) -> (f64, f64) {
        (self.wavelength_grid.start, self.wavelength_grid.stop)
    }

    pub fn luminescence_spectral_density(&self, wavelength_nm: f64) -> f64 {
        self.lum_spectrum.density(wavelength_nm, self.support())
    }

    pub fn spdc_spectral_density(&self, wavelength_nm: f64) -> f64 {
        self.spdc_spectrum.density(wavelength_nm, self.support())
    }

    pub fn luminescence_decay_intensity(&self, t_ns: f64) -> Result<f64> {
        self.lum_decay.intensity(t_ns)
    }

    /// SPDC rate after the pump-polarization projection, `R_S cos^2(angle)`.
    pub fn effective_spdc_rate(&self) -> f64 {
        let c = self.pump.polarization_deg.to_radians().cos();
        self.spdc_rate_hz * c * c
    }

    /// Rescale the pump power by `factor`. Luminescence follows linearly; SPDC
    /// follows `factor^spdc_power_exponent`. Spectra are untouched.
    pub fn scale_power(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(domain(format!("power factor must be > 0, got {factor}")));
        }
        let mut m = self.clone();
        m.pump.power_mw *= factor;
        m.lum_rate_hz *= factor;
        m.spdc_rate_hz *= factor.powf(self.spdc_power_exponent);
        Ok(m)
    }

    /// Fraction of luminescence inside the band `[lo, hi]` nm.
    pub fn spectral_overlap_fraction(&self, lo: f64, hi: f64) -> Result<f64> {
        if !(lo <= hi) {
            return Err(domain(format!("inverted band [{lo}, {hi}]")));
        }
        Ok(self.lum_spectrum.mass(lo, hi, self.support()))
    }
}
