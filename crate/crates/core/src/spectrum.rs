//! Normalized spectral line shapes.
//!
//! Both shapes are truncated to a finite wavelength support and renormalized
//! there, so a density always integrates to one over the grid it is
//! evaluated on.

use crate::error::{domain, Result};
use crate::special::{norm_cdf, norm_pdf, sigma_from_fwhm};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    /// Symmetric Gaussian line.
    SpdcGaussian,
    /// Shifted log-normal with its mode at `center` and a long-wavelength tail.
    LuminescenceSkewed,
}

impl ProfileKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProfileKind::SpdcGaussian => "spdc_gaussian",
            ProfileKind::LuminescenceSkewed => "luminescence_skewed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralProfile {
    pub kind: ProfileKind,
    /// Peak (mode) wavelength, nm.
    pub center: f64,
    /// Full width at half maximum, nm.
    pub width: f64,
    /// Log-normal shape parameter; 0 gives the symmetric Gaussian limit.
    pub skew: f64,
}

/// Closed-form parameters of the untruncated shape.
#[derive(Debug, Clone, Copy)]
enum Shape {
    Gaussian { mean: f64, sigma: f64 },
    LogNormal { shift: f64, scale: f64, sigma: f64 },
}

impl SpectralProfile {
    pub fn spdc(center: f64, width: f64) -> Self {
        Self {
            kind: ProfileKind::SpdcGaussian,
            center,
            width,
            skew: 0.0,
        }
    }

    pub fn luminescence(center: f64, width: f64, skew: f64) -> Self {
        Self {
            kind: ProfileKind::LuminescenceSkewed,
            center,
            width,
            skew,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.width.is_finite()) {
            return Err(domain(format!("spectral width must be > 0, got {}", self.width)));
        }
        if !(self.skew >= 0.0 && self.skew.is_finite()) {
            return Err(domain(format!("skew must be >= 0, got {}", self.skew)));
        }
        if self.kind == ProfileKind::SpdcGaussian && self.skew != 0.0 {
            return Err(domain("the SPDC line is symmetric; skew must be 0"));
        }
        Ok(())
    }

    fn shape(&self) -> Shape {
        if self.kind == ProfileKind::SpdcGaussian || self.skew == 0.0 {
            return Shape::Gaussian {
                mean: self.center,
                sigma: sigma_from_fwhm(self.width),
            };
        }
        // Unit log-normal: mode at exp(-s^2), half-maximum points at
        // exp(-s^2 +- s*sqrt(2 ln 2)), so its FWHM is 2 exp(-s^2) sinh(s sqrt(2 ln 2)).
        let s = self.skew;
        let unit_fwhm = 2.0 * (-s * s).exp() * (s * (2.0 * std::f64::consts::LN_2).sqrt()).sinh();
        let scale = self.width / unit_fwhm;
        Shape::LogNormal {
            shift: self.center - scale * (-s * s).exp(),
            scale,
            sigma: s,
        }
    }

    fn raw_pdf(&self, wavelength: f64) -> f64 {
        match self.shape() {
            Shape::Gaussian { mean, sigma } => norm_pdf((wavelength - mean) / sigma) / sigma,
            Shape::LogNormal { shift, scale, sigma } => {
                let x = wavelength - shift;
                if x <= 0.0 {
                    0.0
                } else {
                    norm_pdf((x / scale).ln() / sigma) / (x * sigma)
                }
            }
        }
    }

    fn raw_cdf(&self, wavelength: f64) -> f64 {
        match self.shape() {
            Shape::Gaussian { mean, sigma } => norm_cdf((wavelength - mean) / sigma),
            Shape::LogNormal { shift, scale, sigma } => {
                let x = wavelength - shift;
                if x <= 0.0 {
                    0.0
                } else {
                    norm_cdf((x / scale).ln() / sigma)
                }
            }
        }
    }

    fn raw_mass(&self, lo: f64, hi: f64) -> f64 {
        (self.raw_cdf(hi) - self.raw_cdf(lo)).max(0.0)
    }

    /// Density per nm, normalized on `support`; zero outside it.
    pub fn density(&self, wavelength: f64, support: (f64, f64)) -> f64 {
        if wavelength < support.0 || wavelength > support.1 {
            return 0.0;
        }
        let z = self.raw_mass(support.0, support.1);
        if z <= 0.0 {
            return 0.0;
        }
        self.raw_pdf(wavelength) / z
    }

    /// Fraction of the (support-normalized) line falling in `[lo, hi]`.
    pub fn mass(&self, lo: f64, hi: f64, support: (f64, f64)) -> f64 {
        let lo = lo.max(support.0);
        let hi = hi.min(support.1);
        if hi <= lo {
            return 0.0;
        }
        let z = self.raw_mass(support.0, support.1);
        if z <= 0.0 {
            return 0.0;
        }
        (self.raw_mass(lo, hi) / z).min(1.0)
    }
}
