//! Polarization, spectral and temporal filtering of the two emission channels
//! and the resulting heralded-state fidelity.

use crate::emission::{EmissionModel, PUMP_MAX_NM, PUMP_MIN_NM};
use crate::error::{domain, Error, Result};
use crate::herald::{fidelity_from_snr, FidelityEstimate};
use crate::parallel::map_indexed;
use crate::spectrum::SpectralProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolarizerAxis {
    AlignedToSpdc,
    Orthogonal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BandCenter {
    Fixed(f64),
    /// Follows the SPDC line, which moves with the pump wavelength.
    SpdcLine,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FilterSpec {
    Polarizer(PolarizerAxis),
    /// Step edge: transmission below the cutoff is zero.
    Longpass { cutoff_nm: f64, transmission: f64 },
    /// Top-hat passband of full width `fwhm_nm`.
    Bandpass {
        center: BandCenter,
        fwhm_nm: f64,
        peak_transmission: f64,
    },
    /// Detection gate `[offset, offset + window]` ns after each pulse.
    /// Without a repetition rate the pump's own rate is used.
    TemporalGate {
        window_ns: f64,
        repetition_rate_hz: Option<f64>,
        offset_ns: f64,
    },
    /// Pass fractions taken from a measurement.
    Measured {
        spdc_transmission: f64,
        lum_transmission: f64,
    },
}

impl FilterSpec {
    pub fn longpass(cutoff_nm: f64, transmission: f64) -> Self {
        Self::Longpass {
            cutoff_nm,
            transmission,
        }
    }

    pub fn bandpass(center: BandCenter, fwhm_nm: f64, peak_transmission: f64) -> Self {
        Self::Bandpass {
            center,
            fwhm_nm,
            peak_transmission,
        }
    }

    pub fn gate(window_ns: f64) -> Self {
        Self::TemporalGate {
            window_ns,
            repetition_rate_hz: None,
            offset_ns: 0.0,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Polarizer(_) => "polarizer",
            Self::Longpass { .. } => "longpass",
            Self::Bandpass { .. } => "bandpass",
            Self::TemporalGate { .. } => "temporal_gate",
            Self::Measured { .. } => "measured",
        }
    }

    fn validate(&self, model: &EmissionModel) -> Result<()> {
        let (lo, hi) = model.support();
        let unit = |name: &str, t: f64| {
            if t > 0.0 && t <= 1.0 {
                Ok(())
            } else {
                Err(domain(format!("{name} must lie in (0, 1], got {t}")))
            }
        };
        match *self {
            Self::Polarizer(_) => Ok(()),
            Self::Longpass {
                cutoff_nm,
                transmission,
            } => {
                if !(lo..=hi).contains(&cutoff_nm) {
                    return Err(domain(format!("cutoff {cutoff_nm} nm lies outside [{lo}, {hi}] nm")));
                }
                unit("longpass transmission", transmission)
            }
            Self::Bandpass {
                center,
                fwhm_nm,
                peak_transmission,
            } => {
                let c = self.band_center(center, model);
                if !(lo..=hi).contains(&c) {
                    return Err(domain(format!("band center {c} nm lies outside [{lo}, {hi}] nm")));
                }
                if !(fwhm_nm > 0.0 && fwhm_nm.is_finite()) {
                    return Err(domain(format!("bandpass width must be > 0, got {fwhm_nm}")));
                }
                unit("bandpass peak transmission", peak_transmission)
            }
            Self::TemporalGate {
                window_ns,
                repetition_rate_hz,
                offset_ns,
            } => {
                if !(window_ns > 0.0 && window_ns.is_finite()) {
                    return Err(domain(format!("gate window must be > 0 ns, got {window_ns}")));
                }
                if !(offset_ns >= 0.0 && offset_ns.is_finite()) {
                    return Err(domain(format!("gate offset must be >= 0 ns, got {offset_ns}")));
                }
                let period = gate_period(repetition_rate_hz, model)?;
                if offset_ns + window_ns > period {
                    return Err(domain(format!(
                        "gate [{offset_ns}, {}] ns exceeds the {period} ns pulse period",
                        offset_ns + window_ns
                    )));
                }
                Ok(())
            }
            Self::Measured {
                spdc_transmission,
                lum_transmission,
            } => {
                for (name, t) in [("SPDC", spdc_transmission), ("luminescence", lum_transmission)] {
                    if !(0.0..=1.0).contains(&t) {
                        return Err(domain(format!("measured {name} transmission must lie in [0, 1], got {t}")));
                    }
                }
                Ok(())
            }
        }
    }

    fn band_center(&self, center: BandCenter, model: &EmissionModel) -> f64 {
        match center {
            BandCenter::Fixed(c) => c,
            BandCenter::SpdcLine => model.spdc_spectrum.center,
        }
    }

    /// Spectral transmission at `wavelength_nm`; 1 for non-spectral filters.
    fn spectral_transmission(&self, wavelength_nm: f64, model: &EmissionModel) -> f64 {
        match *self {
            Self::Longpass {
                cutoff_nm,
                transmission,
            } => {
                if wavelength_nm >= cutoff_nm {
                    transmission
                } else {
                    0.0
                }
            }
            Self::Bandpass {
                center,
                fwhm_nm,
                peak_transmission,
            } => {
                let c = self.band_center(center, model);
                if (wavelength_nm - c).abs() <= 0.5 * fwhm_nm {
                    peak_transmission
                } else {
                    0.0
                }
            }
            _ => 1.0,
        }
    }

    fn spectral_edges(&self, model: &EmissionModel) -> Vec<f64> {
        match *self {
            Self::Longpass { cutoff_nm, .. } => vec![cutoff_nm],
            Self::Bandpass { center, fwhm_nm, .. } => {
                let c = self.band_center(center, model);
                vec![c - 0.5 * fwhm_nm, c + 0.5 * fwhm_nm]
            }
            _ => Vec::new(),
        }
    }
}

fn gate_period(repetition_rate_hz: Option<f64>, model: &EmissionModel) -> Result<f64> {
    match repetition_rate_hz {
        None => Ok(model.pump.period_ns()),
        Some(r) if r > 0.0 && r.is_finite() => Ok(1e9 / r),
        Some(r) => Err(domain(format!("gate repetition rate must be > 0 Hz, got {r}"))),
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FilterChain {
    pub filters: Vec<FilterSpec>,
}

impl FilterChain {
    pub fn new(filters: Vec<FilterSpec>) -> Result<Self> {
        let gates = filters
            .iter()
            .filter(|f| matches!(f, FilterSpec::TemporalGate { .. }))
            .count();
        if gates > 1 {
            return Err(domain(format!("a chain holds at most one temporal gate, got {gates}")));
        }
        Ok(Self { filters })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn with(mut self, filter: FilterSpec) -> Result<Self> {
        self.filters.push(filter);
        Self::new(self.filters)
    }

    pub fn validate(&self, model: &EmissionModel) -> Result<()> {
        Self::new(self.filters.clone())?;
        self.filters.iter().try_for_each(|f| f.validate(model))
    }

    /// Combined spectral transmission as a step function: every segment
    /// between consecutive edges carries a constant transmission.
    fn spectral_segments(&self, model: &EmissionModel) -> Vec<(f64, f64, f64)> {
        let (lo, hi) = model.support();
        let mut edges: Vec<f64> = self
            .filters
            .iter()
            .flat_map(|f| f.spectral_edges(model))
            .filter(|e| *e > lo && *e < hi)
            .chain([lo, hi])
            .collect();
        edges.sort_by(f64::total_cmp);
        edges.dedup();
        edges
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                let t = self
                    .filters
                    .iter()
                    .map(|f| f.spectral_transmission(mid, model))
                    .product();
                (w[0], w[1], t)
            })
            .collect()
    }

    fn spectral_pass(&self, profile: &SpectralProfile, model: &EmissionModel) -> f64 {
        let support = model.support();
        self.spectral_segments(model)
            .into_iter()
            .filter(|s| s.2 > 0.0)
            .map(|(a, b, t)| t * profile.mass(a, b, support))
            .sum::<f64>()
            .clamp(0.0, 1.0)
    }

    /// Combined spectral transmission at one wavelength.
    pub fn spectral_transmission_at(&self, model: &EmissionModel, wavelength_nm: f64) -> f64 {
        self.filters
            .iter()
            .map(|f| f.spectral_transmission(wavelength_nm, model))
            .product()
    }
}

/// Fraction of luminescence photons emitted inside the gate, in periodic
/// steady state.
pub fn gate_lum_fraction(model: &EmissionModel, window_ns: f64, offset_ns: f64, period_ns: f64) -> f64 {
    model
        .lum_decay
        .components
        .iter()
        .zip(model.lum_decay.photon_weights())
        .map(|(c, w)| {
            let tau = c.lifetime_ns;
            let inside = (-offset_ns / tau).exp() - (-(offset_ns + window_ns) / tau).exp();
            w * inside / -(-period_ns / tau).exp_m1()
        })
        .sum()
}

pub fn transmit_spdc(chain: &FilterChain, model: &EmissionModel) -> Result<f64> {
    chain.validate(model)?;
    let mut t = chain.spectral_pass(&model.spdc_spectrum, model);
    for f in &chain.filters {
        t *= match *f {
            FilterSpec::Polarizer(axis) if model.spdc_polarized => match axis {
                PolarizerAxis::AlignedToSpdc => 1.0,
                PolarizerAxis::Orthogonal => 0.0,
            },
            FilterSpec::Polarizer(_) => 0.5,
            FilterSpec::TemporalGate {
                window_ns, offset_ns, ..
            } => {
                if offset_ns <= 0.0 && 0.0 < offset_ns + window_ns {
                    1.0
                } else {
                    0.0
                }
            }
            FilterSpec::Measured {
                spdc_transmission, ..
            } => spdc_transmission,
            _ => 1.0,
        };
    }
    Ok(t)
}

pub fn transmit_luminescence(chain: &FilterChain, model: &EmissionModel) -> Result<f64> {
    chain.validate(model)?;
    let mut t = chain.spectral_pass(&model.lum_spectrum, model);
    for f in &chain.filters {
        t *= match *f {
            FilterSpec::Polarizer(_) => 0.5,
            FilterSpec::TemporalGate {
                window_ns,
                repetition_rate_hz,
                offset_ns,
            } => gate_lum_fraction(model, window_ns, offset_ns, gate_period(repetition_rate_hz, model)?),
            FilterSpec::Measured {
                lum_transmission, ..
            } => lum_transmission,
            _ => 1.0,
        };
    }
    Ok(t.clamp(0.0, 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioFlag {
    /// No SPDC passes the chain.
    SourceDead,
    /// No luminescence passes; the SNR is infinite.
    NoiseFree,
    /// The exact fidelity expression is nonpositive.
    FidelityClamped,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioReport {
    pub label: String,
    pub c_spdc: f64,
    pub c_lum: f64,
    pub spdc_transmission: f64,
    pub lum_transmission: f64,
    /// `c_spdc / c_lum`; `f64::INFINITY` when no luminescence passes.
    pub snr: f64,
    /// `None` for a dead source.
    pub fidelity: Option<FidelityEstimate>,
    pub flags: Vec<ScenarioFlag>,
    /// Reference values printed alongside the computed ones, if any.
    pub reference: Option<ReferenceRow>,
}

impl ScenarioReport {
    pub fn is_flagged(&self) -> bool {
        self.flags
            .iter()
            .any(|f| matches!(f, ScenarioFlag::SourceDead | ScenarioFlag::FidelityClamped))
    }

    /// Computed SNR minus the reference SNR, when one is attached.
    pub fn snr_discrepancy(&self) -> Option<f64> {
        self.reference.map(|r| self.snr - r.snr)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRow {
    pub snr: f64,
    pub fidelity: f64,
}

/// Transmitted counts, SNR and fidelity for a chain applied to baseline
/// counts.
pub fn scenario_fidelity(
    model: &EmissionModel,
    chain: &FilterChain,
    baseline: (f64, f64),
    t_w_ns: f64,
    r_s_hz: f64,
) -> Result<ScenarioReport> {
    let (c_s, c_l) = baseline;
    for (name, c) in [("baseline SPDC counts", c_s), ("baseline luminescence counts", c_l)] {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(domain(format!("{name} must be finite and >= 0, got {c}")));
        }
    }
    let ts = transmit_spdc(chain, model)?;
    let tl = transmit_luminescence(chain, model)?;
    let (cs, cl) = (c_s * ts, c_l * tl);
    let mut flags = Vec::new();
    let (snr, fidelity) = if cs <= 0.0 {
        flags.push(ScenarioFlag::SourceDead);
        (0.0, None)
    } else {
        let snr = if cl > 0.0 { cs / cl } else { f64::INFINITY };
        if snr.is_infinite() {
            flags.push(ScenarioFlag::NoiseFree);
        }
        let f = fidelity_from_snr(snr, t_w_ns, r_s_hz)?;
        if f.flagged {
            flags.push(ScenarioFlag::FidelityClamped);
        }
        (snr, Some(f))
    };
    Ok(ScenarioReport {
        label: String::new(),
        c_spdc: cs,
        c_lum: cl,
        spdc_transmission: ts,
        lum_transmission: tl,
        snr,
        fidelity,
        flags,
        reference: None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub label: String,
    pub chain: FilterChain,
    pub reference: Option<ReferenceRow>,
}

pub fn run_scenarios(
    model: &EmissionModel,
    scenarios: &[Scenario],
    baseline: (f64, f64),
    t_w_ns: f64,
    r_s_hz: f64,
) -> Result<Vec<ScenarioReport>> {
    scenarios
        .iter()
        .map(|s| {
            let mut r = scenario_fidelity(model, &s.chain, baseline, t_w_ns, r_s_hz)?;
            r.label = s.label.clone();
            r.reference = s.reference;
            Ok(r)
        })
        .collect()
}

/// Baseline counts of the unfiltered reference measurement.
pub const TABLE_BASELINE: (f64, f64) = (2.225e10, 1.343e10);

/// Three reference scenarios: no filtering, a 460 nm edge filter, and the
/// edge filter plus gating. Luminescence pass fractions are the measured
/// count ratios.
pub fn table_one_scenarios() -> Vec<Scenario> {
    let measured = |lum: f64| FilterSpec::Measured {
        spdc_transmission: 1.0,
        lum_transmission: lum / 1.343,
    };
    vec![
        Scenario {
            label: "no filtering".into(),
            chain: FilterChain::empty(),
            reference: Some(ReferenceRow {
                snr: 1.657,
                fidelity: 0.624,
            }),
        },
        Scenario {
            label: "spectral filtering".into(),
            chain: FilterChain {
                filters: vec![measured(0.489)],
            },
            reference: Some(ReferenceRow {
                snr: 4.450,
                fidelity: 0.820,
            }),
        },
        Scenario {
            label: "spectral & time filter.".into(),
            chain: FilterChain {
                filters: vec![measured(0.024)],
            },
            reference: Some(ReferenceRow {
                snr: 96.572,
                fidelity: 0.990,
            }),
        },
    ]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    pub pump_nm: f64,
    pub snr: f64,
    pub fidelity: Option<f64>,
    pub flagged: bool,
}

/// Fidelity versus pump wavelength with baseline counts proportional to the
/// model's rates.
pub fn pump_wavelength_scan(
    model: &EmissionModel,
    chain: &FilterChain,
    pump_nm: &[f64],
    t_w_ns: f64,
) -> Result<Vec<ScanPoint>> {
    if let Some(p) = pump_nm.iter().find(|p| !(PUMP_MIN_NM..=PUMP_MAX_NM).contains(*p)) {
        return Err(domain(format!(
            "pump wavelength {p} nm outside [{PUMP_MIN_NM}, {PUMP_MAX_NM}] nm"
        )));
    }
    let baseline = (model.effective_spdc_rate(), model.lum_rate_hz);
    let r_s = model.effective_spdc_rate();
    let points = map_indexed(pump_nm.len(), |i| -> Result<ScanPoint> {
        let m = model.with_pump_wavelength(pump_nm[i])?;
        let r = scenario_fidelity(&m, chain, baseline, t_w_ns, r_s)?;
        Ok(ScanPoint {
            pump_nm: pump_nm[i],
            snr: r.snr,
            fidelity: r.fidelity.map(|f| f.exact),
            flagged: r.is_flagged(),
        })
    });
    points.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepetitionAdvice {
    pub period_ns: f64,
    pub longest_lifetime_ns: f64,
    pub required_factor: f64,
    /// Residual tail of the slowest component at the next pulse.
    pub residual_fraction: f64,
    pub ok: bool,
}

pub const DEFAULT_PERIOD_FACTOR: f64 = 5.0;

/// Flag repetition rates whose period is shorter than `factor` times the
/// slowest lifetime.
pub fn repetition_rate_advice(model: &EmissionModel, factor: f64) -> Result<RepetitionAdvice> {
    if !(factor > 0.0) {
        return Err(Error::Domain(format!("period factor must be > 0, got {factor}")));
    }
    let period = model.pump.period_ns();
    let tau = model.lum_decay.longest_lifetime();
    Ok(RepetitionAdvice {
        period_ns: period,
        longest_lifetime_ns: tau,
        required_factor: factor,
        residual_fraction: (-period / tau).exp(),
        ok: period >= factor * tau,
    })
}
