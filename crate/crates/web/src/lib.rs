//! Browser bindings for the demo page in `www/`.

use lumnoise::filters::TABLE_BASELINE;
use lumnoise::{
    extract_time_trace, fidelity_from_snr, fit_multiexp, scenario_fidelity, synthesize, BandCenter, DecayModel,
    EmissionModel, FilterChain, FilterSpec, FitError, FitOptions, PolarizerAxis, T0Mode, UniformGrid,
};
use wasm_bindgen::prelude::*;

fn msg(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// F against SNR on a log-spaced axis.
#[wasm_bindgen]
pub struct FidelityCurve {
    snr: Vec<f64>,
    exact: Vec<f64>,
    approx: Vec<f64>,
}

#[wasm_bindgen]
impl FidelityCurve {
    #[wasm_bindgen(getter)]
    pub fn snr(&self) -> Vec<f64> {
        self.snr.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn exact(&self) -> Vec<f64> {
        self.exact.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn approx(&self) -> Vec<f64> {
        self.approx.clone()
    }
}

#[wasm_bindgen]
pub fn fidelity_curve(
    r_s_hz: f64,
    t_w_ns: f64,
    snr_lo: f64,
    snr_hi: f64,
    points: usize,
) -> Result<FidelityCurve, String> {
    if !(snr_lo > 0.0 && snr_hi > snr_lo) || points < 2 {
        return Err("need 0 < snr_lo < snr_hi and at least 2 points".into());
    }
    let step = (snr_hi / snr_lo).ln() / (points - 1) as f64;
    let mut c = FidelityCurve {
        snr: Vec::with_capacity(points),
        exact: Vec::with_capacity(points),
        approx: Vec::with_capacity(points),
    };
    for i in 0..points {
        let snr = snr_lo * (step * i as f64).exp();
        let f = fidelity_from_snr(snr, t_w_ns, r_s_hz).map_err(msg)?;
        c.snr.push(snr);
        c.exact.push(f.exact);
        c.approx.push(f.approx);
    }
    Ok(c)
}

/// Emission spectra, the filter transmission curve and the resulting
/// figures of merit.
#[wasm_bindgen]
pub struct FilterView {
    wavelength: Vec<f64>,
    spdc: Vec<f64>,
    lum: Vec<f64>,
    transmission: Vec<f64>,
    pub t_spdc: f64,
    pub t_lum: f64,
    pub snr: f64,
    pub fidelity: f64,
    pub spdc_center_nm: f64,
}

#[wasm_bindgen]
impl FilterView {
    #[wasm_bindgen(getter)]
    pub fn wavelength(&self) -> Vec<f64> {
        self.wavelength.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn spdc(&self) -> Vec<f64> {
        self.spdc.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn lum(&self) -> Vec<f64> {
        self.lum.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn transmission(&self) -> Vec<f64> {
        self.transmission.clone()
    }
}

/// Zero (or negative) `cutoff_nm`, `bandpass_fwhm_nm` and `gate_ns` switch
/// that filter off.
#[wasm_bindgen]
pub fn filter_view(
    pump_nm: f64,
    polarizer: bool,
    cutoff_nm: f64,
    bandpass_fwhm_nm: f64,
    gate_ns: f64,
    repetition_rate_hz: f64,
) -> Result<FilterView, String> {
    let mut model = EmissionModel::default().with_pump_wavelength(pump_nm).map_err(msg)?;
    model.pump.repetition_rate_hz = repetition_rate_hz;
    model.validate().map_err(msg)?;
    let mut filters = Vec::new();
    if polarizer {
        filters.push(FilterSpec::Polarizer(PolarizerAxis::AlignedToSpdc));
    }
    if cutoff_nm > 0.0 {
        filters.push(FilterSpec::longpass(cutoff_nm, 0.95));
    }
    if bandpass_fwhm_nm > 0.0 {
        filters.push(FilterSpec::bandpass(BandCenter::SpdcLine, bandpass_fwhm_nm, 0.9));
    }
    if gate_ns > 0.0 {
        filters.push(FilterSpec::gate(gate_ns));
    }
    let chain = FilterChain::new(filters).map_err(msg)?;
    let report = scenario_fidelity(&model, &chain, TABLE_BASELINE, 10.0, 1e5).map_err(msg)?;

    let (lo, hi) = model.support();
    let wavelength: Vec<f64> = (0..=400).map(|i| lo + (hi - lo) * i as f64 / 400.0).collect();
    Ok(FilterView {
        spdc: wavelength.iter().map(|&w| model.spdc_spectral_density(w)).collect(),
        lum: wavelength.iter().map(|&w| model.luminescence_spectral_density(w)).collect(),
        transmission: wavelength.iter().map(|&w| chain.spectral_transmission_at(&model, w)).collect(),
        wavelength,
        t_spdc: report.spdc_transmission,
        t_lum: report.lum_transmission,
        snr: report.snr,
        fidelity: report.fidelity.map_or(0.0, |f| f.exact),
        spdc_center_nm: model.spdc_spectrum.center,
    })
}

/// A synthetic luminescence decay and its multi-exponential fit.
#[wasm_bindgen]
pub struct DecayView {
    time: Vec<f64>,
    counts: Vec<f64>,
    fit_time: Vec<f64>,
    fit: Vec<f64>,
    lifetimes: Vec<f64>,
    relative_amplitudes: Vec<f64>,
    pub reduced_chi_square: f64,
    pub converged: bool,
    flags: String,
}

#[wasm_bindgen]
impl DecayView {
    #[wasm_bindgen(getter)]
    pub fn time(&self) -> Vec<f64> {
        self.time.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn counts(&self) -> Vec<f64> {
        self.counts.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn fit_time(&self) -> Vec<f64> {
        self.fit_time.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn fit(&self) -> Vec<f64> {
        self.fit.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn lifetimes(&self) -> Vec<f64> {
        self.lifetimes.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn relative_amplitudes(&self) -> Vec<f64> {
        self.relative_amplitudes.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn flags(&self) -> String {
        self.flags.clone()
    }
}

/// Draw about `total_counts` luminescence photons from the default decay on a
/// 50 us window and fit `components` exponentials to the tail after 100 ns.
#[wasm_bindgen]
pub fn decay_demo(total_counts: f64, components: usize, seed: u32) -> Result<DecayView, String> {
    if !(total_counts > 0.0 && total_counts <= 1e9) {
        return Err("total counts must be in (0, 1e9]".into());
    }
    let exposure = 10_000;
    let mut model = EmissionModel {
        lum_decay: DecayModel::default(),
        spdc_rate_hz: 0.0,
        ..Default::default()
    };
    model.pump.repetition_rate_hz = 1e3;
    model.lum_rate_hz = total_counts * 1e3 / exposure as f64;
    let band = UniformGrid::new(300.0, 700.0, 400.0).map_err(msg)?;
    let grid = UniformGrid::new(0.0, 50_000.0, 50.0).map_err(msg)?;
    let image = synthesize(&model, &band, &grid, exposure, seed.into()).map_err(msg)?;
    let trace = extract_time_trace(&image, (300.0, 700.0)).map_err(msg)?;
    let opts = FitOptions::new(components)
        .with_t0(T0Mode::Fixed(0.0))
        .with_time_range(100.0, 50_000.0);
    let fit = match fit_multiexp(&trace, &opts) {
        Ok(f) => f,
        Err(FitError::NotConverged(f)) => *f,
        Err(e) => return Err(msg(e)),
    };
    let data_at = |t: f64| {
        let i = trace.time_axis.partition_point(|&x| x < t);
        trace.counts[i]
    };
    let fit_curve = fit
        .residual_time
        .iter()
        .zip(&fit.residuals)
        .map(|(&t, &r)| data_at(t) - r)
        .collect();
    Ok(DecayView {
        fit_time: fit.residual_time.clone(),
        fit: fit_curve,
        lifetimes: fit.lifetimes(),
        relative_amplitudes: fit.components.iter().map(|c| c.relative_amplitude).collect(),
        reduced_chi_square: fit.reduced_chi_square,
        converged: fit.converged,
        flags: fit.flags.iter().map(|f| format!("{f:?}")).collect::<Vec<_>>().join("; "),
        time: trace.time_axis,
        counts: trace.counts,
    })
}
