#![allow(dead_code)]

use lumnoise::{
    extract_time_trace, fit_multiexp, synthesize, BaselineMode, DecayFit, DecayModel, EmissionModel, FitError,
    FitOptions, TimeTrace, UniformGrid,
};

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Luminescence-only model with the given decay and a rate that yields about
/// `total` counts over `exposure` pulses.
pub fn lum_model(decay: DecayModel, rep_hz: f64, total: f64, exposure: u64) -> EmissionModel {
    let mut m = EmissionModel {
        lum_decay: decay,
        spdc_rate_hz: 0.0,
        ..Default::default()
    };
    m.pump.repetition_rate_hz = rep_hz;
    m.lum_rate_hz = total * rep_hz / exposure as f64;
    m
}

/// One wide wavelength bin covering the whole support.
pub fn whole_band() -> UniformGrid {
    UniformGrid::new(300.0, 700.0, 400.0).unwrap()
}

pub fn synth_trace(model: &EmissionModel, time: &UniformGrid, exposure: u64, seed: u64) -> TimeTrace {
    let img = synthesize(model, &whole_band(), time, exposure, seed).unwrap();
    extract_time_trace(&img, (300.0, 700.0)).unwrap()
}

/// Single 0.73 ns component, 0.15 ns IRF, 10 ns window.
pub fn fast_case(total: f64, seed: u64) -> Result<(DecayFit, f64), FitError> {
    let exposure = 10_000;
    let model = lum_model(DecayModel::single(0.73, 0.15), 1e3, total, exposure);
    let grid = UniformGrid::new(-1.0, 9.0, 0.01).unwrap();
    let trace = synth_trace(&model, &grid, exposure, seed);
    Ok((fit_multiexp(&trace, &FitOptions::new(1).with_irf(0.15))?, trace.total()))
}

/// Components 0.7 / 0.3 at 1.85 and 9.95 us, 50 us window.
pub fn slow_case(total: f64, seed: u64) -> Result<(DecayFit, f64), FitError> {
    let exposure = 10_000;
    let decay = DecayModel::new(&[(0.7, 1850.0), (0.3, 9950.0)], 0.15);
    let model = lum_model(decay, 1e3, total, exposure);
    let grid = UniformGrid::new(0.0, 50_000.0, 50.0).unwrap();
    let trace = synth_trace(&model, &grid, exposure, seed);
    Ok((fit_multiexp(&trace, &FitOptions::new(2).with_baseline(BaselineMode::Zero))?, trace.total()))
}

pub fn rel_err(x: f64, truth: f64) -> f64 {
    (x - truth).abs() / truth
}
