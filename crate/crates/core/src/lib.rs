//! Simulation and analysis of luminescence noise in a heralded SPDC photon
//! source.
//!
//! The crate covers the emission model (SPDC line and crystal luminescence),
//! synthetic streak-camera images, their reduction to SPDC and luminescence
//! counts, multi-exponential decay fitting, the heralded-state fidelity model
//! and the effect of polarization, spectral and temporal filters.

pub mod analysis;
pub mod config;
pub mod emission;
pub mod error;
pub mod filters;
pub mod fit;
pub mod grid;
pub mod herald;
pub mod image;
mod parallel;
pub mod special;
pub mod spectrum;
pub mod synth;

pub use analysis::{
    default_rois, extract_spectrum, extract_time_trace, fwhm, normalize_spectrum, roi_integrate, separate_counts,
    snr_from_counts, CountSummary, OverlapMode, RegionOfInterest, RoiLabel, TimeTrace,
};
pub use config::RunConfig;
pub use emission::{spdc_center_wavelength, DecayComponent, DecayModel, EmissionModel, PumpConfig};
pub use error::{Error, Result};
pub use filters::{
    pump_wavelength_scan, repetition_rate_advice, run_scenarios, scenario_fidelity, table_one_scenarios,
    transmit_luminescence, transmit_spdc, BandCenter, FilterChain, FilterSpec, PolarizerAxis, Scenario,
    ScenarioReport,
};
pub use fit::{
    decay_independence_report, ensemble, fit_multiexp, BaselineMode, DecayFit, FitError, FitFlag, FitOptions,
    T0Mode,
};
pub use grid::UniformGrid;
pub use herald::{
    fidelity_from_snr, monte_carlo_herald, outcome_probabilities, pair_probability, FidelityEstimate, HeraldOutcome,
    HeraldParams,
};
pub use image::{Metadata, StreakImage};
pub use spectrum::{ProfileKind, SpectralProfile};
pub use synth::{synthesize, ExpectedImage};
