//! Flat `key = value` run configuration.
//!
//! Blank lines and `#` comments are ignored. Every key must be known and may
//! appear once. [`RunConfig::to_config_string`] writes every setting back out
//! so that a run can be repeated from its own record.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::analysis::OverlapMode;
use crate::emission::{DecayComponent, EmissionModel};
use crate::error::{config, Error, Result};
use crate::filters::{table_one_scenarios, BandCenter, FilterChain, FilterSpec, PolarizerAxis, ReferenceRow, Scenario, TABLE_BASELINE};
use crate::fit::{BaselineMode, FitOptions, T0Mode};
use crate::grid::UniformGrid;
use crate::herald::HeraldParams;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: EmissionModel,
    pub time_grid: UniformGrid,
    pub exposure_pulses: u64,
    pub seed: u64,
    pub herald: HeraldParams,
    pub monte_carlo_windows: Option<u64>,
    pub overlap: OverlapMode,
    pub fit: FitOptions,
    /// Wavelength band summed into the trace that is fitted.
    pub fit_wavelength_range: Option<(f64, f64)>,
    pub baseline_counts: Option<(f64, f64)>,
    pub scenarios: Vec<Scenario>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: EmissionModel::default(),
            time_grid: UniformGrid {
                start: -2.0,
                stop: 20.0,
                step: 0.02,
            },
            exposure_pulses: 1_000_000,
            seed: 0,
            herald: HeraldParams::new(1e5, 1e5 / 1.657, 10.0),
            monte_carlo_windows: None,
            overlap: OverlapMode::None,
            fit: FitOptions::new(1),
            fit_wavelength_range: None,
            baseline_counts: Some(TABLE_BASELINE),
            scenarios: table_one_scenarios(),
        }
    }
}

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.map.remove(key)
    }

    fn f64(&mut self, key: &str) -> Result<Option<f64>> {
        self.take(key).map(|(_, v)| parse_f64(key, &v)).transpose()
    }

    fn u64(&mut self, key: &str) -> Result<Option<u64>> {
        self.take(key)
            .map(|(_, v)| parse_u64(key, &v))
            .transpose()
    }

    fn set_f64(&mut self, key: &str, slot: &mut f64) -> Result<()> {
        if let Some(v) = self.f64(key)? {
            *slot = v;
        }
        Ok(())
    }

    fn indices(&self, prefix: &str) -> Result<Vec<usize>> {
        let mut out: Vec<usize> = Vec::new();
        for key in self.map.keys() {
            if let Some(rest) = key.strip_prefix(prefix) {
                let idx = rest.split('.').next().unwrap_or("");
                let n = idx
                    .parse::<usize>()
                    .map_err(|_| config(key.clone(), format!("`{idx}` is not an index")))?;
                if !out.contains(&n) {
                    out.push(n);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    fn has_prefix(&self, prefix: &str) -> bool {
        self.map.keys().any(|k| k.starts_with(prefix))
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v
        .parse()
        .map_err(|_| config(key, format!("`{v}` is not a number")))?;
    if x.is_nan() {
        return Err(config(key, "NaN is not allowed"));
    }
    Ok(x)
}

fn parse_u64(key: &str, v: &str) -> Result<u64> {
    if let Ok(n) = v.parse::<u64>() {
        return Ok(n);
    }
    // accept 1e6-style integers
    let x = parse_f64(key, v)?;
    if x >= 0.0 && x.fract() == 0.0 && x < 1.8e19 {
        Ok(x as u64)
    } else {
        Err(config(key, format!("`{v}` is not a nonnegative integer")))
    }
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(config(key, format!("`{v}` is not a boolean"))),
    }
}

fn parse_pair(key: &str, v: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(config(key, format!("expected `lo, hi`, got `{v}`")));
    }
    let (a, b) = (parse_f64(key, parts[0])?, parse_f64(key, parts[1])?);
    if !(a <= b) {
        return Err(config(key, format!("inverted range `{v}`")));
    }
    Ok((a, b))
}

fn tokenize(text: &str) -> Result<Entries> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (k, v) = body.split_once('=').ok_or_else(|| Error::Parse {
            line,
            message: format!("expected `key = value`, got `{body}`"),
        })?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(Error::Parse {
                line,
                message: "empty key".into(),
            });
        }
        if let Some((first, _)) = map.insert(k.to_string(), (line, v.to_string())) {
            return Err(config(k, format!("duplicate key (first set on line {first})")));
        }
    }
    Ok(Entries { map })
}

fn parse_filter(e: &mut Entries, prefix: &str) -> Result<FilterSpec> {
    let kind_key = format!("{prefix}kind");
    let (_, kind) = e
        .take(&kind_key)
        .ok_or_else(|| config(kind_key.clone(), "missing filter kind"))?;
    fn need(e: &mut Entries, prefix: &str, kind: &str, name: &str) -> Result<f64> {
        let key = format!("{prefix}{name}");
        e.f64(&key)?
            .ok_or_else(|| config(key, format!("required for a {kind} filter")))
    }
    let spec = match kind.as_str() {
        "polarizer" => {
            let key = format!("{prefix}axis");
            let axis = match e.take(&key).map(|(_, v)| v).as_deref() {
                Some("aligned") | None => PolarizerAxis::AlignedToSpdc,
                Some("orthogonal") => PolarizerAxis::Orthogonal,
                Some(other) => return Err(config(key, format!("axis `{other}` is not aligned|orthogonal"))),
            };
            FilterSpec::Polarizer(axis)
        }
        "longpass" => {
            let cutoff_nm = need(e, prefix, &kind, "cutoff_nm")?;
            let key = format!("{prefix}transmission");
            FilterSpec::Longpass {
                cutoff_nm,
                transmission: e.f64(&key)?.unwrap_or(0.95),
            }
        }
        "bandpass" => {
            let fwhm_nm = need(e, prefix, &kind, "fwhm_nm")?;
            let ckey = format!("{prefix}center_nm");
            let center = match e.take(&ckey) {
                Some((_, v)) if v == "spdc" => BandCenter::SpdcLine,
                Some((_, v)) => BandCenter::Fixed(parse_f64(&ckey, &v)?),
                None => return Err(config(ckey, "required for a bandpass filter (number or `spdc`)")),
            };
            let tkey = format!("{prefix}peak_transmission");
            FilterSpec::Bandpass {
                center,
                fwhm_nm,
                peak_transmission: e.f64(&tkey)?.unwrap_or(1.0),
            }
        }
        "temporal_gate" => {
            let window_ns = need(e, prefix, &kind, "window_ns")?;
            let rkey = format!("{prefix}repetition_rate_hz");
            let okey = format!("{prefix}offset_ns");
            FilterSpec::TemporalGate {
                window_ns,
                repetition_rate_hz: e.f64(&rkey)?,
                offset_ns: e.f64(&okey)?.unwrap_or(0.0),
            }
        }
        "measured" => FilterSpec::Measured {
            spdc_transmission: need(e, prefix, &kind, "spdc_transmission")?,
            lum_transmission: need(e, prefix, &kind, "lum_transmission")?,
        },
        other => {
            return Err(config(
                kind_key,
                format!("unknown filter kind `{other}` (polarizer|longpass|bandpass|temporal_gate|measured)"),
            ))
        }
    };
    Ok(spec)
}

fn write_filter(out: &mut String, prefix: &str, f: &FilterSpec) {
    let _ = writeln!(out, "{prefix}kind = {}", f.kind_name());
    match *f {
        FilterSpec::Polarizer(axis) => {
            let a = match axis {
                PolarizerAxis::AlignedToSpdc => "aligned",
                PolarizerAxis::Orthogonal => "orthogonal",
            };
            let _ = writeln!(out, "{prefix}axis = {a}");
        }
        FilterSpec::Longpass {
            cutoff_nm,
            transmission,
        } => {
            let _ = writeln!(out, "{prefix}cutoff_nm = {cutoff_nm:?}");
            let _ = writeln!(out, "{prefix}transmission = {transmission:?}");
        }
        FilterSpec::Bandpass {
            center,
            fwhm_nm,
            peak_transmission,
        } => {
            match center {
                BandCenter::SpdcLine => {
                    let _ = writeln!(out, "{prefix}center_nm = spdc");
                }
                BandCenter::Fixed(c) => {
                    let _ = writeln!(out, "{prefix}center_nm = {c:?}");
                }
            }
            let _ = writeln!(out, "{prefix}fwhm_nm = {fwhm_nm:?}");
            let _ = writeln!(out, "{prefix}peak_transmission = {peak_transmission:?}");
        }
        FilterSpec::TemporalGate {
            window_ns,
            repetition_rate_hz,
            offset_ns,
        } => {
            let _ = writeln!(out, "{prefix}window_ns = {window_ns:?}");
            if let Some(r) = repetition_rate_hz {
                let _ = writeln!(out, "{prefix}repetition_rate_hz = {r:?}");
            }
            let _ = writeln!(out, "{prefix}offset_ns = {offset_ns:?}");
        }
        FilterSpec::Measured {
            spdc_transmission,
            lum_transmission,
        } => {
            let _ = writeln!(out, "{prefix}spdc_transmission = {spdc_transmission:?}");
            let _ = writeln!(out, "{prefix}lum_transmission = {lum_transmission:?}");
        }
    }
}

impl RunConfig {
    /// Parse a configuration; unset keys keep their defaults. Scenario keys
    /// replace the default scenario list as a whole.
    pub fn parse(text: &str) -> Result<Self> {
        let mut e = tokenize(text)?;
        let mut c = Self::default();
        let m = &mut c.model;

        e.set_f64("pump.wavelength_nm", &mut m.pump.wavelength_nm)?;
        e.set_f64("pump.power_mw", &mut m.pump.power_mw)?;
        e.set_f64("pump.repetition_rate_hz", &mut m.pump.repetition_rate_hz)?;
        e.set_f64("pump.polarization_deg", &mut m.pump.polarization_deg)?;
        m.spdc_spectrum.center = 2.0 * m.pump.wavelength_nm;
        e.set_f64("spdc_spectrum.fwhm_nm", &mut m.spdc_spectrum.width)?;
        if let Some((_, v)) = e.take("spdc.polarized") {
            m.spdc_polarized = parse_bool("spdc.polarized", &v)?;
        }
        e.set_f64("lum_spectrum.center_nm", &mut m.lum_spectrum.center)?;
        e.set_f64("lum_spectrum.fwhm_nm", &mut m.lum_spectrum.width)?;
        e.set_f64("lum_spectrum.skew", &mut m.lum_spectrum.skew)?;

        e.set_f64("decay.irf_fwhm_ns", &mut m.lum_decay.irf_fwhm_ns)?;
        let decay_idx = e.indices("decay.")?;
        if !decay_idx.is_empty() {
            let mut comps = Vec::new();
            for (pos, i) in decay_idx.iter().enumerate() {
                if *i != pos + 1 {
                    return Err(config(format!("decay.{i}"), "decay components must be numbered 1, 2, 3, ..."));
                }
                let ak = format!("decay.{i}.amplitude");
                let lk = format!("decay.{i}.lifetime_ns");
                let amplitude = e.f64(&ak)?.ok_or_else(|| config(ak.clone(), "missing"))?;
                let lifetime_ns = e.f64(&lk)?.ok_or_else(|| config(lk.clone(), "missing"))?;
                comps.push(DecayComponent { amplitude, lifetime_ns });
            }
            m.lum_decay.components = comps;
        }

        e.set_f64("rates.spdc_hz", &mut m.spdc_rate_hz)?;
        e.set_f64("rates.lum_hz", &mut m.lum_rate_hz)?;
        e.set_f64("rates.spdc_power_exponent", &mut m.spdc_power_exponent)?;

        e.set_f64("grid.wavelength_start_nm", &mut m.wavelength_grid.start)?;
        e.set_f64("grid.wavelength_stop_nm", &mut m.wavelength_grid.stop)?;
        e.set_f64("grid.wavelength_step_nm", &mut m.wavelength_grid.step)?;
        e.set_f64("grid.time_start_ns", &mut c.time_grid.start)?;
        e.set_f64("grid.time_stop_ns", &mut c.time_grid.stop)?;
        e.set_f64("grid.time_step_ns", &mut c.time_grid.step)?;

        if let Some(v) = e.u64("synth.exposure_pulses")? {
            c.exposure_pulses = v;
        }
        if let Some(v) = e.u64("synth.seed")? {
            c.seed = v;
        }

        e.set_f64("herald.r_s_hz", &mut c.herald.r_s_hz)?;
        e.set_f64("herald.r_l_hz", &mut c.herald.r_l_hz)?;
        c.herald.r_l_idler_hz = e.f64("herald.r_l_idler_hz")?;
        e.set_f64("herald.t_w_ns", &mut c.herald.t_w_ns)?;
        e.set_f64("herald.efficiency", &mut c.herald.efficiency)?;
        c.monte_carlo_windows = e.u64("herald.monte_carlo_windows")?;

        if let Some((_, v)) = e.take("analysis.overlap") {
            c.overlap = match v.as_str() {
                "none" => OverlapMode::None,
                "sidebands" => OverlapMode::Sidebands,
                "model_subtract" => OverlapMode::model_subtract(&c.model),
                other => return Err(config("analysis.overlap", format!("`{other}` is not none|sidebands|model_subtract"))),
            };
        }

        if let Some(n) = e.u64("fit.components")? {
            c.fit.n_components = n as usize;
        }
        if let Some((_, v)) = e.take("fit.irf_fwhm_ns") {
            c.fit.irf_fwhm_ns = match v.as_str() {
                "none" => None,
                s => Some(parse_f64("fit.irf_fwhm_ns", s)?),
            };
        }
        if let Some((_, v)) = e.take("fit.baseline") {
            c.fit.baseline = match v.as_str() {
                "zero" => BaselineMode::Zero,
                "free" => BaselineMode::Free,
                s => BaselineMode::Fixed(parse_f64("fit.baseline", s)?),
            };
        }
        if let Some((_, v)) = e.take("fit.t0") {
            c.fit.t0 = match v.as_str() {
                "auto" => T0Mode::Auto,
                "free" => T0Mode::Free,
                s => T0Mode::Fixed(parse_f64("fit.t0", s)?),
            };
        }
        if let Some((_, v)) = e.take("fit.time_range_ns") {
            c.fit.time_range = Some(parse_pair("fit.time_range_ns", &v)?);
        }
        if let Some((_, v)) = e.take("fit.wavelength_range_nm") {
            c.fit_wavelength_range = Some(parse_pair("fit.wavelength_range_nm", &v)?);
        }
        if let Some(n) = e.u64("fit.max_iterations")? {
            c.fit.max_iterations = n as usize;
        }

        if e.has_prefix("scenario.") {
            let cs = e.f64("scenario.baseline_c_s")?;
            let cl = e.f64("scenario.baseline_c_l")?;
            c.baseline_counts = match (cs, cl) {
                (Some(a), Some(b)) => Some((a, b)),
                (None, None) => None,
                (None, _) => return Err(config("scenario.baseline_c_s", "set both baseline counts or neither")),
                (_, None) => return Err(config("scenario.baseline_c_l", "set both baseline counts or neither")),
            };
            c.scenarios = Vec::new();
            for i in e.indices("scenario.")? {
                let p = format!("scenario.{i}.");
                let label = e.take(&format!("{p}label")).map(|(_, v)| v).unwrap_or_else(|| format!("scenario {i}"));
                let rs = e.f64(&format!("{p}reference_snr"))?;
                let rf = e.f64(&format!("{p}reference_f"))?;
                let reference = match (rs, rf) {
                    (Some(snr), Some(fidelity)) => Some(ReferenceRow { snr, fidelity }),
                    (None, None) => None,
                    _ => return Err(config(format!("{p}reference_snr"), "set both reference values or neither")),
                };
                let mut filters = Vec::new();
                for j in e.indices(&format!("{p}filter."))? {
                    filters.push(parse_filter(&mut e, &format!("{p}filter.{j}."))?);
                }
                let chain = FilterChain::new(filters).map_err(|err| config(format!("{p}filter"), err.to_string()))?;
                c.scenarios.push(Scenario { label, chain, reference });
            }
        }

        if let Some((key, (line, _))) = e.map.into_iter().next() {
            return Err(config(key, format!("unknown key (line {line})")));
        }
        c.model
            .validate()
            .map_err(|err| config("model", err.to_string()))?;
        UniformGrid::new(c.time_grid.start, c.time_grid.stop, c.time_grid.step)
            .map_err(|err| config("grid.time_step_ns", err.to_string()))?;
        for s in &c.scenarios {
            s.chain
                .validate(&c.model)
                .map_err(|err| config(format!("scenario `{}`", s.label), err.to_string()))?;
        }
        Ok(c)
    }

    /// Every setting, in a form [`RunConfig::parse`] reads back unchanged.
    pub fn to_config_string(&self) -> String {
        let m = &self.model;
        let mut o = String::new();
        let kv = |o: &mut String, k: &str, v: String| {
            let _ = writeln!(o, "{k} = {v}");
        };
        kv(&mut o, "pump.wavelength_nm", format!("{:?}", m.pump.wavelength_nm));
        kv(&mut o, "pump.power_mw", format!("{:?}", m.pump.power_mw));
        kv(&mut o, "pump.repetition_rate_hz", format!("{:?}", m.pump.repetition_rate_hz));
        kv(&mut o, "pump.polarization_deg", format!("{:?}", m.pump.polarization_deg));
        kv(&mut o, "spdc_spectrum.fwhm_nm", format!("{:?}", m.spdc_spectrum.width));
        kv(&mut o, "spdc.polarized", m.spdc_polarized.to_string());
        kv(&mut o, "lum_spectrum.center_nm", format!("{:?}", m.lum_spectrum.center));
        kv(&mut o, "lum_spectrum.fwhm_nm", format!("{:?}", m.lum_spectrum.width));
        kv(&mut o, "lum_spectrum.skew", format!("{:?}", m.lum_spectrum.skew));
        for (i, d) in m.lum_decay.components.iter().enumerate() {
            kv(&mut o, &format!("decay.{}.amplitude", i + 1), format!("{:?}", d.amplitude));
            kv(&mut o, &format!("decay.{}.lifetime_ns", i + 1), format!("{:?}", d.lifetime_ns));
        }
        kv(&mut o, "decay.irf_fwhm_ns", format!("{:?}", m.lum_decay.irf_fwhm_ns));
        kv(&mut o, "rates.spdc_hz", format!("{:?}", m.spdc_rate_hz));
        kv(&mut o, "rates.lum_hz", format!("{:?}", m.lum_rate_hz));
        kv(&mut o, "rates.spdc_power_exponent", format!("{:?}", m.spdc_power_exponent));
        kv(&mut o, "grid.wavelength_start_nm", format!("{:?}", m.wavelength_grid.start));
        kv(&mut o, "grid.wavelength_stop_nm", format!("{:?}", m.wavelength_grid.stop));
        kv(&mut o, "grid.wavelength_step_nm", format!("{:?}", m.wavelength_grid.step));
        kv(&mut o, "grid.time_start_ns", format!("{:?}", self.time_grid.start));
        kv(&mut o, "grid.time_stop_ns", format!("{:?}", self.time_grid.stop));
        kv(&mut o, "grid.time_step_ns", format!("{:?}", self.time_grid.step));
        kv(&mut o, "synth.exposure_pulses", self.exposure_pulses.to_string());
        kv(&mut o, "synth.seed", self.seed.to_string());
        kv(&mut o, "herald.r_s_hz", format!("{:?}", self.herald.r_s_hz));
        kv(&mut o, "herald.r_l_hz", format!("{:?}", self.herald.r_l_hz));
        if let Some(r) = self.herald.r_l_idler_hz {
            kv(&mut o, "herald.r_l_idler_hz", format!("{r:?}"));
        }
        kv(&mut o, "herald.t_w_ns", format!("{:?}", self.herald.t_w_ns));
        kv(&mut o, "herald.efficiency", format!("{:?}", self.herald.efficiency));
        if let Some(n) = self.monte_carlo_windows {
            kv(&mut o, "herald.monte_carlo_windows", n.to_string());
        }
        kv(&mut o, 
            "analysis.overlap",
            match self.overlap {
                OverlapMode::None => "none",
                OverlapMode::Sidebands => "sidebands",
                OverlapMode::ModelSubtract { .. } => "model_subtract",
            }
            .into(),
        );
        kv(&mut o, "fit.components", self.fit.n_components.to_string());
        kv(&mut o, 
            "fit.irf_fwhm_ns",
            self.fit.irf_fwhm_ns.map_or("none".into(), |v| format!("{v:?}")),
        );
        kv(&mut o, 
            "fit.baseline",
            match self.fit.baseline {
                BaselineMode::Zero => "zero".into(),
                BaselineMode::Free => "free".into(),
                BaselineMode::Fixed(b) => format!("{b:?}"),
            },
        );
        kv(&mut o, 
            "fit.t0",
            match self.fit.t0 {
                T0Mode::Auto => "auto".into(),
                T0Mode::Free => "free".into(),
                T0Mode::Fixed(t) => format!("{t:?}"),
            },
        );
        if let Some((a, b)) = self.fit.time_range {
            kv(&mut o, "fit.time_range_ns", format!("{a:?}, {b:?}"));
        }
        if let Some((a, b)) = self.fit_wavelength_range {
            kv(&mut o, "fit.wavelength_range_nm", format!("{a:?}, {b:?}"));
        }
        kv(&mut o, "fit.max_iterations", self.fit.max_iterations.to_string());
        if let Some((cs, cl)) = self.baseline_counts {
            kv(&mut o, "scenario.baseline_c_s", format!("{cs:?}"));
            kv(&mut o, "scenario.baseline_c_l", format!("{cl:?}"));
        }
        for (i, s) in self.scenarios.iter().enumerate() {
            let p = format!("scenario.{}.", i + 1);
            kv(&mut o, &format!("{p}label"), s.label.clone());
            if let Some(r) = s.reference {
                kv(&mut o, &format!("{p}reference_snr"), format!("{:?}", r.snr));
                kv(&mut o, &format!("{p}reference_f"), format!("{:?}", r.fidelity));
            }
            for (j, f) in s.chain.filters.iter().enumerate() {
                write_filter(&mut o, &format!("{p}filter.{}.", j + 1), f);
            }
        }
        o
    }
}
