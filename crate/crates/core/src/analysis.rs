//! Reduction of streak images: region-of-interest sums, spectra and time
//! traces, and the SPDC/luminescence count split behind the SNR.

use crate::emission::EmissionModel;
use crate::error::{domain, Result};
use crate::grid::edges_from_centers;
use crate::image::StreakImage;
use crate::spectrum::SpectralProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoiLabel {
    Spdc,
    Luminescence,
    Custom,
}

/// Closed rectangle in (wavelength nm, time ns).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionOfInterest {
    pub wavelength_range: (f64, f64),
    pub time_range: (f64, f64),
    pub label: RoiLabel,
}

impl RegionOfInterest {
    pub fn new(wavelength_range: (f64, f64), time_range: (f64, f64), label: RoiLabel) -> Self {
        Self {
            wavelength_range,
            time_range,
            label,
        }
    }

    pub fn full(image: &StreakImage) -> Self {
        Self::new(
            (image.wavelength_axis[0], *image.wavelength_axis.last().unwrap()),
            (image.time_axis[0], *image.time_axis.last().unwrap()),
            RoiLabel::Custom,
        )
    }

    fn indices(&self, image: &StreakImage) -> Result<(Vec<usize>, Vec<usize>)> {
        let (wl, wh) = self.wavelength_range;
        let (tl, th) = self.time_range;
        if !(wl <= wh) || !(tl <= th) {
            return Err(domain(format!("inverted region of interest {self:?}")));
        }
        let ws = select(&image.wavelength_axis, wl, wh);
        let ts = select(&image.time_axis, tl, th);
        if ws.is_empty() || ts.is_empty() {
            return Err(domain(format!("region of interest {self:?} contains no bins")));
        }
        Ok((ws, ts))
    }
}

fn select(axis: &[f64], lo: f64, hi: f64) -> Vec<usize> {
    axis.iter()
        .enumerate()
        .filter(|(_, &c)| c >= lo && c <= hi)
        .map(|(i, _)| i)
        .collect()
}

/// Sum of counts over bins whose centers lie inside the closed ROI.
pub fn roi_integrate(image: &StreakImage, roi: &RegionOfInterest) -> Result<u64> {
    let (ws, ts) = roi.indices(image)?;
    Ok(ts
        .iter()
        .map(|&t| {
            let row = image.row(t);
            ws.iter().map(|&w| row[w]).sum::<u64>()
        })
        .sum())
}

/// How luminescence that falls inside the SPDC region is attributed.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum OverlapMode {
    /// Everything inside the SPDC region counts as SPDC.
    #[default]
    None,
    /// Luminescence floor taken as the mean per-bin count of two spectral
    /// sidebands of equal width on either side of the SPDC region.
    Sidebands,
    /// Luminescence floor from the sideband counts scaled by the ratio of
    /// the luminescence spectral mass inside the SPDC region to that inside
    /// the sidebands.
    ModelSubtract {
        profile: SpectralProfile,
        support: (f64, f64),
    },
}

impl OverlapMode {
    pub fn model_subtract(model: &EmissionModel) -> Self {
        Self::ModelSubtract {
            profile: model.lum_spectrum,
            support: model.support(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountSummary {
    pub c_spdc: f64,
    pub c_lum: f64,
    /// `c_spdc / c_lum`, or `+inf` when no luminescence was counted.
    pub snr: f64,
    pub snr_infinite: bool,
    pub spdc_roi: RegionOfInterest,
    pub lum_roi: RegionOfInterest,
    /// Luminescence estimated under the SPDC region (zero in `None` mode).
    pub subtracted_floor: f64,
}

pub fn snr_from_counts(c_spdc: f64, c_lum: f64) -> f64 {
    if c_lum > 0.0 {
        c_spdc / c_lum
    } else {
        f64::INFINITY
    }
}

impl CountSummary {
    pub fn from_counts(c_spdc: f64, c_lum: f64, spdc_roi: RegionOfInterest, lum_roi: RegionOfInterest) -> Self {
        let snr = snr_from_counts(c_spdc, c_lum);
        Self {
            c_spdc,
            c_lum,
            snr,
            snr_infinite: snr.is_infinite(),
            spdc_roi,
            lum_roi,
            subtracted_floor: 0.0,
        }
    }
}

pub fn separate_counts(
    image: &StreakImage,
    spdc_roi: &RegionOfInterest,
    lum_roi: &RegionOfInterest,
    mode: OverlapMode,
) -> Result<CountSummary> {
    let raw_spdc = roi_integrate(image, spdc_roi)? as f64;
    let raw_lum = roi_integrate(image, lum_roi)? as f64;
    let floor = match mode {
        OverlapMode::None => 0.0,
        _ => sideband_floor(image, spdc_roi, mode)?.min(raw_spdc),
    };
    let mut summary = CountSummary::from_counts(raw_spdc - floor, raw_lum + floor, *spdc_roi, *lum_roi);
    summary.subtracted_floor = floor;
    Ok(summary)
}

fn sideband_floor(image: &StreakImage, roi: &RegionOfInterest, mode: OverlapMode) -> Result<f64> {
    let (lo, hi) = roi.wavelength_range;
    let width = hi - lo;
    let axis = &image.wavelength_axis;
    let inside = |c: f64| c >= lo && c <= hi;
    let center = select(axis, lo, hi);
    // the closed sideband intervals may touch the region, so drop its bins
    let side: Vec<usize> = [(lo - width, lo), (hi, hi + width)]
        .iter()
        .flat_map(|&(a, b)| select(axis, a, b))
        .filter(|&i| !inside(axis[i]))
        .collect();
    if side.is_empty() {
        return Err(domain("no spectral sidebands available for luminescence subtraction"));
    }
    let (_, ts) = roi.indices(image)?;
    let column = |w: usize| ts.iter().map(|&t| image.get(t, w)).sum::<u64>() as f64;
    let side_counts: f64 = side.iter().map(|&w| column(w)).sum();
    match mode {
        OverlapMode::None => Ok(0.0),
        OverlapMode::Sidebands => Ok(center.len() as f64 * side_counts / side.len() as f64),
        OverlapMode::ModelSubtract { profile, support } => {
            let edges = edges_from_centers(axis)?;
            let mass = |bins: &[usize]| -> f64 {
                bins.iter()
                    .map(|&w| profile.mass(edges[w], edges[w + 1], support))
                    .sum()
            };
            let side_mass = mass(&side);
            if !(side_mass > 0.0) {
                return Err(domain("luminescence model has no weight in the sidebands"));
            }
            Ok(side_counts * mass(&center) / side_mass)
        }
    }
}

/// Default regions for a model: SPDC = (center +- 2 FWHM) x (+-3 IRF FWHM
/// around t = 0); luminescence = every wavelength after the SPDC window.
pub fn default_rois(model: &EmissionModel, image: &StreakImage) -> (RegionOfInterest, RegionOfInterest) {
    let c = model.spdc_spectrum.center;
    let w = model.spdc_spectrum.width;
    let half_t = 3.0 * model.lum_decay.irf_fwhm_ns.max(image_time_step(image));
    let spdc = RegionOfInterest::new((c - 2.0 * w, c + 2.0 * w), (-half_t, half_t), RoiLabel::Spdc);
    let t_end = *image.time_axis.last().unwrap();
    let lum = RegionOfInterest::new(
        (image.wavelength_axis[0], *image.wavelength_axis.last().unwrap()),
        (half_t.next_up(), t_end.max(half_t.next_up())),
        RoiLabel::Luminescence,
    );
    (spdc, lum)
}

fn image_time_step(image: &StreakImage) -> f64 {
    if image.time_axis.len() > 1 {
        image.time_axis[1] - image.time_axis[0]
    } else {
        0.0
    }
}

/// A 1D histogram over time (ns). Counts are kept as `f64` so traces can be
/// rescaled or built from expected values.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeTrace {
    pub time_axis: Vec<f64>,
    pub counts: Vec<f64>,
}

impl TimeTrace {
    pub fn new(time_axis: Vec<f64>, counts: Vec<f64>) -> Result<Self> {
        if time_axis.len() != counts.len() || time_axis.is_empty() {
            return Err(domain("trace axis and counts must have equal nonzero length"));
        }
        if time_axis.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(domain("trace time axis must be strictly increasing"));
        }
        Ok(Self { time_axis, counts })
    }

    pub fn total(&self) -> f64 {
        self.counts.iter().sum()
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            time_axis: self.time_axis.clone(),
            counts: self.counts.iter().map(|c| c * k).collect(),
        }
    }
}

/// Per-time-bin sums over wavelength bins with centers in `[lo, hi]`.
pub fn extract_time_trace(image: &StreakImage, wavelength_range: (f64, f64)) -> Result<TimeTrace> {
    let (lo, hi) = wavelength_range;
    if !(lo <= hi) {
        return Err(domain(format!("inverted wavelength range [{lo}, {hi}]")));
    }
    let ws = select(&image.wavelength_axis, lo, hi);
    if ws.is_empty() {
        return Err(domain(format!("wavelength range [{lo}, {hi}] contains no bins")));
    }
    let counts = (0..image.n_time())
        .map(|t| {
            let row = image.row(t);
            ws.iter().map(|&w| row[w]).sum::<u64>() as f64
        })
        .collect();
    TimeTrace::new(image.time_axis.clone(), counts)
}

/// Per-wavelength-bin sums over time bins with centers in `[lo, hi]`.
pub fn extract_spectrum(image: &StreakImage, time_range: (f64, f64)) -> Result<Vec<f64>> {
    let (lo, hi) = time_range;
    if !(lo <= hi) {
        return Err(domain(format!("inverted time range [{lo}, {hi}]")));
    }
    let ts = select(&image.time_axis, lo, hi);
    if ts.is_empty() {
        return Err(domain(format!("time range [{lo}, {hi}] contains no bins")));
    }
    let mut out = vec![0.0; image.n_wavelength()];
    for &t in &ts {
        for (o, &c) in out.iter_mut().zip(image.row(t)) {
            *o += c as f64;
        }
    }
    Ok(out)
}

/// Divide by the maximum so the peak maps to 1.
pub fn normalize_spectrum(spectrum: &[f64]) -> Result<Vec<f64>> {
    if spectrum.is_empty() {
        return Err(domain("cannot normalize an empty spectrum"));
    }
    let max = spectrum.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(max > 0.0) {
        return Err(domain("cannot normalize a spectrum whose maximum is not positive"));
    }
    Ok(spectrum.iter().map(|v| v / max).collect())
}

/// Full width at half maximum of a peaked series, by linear interpolation
/// of the half-maximum crossings on either side of the peak.
pub fn fwhm(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 3 {
        return Err(domain("need at least three samples to measure a width"));
    }
    let (imax, &ymax) = y
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    if !(ymax > 0.0) {
        return Err(domain("series has no positive peak"));
    }
    let half = 0.5 * ymax;
    let cross = |i: usize, j: usize| x[i] + (half - y[i]) * (x[j] - x[i]) / (y[j] - y[i]);
    let left = (1..=imax).rev().find(|&i| y[i - 1] < half).map(|i| cross(i - 1, i));
    let right = (imax..y.len() - 1).find(|&i| y[i + 1] < half).map(|i| cross(i, i + 1));
    match (left, right) {
        (Some(l), Some(r)) => Ok(r - l),
        _ => Err(domain("peak is not bracketed by half-maximum crossings")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::Metadata;
    use proptest::prelude::*;

    fn ramp(nt: usize, nw: usize) -> StreakImage {
        StreakImage::new(
            (0..(nt * nw) as u64).collect(),
            (0..nw).map(|i| 400.0 + i as f64).collect(),
            (0..nt).map(|i| i as f64 * 0.5).collect(),
            1,
            Metadata::default(),
        )
        .unwrap()
    }

    #[test]
    fn full_roi_is_total() {
        let img = ramp(4, 5);
        assert_eq!(roi_integrate(&img, &RegionOfInterest::full(&img)).unwrap(), img.total());
    }

    #[test]
    fn boundary_bins_included() {
        let img = ramp(4, 5);
        let roi = RegionOfInterest::new((401.0, 402.0), (0.5, 0.5), RoiLabel::Custom);
        assert_eq!(roi_integrate(&img, &roi).unwrap(), img.get(1, 1) + img.get(1, 2));
    }

    #[test]
    fn empty_roi_is_an_error() {
        let img = ramp(4, 5);
        let roi = RegionOfInterest::new((401.2, 401.8), (0.0, 1.0), RoiLabel::Custom);
        assert!(roi_integrate(&img, &roi).is_err());
        let inverted = RegionOfInterest::new((402.0, 401.0), (0.0, 1.0), RoiLabel::Custom);
        assert!(roi_integrate(&img, &inverted).is_err());
    }

    #[test]
    fn table_snr_quotients() {
        let r = RegionOfInterest::new((0.0, 1.0), (0.0, 1.0), RoiLabel::Custom);
        let s = CountSummary::from_counts(2.225e10, 1.343e10, r, r);
        assert_eq!((s.snr * 1000.0).round() / 1000.0, 1.657);
        let s = CountSummary::from_counts(2.225e10, 0.489e10, r, r);
        assert_eq!((s.snr * 1000.0).round() / 1000.0, 4.550);
        let s = CountSummary::from_counts(2.225e10, 0.0, r, r);
        assert!(s.snr_infinite && s.snr.is_infinite());
    }

    #[test]
    fn sideband_subtraction_removes_flat_floor() {
        // flat floor of 3 everywhere plus 100 extra in the central column
        let nw = 9;
        let mut counts = vec![3u64; 2 * nw];
        counts[4] += 100;
        counts[nw + 4] += 100;
        let img = StreakImage::new(
            counts,
            (0..nw).map(|i| 500.0 + i as f64).collect(),
            vec![0.0, 1.0],
            1,
            Metadata::default(),
        )
        .unwrap();
        let spdc = RegionOfInterest::new((503.0, 505.0), (0.0, 1.0), RoiLabel::Spdc);
        let lum = RegionOfInterest::new((500.0, 501.0), (0.0, 1.0), RoiLabel::Luminescence);
        let plain = separate_counts(&img, &spdc, &lum, OverlapMode::None).unwrap();
        assert_eq!(plain.c_spdc, 218.0);
        let sub = separate_counts(&img, &spdc, &lum, OverlapMode::Sidebands).unwrap();
        assert_eq!(sub.c_spdc, 200.0);
        assert_eq!(sub.subtracted_floor, 18.0);
        assert_eq!(sub.c_lum, plain.c_lum + 18.0);
    }

    #[test]
    fn traces_add_and_zero() {
        let img = ramp(3, 6);
        let a = extract_time_trace(&img, (400.0, 402.0)).unwrap();
        let b = extract_time_trace(&img, (402.5, 405.0)).unwrap();
        let all = extract_time_trace(&img, (400.0, 405.0)).unwrap();
        for i in 0..3 {
            assert_eq!(a.counts[i] + b.counts[i], all.counts[i]);
        }
        let zero = StreakImage::new(vec![0; 6], vec![1.0, 2.0, 3.0], vec![0.0, 1.0], 1, Metadata::default()).unwrap();
        assert!(extract_time_trace(&zero, (1.0, 3.0)).unwrap().counts.iter().all(|&c| c == 0.0));
        assert!(extract_time_trace(&img, (410.0, 420.0)).is_err());
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_spectrum(&[2.0, 4.0, 8.0]).unwrap(), vec![0.25, 0.5, 1.0]);
        let n = vec![0.1, 1.0, 0.3];
        assert_eq!(normalize_spectrum(&n).unwrap(), n);
        assert!(normalize_spectrum(&[0.0, 0.0]).is_err());
        assert!(normalize_spectrum(&[]).is_err());
    }

    #[test]
    fn fwhm_of_triangle() {
        let x: Vec<f64> = (0..11).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| 5.0 - (v - 5.0).abs()).collect();
        assert!((fwhm(&x, &y).unwrap() - 5.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn roi_additivity(split_w in 0usize..8, split_t in 0usize..6, seed in any::<u64>()) {
            let nw = 8; let nt = 6;
            let counts: Vec<u64> = (0..nw * nt).map(|i| (seed.wrapping_mul(i as u64 + 1) >> 40) % 1000).collect();
            let img = StreakImage::new(counts, (0..nw).map(|i| i as f64).collect(),
                (0..nt).map(|i| i as f64).collect(), 1, Metadata::default()).unwrap();
            let total = img.total();
            // split along wavelength
            if split_w + 1 < nw {
                let a = RegionOfInterest::new((0.0, split_w as f64), (0.0, 5.0), RoiLabel::Custom);
                let b = RegionOfInterest::new((split_w as f64 + 1.0, 7.0), (0.0, 5.0), RoiLabel::Custom);
                prop_assert_eq!(roi_integrate(&img, &a).unwrap() + roi_integrate(&img, &b).unwrap(), total);
            }
            if split_t + 1 < nt {
                let a = RegionOfInterest::new((0.0, 7.0), (0.0, split_t as f64), RoiLabel::Custom);
                let b = RegionOfInterest::new((0.0, 7.0), (split_t as f64 + 0.5, 5.0), RoiLabel::Custom);
                prop_assert_eq!(roi_integrate(&img, &a).unwrap() + roi_integrate(&img, &b).unwrap(), total);
            }
        }

        #[test]
        fn normalization_idempotent(v in proptest::collection::vec(0.0f64..1e9, 1..50)) {
            prop_assume!(v.iter().any(|&x| x > 0.0));
            let once = normalize_spectrum(&v).unwrap();
            let twice = normalize_spectrum(&once).unwrap();
            prop_assert_eq!(&once, &twice);
            prop_assert_eq!(once.iter().copied().fold(0.0, f64::max), 1.0);
        }
    }
}
