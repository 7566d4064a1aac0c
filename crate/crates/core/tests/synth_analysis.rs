use lumnoise::analysis::OverlapMode;
use lumnoise::synth::ExpectedImage;
use lumnoise::{
    default_rois, extract_spectrum, extract_time_trace, fwhm, normalize_spectrum, roi_integrate, separate_counts,
    synthesize, EmissionModel, RegionOfInterest, RoiLabel, StreakImage, UniformGrid,
};

fn grids() -> (UniformGrid, UniformGrid) {
    (
        UniformGrid::new(300.0, 700.0, 1.0).unwrap(),
        UniformGrid::new(-2.0, 20.0, 0.02).unwrap(),
    )
}

#[test]
fn spdc_roi_matches_expected_rate() {
    let m = EmissionModel {
        lum_rate_hz: 0.0,
        ..Default::default()
    };
    let (wl, tg) = grids();
    let img = synthesize(&m, &wl, &tg, 10_000, 1).unwrap();
    let (spdc, _) = default_rois(&m, &img);
    let got = roi_integrate(&img, &spdc).unwrap() as f64;
    let expected = m.spdc_rate_hz * 10_000.0 / m.pump.repetition_rate_hz;
    assert!((got - expected).abs() < 5.0 * expected.sqrt(), "{got} vs {expected}");
}

#[test]
fn switched_off_luminescence_leaves_no_counts() {
    let m = EmissionModel {
        lum_rate_hz: 0.0,
        ..Default::default()
    };
    let (wl, tg) = grids();
    let img = synthesize(&m, &wl, &tg, 1000, 2).unwrap();
    let (_, lum) = default_rois(&m, &img);
    assert_eq!(roi_integrate(&img, &lum).unwrap(), 0);
}

#[test]
fn luminescence_spectrum_peaks_at_430() {
    let m = EmissionModel {
        spdc_rate_hz: 0.0,
        lum_rate_hz: 1e7,
        ..Default::default()
    };
    let (wl, tg) = grids();
    let img = synthesize(&m, &wl, &tg, 1000, 3).unwrap();
    let s = normalize_spectrum(&extract_spectrum(&img, (-2.0, 20.0)).unwrap()).unwrap();
    let peak = s.iter().position(|&v| v == 1.0).unwrap();
    assert!((img.wavelength_axis[peak] - 430.0).abs() <= 1.5, "{}", img.wavelength_axis[peak]);
    let extracted = fwhm(&img.wavelength_axis, &s).unwrap();
    assert!((extracted - 60.0).abs() < 3.0, "{extracted}");
}

#[test]
fn pure_spdc_trace_has_irf_width() {
    let m = EmissionModel {
        lum_rate_hz: 0.0,
        ..Default::default()
    };
    let wl = UniformGrid::new(300.0, 700.0, 400.0).unwrap();
    let tg = UniformGrid::new(-1.0, 1.0, 0.005).unwrap();
    let img = synthesize(&m, &wl, &tg, 200_000, 4).unwrap();
    let tr = extract_time_trace(&img, (300.0, 700.0)).unwrap();
    let (imax, _) = tr.counts.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    assert!(tr.time_axis[imax].abs() < 0.02);
    let w = fwhm(&tr.time_axis, &tr.counts).unwrap();
    assert!((w - m.lum_decay.irf_fwhm_ns).abs() <= 0.005, "{w}");
}

#[test]
fn complementary_ranges_add_up() {
    let m = EmissionModel::default();
    let (wl, tg) = grids();
    let img = synthesize(&m, &wl, &tg, 500, 5).unwrap();
    let a = extract_time_trace(&img, (300.0, 480.0)).unwrap();
    let b = extract_time_trace(&img, (480.5, 700.0)).unwrap();
    let all = extract_time_trace(&img, (300.0, 700.0)).unwrap();
    for i in 0..all.counts.len() {
        assert_eq!(a.counts[i] + b.counts[i], all.counts[i]);
    }
}

#[test]
fn csv_round_trip_of_synthetic_image() {
    let m = EmissionModel::default();
    let wl = UniformGrid::new(300.0, 700.0, 10.0).unwrap();
    let tg = UniformGrid::new(-1.0, 5.0, 0.1).unwrap();
    let img = synthesize(&m, &wl, &tg, 100, 6).unwrap();
    let text = img.to_csv_string();
    let back = StreakImage::read_csv(text.as_bytes()).unwrap();
    assert_eq!(back.counts, img.counts);
    assert_eq!(back.wavelength_axis, img.wavelength_axis);
    assert_eq!(back.time_axis, img.time_axis);
    assert_eq!(back.metadata.seed, Some(6));
    assert_eq!(back.to_csv_string(), text);
}

#[test]
fn model_subtraction_moves_luminescence_floor() {
    let m = EmissionModel::default();
    let (wl, tg) = grids();
    let img = synthesize(&m, &wl, &tg, 20_000, 7).unwrap();
    let (spdc, lum) = default_rois(&m, &img);
    let plain = separate_counts(&img, &spdc, &lum, OverlapMode::None).unwrap();
    let sub = separate_counts(&img, &spdc, &lum, OverlapMode::model_subtract(&m)).unwrap();
    assert!(sub.subtracted_floor > 0.0);
    assert!(sub.c_spdc < plain.c_spdc);
    assert!((sub.c_spdc + sub.c_lum - plain.c_spdc - plain.c_lum).abs() < 1e-6);

    // the floor estimate tracks the expected luminescence under the SPDC region
    let e = ExpectedImage::new(&m, &wl, &tg, 20_000).unwrap();
    let mut lum_only = m.clone();
    lum_only.spdc_rate_hz = 0.0;
    let el = ExpectedImage::new(&lum_only, &wl, &tg, 20_000).unwrap();
    let mut floor = 0.0;
    for t in 0..el.n_time() {
        for w in 0..el.n_wavelength() {
            let (c, l) = (wl.center(w), tg.center(t));
            let inside = c >= spdc.wavelength_range.0 && c <= spdc.wavelength_range.1;
            if inside && l >= spdc.time_range.0 && l <= spdc.time_range.1 {
                floor += el.at(t, w);
            }
        }
    }
    assert!(e.total() > el.total());
    assert!((sub.subtracted_floor - floor).abs() < 4.0 * floor.sqrt(), "{} vs {floor}", sub.subtracted_floor);
}

#[test]
fn empty_roi_rejected() {
    let m = EmissionModel::default();
    let (wl, tg) = grids();
    let img = synthesize(&m, &wl, &tg, 10, 8).unwrap();
    let roi = RegionOfInterest::new((800.0, 900.0), (0.0, 1.0), RoiLabel::Custom);
    assert!(roi_integrate(&img, &roi).is_err());
}

