use std::fmt;
use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lumnoise::herald::{idler_probability, monte_carlo_probabilities, outcome_probabilities_asym};
use lumnoise::image::write_two_column;
use lumnoise::{
    default_rois, extract_time_trace, fidelity_from_snr, fit_multiexp, pair_probability, run_scenarios,
    separate_counts, synthesize, DecayFit, Error, FitError, FitFlag, OverlapMode, RegionOfInterest, RoiLabel,
    RunConfig, StreakImage, TimeTrace,
};

/// Luminescence noise in heralded SPDC sources: synthesize streak images,
/// reduce them to counts, fit decays and evaluate heralded fidelity.
#[derive(Parser)]
#[command(name = "lumnoise", version)]
struct Cli {
    /// Run configuration (flat `key = value` file).
    #[arg(long, global = true, env = "LUMNOISE_CONFIG")]
    config: Option<PathBuf>,

    #[arg(long, global = true, env = "LUMNOISE_SEED")]
    seed: Option<u64>,

    /// Directory for output files and the resolved configuration.
    #[arg(long, global = true, env = "LUMNOISE_OUT", default_value = "lumnoise-out")]
    out: PathBuf,

    #[arg(long, global = true, env = "LUMNOISE_FORMAT", value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a Poisson-noisy streak image from the emission model.
    Synth(SynthArgs),
    /// Separate SPDC and luminescence counts in a streak image.
    Analyze(AnalyzeArgs),
    /// Fit a multi-exponential decay to a trace or an image.
    Fit(FitArgs),
    /// Heralded outcome probabilities and fidelity.
    Herald(HeraldArgs),
    /// Counts, SNR and fidelity for each filter scenario.
    Scenario(ScenarioArgs),
}

#[derive(Args)]
struct SynthArgs {
    /// Luminescence rate at the reference pump power (Hz).
    #[arg(long)]
    lum_rate: Option<f64>,
    /// SPDC rate at the reference pump power (Hz).
    #[arg(long)]
    spdc_rate: Option<f64>,
    /// Number of pump pulses integrated.
    #[arg(long)]
    exposure: Option<u64>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Streak image CSV.
    image: PathBuf,
    /// none, sidebands or model_subtract.
    #[arg(long)]
    overlap: Option<String>,
    /// `wl_lo,wl_hi,t_lo,t_hi` or `full`.
    #[arg(long)]
    spdc_roi: Option<String>,
    /// `wl_lo,wl_hi,t_lo,t_hi` or `full`.
    #[arg(long)]
    lum_roi: Option<String>,
}

#[derive(Args)]
struct FitArgs {
    /// Two-column `time_ns,counts` trace or a streak image CSV.
    input: PathBuf,
    #[arg(long)]
    components: Option<usize>,
    /// Wavelength band `lo,hi` summed when the input is an image.
    #[arg(long)]
    wavelength_range: Option<String>,
    /// Time range `lo,hi` of bins entering the fit.
    #[arg(long)]
    time_range: Option<String>,
    /// IRF FWHM in ns.
    #[arg(long)]
    irf: Option<f64>,
}

#[derive(Args)]
struct HeraldArgs {
    /// SPDC rate (Hz).
    #[arg(long)]
    rs: Option<f64>,
    /// Luminescence rate (Hz).
    #[arg(long, conflicts_with_all = ["pl", "snr"])]
    rl: Option<f64>,
    /// Idler-mode luminescence rate (Hz), if different from the signal mode.
    #[arg(long)]
    rl_idler: Option<f64>,
    /// Detection window (ns).
    #[arg(long)]
    tw: Option<f64>,
    /// Luminescence probability per window; sets the rate from `--tw`.
    #[arg(long, conflicts_with = "snr")]
    pl: Option<f64>,
    /// SPDC-to-luminescence ratio; sets the rate from `--rs`.
    #[arg(long)]
    snr: Option<f64>,
    /// Check against a Monte Carlo run over this many windows (`1e8` is accepted).
    #[arg(long, value_parser = parse_count)]
    monte_carlo: Option<u64>,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Unfiltered SPDC and luminescence counts `c_s,c_l`.
    #[arg(long)]
    baseline: Option<String>,
}

/// A result that was produced and written but carries a warning flag.
#[derive(Debug)]
struct Flagged(String);

impl fmt::Display for Flagged {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "result flagged: {}", self.0)
    }
}

impl std::error::Error for Flagged {}

/// Rows of formatted cells, written as CSV or as an aligned table.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }

    fn pretty(&self) -> String {
        let widths: Vec<usize> = (0..self.header.len())
            .map(|i| {
                self.rows
                    .iter()
                    .map(|r| r[i].len())
                    .chain([self.header[i].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: Vec<&str>| {
            let mut s = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ");
            s.truncate(s.trim_end().len());
            s.push('\n');
            s
        };
        let mut s = line(self.header.clone());
        for r in &self.rows {
            s.push_str(&line(r.iter().map(String::as_str).collect()));
        }
        s
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Pretty => self.pretty(),
        }
    }
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn parse_count(s: &str) -> std::result::Result<u64, String> {
    let x: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if x >= 1.0 && x.fract() == 0.0 && x <= u64::MAX as f64 {
        Ok(x as u64)
    } else {
        Err(format!("`{s}` is not a positive whole number"))
    }
}

fn parse_list(flag: &str, s: &str, n: usize) -> Result<Vec<f64>> {
    let v = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::Config {
            key: flag.into(),
            message: format!("`{s}` is not a list of numbers"),
        })?;
    if v.len() != n {
        return Err(Error::Config {
            key: flag.into(),
            message: format!("expected {n} comma-separated values, found {}", v.len()),
        }
        .into());
    }
    Ok(v)
}

fn parse_roi(flag: &str, s: &str, image: &StreakImage, label: RoiLabel) -> Result<RegionOfInterest> {
    if s.trim() == "full" {
        let mut roi = RegionOfInterest::full(image);
        roi.label = label;
        return Ok(roi);
    }
    let v = parse_list(flag, s, 4)?;
    Ok(RegionOfInterest::new((v[0], v[1]), (v[2], v[3]), label))
}

fn load_config(path: Option<&Path>) -> Result<RunConfig> {
    let Some(path) = path else {
        return Ok(RunConfig::default());
    };
    let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    RunConfig::parse(&text)
        .map_err(anyhow::Error::from)
        .with_context(|| format!("in config {}", path.display()))
}

fn read_image(path: &Path) -> Result<StreakImage> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    StreakImage::read_csv(BufReader::new(file))
        .map_err(anyhow::Error::from)
        .with_context(|| format!("reading image {}", path.display()))
}

/// Write `name` into the output directory.
fn write_out(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn write_resolved(dir: &Path, command: &str, input: Option<&Path>, cfg: &RunConfig) -> Result<()> {
    let mut s = format!("# lumnoise {command}\n");
    if let Some(p) = input {
        s.push_str(&format!("# input = {}\n", p.display()));
    }
    s.push_str(&cfg.to_config_string());
    write_out(dir, &format!("{command}.resolved.cfg"), &s)?;
    Ok(())
}

fn print(s: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(s.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn cmd_synth(cli: &Cli, args: &SynthArgs, mut cfg: RunConfig) -> Result<()> {
    if let Some(r) = args.lum_rate {
        cfg.model.lum_rate_hz = r;
    }
    if let Some(r) = args.spdc_rate {
        cfg.model.spdc_rate_hz = r;
    }
    if let Some(n) = args.exposure {
        cfg.exposure_pulses = n;
    }
    cfg.model.validate()?;
    let image = synthesize(
        &cfg.model,
        &cfg.model.wavelength_grid,
        &cfg.time_grid,
        cfg.exposure_pulses,
        cfg.seed,
    )?;
    for w in &image.metadata.warnings {
        eprintln!("warning: {w}");
    }
    let path = write_out(&cli.out, "image.csv", &image.to_csv_string())?;
    write_resolved(&cli.out, "synth", None, &cfg)?;
    let mut t = Table::new(&["image", "seed", "exposure", "n_time", "n_wavelength", "total_counts"]);
    t.push(vec![
        path.display().to_string(),
        cfg.seed.to_string(),
        cfg.exposure_pulses.to_string(),
        image.n_time().to_string(),
        image.n_wavelength().to_string(),
        image.total().to_string(),
    ]);
    print(&t.render(cli.format))
}

fn cmd_analyze(cli: &Cli, args: &AnalyzeArgs, mut cfg: RunConfig) -> Result<()> {
    if let Some(mode) = &args.overlap {
        cfg.overlap = match mode.as_str() {
            "none" => OverlapMode::None,
            "sidebands" => OverlapMode::Sidebands,
            "model_subtract" => OverlapMode::model_subtract(&cfg.model),
            other => {
                return Err(Error::Config {
                    key: "--overlap".into(),
                    message: format!("`{other}` is not none|sidebands|model_subtract"),
                }
                .into())
            }
        };
    }
    let image = read_image(&args.image)?;
    let (mut spdc, mut lum) = default_rois(&cfg.model, &image);
    if let Some(s) = &args.spdc_roi {
        spdc = parse_roi("--spdc-roi", s, &image, RoiLabel::Spdc)?;
    }
    if let Some(s) = &args.lum_roi {
        lum = parse_roi("--lum-roi", s, &image, RoiLabel::Luminescence)?;
    }
    let summary = separate_counts(&image, &spdc, &lum, cfg.overlap)?;
    let mut t = Table::new(&["c_spdc", "c_lum", "snr", "subtracted_floor", "image_total"]);
    t.push(vec![
        num(summary.c_spdc),
        num(summary.c_lum),
        num(summary.snr),
        num(summary.subtracted_floor),
        image.total().to_string(),
    ]);
    write_out(&cli.out, "counts.csv", &t.csv())?;
    write_resolved(&cli.out, "analyze", Some(&args.image), &cfg)?;
    print(&t.render(cli.format))
}

fn read_trace(path: &Path, band: Option<(f64, f64)>) -> Result<TimeTrace> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let is_image = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.split(',').count() > 2);
    if is_image {
        let image = StreakImage::read_csv(text.as_bytes())
            .map_err(anyhow::Error::from)
            .with_context(|| format!("reading image {}", path.display()))?;
        let w = &image.wavelength_axis;
        let band = band.unwrap_or((w[0], w[w.len() - 1]));
        return Ok(extract_time_trace(&image, band)?);
    }
    let (t, c) = lumnoise::image::read_two_column(text.as_bytes())
        .map_err(anyhow::Error::from)
        .with_context(|| format!("reading trace {}", path.display()))?;
    Ok(TimeTrace::new(t, c)?)
}

fn flag_text(f: &FitFlag) -> String {
    match f {
        FitFlag::IllConditioned(why) => format!("ill-conditioned ({why})"),
        FitFlag::LifetimeAtBound { index, lifetime_ns } => {
            format!("lifetime {} at bound ({lifetime_ns} ns)", index + 1)
        }
        FitFlag::NegativeAmplitude { index } => format!("amplitude {} negative", index + 1),
        FitFlag::NotConverged => "not converged".into(),
    }
}

fn fit_tables(fit: &DecayFit) -> (Table, Table) {
    let mut comps = Table::new(&[
        "component",
        "amplitude",
        "relative_amplitude",
        "lifetime_ns",
        "amplitude_rel_sigma",
        "lifetime_rel_sigma",
    ]);
    for (i, c) in fit.components.iter().enumerate() {
        comps.push(vec![
            (i + 1).to_string(),
            num(c.amplitude),
            num(c.relative_amplitude),
            num(c.lifetime_ns),
            num(c.amplitude_rel_sigma),
            num(c.lifetime_rel_sigma),
        ]);
    }
    let mut summary = Table::new(&["key", "value"]);
    let flags: Vec<String> = fit.flags.iter().map(flag_text).collect();
    for (k, v) in [
        ("chi_square", num(fit.chi_square)),
        ("reduced_chi_square", num(fit.reduced_chi_square)),
        ("dof", fit.dof.to_string()),
        ("t0_ns", num(fit.t0_ns)),
        ("t0_sigma_ns", opt_num(fit.t0_sigma_ns)),
        ("baseline", num(fit.baseline)),
        ("baseline_sigma", opt_num(fit.baseline_sigma)),
        ("irf_fwhm_ns", opt_num(fit.irf_fwhm_ns)),
        ("converged", fit.converged.to_string()),
        ("iterations", fit.iterations.to_string()),
        ("starts", fit.starts.to_string()),
        ("flags", flags.join("; ")),
    ] {
        summary.push(vec![k.to_string(), v]);
    }
    (comps, summary)
}

fn cmd_fit(cli: &Cli, args: &FitArgs, mut cfg: RunConfig) -> Result<()> {
    if let Some(n) = args.components {
        cfg.fit.n_components = n;
    }
    if let Some(s) = &args.wavelength_range {
        let v = parse_list("--wavelength-range", s, 2)?;
        cfg.fit_wavelength_range = Some((v[0], v[1]));
    }
    if let Some(s) = &args.time_range {
        let v = parse_list("--time-range", s, 2)?;
        cfg.fit.time_range = Some((v[0], v[1]));
    }
    if let Some(irf) = args.irf {
        cfg.fit.irf_fwhm_ns = Some(irf);
    }
    let trace = read_trace(&args.input, cfg.fit_wavelength_range)?;
    write_resolved(&cli.out, "fit", Some(&args.input), &cfg)?;
    let (fit, converged) = match fit_multiexp(&trace, &cfg.fit) {
        Ok(f) => (f, true),
        Err(FitError::NotConverged(f)) => (*f, false),
        Err(e) => return Err(e.into()),
    };
    let (comps, summary) = fit_tables(&fit);
    write_out(&cli.out, "fit.csv", &comps.csv())?;
    write_out(&cli.out, "fit_summary.csv", &summary.csv())?;
    let mut residuals = Vec::new();
    write_two_column(&mut residuals, ("time_ns", "residual"), &fit.residual_time, &fit.residuals)?;
    write_out(&cli.out, "residuals.csv", std::str::from_utf8(&residuals)?)?;
    print(&comps.render(cli.format))?;
    print(&summary.render(cli.format))?;
    if !converged {
        return Err(Error::Numerical(format!("fit did not converge in {} iterations", cfg.fit.max_iterations)).into());
    }
    if fit.is_flagged() {
        let flags: Vec<String> = fit.flags.iter().map(flag_text).collect();
        return Err(Flagged(flags.join("; ")).into());
    }
    Ok(())
}

fn cmd_herald(cli: &Cli, args: &HeraldArgs, mut cfg: RunConfig) -> Result<()> {
    let h = &mut cfg.herald;
    if let Some(v) = args.rs {
        h.r_s_hz = v;
    }
    if let Some(v) = args.tw {
        h.t_w_ns = v;
    }
    if let Some(v) = args.rl {
        h.r_l_hz = v;
    }
    if let Some(v) = args.rl_idler {
        h.r_l_idler_hz = Some(v);
    }
    if let Some(p) = args.pl {
        h.r_l_hz = p * 1e9 / h.t_w_ns;
    }
    if let Some(snr) = args.snr {
        if !(snr > 0.0) {
            return Err(Error::Config {
                key: "--snr".into(),
                message: format!("must be > 0, got {snr}"),
            }
            .into());
        }
        h.r_l_hz = h.r_s_hz / snr;
    }
    if let Some(n) = args.monte_carlo {
        cfg.monte_carlo_windows = Some(n);
    }
    let h = cfg.herald;
    h.validate()?;
    let (p_s, p_l) = pair_probability(&h)?;
    let p_l_idler = idler_probability(&h)?;
    let out = outcome_probabilities_asym(p_s, p_l, p_l_idler)?;
    let snr = if h.r_l_hz > 0.0 { h.r_s_hz / h.r_l_hz } else { f64::INFINITY };
    let approx = fidelity_from_snr(snr, h.t_w_ns, h.efficiency * h.r_s_hz)?.approx;
    let mc = cfg
        .monte_carlo_windows
        .map(|n| monte_carlo_probabilities(p_s, p_l, p_l_idler, n, cfg.seed))
        .transpose()?;

    let mut t = Table::new(&[
        "P_S", "P_L", "P_L_idler", "p0", "p1", "p2", "N", "F_exact", "F_approx", "F_mc", "F_mc_se", "z",
    ]);
    t.push(vec![
        num(p_s),
        num(p_l),
        num(p_l_idler),
        num(out.p0),
        num(out.p1),
        num(out.p2),
        num(out.n),
        num(out.fidelity),
        num(approx),
        opt_num(mc.map(|m| m.fidelity)),
        opt_num(mc.map(|m| m.fidelity_se)),
        opt_num(mc.map(|m| m.z_score(out.fidelity))),
    ]);
    write_out(&cli.out, "herald.csv", &t.csv())?;
    write_resolved(&cli.out, "herald", None, &cfg)?;
    let mut text = t.render(cli.format);
    if let (Some(m), Format::Pretty) = (mc, cli.format) {
        let z = m.z_score(out.fidelity);
        let verdict = if z.abs() <= 3.0 { "agree" } else { "DISAGREE" };
        text.push_str(&format!(
            "monte carlo over {} windows: F = {} +- {} vs analytic {} ({verdict}, z = {z:.2})\n",
            m.windows, m.fidelity, m.fidelity_se, out.fidelity
        ));
    }
    print(&text)
}

fn cmd_scenario(cli: &Cli, args: &ScenarioArgs, mut cfg: RunConfig) -> Result<()> {
    if let Some(s) = &args.baseline {
        let v = parse_list("--baseline", s, 2)?;
        cfg.baseline_counts = Some((v[0], v[1]));
    }
    let baseline = cfg.baseline_counts.ok_or_else(|| Error::Config {
        key: "scenario.baseline_c_s".into(),
        message: "baseline counts are required (scenario.baseline_c_s and scenario.baseline_c_l)".into(),
    })?;
    let h = cfg.herald;
    let reports = run_scenarios(&cfg.model, &cfg.scenarios, baseline, h.t_w_ns, h.efficiency * h.r_s_hz)?;
    let mut t = Table::new(&[
        "label",
        "c_spdc",
        "c_lum",
        "t_spdc",
        "t_lum",
        "snr",
        "f_exact",
        "f_approx",
        "ref_snr",
        "ref_f",
        "snr_delta",
        "flags",
    ]);
    let mut flagged = Vec::new();
    for r in &reports {
        let flags: Vec<String> = r.flags.iter().map(|f| format!("{f:?}")).collect();
        if r.is_flagged() {
            flagged.push(format!("{}: {}", r.label, flags.join(" ")));
        }
        t.push(vec![
            csv_field(&r.label),
            num(r.c_spdc),
            num(r.c_lum),
            num(r.spdc_transmission),
            num(r.lum_transmission),
            num(r.snr),
            opt_num(r.fidelity.map(|f| f.exact)),
            opt_num(r.fidelity.map(|f| f.approx)),
            opt_num(r.reference.map(|x| x.snr)),
            opt_num(r.reference.map(|x| x.fidelity)),
            opt_num(r.snr_discrepancy()),
            flags.join(" "),
        ]);
    }
    write_out(&cli.out, "scenarios.csv", &t.csv())?;
    write_resolved(&cli.out, "scenario", None, &cfg)?;
    print(&t.render(cli.format))?;
    if !flagged.is_empty() {
        return Err(Flagged(flagged.join("; ")).into());
    }
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn run(cli: &Cli) -> Result<()> {
    let mut cfg = load_config(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    match &cli.command {
        Command::Synth(a) => cmd_synth(cli, a, cfg),
        Command::Analyze(a) => cmd_analyze(cli, a, cfg),
        Command::Fit(a) => cmd_fit(cli, a, cfg),
        Command::Herald(a) => cmd_herald(cli, a, cfg),
        Command::Scenario(a) => cmd_scenario(cli, a, cfg),
    }
}

fn error_class(e: &Error) -> u8 {
    match e {
        Error::Config { .. } | Error::Domain(_) | Error::ValidityBound { .. } => 3,
        Error::Parse { .. } => 4,
        Error::Numerical(_) => 5,
    }
}

/// 1 I/O or other, 2 usage, 3 config or invalid value, 4 parse, 5 numerical
/// failure, 6 flagged result.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<Flagged>().is_some() {
            return 6;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return error_class(e);
        }
        if let Some(e) = cause.downcast_ref::<FitError>() {
            return match e {
                FitError::Invalid(e) => error_class(e),
                FitError::NotConverged(_) => 5,
            };
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_accept_scientific_notation() {
        assert_eq!(parse_count("1e8"), Ok(100_000_000));
        assert_eq!(parse_count("250"), Ok(250));
        assert!(parse_count("0").is_err());
        assert!(parse_count("2.5").is_err());
    }

    #[test]
    fn tables_render_both_ways() {
        let mut t = Table::new(&["a", "long_name"]);
        t.push(vec!["1".into(), "2".into()]);
        assert_eq!(t.csv(), "a,long_name\n1,2\n");
        assert_eq!(t.pretty(), "a  long_name\n1  2\n");
    }

    #[test]
    fn labels_with_commas_are_quoted() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a, b"), "\"a, b\"");
    }

    #[test]
    fn list_length_is_checked() {
        assert_eq!(parse_list("--x", "1, 2", 2).unwrap(), vec![1.0, 2.0]);
        let err = parse_list("--x", "1", 2).unwrap_err();
        assert_eq!(exit_code(&err), 3);
    }
}
