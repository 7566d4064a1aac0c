//! Multi-exponential decay fitting with an optional Gaussian IRF.
//!
//! The model for each time bin `[lo, hi)` is the bin average of
//!
//! ```text
//! baseline + sum_i A_i * exp(-(t - t0) / tau_i)      (t >= t0)
//! ```
//!
//! convolved with the IRF when one is given. Parameters are estimated by
//! Poisson-weighted least squares (`w = 1 / max(counts, 1)`) using
//! Levenberg-Marquardt with lifetimes in log space, restarted from a grid of
//! initial lifetimes spread logarithmically over the trace span.

use nalgebra::{DMatrix, DVector};

use crate::analysis::TimeTrace;
use crate::error::{domain, Error};
use crate::grid::edges_from_centers;
use crate::parallel::map_indexed;
use crate::special::{emg, emg_interval, norm_pdf, sigma_from_fwhm};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaselineMode {
    Zero,
    Free,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum T0Mode {
    /// Free when an IRF is given, fixed at 0 otherwise.
    Auto,
    Fixed(f64),
    Free,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    pub n_components: usize,
    pub irf_fwhm_ns: Option<f64>,
    pub baseline: BaselineMode,
    pub t0: T0Mode,
    /// Only bins with centers inside this closed interval enter the fit.
    pub time_range: Option<(f64, f64)>,
    pub max_iterations: usize,
}

impl FitOptions {
    pub fn new(n_components: usize) -> Self {
        Self {
            n_components,
            irf_fwhm_ns: None,
            baseline: BaselineMode::Zero,
            t0: T0Mode::Auto,
            time_range: None,
            max_iterations: 500,
        }
    }

    pub fn with_irf(mut self, fwhm_ns: f64) -> Self {
        self.irf_fwhm_ns = Some(fwhm_ns);
        self
    }

    pub fn with_baseline(mut self, baseline: BaselineMode) -> Self {
        self.baseline = baseline;
        self
    }

    pub fn with_t0(mut self, t0: T0Mode) -> Self {
        self.t0 = t0;
        self
    }

    pub fn with_time_range(mut self, lo: f64, hi: f64) -> Self {
        self.time_range = Some((lo, hi));
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FittedComponent {
    /// Peak counts per bin carried by the component.
    pub amplitude: f64,
    /// Share of the summed amplitudes.
    pub relative_amplitude: f64,
    pub lifetime_ns: f64,
    pub amplitude_rel_sigma: f64,
    pub lifetime_rel_sigma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FitFlag {
    /// Adjacent lifetimes closer than a factor 1.5, a parameter with relative
    /// uncertainty above 100 %, or a singular curvature matrix.
    IllConditioned(String),
    LifetimeAtBound { index: usize, lifetime_ns: f64 },
    NegativeAmplitude { index: usize },
    NotConverged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    /// Sorted by ascending lifetime.
    pub components: Vec<FittedComponent>,
    pub irf_fwhm_ns: Option<f64>,
    pub t0_ns: f64,
    pub t0_sigma_ns: Option<f64>,
    pub baseline: f64,
    pub baseline_sigma: Option<f64>,
    pub chi_square: f64,
    pub reduced_chi_square: f64,
    pub dof: usize,
    pub residual_time: Vec<f64>,
    /// `counts - model` for every fitted bin.
    pub residuals: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub starts: usize,
    pub flags: Vec<FitFlag>,
}

impl DecayFit {
    pub fn lifetimes(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.lifetime_ns).collect()
    }

    pub fn is_flagged(&self) -> bool {
        !self.flags.is_empty()
    }

    pub fn is_ill_conditioned(&self) -> bool {
        self.flags
            .iter()
            .any(|f| matches!(f, FitFlag::IllConditioned(_)))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FitError {
    #[error(transparent)]
    Invalid(#[from] Error),
    #[error("no start converged; best chi-square {}", .0.chi_square)]
    NotConverged(Box<DecayFit>),
}

/// Which entries of the parameter vector are free.
///
/// Order: `A_1..A_n, ln tau_1..ln tau_n, [baseline], [t0]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamLayout {
    pub n_components: usize,
    pub baseline: Option<f64>,
    pub t0: Option<f64>,
    pub irf_sigma_ns: f64,
}

impl ParamLayout {
    pub fn len(&self) -> usize {
        2 * self.n_components + self.baseline.is_none() as usize + self.t0.is_none() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn baseline_index(&self) -> Option<usize> {
        self.baseline.is_none().then_some(2 * self.n_components)
    }

    fn t0_index(&self) -> Option<usize> {
        self.t0
            .is_none()
            .then_some(2 * self.n_components + self.baseline.is_none() as usize)
    }

    fn baseline_value(&self, p: &[f64]) -> f64 {
        self.baseline_index().map_or_else(|| self.baseline.unwrap(), |i| p[i])
    }

    fn t0_value(&self, p: &[f64]) -> f64 {
        self.t0_index().map_or_else(|| self.t0.unwrap(), |i| p[i])
    }
}

/// Weighted least-squares objective over binned counts.
#[derive(Debug, Clone)]
pub struct DecayObjective {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub counts: Vec<f64>,
    pub weights: Vec<f64>,
    pub layout: ParamLayout,
}

impl DecayObjective {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, counts: Vec<f64>, layout: ParamLayout) -> Self {
        let weights = counts.iter().map(|&c| 1.0 / c.max(1.0)).collect();
        Self {
            lo,
            hi,
            counts,
            weights,
            layout,
        }
    }

    pub fn n_bins(&self) -> usize {
        self.counts.len()
    }

    /// Bin-averaged model and, when requested, its Jacobian.
    pub fn evaluate(&self, p: &[f64], with_jacobian: bool) -> (Vec<f64>, Option<DMatrix<f64>>) {
        let n = self.layout.n_components;
        let sigma = self.layout.irf_sigma_ns;
        let b = self.layout.baseline_value(p);
        let t0 = self.layout.t0_value(p);
        let np = self.layout.len();
        let nb = self.n_bins();
        let mut model = vec![b; nb];
        let mut jac = with_jacobian.then(|| DMatrix::<f64>::zeros(nb, np));
        for k in 0..nb {
            let (a, c) = (self.lo[k] - t0, self.hi[k] - t0);
            let width = self.hi[k] - self.lo[k];
            for i in 0..n {
                let amp = p[i];
                let tau = p[n + i].exp();
                let interval = emg_interval(a, c, tau, sigma);
                let basis = tau * interval / width;
                model[k] += amp * basis;
                if let Some(j) = jac.as_mut() {
                    let (ea, ec) = (emg(a, tau, sigma), emg(c, tau, sigma));
                    let de_dtau = |u: f64, e: f64| {
                        let mut d = e * (u / (tau * tau) - sigma * sigma / (tau * tau * tau));
                        if sigma > 0.0 {
                            d += norm_pdf(u / sigma) * sigma / (tau * tau);
                        }
                        d
                    };
                    let di_dtau = interval + tau * (de_dtau(a, ea) - de_dtau(c, ec));
                    j[(k, i)] = basis;
                    j[(k, n + i)] = amp * tau * di_dtau / width;
                    if let Some(ti) = self.layout.t0_index() {
                        j[(k, ti)] += amp * (ea - ec) / width;
                    }
                }
            }
            if let (Some(j), Some(bi)) = (jac.as_mut(), self.layout.baseline_index()) {
                j[(k, bi)] = 1.0;
            }
        }
        (model, jac)
    }

    pub fn chi_square(&self, p: &[f64]) -> f64 {
        let (m, _) = self.evaluate(p, false);
        self.counts
            .iter()
            .zip(&m)
            .zip(&self.weights)
            .map(|((y, m), w)| w * (y - m) * (y - m))
            .sum()
    }

    /// Analytic gradient of [`DecayObjective::chi_square`].
    pub fn gradient(&self, p: &[f64]) -> Vec<f64> {
        let (m, j) = self.evaluate(p, true);
        let j = j.unwrap();
        (0..self.layout.len())
            .map(|c| {
                -2.0 * (0..self.n_bins())
                    .map(|k| self.weights[k] * (self.counts[k] - m[k]) * j[(k, c)])
                    .sum::<f64>()
            })
            .collect()
    }

    /// Weighted linear solve for amplitudes (and baseline) at fixed lifetimes
    /// and t0. Returns a full parameter vector.
    fn linear_init(&self, ln_tau: &[f64], t0: f64) -> Option<Vec<f64>> {
        let n = self.layout.n_components;
        let free_b = self.layout.baseline.is_none();
        let nl = n + free_b as usize;
        let fixed_b = self.layout.baseline.unwrap_or(0.0);
        let sigma = self.layout.irf_sigma_ns;
        let nb = self.n_bins();
        let mut a = DMatrix::<f64>::zeros(nb, nl);
        let mut rhs = DVector::<f64>::zeros(nb);
        for k in 0..nb {
            let sw = self.weights[k].sqrt();
            let width = self.hi[k] - self.lo[k];
            for i in 0..n {
                let tau = ln_tau[i].exp();
                a[(k, i)] = sw * tau * emg_interval(self.lo[k] - t0, self.hi[k] - t0, tau, sigma) / width;
            }
            if free_b {
                a[(k, n)] = sw;
            }
            rhs[k] = sw * (self.counts[k] - fixed_b);
        }
        let lin = a.svd(true, true).solve(&rhs, 1e-12).ok()?;
        let mut p = Vec::with_capacity(self.layout.len());
        p.extend(lin.iter().take(n));
        p.extend_from_slice(ln_tau);
        if free_b {
            p.push(lin[n]);
        }
        if self.layout.t0.is_none() {
            p.push(t0);
        }
        p.iter().all(|v| v.is_finite()).then_some(p)
    }
}

#[derive(Debug, Clone)]
struct Bounds {
    ln_tau: (f64, f64),
    t0: (f64, f64),
}

#[derive(Debug, Clone)]
struct LmResult {
    params: Vec<f64>,
    chi_square: f64,
    converged: bool,
    iterations: usize,
}

fn project(p: &mut [f64], layout: &ParamLayout, bounds: &Bounds) {
    let n = layout.n_components;
    for v in &mut p[n..2 * n] {
        *v = v.clamp(bounds.ln_tau.0, bounds.ln_tau.1);
    }
    if let Some(ti) = layout.t0_index() {
        p[ti] = p[ti].clamp(bounds.t0.0, bounds.t0.1);
    }
}

fn bounded_indices(layout: &ParamLayout) -> Vec<usize> {
    let n = layout.n_components;
    (n..2 * n).chain(layout.t0_index()).collect()
}

fn levenberg_marquardt(obj: &DecayObjective, start: Vec<f64>, bounds: &Bounds, max_iter: usize) -> LmResult {
    let np = obj.layout.len();
    let mut p = start;
    project(&mut p, &obj.layout, bounds);
    let mut chi = obj.chi_square(&p);
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;
    let mut quiet_steps = 0;
    while iterations < max_iter && !converged {
        iterations += 1;
        let (m, j) = obj.evaluate(&p, true);
        let j = j.unwrap();
        let mut jw = j.clone();
        let mut r = DVector::<f64>::zeros(obj.n_bins());
        for k in 0..obj.n_bins() {
            let w = obj.weights[k];
            r[k] = w * (obj.counts[k] - m[k]);
            for c in 0..np {
                jw[(k, c)] *= w;
            }
        }
        let mut h = j.transpose() * &jw;
        let mut g = j.transpose() * r;
        // parameters pinned at a bound and pushed outward are held fixed
        for i in bounded_indices(&obj.layout) {
            let (lo, hi) = if i < 2 * obj.layout.n_components {
                bounds.ln_tau
            } else {
                bounds.t0
            };
            let tol = 1e-12 * (hi - lo).abs().max(1.0);
            if (p[i] <= lo + tol && g[i] < 0.0) || (p[i] >= hi - tol && g[i] > 0.0) {
                h.row_mut(i).fill(0.0);
                h.column_mut(i).fill(0.0);
                h[(i, i)] = 1.0;
                g[i] = 0.0;
            }
        }
        let diag_floor = 1e-12 * (0..np).map(|i| h[(i, i)]).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        loop {
            let mut a = h.clone();
            for i in 0..np {
                a[(i, i)] += lambda * h[(i, i)].max(diag_floor);
            }
            let step = a
                .clone()
                .cholesky()
                .map(|c| c.solve(&g))
                .or_else(|| a.lu().solve(&g));
            let accepted = step.and_then(|d| {
                let mut trial: Vec<f64> = p.iter().zip(d.iter()).map(|(x, s)| x + s).collect();
                project(&mut trial, &obj.layout, bounds);
                let c = obj.chi_square(&trial);
                (c.is_finite() && c <= chi).then_some((trial, c))
            });
            match accepted {
                Some((trial, c)) => {
                    let decrease = chi - c;
                    p = trial;
                    chi = c;
                    lambda = (lambda / 3.0).max(1e-12);
                    if decrease <= 1e-11 * chi.max(f64::MIN_POSITIVE) {
                        quiet_steps += 1;
                    } else {
                        quiet_steps = 0;
                    }
                    if quiet_steps >= 2 {
                        converged = true;
                    }
                    break;
                }
                None => {
                    lambda *= 4.0;
                    if lambda > 1e14 {
                        // no descent direction left at working precision
                        converged = true;
                        break;
                    }
                }
            }
        }
    }
    LmResult {
        params: p,
        chi_square: chi,
        converged,
        iterations,
    }
}

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![(lo * hi).sqrt()];
    }
    (0..n)
        .map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn increasing_combinations(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, k: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            rec(i + 1, k, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, k, n, &mut Vec::new(), &mut out);
    out
}

/// Lexicographic tie-break on parameters, then lowest chi-square first.
fn better(a: &LmResult, b: &LmResult, n: usize) -> bool {
    let scale = a.chi_square.abs().max(b.chi_square.abs()).max(f64::MIN_POSITIVE);
    if (a.chi_square - b.chi_square).abs() > 1e-9 * scale {
        return a.chi_square < b.chi_square;
    }
    let min_tau = |r: &LmResult| r.params[n..2 * n].iter().copied().fold(f64::INFINITY, f64::min);
    match min_tau(a).total_cmp(&min_tau(b)) {
        std::cmp::Ordering::Equal => a
            .params
            .iter()
            .zip(&b.params)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .is_some_and(|o| o.is_lt()),
        o => o.is_lt(),
    }
}

/// Fit a sum of `n_components` exponentials to a time trace.
pub fn fit_multiexp(trace: &TimeTrace, options: &FitOptions) -> Result<DecayFit, FitError> {
    let n = options.n_components;
    if !(1..=3).contains(&n) {
        return Err(domain(format!("component count must be 1, 2 or 3, got {n}")).into());
    }
    let edges = edges_from_centers(&trace.time_axis)?;
    let (lo_t, hi_t) = options.time_range.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
    let idx: Vec<usize> = (0..trace.time_axis.len())
        .filter(|&i| trace.time_axis[i] >= lo_t && trace.time_axis[i] <= hi_t)
        .collect();
    let min_bins = 5 * (2 * n + 1);
    if idx.len() < min_bins {
        return Err(domain(format!(
            "trace has {} bins in the fit range; {n} components need at least {min_bins}",
            idx.len()
        ))
        .into());
    }
    if trace.counts.iter().any(|c| !c.is_finite() || *c < 0.0) {
        return Err(domain("trace counts must be finite and nonnegative").into());
    }
    let irf_sigma = match options.irf_fwhm_ns {
        Some(f) if !(f >= 0.0 && f.is_finite()) => {
            return Err(domain(format!("IRF FWHM must be >= 0, got {f}")).into())
        }
        Some(f) => sigma_from_fwhm(f),
        None => 0.0,
    };
    let t0_fixed = match options.t0 {
        T0Mode::Fixed(v) => Some(v),
        T0Mode::Free => None,
        T0Mode::Auto if options.irf_fwhm_ns.is_some_and(|f| f > 0.0) => None,
        T0Mode::Auto => Some(0.0),
    };
    if t0_fixed.is_none() && irf_sigma == 0.0 {
        return Err(domain("a free t0 needs a nonzero IRF width").into());
    }
    let baseline = match options.baseline {
        BaselineMode::Zero => Some(0.0),
        BaselineMode::Fixed(b) => Some(b),
        BaselineMode::Free => None,
    };
    let layout = ParamLayout {
        n_components: n,
        baseline,
        t0: t0_fixed,
        irf_sigma_ns: irf_sigma,
    };
    let obj = DecayObjective::new(
        idx.iter().map(|&i| edges[i]).collect(),
        idx.iter().map(|&i| edges[i + 1]).collect(),
        idx.iter().map(|&i| trace.counts[i]).collect(),
        layout,
    );

    let first = obj.lo[0];
    let last = *obj.hi.last().unwrap();
    let span = last - first;
    let min_width = obj
        .lo
        .iter()
        .zip(&obj.hi)
        .map(|(a, b)| b - a)
        .fold(f64::INFINITY, f64::min);
    let bounds = Bounds {
        ln_tau: ((0.1 * min_width).ln(), (100.0 * span).ln()),
        t0: (first, last),
    };
    let t0_start = t0_fixed.unwrap_or_else(|| {
        let (imax, _) = obj
            .counts
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        0.5 * (obj.lo[imax] + obj.hi[imax])
    });
    let grid = log_spaced(1.5 * min_width, span, 7);
    let starts: Vec<Vec<f64>> = increasing_combinations(grid.len(), n)
        .into_iter()
        .filter_map(|combo| {
            let ln_tau: Vec<f64> = combo.iter().map(|&i| grid[i].ln()).collect();
            obj.linear_init(&ln_tau, t0_start)
        })
        .collect();
    if starts.is_empty() {
        return Err(Error::Numerical("no usable starting point for the fit".into()).into());
    }
    let results = map_indexed(starts.len(), |s| {
        levenberg_marquardt(&obj, starts[s].clone(), &bounds, options.max_iterations)
    });
    let n_starts = results.len();
    let any_converged = results.iter().any(|r| r.converged);
    let best = results
        .into_iter()
        .filter(|r| r.converged || !any_converged)
        .reduce(|a, b| if better(&b, &a, n) { b } else { a })
        .unwrap();

    let fit = summarize(&obj, &best, &bounds, options, n_starts);
    if any_converged {
        Ok(fit)
    } else {
        Err(FitError::NotConverged(Box::new(fit)))
    }
}

fn summarize(obj: &DecayObjective, best: &LmResult, bounds: &Bounds, options: &FitOptions, starts: usize) -> DecayFit {
    let layout = obj.layout;
    let n = layout.n_components;
    let np = layout.len();
    let p = &best.params;
    let (model, j) = obj.evaluate(p, true);
    let j = j.unwrap();
    let mut jw = j.clone();
    for k in 0..obj.n_bins() {
        for c in 0..np {
            jw[(k, c)] *= obj.weights[k];
        }
    }
    let h = j.transpose() * jw;
    let cov = h.clone().try_inverse().filter(|c| c.iter().all(|v| v.is_finite()));
    let var = |i: usize| cov.as_ref().map(|c| c[(i, i)].max(0.0));
    let mut flags = Vec::new();
    if cov.is_none() {
        flags.push(FitFlag::IllConditioned("singular curvature matrix".into()));
    }

    let amp_sum: f64 = p[..n].iter().sum();
    let mut comps: Vec<(FittedComponent, usize)> = (0..n)
        .map(|i| {
            let amp = p[i];
            let tau = p[n + i].exp();
            let amp_rel = var(i).map_or(f64::INFINITY, |v| v.sqrt() / amp.abs());
            let tau_rel = var(n + i).map_or(f64::INFINITY, f64::sqrt);
            (
                FittedComponent {
                    amplitude: amp,
                    relative_amplitude: amp / amp_sum,
                    lifetime_ns: tau,
                    amplitude_rel_sigma: amp_rel,
                    lifetime_rel_sigma: tau_rel,
                },
                i,
            )
        })
        .collect();
    comps.sort_by(|a, b| a.0.lifetime_ns.total_cmp(&b.0.lifetime_ns));

    for (sorted, (c, orig)) in comps.iter().enumerate() {
        let ln = p[n + orig];
        if ln - bounds.ln_tau.0 < 1e-6 || bounds.ln_tau.1 - ln < 1e-6 {
            flags.push(FitFlag::LifetimeAtBound {
                index: sorted,
                lifetime_ns: c.lifetime_ns,
            });
        }
        if c.amplitude < 0.0 {
            flags.push(FitFlag::NegativeAmplitude { index: sorted });
        }
    }
    for w in comps.windows(2) {
        let ratio = w[1].0.lifetime_ns / w[0].0.lifetime_ns;
        if ratio < 1.5 {
            flags.push(FitFlag::IllConditioned(format!(
                "adjacent lifetimes {:.4} and {:.4} ns differ by less than 1.5x",
                w[0].0.lifetime_ns, w[1].0.lifetime_ns
            )));
        }
    }
    if cov.is_some()
        && comps
            .iter()
            .any(|(c, _)| c.lifetime_rel_sigma > 1.0 || c.amplitude_rel_sigma > 1.0)
    {
        flags.push(FitFlag::IllConditioned(
            "a parameter has relative uncertainty above 100%".into(),
        ));
    }
    if !best.converged {
        flags.push(FitFlag::NotConverged);
    }

    let dof = obj.n_bins().saturating_sub(np);
    DecayFit {
        components: comps.into_iter().map(|(c, _)| c).collect(),
        irf_fwhm_ns: options.irf_fwhm_ns,
        t0_ns: layout.t0_value(p),
        t0_sigma_ns: layout.t0_index().and_then(|i| var(i).map(f64::sqrt)),
        baseline: layout.baseline_value(p),
        baseline_sigma: layout.baseline_index().and_then(|i| var(i).map(f64::sqrt)),
        chi_square: best.chi_square,
        reduced_chi_square: if dof > 0 { best.chi_square / dof as f64 } else { f64::NAN },
        dof,
        residual_time: obj.lo.iter().zip(&obj.hi).map(|(a, b)| 0.5 * (a + b)).collect(),
        residuals: obj.counts.iter().zip(&model).map(|(y, m)| y - m).collect(),
        converged: best.converged,
        iterations: best.iterations,
        starts,
        flags,
    }
}

/// Combine repeated fits of the same configuration: parameters are averaged
/// and their relative uncertainty is the sample spread across the ensemble.
pub fn ensemble(fits: &[DecayFit]) -> Result<DecayFit, Error> {
    if fits.len() < 2 {
        return Err(domain("an ensemble needs at least two fits"));
    }
    let n = fits[0].components.len();
    if fits.iter().any(|f| f.components.len() != n) {
        return Err(domain("fits in an ensemble must have equal component counts"));
    }
    let m = fits.len() as f64;
    let stats = |values: Vec<f64>| {
        let mean = values.iter().sum::<f64>() / m;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
        (mean, var.sqrt())
    };
    let components = (0..n)
        .map(|i| {
            let (tau, tau_sd) = stats(fits.iter().map(|f| f.components[i].lifetime_ns).collect());
            let (amp, amp_sd) = stats(fits.iter().map(|f| f.components[i].amplitude).collect());
            let (rel, _) = stats(fits.iter().map(|f| f.components[i].relative_amplitude).collect());
            FittedComponent {
                amplitude: amp,
                relative_amplitude: rel,
                lifetime_ns: tau,
                amplitude_rel_sigma: amp_sd / amp.abs(),
                lifetime_rel_sigma: tau_sd / tau,
            }
        })
        .collect();
    let (baseline, baseline_sd) = stats(fits.iter().map(|f| f.baseline).collect());
    let (t0, t0_sd) = stats(fits.iter().map(|f| f.t0_ns).collect());
    let (chi, _) = stats(fits.iter().map(|f| f.chi_square).collect());
    let (red, _) = stats(fits.iter().map(|f| f.reduced_chi_square).collect());
    let mut flags: Vec<FitFlag> = Vec::new();
    for f in fits.iter().flat_map(|f| &f.flags) {
        if !flags.contains(f) {
            flags.push(f.clone());
        }
    }
    Ok(DecayFit {
        components,
        irf_fwhm_ns: fits[0].irf_fwhm_ns,
        t0_ns: t0,
        t0_sigma_ns: Some(t0_sd),
        baseline,
        baseline_sigma: Some(baseline_sd),
        chi_square: chi,
        reduced_chi_square: red,
        dof: fits[0].dof,
        residual_time: Vec::new(),
        residuals: Vec::new(),
        converged: fits.iter().all(|f| f.converged),
        iterations: fits.iter().map(|f| f.iterations).sum(),
        starts: fits.iter().map(|f| f.starts).sum(),
        flags,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentAgreement {
    pub index: usize,
    /// `(label, lifetime ns, 1-sigma ns)` per fit.
    pub values: Vec<(String, f64, f64)>,
    /// All +-1 sigma intervals share a common point.
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndependenceReport {
    pub components: Vec<ComponentAgreement>,
}

impl IndependenceReport {
    pub fn pass(&self) -> bool {
        self.components.iter().all(|c| c.pass)
    }
}

/// Check that each lifetime agrees across fits taken under different pump
/// settings.
pub fn decay_independence_report(fits: &[(String, DecayFit)]) -> Result<IndependenceReport, Error> {
    if fits.len() < 2 {
        return Err(domain("independence check needs at least two fits"));
    }
    let n = fits[0].1.components.len();
    if fits.iter().any(|(_, f)| f.components.len() != n) {
        return Err(domain("all fits must have the same number of components"));
    }
    let components = (0..n)
        .map(|i| {
            let values: Vec<(String, f64, f64)> = fits
                .iter()
                .map(|(label, f)| {
                    let c = &f.components[i];
                    (label.clone(), c.lifetime_ns, c.lifetime_rel_sigma * c.lifetime_ns)
                })
                .collect();
            let max_lo = values.iter().map(|v| v.1 - v.2).fold(f64::NEG_INFINITY, f64::max);
            let min_hi = values.iter().map(|v| v.1 + v.2).fold(f64::INFINITY, f64::min);
            ComponentAgreement {
                index: i,
                values,
                pass: max_lo <= min_hi,
            }
        })
        .collect();
    Ok(IndependenceReport { components })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Noiseless bin-averaged trace, integrated independently by the
    /// composite midpoint rule.
    fn exact_trace(components: &[(f64, f64)], baseline: f64, start: f64, step: f64, bins: usize) -> TimeTrace {
        let t: Vec<f64> = (0..bins).map(|i| start + (i as f64 + 0.5) * step).collect();
        let y = t
            .iter()
            .map(|&c| {
                let sub = 200;
                let h = step / sub as f64;
                let mut acc = 0.0;
                for s in 0..sub {
                    let x = c - 0.5 * step + (s as f64 + 0.5) * h;
                    if x >= 0.0 {
                        acc += components.iter().map(|(a, tau)| a * (-x / tau).exp()).sum::<f64>();
                    }
                }
                baseline + acc / sub as f64
            })
            .collect();
        TimeTrace::new(t, y).unwrap()
    }

    #[test]
    fn recovers_noiseless_single_exponential() {
        let trace = exact_trace(&[(1e4, 0.73)], 0.0, 0.0, 0.02, 500);
        let fit = fit_multiexp(&trace, &FitOptions::new(1)).unwrap();
        let tau = fit.components[0].lifetime_ns;
        assert!((tau - 0.73).abs() / 0.73 < 1e-3, "{tau}");
        assert!(fit.converged);
    }

    #[test]
    fn recovers_noiseless_two_exponentials_with_baseline() {
        let trace = exact_trace(&[(700.0, 1850.0), (300.0, 9950.0)], 5.0, 0.0, 50.0, 1000);
        let fit = fit_multiexp(&trace, &FitOptions::new(2).with_baseline(BaselineMode::Free)).unwrap();
        let l = fit.lifetimes();
        assert!((l[0] - 1850.0).abs() / 1850.0 < 1e-3, "{l:?}");
        assert!((l[1] - 9950.0).abs() / 9950.0 < 1e-3, "{l:?}");
        assert!((fit.baseline - 5.0).abs() < 0.05);
        assert!((fit.components[0].relative_amplitude - 0.7).abs() < 1e-3);
    }

    #[test]
    fn constant_trace_is_flagged() {
        let t: Vec<f64> = (0..100).map(|i| i as f64 + 0.5).collect();
        let trace = TimeTrace::new(t, vec![50.0; 100]).unwrap();
        let fit = fit_multiexp(&trace, &FitOptions::new(1)).unwrap();
        assert!(fit
            .flags
            .iter()
            .any(|f| matches!(f, FitFlag::LifetimeAtBound { .. })));
    }

    #[test]
    fn input_validation() {
        let t: Vec<f64> = (0..10).map(f64::from).collect();
        let trace = TimeTrace::new(t, vec![1.0; 10]).unwrap();
        assert!(matches!(fit_multiexp(&trace, &FitOptions::new(1)), Err(FitError::Invalid(_))));
        assert!(matches!(fit_multiexp(&trace, &FitOptions::new(4)), Err(FitError::Invalid(_))));
        let long = exact_trace(&[(1.0, 1.0)], 0.0, 0.0, 0.1, 100);
        assert!(fit_multiexp(&long, &FitOptions::new(1).with_t0(T0Mode::Free)).is_err());
    }

    #[test]
    fn gradient_matches_central_differences() {
        let trace = exact_trace(&[(900.0, 0.8), (100.0, 4.0)], 2.0, -1.0, 0.05, 200);
        let edges = edges_from_centers(&trace.time_axis).unwrap();
        let layout = ParamLayout {
            n_components: 2,
            baseline: None,
            t0: None,
            irf_sigma_ns: sigma_from_fwhm(0.15),
        };
        let obj = DecayObjective::new(
            edges[..200].to_vec(),
            edges[1..].to_vec(),
            trace.counts.iter().map(|c| c * 1.3 + 1.0).collect(),
            layout,
        );
        let p = vec![850.0, 120.0, 0.9f64.ln(), 3.0f64.ln(), 1.0, 0.05];
        let g = obj.gradient(&p);
        for i in 0..p.len() {
            let h = 1e-6 * p[i].abs().max(1e-3);
            let mut up = p.clone();
            let mut dn = p.clone();
            up[i] += h;
            dn[i] -= h;
            let fd = (obj.chi_square(&up) - obj.chi_square(&dn)) / (2.0 * h);
            assert!((fd - g[i]).abs() <= 1e-6 * g[i].abs().max(1e-6 * obj.chi_square(&p)), "param {i}: {fd} vs {}", g[i]);
        }
    }

    #[test]
    fn independence_report_pass_and_fail() {
        let trace = exact_trace(&[(1e3, 2.0)], 0.0, 0.0, 0.1, 200);
        let mut fit = fit_multiexp(&trace, &FitOptions::new(1)).unwrap();
        fit.components[0].lifetime_rel_sigma = 0.07;
        let same = vec![("a".to_string(), fit.clone()), ("b".to_string(), fit.clone())];
        assert!(decay_independence_report(&same).unwrap().pass());
        let mut shifted = fit.clone();
        shifted.components[0].lifetime_ns *= 1.3;
        let diff = vec![("a".to_string(), fit.clone()), ("b".to_string(), shifted)];
        assert!(!decay_independence_report(&diff).unwrap().pass());
        assert!(decay_independence_report(&same[..1]).is_err());
        let two = fit_multiexp(&exact_trace(&[(1e3, 2.0), (1e2, 9.0)], 0.0, 0.0, 0.1, 200), &FitOptions::new(2)).unwrap();
        let mixed = vec![("a".to_string(), fit), ("b".to_string(), two)];
        assert!(decay_independence_report(&mixed).is_err());
    }

    #[test]
    fn combinations() {
        assert_eq!(increasing_combinations(7, 1).len(), 7);
        assert_eq!(increasing_combinations(7, 2).len(), 21);
        assert_eq!(increasing_combinations(7, 3).len(), 35);
    }
}
