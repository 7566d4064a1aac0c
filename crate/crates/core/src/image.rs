//! Streak images and their CSV representation.
//!
//! Layout: `#`-prefixed `key = value` header lines carry metadata, the first
//! data row holds the wavelength bin centers (nm), the first column holds the
//! time bin centers (ns) and every other cell is a photon count.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{domain, Error, Result};
use crate::grid::UniformGrid;

const CORNER: &str = "time_ns\\wavelength_nm";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Metadata {
    pub seed: Option<u64>,
    pub model_hash: Option<String>,
    pub wavelength_grid: Option<UniformGrid>,
    pub time_grid: Option<UniformGrid>,
    pub warnings: Vec<String>,
    /// Any other header entries, in file order.
    pub extra: Vec<(String, String)>,
}

/// Photon counts over (time bin, wavelength bin), row-major by time.
#[derive(Debug, Clone, PartialEq)]
pub struct StreakImage {
    pub counts: Vec<u64>,
    pub wavelength_axis: Vec<f64>,
    pub time_axis: Vec<f64>,
    pub exposure: u64,
    pub metadata: Metadata,
}

fn strictly_increasing(axis: &[f64]) -> bool {
    axis.windows(2).all(|w| w[1] > w[0])
}

impl StreakImage {
    pub fn new(
        counts: Vec<u64>,
        wavelength_axis: Vec<f64>,
        time_axis: Vec<f64>,
        exposure: u64,
        metadata: Metadata,
    ) -> Result<Self> {
        if wavelength_axis.is_empty() || time_axis.is_empty() {
            return Err(domain("image axes must be nonempty"));
        }
        if !strictly_increasing(&wavelength_axis) || !strictly_increasing(&time_axis) {
            return Err(domain("image axes must be strictly increasing"));
        }
        if counts.len() != wavelength_axis.len() * time_axis.len() {
            return Err(domain(format!(
                "counts length {} does not match {} x {} axes",
                counts.len(),
                time_axis.len(),
                wavelength_axis.len()
            )));
        }
        Ok(Self {
            counts,
            wavelength_axis,
            time_axis,
            exposure,
            metadata,
        })
    }

    pub fn n_time(&self) -> usize {
        self.time_axis.len()
    }

    pub fn n_wavelength(&self) -> usize {
        self.wavelength_axis.len()
    }

    pub fn get(&self, t: usize, w: usize) -> u64 {
        self.counts[t * self.n_wavelength() + w]
    }

    pub fn row(&self, t: usize) -> &[u64] {
        let nw = self.n_wavelength();
        &self.counts[t * nw..(t + 1) * nw]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn to_csv_string(&self) -> String {
        let mut s = String::new();
        s.push_str("# lumnoise streak image\n");
        let _ = writeln!(s, "# exposure = {}", self.exposure);
        if let Some(seed) = self.metadata.seed {
            let _ = writeln!(s, "# seed = {seed}");
        }
        if let Some(h) = &self.metadata.model_hash {
            let _ = writeln!(s, "# model_hash = {h}");
        }
        for (key, g) in [
            ("wavelength_grid", &self.metadata.wavelength_grid),
            ("time_grid", &self.metadata.time_grid),
        ] {
            if let Some(g) = g {
                let _ = writeln!(s, "# {key} = {},{},{}", g.start, g.stop, g.step);
            }
        }
        for w in &self.metadata.warnings {
            let _ = writeln!(s, "# warning = {w}");
        }
        for (k, v) in &self.metadata.extra {
            let _ = writeln!(s, "# {k} = {v}");
        }
        s.push_str(CORNER);
        for w in &self.wavelength_axis {
            let _ = write!(s, ",{w}");
        }
        s.push('\n');
        for (t, time) in self.time_axis.iter().enumerate() {
            let _ = write!(s, "{time}");
            for c in self.row(t) {
                let _ = write!(s, ",{c}");
            }
            s.push('\n');
        }
        s
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        out.write_all(self.to_csv_string().as_bytes())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut metadata = Metadata::default();
        let mut exposure = None;
        let mut wavelength_axis: Option<Vec<f64>> = None;
        let mut time_axis = Vec::new();
        let mut counts = Vec::new();
        let mut last_line = 0;

        for (idx, line) in input.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = line.map_err(|e| parse_err(line_no, e.to_string()))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let Some((k, v)) = rest.split_once('=') else {
                    continue;
                };
                let (k, v) = (k.trim(), v.trim());
                match k {
                    "exposure" => exposure = Some(parse_num::<u64>(v, line_no, k)?),
                    "seed" => metadata.seed = Some(parse_num::<u64>(v, line_no, k)?),
                    "model_hash" => metadata.model_hash = Some(v.to_string()),
                    "wavelength_grid" => metadata.wavelength_grid = Some(parse_grid(v, line_no)?),
                    "time_grid" => metadata.time_grid = Some(parse_grid(v, line_no)?),
                    "warning" => metadata.warnings.push(v.to_string()),
                    _ => metadata.extra.push((k.to_string(), v.to_string())),
                }
                continue;
            }
            let mut cells = line.split(',');
            let first = cells.next().unwrap_or_default().trim();
            match &wavelength_axis {
                None => {
                    let axis = cells
                        .map(|c| parse_num::<f64>(c.trim(), line_no, "wavelength"))
                        .collect::<Result<Vec<_>>>()?;
                    if axis.is_empty() {
                        return Err(parse_err(line_no, "header row has no wavelength columns"));
                    }
                    if !strictly_increasing(&axis) {
                        return Err(parse_err(line_no, "wavelength axis is not strictly increasing"));
                    }
                    wavelength_axis = Some(axis);
                }
                Some(axis) => {
                    let t = parse_num::<f64>(first, line_no, "time")?;
                    if time_axis.last().is_some_and(|&prev| t <= prev) {
                        return Err(parse_err(line_no, "time axis is not strictly increasing"));
                    }
                    time_axis.push(t);
                    let before = counts.len();
                    for c in cells {
                        counts.push(parse_num::<u64>(c.trim(), line_no, "count")?);
                    }
                    if counts.len() - before != axis.len() {
                        return Err(parse_err(
                            line_no,
                            format!(
                                "expected {} counts, found {}",
                                axis.len(),
                                counts.len() - before
                            ),
                        ));
                    }
                }
            }
        }
        let Some(wavelength_axis) = wavelength_axis else {
            return Err(parse_err(last_line.max(1), "missing wavelength header row"));
        };
        if time_axis.is_empty() {
            return Err(parse_err(last_line.max(1), "image has no data rows"));
        }
        Self::new(
            counts,
            wavelength_axis,
            time_axis,
            exposure.unwrap_or(1),
            metadata,
        )
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T> {
    s.parse::<T>()
        .map_err(|_| parse_err(line, format!("invalid {what} value `{s}`")))
}

fn parse_grid(v: &str, line: usize) -> Result<UniformGrid> {
    let parts = v
        .split(',')
        .map(|p| parse_num::<f64>(p.trim(), line, "grid"))
        .collect::<Result<Vec<_>>>()?;
    if parts.len() != 3 {
        return Err(parse_err(line, "grid needs start,stop,step"));
    }
    UniformGrid::new(parts[0], parts[1], parts[2]).map_err(|e| parse_err(line, e.to_string()))
}

/// Two-column `(time_ns, counts)` CSV as used for traces and residuals.
pub fn write_two_column<W: Write>(
    mut out: W,
    header: (&str, &str),
    x: &[f64],
    y: &[f64],
) -> std::io::Result<()> {
    writeln!(out, "{},{}", header.0, header.1)?;
    for (a, b) in x.iter().zip(y) {
        writeln!(out, "{a},{b}")?;
    }
    Ok(())
}

/// Parse a two-column numeric CSV. Lines starting with `#` and a non-numeric
/// first row are skipped.
pub fn read_two_column<R: BufRead>(input: R) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut seen_data = false;
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| parse_err(line_no, e.to_string()))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != 2 {
            return Err(parse_err(line_no, format!("expected 2 columns, found {}", cells.len())));
        }
        match (cells[0].parse::<f64>(), cells[1].parse::<f64>()) {
            (Ok(a), Ok(b)) => {
                seen_data = true;
                x.push(a);
                y.push(b);
            }
            _ if !seen_data && x.is_empty() => {
                // header row
                seen_data = true;
            }
            _ => return Err(parse_err(line_no, format!("invalid numeric row `{line}`"))),
        }
    }
    if x.is_empty() {
        return Err(parse_err(1, "no data rows"));
    }
    Ok((x, y))
}
