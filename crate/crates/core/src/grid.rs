use crate::error::{domain, Result};

/// Uniform binning of an axis, described by its outer edges and bin width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl UniformGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(domain("grid bounds must be finite"));
        }
        if step <= 0.0 || stop <= start {
            return Err(domain(format!(
                "invalid grid [{start}, {stop}] with step {step}"
            )));
        }
        let g = Self { start, stop, step };
        if g.len() == 0 {
            return Err(domain("grid has no bins"));
        }
        Ok(g)
    }

    /// Number of whole bins between `start` and `stop`.
    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edges(&self, i: usize) -> (f64, f64) {
        let lo = self.start + i as f64 * self.step;
        (lo, lo + self.step)
    }

    pub fn center(&self, i: usize) -> f64 {
        self.start + (i as f64 + 0.5) * self.step
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.center(i)).collect()
    }

    /// Upper edge of the last whole bin.
    pub fn end(&self) -> f64 {
        self.start + self.len() as f64 * self.step
    }
}

/// Recover bin edges from strictly increasing bin centers, assuming the
/// first and last bins are as wide as their neighbours.
pub fn edges_from_centers(centers: &[f64]) -> Result<Vec<f64>> {
    if centers.is_empty() {
        return Err(domain("axis is empty"));
    }
    if centers.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(domain("axis must be strictly increasing"));
    }
    if centers.len() == 1 {
        return Ok(vec![centers[0] - 0.5, centers[0] + 0.5]);
    }
    let n = centers.len();
    let mut edges = Vec::with_capacity(n + 1);
    edges.push(centers[0] - 0.5 * (centers[1] - centers[0]));
    for w in centers.windows(2) {
        edges.push(0.5 * (w[0] + w[1]));
    }
    edges.push(centers[n - 1] + 0.5 * (centers[n - 1] - centers[n - 2]));
    Ok(edges)
}
