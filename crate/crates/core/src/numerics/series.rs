use crate::error::{Error, Result};

use super::special::ln_gamma;

/// Poisson probability `mean^i e^{-mean} / i!`, evaluated in log space.
pub fn poisson_weight(mean: f64, i: usize) -> f64 {
    if mean == 0.0 {
        return if i == 0 { 1.0 } else { 0.0 };
    }
    if i == 0 {
        return (-mean).exp();
    }
    let k = i as f64;
    (k * mean.ln() - mean - ln_gamma(k + 1.0)).exp()
}

/// Where to cut the infinite Poisson mixtures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTruncation {
    /// Probability mass allowed outside the summed index range.
    pub mass_tol: f64,
    /// Largest index ever summed; `None` means `mean + 12·√mean + 20`.
    pub hard_cap: Option<usize>,
}

impl Default for SeriesTruncation {
    fn default() -> Self {
        Self { mass_tol: 1e-10, hard_cap: None }
    }
}

/// Index range `lo..=hi` of a truncated Poisson series with its weights.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonSupport {
    pub lo: usize,
    pub hi: usize,
    /// `weights[k]` belongs to index `lo + k`.
    pub weights: Vec<f64>,
    /// Total mass inside the range.
    pub mass: f64,
}

impl PoissonSupport {
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.weights.iter().enumerate().map(move |(k, &w)| (self.lo + k, w))
    }
}

impl SeriesTruncation {
    pub fn cap(&self, mean: f64) -> usize {
        self.hard_cap.unwrap_or_else(|| (mean + 12.0 * mean.sqrt() + 20.0).ceil() as usize)
    }

    /// Smallest contiguous range whose excluded mass on either side is at
    /// most `mass_tol / 2`.
    pub fn support(&self, mean: f64) -> Result<PoissonSupport> {
        if !(self.mass_tol > 0.0 && self.mass_tol < 1.0) {
            return Err(Error::Config(format!("mass_tol must lie in (0, 1), got {}", self.mass_tol)));
        }
        if !(mean >= 0.0 && mean.is_finite()) {
            return Err(Error::Domain(format!("Poisson mean must be finite and non-negative, got {mean}")));
        }
        let cap = self.cap(mean);
        let all: Vec<f64> = (0..=cap).map(|i| poisson_weight(mean, i)).collect();
        let side = 0.5 * self.mass_tol;

        let mut lo = 0;
        let mut below = 0.0;
        while lo < cap && below + all[lo] <= side {
            below += all[lo];
            lo += 1;
        }
        let mut hi = cap;
        let mut above = 0.0;
        while hi > lo && above + all[hi] <= side {
            above += all[hi];
            hi -= 1;
        }

        let weights = all[lo..=hi].to_vec();
        let mass: f64 = weights.iter().sum();
        if mass < 1.0 - self.mass_tol {
            return Err(Error::Numerical(format!(
                "Poisson({mean}) series keeps only mass {mass} within the cap {cap}"
            )));
        }
        Ok(PoissonSupport { lo, hi, weights, mass })
    }
}
