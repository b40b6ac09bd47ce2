//! Optimal (joint/successive) decoding under the closest-interferer
//! approximation.
//!
//! Conditioned on `n` interferers inside the link disc of radius `d`, the
//! receiver jointly decodes them with its own signal and treats the closest
//! remaining one as noise. The best common rate is
//! `R* = log₂(1 + (1+n)β*)/(1+n)` with `β* = (r/d)^α ≥ 1`. Every quantity
//! below is a Poisson(`λπd²`) mixture over `n`.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::ian::quadrature;
use crate::model::{DecodingRule, Kind, Method, NetworkConfig, ThroughputValue};
use crate::numerics::special::upper_incomplete_gamma_scaled;
use crate::numerics::{integrate, softplus, PoissonSupport, SeriesTruncation};

/// Smallest achievable rate given `n` jointly decoded interferers:
/// `log₂(2+n)/(1+n)`.
pub fn support_edge(n: usize) -> f64 {
    (2.0 + n as f64).log2() / (1.0 + n as f64)
}

/// `ln((2^{kx} - 1)/k)` without overflow.
#[inline]
fn ln_threshold(k: f64, x: f64) -> f64 {
    let t = k * x * LN_2;
    t + (-(-t).exp()).ln_1p() - k.ln()
}

/// Distribution of the best rate of the typical OPT link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptRateDistribution {
    pub cfg: NetworkConfig,
    pub truncation: SeriesTruncation,
}

impl OptRateDistribution {
    pub fn new(cfg: NetworkConfig) -> Self {
        Self { cfg, truncation: SeriesTruncation::default() }
    }

    pub fn with_truncation(mut self, truncation: SeriesTruncation) -> Self {
        self.truncation = truncation;
        self
    }

    /// Poisson weights of the number of interferers inside the link disc.
    pub fn support(&self) -> Result<PoissonSupport> {
        self.truncation.support(self.cfg.link_disc_mean())
    }

    /// Density of `β*` given that it exceeds 1 (the closest interferer
    /// outside the link disc).
    pub fn pdf_beta_truncated(&self, x: f64) -> f64 {
        if !(x > 1.0) || x.is_infinite() {
            return 0.0;
        }
        let mu = self.cfg.link_disc_mean();
        let a = self.cfg.alpha();
        let x2a = x.powf(2.0 / a);
        2.0 * mu / a * x2a / x * (-mu * (x2a - 1.0)).exp()
    }

    /// Density of `R*` given `n` interferers inside the link disc.
    pub fn pdf_rate_conditional(&self, n: usize, x: f64) -> f64 {
        if !(x > support_edge(n)) || x.is_infinite() {
            return 0.0;
        }
        let mu = self.cfg.link_disc_mean();
        let a = self.cfg.alpha();
        let k = 1.0 + n as f64;
        let ln_beta = ln_threshold(k, x);
        let beta2a = (2.0 / a * ln_beta).exp();
        let ln_density =
            (4f64.ln()).ln() + k * x * LN_2 + mu.ln() - a.ln() + (2.0 / a - 1.0) * ln_beta - mu * (beta2a - 1.0);
        ln_density.exp()
    }

    /// Unconditional density of `R*`: `Σ_n P(n)·f(x | n)`.
    pub fn pdf_rate(&self, x: f64) -> Result<f64> {
        let support = self.support()?;
        Ok(support.iter().map(|(n, w)| w * self.pdf_rate_conditional(n, x)).sum())
    }

    /// `E[R* | n] = (1+n)⁻¹ ∫₀^∞ log₂(1 + (1+n)((v+μ)/μ)^{α/2}) e^{-v} dv`.
    pub fn conditional_mean_rate(&self, n: usize) -> Result<f64> {
        let mu = self.cfg.link_disc_mean();
        let half_alpha = 0.5 * self.cfg.alpha();
        let k = 1.0 + n as f64;
        let ln_k = k.ln();
        let integral = integrate(
            |v| {
                let w = (-v).exp();
                if w == 0.0 {
                    0.0
                } else {
                    softplus(ln_k + half_alpha * (v / mu).ln_1p()) / LN_2 * w
                }
            },
            0.0,
            f64::INFINITY,
            &quadrature(),
        )?;
        Ok(integral / k)
    }

    /// `E[R*]`.
    pub fn mean_rate(&self) -> Result<f64> {
        let support = self.support()?;
        let mut total = 0.0;
        for (n, w) in support.iter() {
            total += w * self.conditional_mean_rate(n)?;
        }
        Ok(total)
    }

    /// `E[β* | β* ≥ 1] = μ^{-α/2}·e^{μ}·Γ(1 + α/2, μ)`.
    pub fn mean_truncated_sir(&self) -> Result<f64> {
        let mu = self.cfg.link_disc_mean();
        let half_alpha = 0.5 * self.cfg.alpha();
        Ok(mu.powf(-half_alpha) * upper_incomplete_gamma_scaled(1.0 + half_alpha, mu)?)
    }
}

fn value(v: f64, kind: Kind) -> Result<ThroughputValue> {
    ThroughputValue::new(v, Method::Cognitive, DecodingRule::Opt, kind)
}

/// Cognitive spatial throughput `C_OPT = λ·E[R*]`.
pub fn cognitive_throughput(cfg: &NetworkConfig) -> Result<ThroughputValue> {
    let mean = OptRateDistribution::new(*cfg).mean_rate()?;
    value(cfg.lambda() * mean, Kind::Quadrature)
}

/// Markov lower bound `λ Σ_i P(i)·y_i·P(R* ≥ y_i | i)` for a per-`i` rate
/// schedule. Each `y_i` must exceed the support edge `log₂(2+i)/(1+i)`.
pub fn lower_bound<Y>(cfg: &NetworkConfig, schedule: Y) -> Result<ThroughputValue>
where
    Y: Fn(usize) -> f64,
{
    let dist = OptRateDistribution::new(*cfg);
    let support = dist.support()?;
    let mu = cfg.link_disc_mean();
    let a = cfg.alpha();
    let mut total = 0.0;
    for (i, w) in support.iter() {
        let y = schedule(i);
        if !(y > support_edge(i)) || !y.is_finite() {
            return Err(Error::Domain(format!("rate {y} for {i} decoded interferers must exceed {}", support_edge(i))));
        }
        let beta2a = (2.0 / a * ln_threshold(1.0 + i as f64, y)).exp();
        total += w * y * (-mu * (beta2a - 1.0)).exp();
    }
    value(cfg.lambda() * total, Kind::LowerBound)
}

/// Jensen upper bound `λ Σ_i P(i)·log₂(1 + (1+i)·E[β*|β*≥1])/(1+i)`.
pub fn upper_bound(cfg: &NetworkConfig) -> Result<ThroughputValue> {
    let dist = OptRateDistribution::new(*cfg);
    let support = dist.support()?;
    let m = dist.mean_truncated_sir()?;
    let total: f64 = support
        .iter()
        .map(|(i, w)| {
            let k = 1.0 + i as f64;
            w * (k * m).ln_1p() / LN_2 / k
        })
        .sum();
    value(cfg.lambda() * total, Kind::UpperBound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit() -> NetworkConfig {
        NetworkConfig::new(1.0 / PI, 1.0, 4.0).unwrap()
    }

    #[test]
    fn support_edges() {
        assert_eq!(support_edge(0), 1.0);
        assert!((support_edge(1) - 3f64.log2() / 2.0).abs() < 1e-15);
        assert!((support_edge(1) - 0.792_481).abs() < 1e-6);
    }

    #[test]
    fn conditional_pdf_examples() {
        let dist = OptRateDistribution::new(unit());
        // n = 0, x = 2: β = 3
        let expected = 4f64.ln() * 4.0 / 4.0 * 3f64.powf(-0.5) * (-(3f64.sqrt() - 1.0)).exp();
        let got = dist.pdf_rate_conditional(0, 2.0);
        assert!((got - expected).abs() < 1e-14, "{got} vs {expected}");
        assert!((got - 0.385).abs() < 1e-3);
        assert_eq!(dist.pdf_rate_conditional(1, 0.79), 0.0);
        assert_eq!(dist.pdf_rate_conditional(0, 1.0), 0.0);
        assert_eq!(dist.pdf_beta_truncated(1.0), 0.0);
        assert!((dist.pdf_beta_truncated(4.0) - 0.5 * 0.5 * (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn conditional_pdf_stays_finite_far_in_the_tail() {
        let dist = OptRateDistribution::new(unit());
        for n in [0, 5, 50] {
            for x in [5.0, 50.0, 500.0] {
                let f = dist.pdf_rate_conditional(n, x);
                assert!(f.is_finite() && f >= 0.0);
            }
        }
    }

    #[test]
    fn truncated_mean_sir_matches_quadrature() {
        let dist = OptRateDistribution::new(NetworkConfig::new(0.7, 1.3, 3.5).unwrap());
        let direct = integrate(|x| x * dist.pdf_beta_truncated(x), 1.0, f64::INFINITY, &quadrature()).unwrap();
        let closed = dist.mean_truncated_sir().unwrap();
        assert!((direct / closed - 1.0).abs() < 1e-8, "{direct} vs {closed}");
    }

    #[test]
    fn first_upper_bound_term() {
        // i = 0 term: P(0)·log₂(1 + M) with M = e·Γ(3, 1) = 5
        let c = unit();
        let dist = OptRateDistribution::new(c);
        let m = dist.mean_truncated_sir().unwrap();
        assert!((m - 5.0).abs() < 1e-12);
        let term = (-1f64).exp() * m.ln_1p() / LN_2;
        assert!((term - 0.950_954_560).abs() < 1e-9);
    }

    #[test]
    fn lower_bound_rejects_rates_outside_support() {
        let c = unit();
        assert!(matches!(lower_bound(&c, |_| 1.0), Err(Error::Domain(_))));
        assert!(matches!(lower_bound(&c, support_edge), Err(Error::Domain(_))));
        assert!(lower_bound(&c, |i| 2.0 * support_edge(i)).is_ok());
    }
}
