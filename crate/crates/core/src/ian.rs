//! Interference-as-noise receivers under the closest-interferer approximation.
//!
//! With the closest interferer at distance `r₁` the typical link supports
//! `R* = log₂(1 + β*)` where `β* = (r₁/d)^α`. Since `λπr₁²` is a unit
//! exponential, `u = λπd²·β*^{2/α}` is one too, and every expectation over
//! `R*` is evaluated as `∫₀^∞ ψ(u) e^{-u} du` after that substitution.

use std::f64::consts::{LN_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{DecodingRule, Kind, Method, NetworkConfig, ThroughputValue};
use crate::numerics::special::gamma;
use crate::numerics::{find_root, integrate, maximize_unimodal, softplus, QuadratureSpec};

pub(crate) fn quadrature() -> QuadratureSpec {
    QuadratureSpec::default().with_rel_tol(1e-10).with_abs_tol(1e-14)
}

/// `log₂(1 + (u/μ)^{α/2})` for `u > 0`.
#[inline]
fn rate_of_exponential(u: f64, ln_mu: f64, half_alpha: f64) -> f64 {
    softplus(half_alpha * (u.ln() - ln_mu)) / LN_2
}

/// Distribution of the best rate `R*` of the typical IAN link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IanRateDistribution {
    pub cfg: NetworkConfig,
}

impl IanRateDistribution {
    pub fn new(cfg: NetworkConfig) -> Self {
        Self { cfg }
    }

    /// Density of the distance to the closest interferer (Rayleigh).
    pub fn pdf_nearest_distance(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        let lp = self.cfg.lambda() * PI;
        2.0 * lp * x * (-lp * x * x).exp()
    }

    /// Density of the SIR `β* = (r₁/d)^α`.
    pub fn pdf_beta(&self, x: f64) -> f64 {
        if !(x > 0.0) || x.is_infinite() {
            return 0.0;
        }
        let mu = self.cfg.link_disc_mean();
        let a = self.cfg.alpha();
        let x2a = x.powf(2.0 / a);
        2.0 * mu / a * x2a / x * (-mu * x2a).exp()
    }

    /// Density of `R* = log₂(1 + β*)` in bits/s/Hz.
    pub fn pdf_rate(&self, x: f64) -> f64 {
        if !(x > 0.0) || x.is_infinite() {
            return 0.0;
        }
        let mu = self.cfg.link_disc_mean();
        let a = self.cfg.alpha();
        // 2^x - 1 without cancellation near 0
        let ln_y = (x * LN_2).exp_m1().ln();
        let y2a = (2.0 / a * ln_y).exp();
        let ln_density = (4f64.ln()).ln() + x * LN_2 + mu.ln() + (2.0 / a - 1.0) * ln_y - a.ln() - mu * y2a;
        ln_density.exp()
    }

    /// `E[R*]` in bits/s/Hz.
    pub fn mean_rate(&self) -> Result<f64> {
        let ln_mu = self.cfg.link_disc_mean().ln();
        let half_alpha = 0.5 * self.cfg.alpha();
        integrate(
            |u| {
                let w = (-u).exp();
                if w == 0.0 {
                    0.0
                } else {
                    rate_of_exponential(u, ln_mu, half_alpha) * w
                }
            },
            0.0,
            f64::INFINITY,
            &quadrature(),
        )
    }

    /// `E[β*] = (λπd²)^{-α/2} Γ(1 + α/2)`.
    pub fn mean_sir(&self) -> f64 {
        let a = self.cfg.alpha();
        self.cfg.link_disc_mean().powf(-0.5 * a) * gamma(1.0 + 0.5 * a)
    }
}

fn value(v: f64, kind: Kind) -> Result<ThroughputValue> {
    ThroughputValue::new(v, Method::Cognitive, DecodingRule::Ian, kind)
}

/// Cognitive spatial throughput `C_IAN = λ·E[R*]`.
pub fn cognitive_throughput(cfg: &NetworkConfig) -> Result<ThroughputValue> {
    let mean = IanRateDistribution::new(*cfg).mean_rate()?;
    value(cfg.lambda() * mean, Kind::Quadrature)
}

/// Markov lower bound `λ·y·P(R* ≥ y)` for any threshold `y > 0`.
pub fn lower_bound(cfg: &NetworkConfig, y: f64) -> Result<ThroughputValue> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::Domain(format!("lower-bound rate must be positive, got {y}")));
    }
    let beta = (y * LN_2).exp_m1();
    let tail = (-cfg.link_disc_mean() * beta.powf(2.0 / cfg.alpha())).exp();
    value(cfg.lambda() * y * tail, Kind::LowerBound)
}

/// Jensen upper bound `λ·log₂(1 + E[β*])`.
pub fn upper_bound(cfg: &NetworkConfig) -> Result<ThroughputValue> {
    let m = IanRateDistribution::new(*cfg).mean_sir();
    value(cfg.lambda() * m.ln_1p() / LN_2, Kind::UpperBound)
}

/// Constant `c` of the high-density equivalent `C_IAN ~ c·λ^{1-α/2}`:
/// `(πd²)^{-α/2}·Γ(1 + α/2) / ln 2`.
pub fn asymptote_constant(d: f64, alpha: f64) -> f64 {
    (PI * d * d).powf(-0.5 * alpha) * gamma(1.0 + 0.5 * alpha) / LN_2
}

/// High-density asymptote `c·λ^{1-α/2}`.
pub fn asymptote(cfg: &NetworkConfig) -> Result<ThroughputValue> {
    let c = asymptote_constant(cfg.d(), cfg.alpha());
    value(c * cfg.lambda().powf(1.0 - 0.5 * cfg.alpha()), Kind::Asymptote)
}

/// Stationarity residual of `C_IAN` in `λ`, up to a positive factor:
/// `∫₀^∞ (2 - u)·log₂(1 + (u/μ)^{α/2})·e^{-u} du` with `μ = λπd²`.
/// Positive below the throughput-maximizing density, negative above it.
pub fn optimality_residual(cfg: &NetworkConfig) -> Result<f64> {
    let ln_mu = cfg.link_disc_mean().ln();
    let half_alpha = 0.5 * cfg.alpha();
    integrate(
        |u| {
            let w = (-u).exp();
            if w == 0.0 {
                0.0
            } else {
                (2.0 - u) * rate_of_exponential(u, ln_mu, half_alpha) * w
            }
        },
        0.0,
        f64::INFINITY,
        // the residual vanishes at the root, so only an absolute target makes sense there
        &quadrature().with_abs_tol(1e-12),
    )
}

/// Throughput-maximizing density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalDensity {
    /// Root of the first-order condition.
    pub lambda: f64,
    pub throughput: ThroughputValue,
    /// Independent golden-section maximizer of `C_IAN(λ)`.
    pub golden_section_lambda: f64,
}

const DENSITY_BRACKET: (f64, f64) = (1e-6, 1e3);
const SCAN_POINTS: usize = 48;

/// Solves the first-order condition for the density maximizing `C_IAN`.
///
/// The root is searched in `ln λ` on `[10⁻⁶, 10³]/d²` and cross-checked
/// against a golden-section maximization of `C_IAN`; when the residual
/// scan shows more than one sign change, the one nearest the golden-section
/// maximizer wins.
pub fn optimal_density(d: f64, alpha: f64) -> Result<OptimalDensity> {
    let base = NetworkConfig::new(1.0, d, alpha)?;
    let lo = (DENSITY_BRACKET.0 / (d * d)).ln();
    let hi = (DENSITY_BRACKET.1 / (d * d)).ln();

    let at = |s: f64| base.with_lambda(s.exp());
    let residual = |s: f64| -> f64 { at(s).and_then(|c| optimality_residual(&c)).unwrap_or(f64::NAN) };
    let objective =
        |s: f64| -> f64 { at(s).and_then(|c| cognitive_throughput(&c)).map(|t| t.value).unwrap_or(f64::NAN) };

    let (s_gs, _) = maximize_unimodal(objective, lo, hi, 1e-7)?;

    let grid: Vec<f64> = (0..SCAN_POINTS).map(|k| lo + (hi - lo) * k as f64 / (SCAN_POINTS - 1) as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&s| residual(s)).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("optimality residual is not finite on the density bracket".into()));
    }
    let bracket = grid
        .windows(2)
        .zip(values.windows(2))
        .filter(|(_, v)| v[0].signum() != v[1].signum())
        .map(|(s, _)| (s[0], s[1]))
        .min_by(|a, b| {
            let da = (0.5 * (a.0 + a.1) - s_gs).abs();
            let db = (0.5 * (b.0 + b.1) - s_gs).abs();
            da.total_cmp(&db)
        })
        .ok_or(Error::Bracket { lo: lo.exp(), hi: hi.exp() })?;

    let s_root = find_root(residual, bracket.0, bracket.1, 1e-12)?;
    let lambda = s_root.exp();
    let golden_section_lambda = s_gs.exp();
    if ((golden_section_lambda - lambda) / lambda).abs() > 1e-3 {
        return Err(Error::Numerical(format!(
            "first-order root {lambda} disagrees with golden-section maximizer {golden_section_lambda}"
        )));
    }
    let throughput = cognitive_throughput(&base.with_lambda(lambda)?)?;
    Ok(OptimalDensity { lambda, throughput, golden_section_lambda })
}
