//! Fixed-rate transmission: one common SIR threshold per decoding state,
//! chosen to maximize spatial throughput, with outages when the realized
//! SIR falls short.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{DecodingRule, Kind, Method, NetworkConfig, ThroughputValue};
use crate::numerics::{find_root, SeriesTruncation};
use crate::{ian, opt};

/// An OPT threshold pinned to the edge of `β ≥ 1` is reported as
/// `1 + BOUNDARY_OFFSET`.
pub const BOUNDARY_OFFSET: f64 = 1e-9;

/// Spatial throughput of threshold `beta`.
///
/// IAN (`i` must be 0): `λ·log₂(1+β)·e^{-μβ^{2/α}}`.
/// OPT, given `i` interferers inside the link disc:
/// `λ·log₂(1+(1+i)β)/(1+i)·e^{-μ(β^{2/α}-1)}` for `β ≥ 1`.
pub fn spatial_throughput_at(cfg: &NetworkConfig, rule: DecodingRule, beta: f64, i: usize) -> Result<f64> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Domain(format!("SIR threshold must be positive and finite, got {beta}")));
    }
    let mu = cfg.link_disc_mean();
    let b2a = beta.powf(2.0 / cfg.alpha());
    match rule {
        DecodingRule::Ian => {
            if i != 0 {
                return Err(Error::Domain("IAN has no jointly decoded interferers".into()));
            }
            Ok(cfg.lambda() * beta.ln_1p() / LN_2 * (-mu * b2a).exp())
        }
        DecodingRule::Opt => {
            if beta < 1.0 {
                return Err(Error::Domain(format!("OPT threshold must be at least 1, got {beta}")));
            }
            let k = 1.0 + i as f64;
            Ok(cfg.lambda() * (k * beta).ln_1p() / LN_2 / k * (-mu * (b2a - 1.0)).exp())
        }
    }
}

/// Stationarity condition of [`spatial_throughput_at`] in `t = ln β`,
/// with `k = 1 + i`:
/// `ln(2μ/(kα)) + (2/α - 1)t + ln(1+kβ) + ln ln(1+kβ)`.
/// Strictly increasing in `t`; the optimum is its root.
pub fn stationarity(cfg: &NetworkConfig, k: f64, t: f64) -> f64 {
    let a = cfg.alpha();
    let mu = cfg.link_disc_mean();
    let l = (k * t.exp()).ln_1p();
    (2.0 * mu / (k * a)).ln() + (2.0 / a - 1.0) * t + l + l.ln()
}

/// Optimal threshold for one decoding state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaStar {
    pub beta: f64,
    /// The unconstrained optimum lies below 1, so OPT uses the edge of its
    /// admissible range.
    pub at_boundary: bool,
}

/// Maximizes [`spatial_throughput_at`] over `β` (over `β ≥ 1` for OPT).
pub fn solve_beta_star(cfg: &NetworkConfig, rule: DecodingRule, i: usize) -> Result<BetaStar> {
    if rule == DecodingRule::Ian && i != 0 {
        return Err(Error::Domain("IAN has no jointly decoded interferers".into()));
    }
    let k = 1.0 + i as f64;
    let h = |t: f64| stationarity(cfg, k, t);

    if rule == DecodingRule::Opt && h(0.0) >= 0.0 {
        return Ok(BetaStar { beta: 1.0 + BOUNDARY_OFFSET, at_boundary: true });
    }

    let (mut lo, mut hi) = match rule {
        DecodingRule::Ian => (-1.0, 1.0),
        DecodingRule::Opt => (0.0, 1.0),
    };
    for _ in 0..64 {
        if h(lo) < 0.0 {
            break;
        }
        lo = 2.0 * lo - 1.0;
    }
    for _ in 0..64 {
        if h(hi) > 0.0 {
            break;
        }
        hi = 2.0 * hi + 1.0;
    }
    let t = find_root(h, lo, hi, 1e-13)?;
    Ok(BetaStar { beta: t.exp(), at_boundary: false })
}

/// Threshold used when `joint` interferers fall inside the link disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateThreshold {
    pub joint: usize,
    /// Probability of this decoding state.
    pub weight: f64,
    pub beta: f64,
    /// Transmission rate `log₂(1 + (1+joint)β)/(1+joint)`.
    pub rate: f64,
    pub at_boundary: bool,
}

/// Throughput-maximizing fixed-rate policy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedRateSolution {
    pub cfg: NetworkConfig,
    pub rule: DecodingRule,
    /// Ascending in `joint`; a single `joint = 0` entry for IAN.
    pub thresholds: Vec<RateThreshold>,
    pub throughput: ThroughputValue,
}

impl FixedRateSolution {
    pub fn threshold_for(&self, joint: usize) -> Option<&RateThreshold> {
        let first = self.thresholds.first()?.joint;
        self.thresholds.get(joint.checked_sub(first)?)
    }

    pub fn beta_stars(&self) -> Vec<f64> {
        self.thresholds.iter().map(|t| t.beta).collect()
    }

    pub fn rates(&self) -> Vec<f64> {
        self.thresholds.iter().map(|t| t.rate).collect()
    }
}

/// Best fixed-rate policy and its spatial throughput `T`.
pub fn highest_throughput(cfg: &NetworkConfig, rule: DecodingRule) -> Result<FixedRateSolution> {
    let states: Vec<(usize, f64)> = match rule {
        DecodingRule::Ian => vec![(0, 1.0)],
        DecodingRule::Opt => SeriesTruncation::default().support(cfg.link_disc_mean())?.iter().collect(),
    };
    let mut thresholds = Vec::with_capacity(states.len());
    let mut total = 0.0;
    for (i, w) in states {
        let star = solve_beta_star(cfg, rule, i)?;
        let k = 1.0 + i as f64;
        total += w * spatial_throughput_at(cfg, rule, star.beta, i)?;
        thresholds.push(RateThreshold {
            joint: i,
            weight: w,
            beta: star.beta,
            rate: (k * star.beta).ln_1p() / LN_2 / k,
            at_boundary: star.at_boundary,
        });
    }
    let throughput = ThroughputValue::new(total, Method::FixedRate, rule, Kind::Quadrature)?;
    Ok(FixedRateSolution { cfg: *cfg, rule, thresholds, throughput })
}

/// Cognitive and fixed-rate throughputs at one density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub lambda: f64,
    pub c_ian: f64,
    pub t_ian: f64,
    pub c_opt: f64,
    pub t_opt: f64,
    pub gap_ian: f64,
    pub gap_opt: f64,
}

/// Computes `C - T` for both rules; a negative gap beyond round-off is
/// reported as a numerical error.
pub fn compare_c_vs_t(cfg: &NetworkConfig) -> Result<Comparison> {
    let c_ian = ian::cognitive_throughput(cfg)?.value;
    let c_opt = opt::cognitive_throughput(cfg)?.value;
    let t_ian = highest_throughput(cfg, DecodingRule::Ian)?.throughput.value;
    let t_opt = highest_throughput(cfg, DecodingRule::Opt)?.throughput.value;
    let out =
        Comparison { lambda: cfg.lambda(), c_ian, t_ian, c_opt, t_opt, gap_ian: c_ian - t_ian, gap_opt: c_opt - t_opt };
    for (rule, c, gap) in [("IAN", c_ian, out.gap_ian), ("OPT", c_opt, out.gap_opt)] {
        if gap < -1e-9 * c.max(1.0) {
            return Err(Error::Numerical(format!(
                "{rule} fixed-rate throughput exceeds cognitive throughput by {} at λ = {}",
                -gap,
                cfg.lambda()
            )));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit() -> NetworkConfig {
        NetworkConfig::new(1.0 / PI, 1.0, 4.0).unwrap()
    }

    #[test]
    fn ian_threshold_satisfies_first_order_condition() {
        let c = unit();
        let star = solve_beta_star(&c, DecodingRule::Ian, 0).unwrap();
        assert!(!star.at_boundary);
        let b = star.beta;
        // (1+β) ln(1+β) = 2β^{1/2} at μ = 1, α = 4
        assert!(((1.0 + b) * b.ln_1p() - 2.0 * b.sqrt()).abs() < 1e-10);
        assert!((b - 1.63865).abs() < 1e-3, "{b}");
    }

    #[test]
    fn stationarity_is_increasing() {
        let c = NetworkConfig::new(0.3, 1.0, 3.0).unwrap();
        for k in [1.0, 2.0, 7.0] {
            let mut prev = f64::NEG_INFINITY;
            for j in -200..200 {
                let v = stationarity(&c, k, 0.1 * j as f64);
                assert!(v > prev);
                prev = v;
            }
        }
    }

    #[test]
    fn ian_rejects_joint_states() {
        let c = unit();
        assert!(matches!(solve_beta_star(&c, DecodingRule::Ian, 1), Err(Error::Domain(_))));
        assert!(matches!(spatial_throughput_at(&c, DecodingRule::Ian, 1.0, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn opt_thresholds_respect_boundary() {
        let dense = NetworkConfig::new(5.0, 1.0, 4.0).unwrap();
        let sol = highest_throughput(&dense, DecodingRule::Opt).unwrap();
        for t in &sol.thresholds {
            assert!(t.beta >= 1.0);
            if t.at_boundary {
                assert_eq!(t.beta, 1.0 + BOUNDARY_OFFSET);
                assert!(stationarity(&dense, 1.0 + t.joint as f64, 0.0) >= 0.0);
            }
        }
        assert!(sol.thresholds.iter().any(|t| t.at_boundary));
    }

    #[test]
    fn threshold_lookup() {
        let sol = highest_throughput(&unit(), DecodingRule::Opt).unwrap();
        assert_eq!(sol.threshold_for(0).unwrap().joint, 0);
        assert_eq!(sol.threshold_for(3).unwrap().joint, 3);
        assert!(sol.threshold_for(10_000).is_none());
    }

    #[test]
    fn fixed_rate_never_beats_cognitive() {
        for lambda in [0.01, 0.1, 1.0, 5.0] {
            let c = NetworkConfig::new(lambda, 1.0, 4.0).unwrap();
            let cmp = compare_c_vs_t(&c).unwrap();
            assert!(cmp.gap_ian >= 0.0 && cmp.gap_opt >= 0.0);
        }
    }
}
