//! Monte Carlo estimation of spatial throughput with full aggregate
//! interference.
//!
//! Each realization is keyed by `(seed, index)` and evaluated at the typical
//! receiver. Only distances to the origin matter there, so the estimators
//! draw interferer distances in increasing order (see
//! [`SortedSqDistances`]) instead of placing points in the plane; the law
//! is the same as [`sample_realization`](crate::model::sample_realization)'s.
//! The simulator measures the typical link only and does not check that
//! every other link's rate is simultaneously achievable.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixed_rate::FixedRateSolution;
use crate::ian;
use crate::model::{gain_from_sq, DecodingRule, Method, NetworkConfig, SortedSqDistances, SpatialRealization};
use crate::numerics::pairwise_sum;
use crate::opt;

/// Rate assigned when nothing interferes (bits/s/Hz).
pub const RATE_CAP: f64 = 30.0;

/// Smallest realization count accepted by the cognitive estimator.
pub const MIN_REALIZATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterferenceMode {
    /// Aggregate power of every interferer in the window.
    Full,
    /// Closest interferer only, as in the analysis.
    ClosestOnly,
}

/// How OPT accounts for the received powers of the jointly decoded set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateMode {
    ExactPowers,
    /// Every decoded interferer counted at the signal power `d^{-α}`.
    LowerBoundPowers,
}

impl InterferenceMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            InterferenceMode::Full => "full",
            InterferenceMode::ClosestOnly => "closest",
        }
    }
}

impl RateMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            RateMode::ExactPowers => "exact",
            RateMode::LowerBoundPowers => "lower",
        }
    }
}

impl fmt::Display for InterferenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for RateMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InterferenceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "full" => Ok(InterferenceMode::Full),
            "closest" | "closest_only" | "closest-only" => Ok(InterferenceMode::ClosestOnly),
            other => Err(Error::Config(format!("unknown interference mode '{other}'"))),
        }
    }
}

impl FromStr for RateMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" | "exact_powers" | "exact-powers" => Ok(RateMode::ExactPowers),
            "lower" | "lower_bound_powers" | "lower-bound-powers" => Ok(RateMode::LowerBoundPowers),
            other => Err(Error::Config(format!("unknown rate mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimOptions {
    pub interference: InterferenceMode,
    pub rate_mode: RateMode,
    /// Overrides [`default_window_radius`].
    pub window_radius: Option<f64>,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self { interference: InterferenceMode::Full, rate_mode: RateMode::ExactPowers, window_radius: None }
    }
}

impl SimOptions {
    pub fn window_for(&self, cfg: &NetworkConfig) -> f64 {
        self.window_radius.unwrap_or_else(|| default_window_radius(cfg))
    }
}

/// `max(10·d, 40/√λ)`: about 5000 interferers on average once the density
/// term dominates. At `α = 4` the interference missed beyond the window is
/// `πλ/R²`, a relative share of order `1/(λπR²)` of the typical aggregate.
pub fn default_window_radius(cfg: &NetworkConfig) -> f64 {
    (10.0 * cfg.d()).max(40.0 / cfg.lambda().sqrt())
}

/// What the typical receiver sees: received powers split by the decode-set
/// rule `r < d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceSummary {
    pub mode: InterferenceMode,
    /// `d^{-α}`.
    pub signal: f64,
    /// Power of the closest interferer, 0 if none.
    pub closest: f64,
    /// Aggregate power of all interferers (closest-only summaries stop
    /// accumulating after the first interferer beyond `d`).
    pub total: f64,
    /// Interferers strictly inside the link disc.
    pub decoded: usize,
    pub decoded_power: f64,
    /// Power of the closest interferer at `r ≥ d`, 0 if none.
    pub far_closest: f64,
    /// Aggregate power of interferers at `r ≥ d`.
    pub far_total: f64,
}

impl InterferenceSummary {
    /// Builds a summary from squared distances in increasing order.
    pub fn from_sorted_sq<I>(cfg: &NetworkConfig, sorted_sq: I, mode: InterferenceMode) -> Self
    where
        I: IntoIterator<Item = f64>,
    {
        let d2 = cfg.d() * cfg.d();
        let half_alpha = 0.5 * cfg.alpha();
        let mut s = Self {
            mode,
            signal: gain_from_sq(d2, half_alpha),
            closest: 0.0,
            total: 0.0,
            decoded: 0,
            decoded_power: 0.0,
            far_closest: 0.0,
            far_total: 0.0,
        };
        let mut first = true;
        for r2 in sorted_sq {
            let p = gain_from_sq(r2, half_alpha);
            if first {
                s.closest = p;
                first = false;
            }
            s.total += p;
            if r2 < d2 {
                s.decoded += 1;
                s.decoded_power += p;
            } else {
                if s.far_closest == 0.0 {
                    s.far_closest = p;
                    if mode == InterferenceMode::ClosestOnly {
                        s.far_total = p;
                        break;
                    }
                }
                s.far_total += p;
            }
        }
        s
    }

    pub fn from_realization(real: &SpatialRealization, mode: InterferenceMode) -> Self {
        Self::from_sorted_sq(&real.cfg, real.sorted_sq_distances(), mode)
    }

    pub fn rate_ian(&self) -> f64 {
        let i = match self.mode {
            InterferenceMode::Full => self.total,
            InterferenceMode::ClosestOnly => self.closest,
        };
        if i == 0.0 {
            return RATE_CAP;
        }
        (self.signal / i).ln_1p() / std::f64::consts::LN_2
    }

    pub fn rate_opt(&self, rate_mode: RateMode) -> f64 {
        let i = self.opt_noise();
        if i == 0.0 {
            return RATE_CAP;
        }
        let k = 1.0 + self.decoded as f64;
        let num = match rate_mode {
            RateMode::ExactPowers => self.signal + self.decoded_power,
            RateMode::LowerBoundPowers => k * self.signal,
        };
        (num / i).ln_1p() / std::f64::consts::LN_2 / k
    }

    /// Interference treated as noise by OPT.
    pub fn opt_noise(&self) -> f64 {
        match self.mode {
            InterferenceMode::Full => self.far_total,
            InterferenceMode::ClosestOnly => self.far_closest,
        }
    }

    /// Realized rate of the typical link under `rule`.
    pub fn rate(&self, rule: DecodingRule, rate_mode: RateMode) -> f64 {
        match rule {
            DecodingRule::Ian => self.rate_ian(),
            DecodingRule::Opt => self.rate_opt(rate_mode),
        }
    }
}

/// Best IAN rate of the typical link in a realization.
pub fn rate_ian(real: &SpatialRealization, mode: InterferenceMode) -> f64 {
    InterferenceSummary::from_realization(real, mode).rate_ian()
}

/// Best OPT rate of the typical link in a realization.
pub fn rate_opt(real: &SpatialRealization, mode: InterferenceMode, rate_mode: RateMode) -> f64 {
    InterferenceSummary::from_realization(real, mode).rate_opt(rate_mode)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationEstimate {
    pub lambda: f64,
    pub rule: DecodingRule,
    pub method: Method,
    /// Spatial throughput in bits/s/Hz/m².
    pub mean: f64,
    pub stderr: f64,
    pub n_realizations: usize,
    pub seed: u64,
    pub interference_mode: InterferenceMode,
    /// Only meaningful for OPT.
    pub rate_mode: Option<RateMode>,
    pub window_radius: f64,
}

/// Sample mean and standard error, reduced pairwise in index order.
pub fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = pairwise_sum(xs) / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let sq: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&sq) / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn summaries<'a>(
    cfg: &'a NetworkConfig,
    mode: InterferenceMode,
    window: f64,
    n: usize,
    seed: u64,
) -> Result<impl ParallelIterator<Item = InterferenceSummary> + 'a> {
    // validates the window once; per-realization construction cannot fail after this
    SortedSqDistances::new(cfg, window, seed, 0)?;
    Ok((0..n as u64).into_par_iter().map(move |stream| {
        let it = SortedSqDistances::new(cfg, window, seed, stream).expect("window already validated");
        InterferenceSummary::from_sorted_sq(cfg, it, mode)
    }))
}

/// Per-realization rates of the typical link, in realization order.
pub fn cognitive_rates(
    cfg: &NetworkConfig,
    rule: DecodingRule,
    opts: &SimOptions,
    n: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let window = opts.window_for(cfg);
    Ok(summaries(cfg, opts.interference, window, n, seed)?.map(|s| s.rate(rule, opts.rate_mode)).collect())
}

/// Estimates `C = λ·E[R]` from `n` realizations.
pub fn estimate_cognitive(
    cfg: &NetworkConfig,
    rule: DecodingRule,
    opts: &SimOptions,
    n: usize,
    seed: u64,
) -> Result<SimulationEstimate> {
    if n < MIN_REALIZATIONS {
        return Err(Error::Config(format!("need at least {MIN_REALIZATIONS} realizations, got {n}")));
    }
    let rates = cognitive_rates(cfg, rule, opts, n, seed)?;
    let (m, se) = mean_and_stderr(&rates);
    Ok(estimate(cfg, rule, Method::Cognitive, opts, n, seed, m, se))
}

#[allow(clippy::too_many_arguments)]
fn estimate(
    cfg: &NetworkConfig,
    rule: DecodingRule,
    method: Method,
    opts: &SimOptions,
    n: usize,
    seed: u64,
    mean: f64,
    stderr: f64,
) -> SimulationEstimate {
    SimulationEstimate {
        lambda: cfg.lambda(),
        rule,
        method,
        mean: cfg.lambda() * mean,
        stderr: cfg.lambda() * stderr,
        n_realizations: n,
        seed,
        interference_mode: opts.interference,
        rate_mode: (rule == DecodingRule::Opt).then_some(opts.rate_mode),
        window_radius: opts.window_for(cfg),
    }
}

/// Whether the fixed rate of `solution` is decodable in a realization.
/// An OPT decoding state outside the solution's index range is an outage.
fn fixed_rate_delivered(solution: &FixedRateSolution, s: &InterferenceSummary, rate_mode: RateMode) -> f64 {
    match solution.rule {
        DecodingRule::Ian => {
            let t = &solution.thresholds[0];
            let i = match s.mode {
                InterferenceMode::Full => s.total,
                InterferenceMode::ClosestOnly => s.closest,
            };
            if s.signal >= t.beta * i {
                t.rate
            } else {
                0.0
            }
        }
        DecodingRule::Opt => {
            let Some(t) = solution.threshold_for(s.decoded) else {
                return 0.0;
            };
            let k = 1.0 + s.decoded as f64;
            let num = match rate_mode {
                RateMode::ExactPowers => s.signal + s.decoded_power,
                RateMode::LowerBoundPowers => k * s.signal,
            };
            if num >= k * t.beta * s.opt_noise() {
                t.rate
            } else {
                0.0
            }
        }
    }
}

/// Estimates the fixed-rate throughput `T` of a policy: `λ·E[rate·1{success}]`.
pub fn estimate_fixed_rate(
    solution: &FixedRateSolution,
    opts: &SimOptions,
    n: usize,
    seed: u64,
) -> Result<SimulationEstimate> {
    if n == 0 {
        return Err(Error::Config("need at least one realization".into()));
    }
    let cfg = &solution.cfg;
    let window = opts.window_for(cfg);
    let delivered: Vec<f64> = summaries(cfg, opts.interference, window, n, seed)?
        .map(|s| fixed_rate_delivered(solution, &s, opts.rate_mode))
        .collect();
    let (m, se) = mean_and_stderr(&delivered);
    Ok(estimate(cfg, solution.rule, Method::FixedRate, opts, n, seed, m, se))
}

/// One density of the tightness study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TightnessRow {
    pub lambda: f64,
    pub c_ian_analytic: f64,
    pub c_opt_analytic: f64,
    pub c_ian_sim: f64,
    pub c_ian_sim_stderr: f64,
    pub c_opt_sim_exact: f64,
    pub c_opt_sim_exact_stderr: f64,
    pub c_opt_sim_lower: f64,
    pub c_opt_sim_lower_stderr: f64,
    pub ratio_analytic: f64,
    pub ratio_sim_exact: f64,
    pub ratio_sim_lower: f64,
}

impl TightnessRow {
    pub const COLUMNS: [&'static str; 12] = [
        "lambda",
        "cognitive_ian_quadrature",
        "cognitive_opt_quadrature",
        "cognitive_ian_simulated",
        "cognitive_ian_simulated_stderr",
        "cognitive_opt_simulated_exact",
        "cognitive_opt_simulated_exact_stderr",
        "cognitive_opt_simulated_lower",
        "cognitive_opt_simulated_lower_stderr",
        "ratio_quadrature",
        "ratio_simulated_exact",
        "ratio_simulated_lower",
    ];

    pub fn values(&self) -> [f64; 12] {
        [
            self.lambda,
            self.c_ian_analytic,
            self.c_opt_analytic,
            self.c_ian_sim,
            self.c_ian_sim_stderr,
            self.c_opt_sim_exact,
            self.c_opt_sim_exact_stderr,
            self.c_opt_sim_lower,
            self.c_opt_sim_lower_stderr,
            self.ratio_analytic,
            self.ratio_sim_exact,
            self.ratio_sim_lower,
        ]
    }
}

/// Analytic versus full-interference simulated throughput over a density
/// grid. IAN and both OPT rate modes share every realization.
pub fn tightness_report(lambdas: &[f64], d: f64, alpha: f64, n: usize, seed: u64) -> Result<Vec<TightnessRow>> {
    if n < MIN_REALIZATIONS {
        return Err(Error::Config(format!("need at least {MIN_REALIZATIONS} realizations, got {n}")));
    }
    lambdas
        .iter()
        .map(|&lambda| {
            let cfg = NetworkConfig::new(lambda, d, alpha)?;
            let c_ian_analytic = ian::cognitive_throughput(&cfg)?.value;
            let c_opt_analytic = opt::cognitive_throughput(&cfg)?.value;
            let window = default_window_radius(&cfg);
            let triples: Vec<[f64; 3]> = summaries(&cfg, InterferenceMode::Full, window, n, seed)?
                .map(|s| [s.rate_ian(), s.rate_opt(RateMode::ExactPowers), s.rate_opt(RateMode::LowerBoundPowers)])
                .collect();
            let column = |j: usize| -> (f64, f64) {
                let xs: Vec<f64> = triples.iter().map(|t| t[j]).collect();
                let (m, se) = mean_and_stderr(&xs);
                (lambda * m, lambda * se)
            };
            let (ci, ci_se) = column(0);
            let (ce, ce_se) = column(1);
            let (cl, cl_se) = column(2);
            Ok(TightnessRow {
                lambda,
                c_ian_analytic,
                c_opt_analytic,
                c_ian_sim: ci,
                c_ian_sim_stderr: ci_se,
                c_opt_sim_exact: ce,
                c_opt_sim_exact_stderr: ce_se,
                c_opt_sim_lower: cl,
                c_opt_sim_lower_stderr: cl_se,
                ratio_analytic: c_ian_analytic / c_opt_analytic,
                ratio_sim_exact: ci / ce,
                ratio_sim_lower: ci / cl,
            })
        })
        .collect()
}
