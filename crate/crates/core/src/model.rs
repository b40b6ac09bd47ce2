//! Network model: parameters, path loss, and Poisson sampling of the typical link.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible sampling window, in units of the link distance.
pub const MIN_WINDOW_IN_LINKS: f64 = 10.0;

/// Density, link distance and path-loss exponent of a bipolar Poisson network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    lambda: f64,
    d: f64,
    alpha: f64,
}

impl NetworkConfig {
    /// `lambda` in nodes/m², `d` in meters, `alpha > 2`.
    pub fn new(lambda: f64, d: f64, alpha: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Config(format!("density must be positive and finite, got {lambda}")));
        }
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::Config(format!("link distance must be positive and finite, got {d}")));
        }
        if !(alpha.is_finite() && alpha > 2.0) {
            return Err(Error::Config(format!("path-loss exponent must exceed 2, got {alpha}")));
        }
        let cfg = Self { lambda, d, alpha };
        let mu = cfg.link_disc_mean();
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::Config(format!("lambda*pi*d^2 is not a positive finite number ({mu})")));
        }
        Ok(cfg)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `λπd²`: the expected number of transmitters closer to a receiver than
    /// its own transmitter. Every analytic quantity depends on `λ` and `d`
    /// only through this number (besides the leading factor `λ`).
    pub fn link_disc_mean(&self) -> f64 {
        self.lambda * PI * self.d * self.d
    }

    /// Same link geometry at another density.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(lambda, self.d, self.alpha)
    }
}

/// How a receiver handles interfering transmissions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DecodingRule {
    /// Interference as noise.
    #[serde(rename = "IAN")]
    Ian,
    /// Joint decoding of every interferer closer than the own transmitter.
    #[serde(rename = "OPT")]
    Opt,
}

impl fmt::Display for DecodingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecodingRule::Ian => "IAN",
            DecodingRule::Opt => "OPT",
        })
    }
}

impl FromStr for DecodingRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ian" => Ok(DecodingRule::Ian),
            "opt" => Ok(DecodingRule::Opt),
            other => Err(Error::Config(format!("unknown decoding rule '{other}'"))),
        }
    }
}

/// Whether transmitters adapt their rate per realization or use a fixed rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Cognitive,
    FixedRate,
}

/// How a throughput value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Quadrature,
    LowerBound,
    UpperBound,
    Asymptote,
    Simulated,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Cognitive => "cognitive",
            Method::FixedRate => "fixed_rate",
        }
    }
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Quadrature => "quadrature",
            Kind::LowerBound => "lower_bound",
            Kind::UpperBound => "upper_bound",
            Kind::Asymptote => "asymptote",
            Kind::Simulated => "simulated",
        }
    }
}

/// A spatial throughput in bits/s/Hz/m² with its provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThroughputValue {
    pub value: f64,
    pub method: Method,
    pub rule: DecodingRule,
    pub kind: Kind,
}

impl ThroughputValue {
    pub fn new(value: f64, method: Method, rule: DecodingRule, kind: Kind) -> Result<Self> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::Numerical(format!(
                "{} {} {} throughput is {value}",
                method.as_str(),
                rule,
                kind.as_str()
            )));
        }
        Ok(Self { value, method, rule, kind })
    }
}

/// Power gain `x^-alpha` of a link of length `x`.
pub fn pathloss_gain(x: f64, alpha: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("path loss is undefined at distance {x}")));
    }
    if !(alpha > 2.0) {
        return Err(Error::Domain(format!("path-loss exponent must exceed 2, got {alpha}")));
    }
    Ok(x.powf(-alpha))
}

/// Gain `(r²)^(-alpha/2)` from a squared distance; integer `alpha/2` avoids `powf`.
#[inline]
pub(crate) fn gain_from_sq(r2: f64, half_alpha: f64) -> f64 {
    if half_alpha.fract() == 0.0 && half_alpha <= 16.0 {
        r2.powi(-(half_alpha as i32))
    } else {
        r2.powf(-half_alpha)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// One sample of the network seen from the typical receiver at the origin.
///
/// Receivers of the interfering pairs are not materialized: the interference
/// at the origin depends only on transmitter positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpatialRealization {
    pub cfg: NetworkConfig,
    pub typical_rx: Point,
    pub typical_tx: Point,
    pub interferers: Vec<Point>,
    pub window_radius: f64,
    pub seed: u64,
    pub stream: u64,
}

impl SpatialRealization {
    /// Squared interferer distances to the typical receiver, ascending.
    pub fn sorted_sq_distances(&self) -> Vec<f64> {
        let mut sq: Vec<f64> = self.interferers.iter().map(Point::norm_sq).collect();
        sq.sort_by(f64::total_cmp);
        sq
    }
}

/// Generator for realization `stream` of a run keyed by `seed`.
///
/// ChaCha8 keyed by `seed` with the 64-bit stream id set to `stream`, so every
/// realization of a sweep can be regenerated independently and in any order.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn check_window(cfg: &NetworkConfig, window_radius: f64) -> Result<()> {
    if !(window_radius.is_finite() && window_radius >= MIN_WINDOW_IN_LINKS * cfg.d()) {
        return Err(Error::Config(format!(
            "window radius {window_radius} is below {MIN_WINDOW_IN_LINKS}·d = {}",
            MIN_WINDOW_IN_LINKS * cfg.d()
        )));
    }
    Ok(())
}

/// Samples a realization: a Poisson number of interferers, uniform in the
/// disc of radius `window_radius`, plus the typical pair (receiver at the
/// origin, transmitter at distance `d` in a uniform direction).
pub fn sample_realization(cfg: &NetworkConfig, window_radius: f64, seed: u64) -> Result<SpatialRealization> {
    sample_realization_stream(cfg, window_radius, seed, 0)
}

/// [`sample_realization`] on an explicit stream of the seed.
pub fn sample_realization_stream(
    cfg: &NetworkConfig,
    window_radius: f64,
    seed: u64,
    stream: u64,
) -> Result<SpatialRealization> {
    check_window(cfg, window_radius)?;
    let mut rng = stream_rng(seed, stream);

    let theta = rng.random::<f64>() * TAU;
    let typical_tx = Point { x: cfg.d() * theta.cos(), y: cfg.d() * theta.sin() };

    let mean = cfg.lambda() * PI * window_radius * window_radius;
    let count =
        Poisson::new(mean).map_err(|e| Error::Config(format!("interferer count law: {e}")))?.sample(&mut rng) as usize;

    let interferers = (0..count)
        .map(|_| {
            let r = window_radius * rng.random::<f64>().sqrt();
            let phi = rng.random::<f64>() * TAU;
            Point { x: r * phi.cos(), y: r * phi.sin() }
        })
        .collect();

    Ok(SpatialRealization {
        cfg: *cfg,
        typical_rx: Point::ORIGIN,
        typical_tx,
        interferers,
        window_radius,
        seed,
        stream,
    })
}

/// Distance from the typical receiver to its closest interferer.
pub fn nearest_interferer_distance(real: &SpatialRealization) -> Result<f64> {
    real.interferers.iter().map(|p| p.distance(&real.typical_rx)).min_by(f64::total_cmp).ok_or(Error::EmptyWindow)
}

/// Squared interferer distances to the typical receiver in ascending order,
/// generated lazily.
///
/// `λπr_k²` of the k-th closest point of a homogeneous PPP is the k-th arrival
/// of a unit-rate Poisson process, so the distances are produced by summing
/// unit exponentials until the window edge. The resulting point set (up to
/// the angles, which do not affect interference at the origin) has the same
/// law as [`sample_realization`]'s, and a caller that only needs the closest
/// few interferers can stop early.
#[derive(Debug, Clone)]
pub struct SortedSqDistances {
    rng: ChaCha8Rng,
    inv_intensity: f64,
    arrival: f64,
    limit: f64,
}

impl SortedSqDistances {
    pub fn new(cfg: &NetworkConfig, window_radius: f64, seed: u64, stream: u64) -> Result<Self> {
        check_window(cfg, window_radius)?;
        Ok(Self {
            rng: stream_rng(seed, stream),
            inv_intensity: 1.0 / (cfg.lambda() * PI),
            arrival: 0.0,
            limit: cfg.lambda() * PI * window_radius * window_radius,
        })
    }
}

impl Iterator for SortedSqDistances {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        if self.arrival > self.limit {
            return None;
        }
        let e: f64 = Exp1.sample(&mut self.rng);
        self.arrival += e;
        if self.arrival > self.limit {
            return None;
        }
        Some(self.arrival * self.inv_intensity)
    }
}
