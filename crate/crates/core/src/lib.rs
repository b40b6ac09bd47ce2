//! Spatial throughput of bipolar Poisson wireless networks.
//!
//! Transmitters form a homogeneous Poisson point process of density λ, each
//! paired with a receiver at distance `d`; signals decay as `x^-alpha`. The
//! crate evaluates, for receivers that either treat interference as noise
//! ([`DecodingRule::Ian`]) or jointly decode the interferers closer than their
//! own transmitter ([`DecodingRule::Opt`]):
//!
//! * the rate pdfs of the typical link under the closest-interferer
//!   approximation ([`ian`], [`opt`]);
//! * the cognitive spatial throughput `C = λ·E[R*]`, its bounds and
//!   asymptotes, and the throughput-maximizing density;
//! * the fixed-rate baseline `T` with optimized SIR thresholds
//!   ([`fixed_rate`]);
//! * Monte Carlo estimates on sampled realizations with full aggregate
//!   interference ([`sim`]);
//! * parameter sweeps and figure tables used by the `pppt` binary
//!   ([`experiments`]).
//!
//! Every rate is in bits/s/Hz and every throughput in bits/s/Hz/m².

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod fixed_rate;
pub mod ian;
pub mod model;
pub mod numerics;
pub mod opt;
pub mod sim;

pub use error::{Error, Result};
pub use model::{
    nearest_interferer_distance, pathloss_gain, sample_realization, DecodingRule, Kind, Method, NetworkConfig, Point,
    SpatialRealization, ThroughputValue,
};
