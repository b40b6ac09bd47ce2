//! C ABI over `pppt-core`.
//!
//! Every function returns a [`PpptStatus`] and writes results through out
//! pointers. On failure a description is available from
//! [`pppt_last_error_message`] on the calling thread. Networks and sampled
//! realizations are opaque handles released with their `_free` functions.
//!
//! Rules, methods and modes are passed as the `PPPT_*` integer constants.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pppt_core::fixed_rate::highest_throughput;
use pppt_core::ian::{self, IanRateDistribution};
use pppt_core::opt::{self, OptRateDistribution};
use pppt_core::sim::{self, InterferenceMode, RateMode, SimOptions};
use pppt_core::{DecodingRule, Error, NetworkConfig, SpatialRealization};

pub const PPPT_RULE_IAN: u32 = 0;
pub const PPPT_RULE_OPT: u32 = 1;

pub const PPPT_METHOD_COGNITIVE: u32 = 0;
pub const PPPT_METHOD_FIXED_RATE: u32 = 1;

pub const PPPT_INTERFERENCE_FULL: u32 = 0;
pub const PPPT_INTERFERENCE_CLOSEST_ONLY: u32 = 1;

pub const PPPT_RATE_MODE_EXACT_POWERS: u32 = 0;
pub const PPPT_RATE_MODE_LOWER_BOUND_POWERS: u32 = 1;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PpptStatus {
    Ok = 0,
    /// Null pointer or unknown enumeration constant.
    InvalidArgument = 1,
    Config = 2,
    Domain = 3,
    Quadrature = 4,
    Bracket = 5,
    EmptyWindow = 6,
    Numerical = 7,
    /// Output buffer too small.
    BufferTooSmall = 8,
    Panic = 9,
}

/// Network parameters.
pub struct PpptNetwork {
    cfg: NetworkConfig,
}

/// One sampled realization.
pub struct PpptRealization {
    real: SpatialRealization,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PpptStatus {
    match e {
        Error::Config(_) => PpptStatus::Config,
        Error::Domain(_) => PpptStatus::Domain,
        Error::Quadrature { .. } => PpptStatus::Quadrature,
        Error::Bracket { .. } => PpptStatus::Bracket,
        Error::EmptyWindow => PpptStatus::EmptyWindow,
        Error::Numerical(_) => PpptStatus::Numerical,
    }
}

enum Fail {
    Core(Error),
    Arg(&'static str),
    Buffer(usize),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn guard<F>(body: F) -> PpptStatus
where
    F: FnOnce() -> Result<(), Fail>,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PpptStatus::Ok,
        Ok(Err(Fail::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Arg(what))) => {
            set_error(format!("invalid argument: {what}"));
            PpptStatus::InvalidArgument
        }
        Ok(Err(Fail::Buffer(need))) => {
            set_error(format!("buffer too small: {need} values required"));
            PpptStatus::BufferTooSmall
        }
        Err(_) => {
            set_error("internal panic".into());
            PpptStatus::Panic
        }
    }
}

unsafe fn net<'a>(p: *const PpptNetwork) -> Result<&'a NetworkConfig, Fail> {
    p.as_ref().map(|n| &n.cfg).ok_or(Fail::Arg("null network"))
}

unsafe fn out<'a>(p: *mut f64) -> Result<&'a mut f64, Fail> {
    p.as_mut().ok_or(Fail::Arg("null output pointer"))
}

fn rule(r: u32) -> Result<DecodingRule, Fail> {
    match r {
        PPPT_RULE_IAN => Ok(DecodingRule::Ian),
        PPPT_RULE_OPT => Ok(DecodingRule::Opt),
        _ => Err(Fail::Arg("unknown rule")),
    }
}

fn interference(m: u32) -> Result<InterferenceMode, Fail> {
    match m {
        PPPT_INTERFERENCE_FULL => Ok(InterferenceMode::Full),
        PPPT_INTERFERENCE_CLOSEST_ONLY => Ok(InterferenceMode::ClosestOnly),
        _ => Err(Fail::Arg("unknown interference mode")),
    }
}

fn rate_mode(m: u32) -> Result<RateMode, Fail> {
    match m {
        PPPT_RATE_MODE_EXACT_POWERS => Ok(RateMode::ExactPowers),
        PPPT_RATE_MODE_LOWER_BOUND_POWERS => Ok(RateMode::LowerBoundPowers),
        _ => Err(Fail::Arg("unknown rate mode")),
    }
}

/// Message describing the last failure on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pppt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pppt_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}

#[no_mangle]
pub unsafe extern "C" fn pppt_network_new(
    lambda: f64,
    d: f64,
    alpha: f64,
    out_net: *mut *mut PpptNetwork,
) -> PpptStatus {
    guard(|| {
        let slot = out_net.as_mut().ok_or(Fail::Arg("null output pointer"))?;
        let cfg = NetworkConfig::new(lambda, d, alpha)?;
        *slot = Box::into_raw(Box::new(PpptNetwork { cfg }));
        Ok(())
    })
}

/// Releases a network; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pppt_network_free(net: *mut PpptNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Mean number of interferers inside the link disc, `λπd²`.
#[no_mangle]
pub unsafe extern "C" fn pppt_network_link_disc_mean(network: *const PpptNetwork, value: *mut f64) -> PpptStatus {
    guard(|| {
        *out(value)? = net(network)?.link_disc_mean();
        Ok(())
    })
}

/// IAN rate density at `x`.
#[no_mangle]
pub unsafe extern "C" fn pppt_ian_pdf_rate(network: *const PpptNetwork, x: f64, value: *mut f64) -> PpptStatus {
    guard(|| {
        *out(value)? = IanRateDistribution::new(*net(network)?).pdf_rate(x);
        Ok(())
    })
}

/// IAN SIR density at `x`.
#[no_mangle]
pub unsafe extern "C" fn pppt_ian_pdf_beta(network: *const PpptNetwork, x: f64, value: *mut f64) -> PpptStatus {
    guard(|| {
        *out(value)? = IanRateDistribution::new(*net(network)?).pdf_beta(x);
        Ok(())
    })
}

/// Density of the distance to the closest interferer at `x`.
#[no_mangle]
pub unsafe extern "C" fn pppt_pdf_nearest_distance(network: *const PpptNetwork, x: f64, value: *mut f64) -> PpptStatus {
    guard(|| {
        *out(value)? = IanRateDistribution::new(*net(network)?).pdf_nearest_distance(x);
        Ok(())
    })
}

/// OPT rate density at `x` given `n` jointly decoded interferers.
#[no_mangle]
pub unsafe extern "C" fn pppt_opt_pdf_rate_conditional(
    network: *const PpptNetwork,
    n: usize,
    x: f64,
    value: *mut f64,
) -> PpptStatus {
    guard(|| {
        *out(value)? = OptRateDistribution::new(*net(network)?).pdf_rate_conditional(n, x);
        Ok(())
    })
}

/// Unconditional OPT rate density at `x`.
#[no_mangle]
pub unsafe extern "C" fn pppt_opt_pdf_rate(network: *const PpptNetwork, x: f64, value: *mut f64) -> PpptStatus {
    guard(|| {
        *out(value)? = OptRateDistribution::new(*net(network)?).pdf_rate(x)?;
        Ok(())
    })
}

/// Cognitive spatial throughput.
#[no_mangle]
pub unsafe extern "C" fn pppt_cognitive_throughput(
    network: *const PpptNetwork,
    rule_id: u32,
    value: *mut f64,
) -> PpptStatus {
    guard(|| {
        let cfg = net(network)?;
        let v = match rule(rule_id)? {
            DecodingRule::Ian => ian::cognitive_throughput(cfg)?,
            DecodingRule::Opt => opt::cognitive_throughput(cfg)?,
        };
        *out(value)? = v.value;
        Ok(())
    })
}

/// Lower bound on the cognitive throughput. IAN uses rate `y`; OPT uses
/// `y·log₂(2+i)/(1+i)` for `i` decoded interferers, so `y > 1` is required.
#[no_mangle]
pub unsafe extern "C" fn pppt_lower_bound(
    network: *const PpptNetwork,
    rule_id: u32,
    y: f64,
    value: *mut f64,
) -> PpptStatus {
    guard(|| {
        let cfg = net(network)?;
        let v = match rule(rule_id)? {
            DecodingRule::Ian => ian::lower_bound(cfg, y)?,
            DecodingRule::Opt => opt::lower_bound(cfg, |i| y * opt::support_edge(i))?,
        };
        *out(value)? = v.value;
        Ok(())
    })
}

/// Upper bound on the cognitive throughput.
#[no_mangle]
pub unsafe extern "C" fn pppt_upper_bound(network: *const PpptNetwork, rule_id: u32, value: *mut f64) -> PpptStatus {
    guard(|| {
        let cfg = net(network)?;
        let v = match rule(rule_id)? {
            DecodingRule::Ian => ian::upper_bound(cfg)?,
            DecodingRule::Opt => opt::upper_bound(cfg)?,
        };
        *out(value)? = v.value;
        Ok(())
    })
}

/// High-density asymptote of the IAN cognitive throughput.
#[no_mangle]
pub unsafe extern "C" fn pppt_ian_asymptote(network: *const PpptNetwork, value: *mut f64) -> PpptStatus {
    guard(|| {
        *out(value)? = ian::asymptote(net(network)?)?.value;
        Ok(())
    })
}

/// Density maximizing the IAN cognitive throughput and the maximum.
#[no_mangle]
pub unsafe extern "C" fn pppt_optimal_density(
    d: f64,
    alpha: f64,
    lambda: *mut f64,
    throughput: *mut f64,
) -> PpptStatus {
    guard(|| {
        let (l, t) = (out(lambda)?, out(throughput)?);
        let o = ian::optimal_density(d, alpha)?;
        *l = o.lambda;
        *t = o.throughput.value;
        Ok(())
    })
}

/// Highest fixed-rate spatial throughput.
#[no_mangle]
pub unsafe extern "C" fn pppt_fixed_rate_throughput(
    network: *const PpptNetwork,
    rule_id: u32,
    value: *mut f64,
) -> PpptStatus {
    guard(|| {
        let cfg = net(network)?;
        *out(value)? = highest_throughput(cfg, rule(rule_id)?)?.throughput.value;
        Ok(())
    })
}

/// Optimal fixed SIR thresholds, one per decoding state starting at
/// `*first_state`. `*len` receives the count; pass `capacity = 0` to query it.
#[no_mangle]
pub unsafe extern "C" fn pppt_fixed_rate_thresholds(
    network: *const PpptNetwork,
    rule_id: u32,
    betas: *mut f64,
    capacity: usize,
    first_state: *mut usize,
    len: *mut usize,
) -> PpptStatus {
    guard(|| {
        let sol = highest_throughput(net(network)?, rule(rule_id)?)?;
        let first = first_state.as_mut().ok_or(Fail::Arg("null output pointer"))?;
        let count = len.as_mut().ok_or(Fail::Arg("null output pointer"))?;
        *first = sol.thresholds[0].joint;
        *count = sol.thresholds.len();
        if capacity == 0 {
            return Ok(());
        }
        if capacity < sol.thresholds.len() {
            return Err(Fail::Buffer(sol.thresholds.len()));
        }
        if betas.is_null() {
            return Err(Fail::Arg("null buffer"));
        }
        for (k, t) in sol.thresholds.iter().enumerate() {
            *betas.add(k) = t.beta;
        }
        Ok(())
    })
}

/// Monte Carlo estimate of the cognitive (`PPPT_METHOD_COGNITIVE`) or
/// optimal fixed-rate (`PPPT_METHOD_FIXED_RATE`) throughput.
#[no_mangle]
pub unsafe extern "C" fn pppt_simulate(
    network: *const PpptNetwork,
    rule_id: u32,
    method: u32,
    interference_mode: u32,
    rate_mode_id: u32,
    realizations: usize,
    seed: u64,
    mean: *mut f64,
    stderr: *mut f64,
) -> PpptStatus {
    guard(|| {
        let cfg = net(network)?;
        let (m, s) = (out(mean)?, out(stderr)?);
        let r = rule(rule_id)?;
        let opts = SimOptions {
            interference: interference(interference_mode)?,
            rate_mode: rate_mode(rate_mode_id)?,
            window_radius: None,
        };
        let est = match method {
            PPPT_METHOD_COGNITIVE => sim::estimate_cognitive(cfg, r, &opts, realizations, seed)?,
            PPPT_METHOD_FIXED_RATE => {
                sim::estimate_fixed_rate(&highest_throughput(cfg, r)?, &opts, realizations, seed)?
            }
            _ => return Err(Fail::Arg("unknown method")),
        };
        *m = est.mean;
        *s = est.stderr;
        Ok(())
    })
}

/// Samples interferers uniformly in a disc of radius `window_radius`
/// around the typical receiver.
#[no_mangle]
pub unsafe extern "C" fn pppt_realization_sample(
    network: *const PpptNetwork,
    window_radius: f64,
    seed: u64,
    out_real: *mut *mut PpptRealization,
) -> PpptStatus {
    guard(|| {
        let slot = out_real.as_mut().ok_or(Fail::Arg("null output pointer"))?;
        let real = pppt_core::sample_realization(net(network)?, window_radius, seed)?;
        *slot = Box::into_raw(Box::new(PpptRealization { real }));
        Ok(())
    })
}

/// Releases a realization; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pppt_realization_free(real: *mut PpptRealization) {
    if !real.is_null() {
        drop(Box::from_raw(real));
    }
}

unsafe fn realization<'a>(p: *const PpptRealization) -> Result<&'a SpatialRealization, Fail> {
    p.as_ref().map(|r| &r.real).ok_or(Fail::Arg("null realization"))
}

/// Number of interferers.
#[no_mangle]
pub unsafe extern "C" fn pppt_realization_len(real: *const PpptRealization, len: *mut usize) -> PpptStatus {
    guard(|| {
        let n = realization(real)?.interferers.len();
        *len.as_mut().ok_or(Fail::Arg("null output pointer"))? = n;
        Ok(())
    })
}

/// Copies interferer coordinates as `x0, y0, x1, y1, ...` into `xy`, which
/// must hold `2·len` values.
#[no_mangle]
pub unsafe extern "C" fn pppt_realization_interferers(
    real: *const PpptRealization,
    xy: *mut f64,
    capacity: usize,
) -> PpptStatus {
    guard(|| {
        let r = realization(real)?;
        let need = 2 * r.interferers.len();
        if capacity < need {
            return Err(Fail::Buffer(need));
        }
        if need > 0 && xy.is_null() {
            return Err(Fail::Arg("null buffer"));
        }
        for (k, p) in r.interferers.iter().enumerate() {
            *xy.add(2 * k) = p.x;
            *xy.add(2 * k + 1) = p.y;
        }
        Ok(())
    })
}

/// Distance from the typical receiver to its closest interferer.
#[no_mangle]
pub unsafe extern "C" fn pppt_realization_nearest_distance(
    real: *const PpptRealization,
    value: *mut f64,
) -> PpptStatus {
    guard(|| {
        *out(value)? = pppt_core::nearest_interferer_distance(realization(real)?)?;
        Ok(())
    })
}

/// Best rate of the typical link in the realization.
#[no_mangle]
pub unsafe extern "C" fn pppt_realization_rate(
    real: *const PpptRealization,
    rule_id: u32,
    interference_mode: u32,
    rate_mode_id: u32,
    value: *mut f64,
) -> PpptStatus {
    guard(|| {
        let r = realization(real)?;
        let mode = interference(interference_mode)?;
        let v = match rule(rule_id)? {
            DecodingRule::Ian => sim::rate_ian(r, mode),
            DecodingRule::Opt => sim::rate_opt(r, mode, rate_mode(rate_mode_id)?),
        };
        *out(value)? = v;
        Ok(())
    })
}
