//! Parameter sweeps and figure data behind the command-line tool.
//!
//! Every table carries a single `#`-prefixed metadata line with the schema
//! version and the parameters that produced it, then a header row. Column
//! names are `<method>_<rule>_<kind>`, e.g. `cognitive_opt_upper_bound` or
//! `fixed_rate_ian_quadrature`; simulated columns come with a matching
//! `_stderr` column.

use std::fmt::Write as _;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixed_rate::highest_throughput;
use crate::ian::{self, IanRateDistribution};
use crate::model::{DecodingRule, NetworkConfig};
use crate::opt;
use crate::opt::OptRateDistribution;
use crate::sim::{estimate_cognitive, tightness_report, SimOptions, TightnessRow};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMethod {
    Cognitive,
    Fixed,
    Bounds,
    Simulate,
}

impl SweepMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepMethod::Cognitive => "cognitive",
            SweepMethod::Fixed => "fixed",
            SweepMethod::Bounds => "bounds",
            SweepMethod::Simulate => "simulate",
        }
    }
}

impl std::str::FromStr for SweepMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cognitive" => Ok(SweepMethod::Cognitive),
            "fixed" | "fixed_rate" | "fixed-rate" => Ok(SweepMethod::Fixed),
            "bounds" => Ok(SweepMethod::Bounds),
            "simulate" => Ok(SweepMethod::Simulate),
            other => Err(Error::Config(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub points: usize,
    pub scale: Scale,
    pub d: f64,
    pub alpha: f64,
    pub rules: Vec<DecodingRule>,
    pub methods: Vec<SweepMethod>,
    pub realizations: usize,
    pub seed: u64,
    pub sim: SimOptions,
    /// Rate of the IAN lower bound.
    pub y_ian: f64,
    /// OPT lower-bound rate for `i = 0`; state `i` uses `y_opt·log₂(2+i)/(1+i)`,
    /// which keeps every rate inside its support.
    pub y_opt: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            lambda_min: 1e-2,
            lambda_max: 10.0,
            points: 30,
            scale: Scale::Log,
            d: 1.0,
            alpha: 4.0,
            rules: vec![DecodingRule::Ian, DecodingRule::Opt],
            methods: vec![SweepMethod::Cognitive],
            realizations: 10_000,
            seed: 0,
            sim: SimOptions::default(),
            y_ian: 1.0,
            y_opt: 2.0,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_min > 0.0 && self.lambda_min < self.lambda_max && self.lambda_max.is_finite()) {
            return Err(Error::Config(format!(
                "need 0 < lambda_min < lambda_max, got [{}, {}]",
                self.lambda_min, self.lambda_max
            )));
        }
        if self.points < 2 {
            return Err(Error::Config(format!("need at least 2 points, got {}", self.points)));
        }
        if self.rules.is_empty() || self.methods.is_empty() {
            return Err(Error::Config("at least one rule and one method are required".into()));
        }
        if self.methods.contains(&SweepMethod::Simulate) && self.realizations < crate::sim::MIN_REALIZATIONS {
            return Err(Error::Config(format!(
                "simulation needs at least {} realizations",
                crate::sim::MIN_REALIZATIONS
            )));
        }
        NetworkConfig::new(self.lambda_min, self.d, self.alpha)?;
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        grid(self.lambda_min, self.lambda_max, self.points, self.scale)
    }

    fn columns(&self) -> Vec<String> {
        let mut cols = vec!["lambda".to_string()];
        for &rule in &self.rules {
            let r = rule_tag(rule);
            for m in &self.methods {
                match m {
                    SweepMethod::Cognitive => cols.push(format!("cognitive_{r}_quadrature")),
                    SweepMethod::Fixed => cols.push(format!("fixed_rate_{r}_quadrature")),
                    SweepMethod::Bounds => {
                        cols.push(format!("cognitive_{r}_lower_bound"));
                        cols.push(format!("cognitive_{r}_upper_bound"));
                        if rule == DecodingRule::Ian {
                            cols.push("cognitive_ian_asymptote".into());
                        }
                    }
                    SweepMethod::Simulate => {
                        cols.push(format!("cognitive_{r}_simulated"));
                        cols.push(format!("cognitive_{r}_simulated_stderr"));
                    }
                }
            }
        }
        cols
    }

    fn meta(&self, command: &str) -> String {
        let join = |v: Vec<&str>| v.join(",");
        format!(
            "pppt schema={SCHEMA_VERSION} version={TOOL_VERSION} command={command} alpha={} d={} lambda_min={} \
             lambda_max={} points={} scale={} rules={} methods={} realizations={} seed={} mode={} rate_mode={} \
             y_ian={} y_opt={}",
            self.alpha,
            self.d,
            self.lambda_min,
            self.lambda_max,
            self.points,
            match self.scale {
                Scale::Log => "log",
                Scale::Linear => "linear",
            },
            join(self.rules.iter().map(|r| rule_tag(*r)).collect()),
            join(self.methods.iter().map(|m| m.as_str()).collect()),
            self.realizations,
            self.seed,
            self.sim.interference,
            self.sim.rate_mode,
            self.y_ian,
            self.y_opt,
        )
    }
}

fn rule_tag(rule: DecodingRule) -> &'static str {
    match rule {
        DecodingRule::Ian => "ian",
        DecodingRule::Opt => "opt",
    }
}

/// `points` densities from `lo` to `hi` inclusive.
pub fn grid(lo: f64, hi: f64, points: usize, scale: Scale) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let last = (points - 1) as f64;
    (0..points)
        .map(|k| {
            let f = k as f64 / last;
            if k == 0 {
                lo
            } else if k == points - 1 {
                hi
            } else {
                match scale {
                    Scale::Log => (lo.ln() + f * (hi.ln() - lo.ln())).exp(),
                    Scale::Linear => lo + f * (hi - lo),
                }
            }
        })
        .collect()
}

/// A computed table. Failed cells hold NaN and leave a warning.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub meta: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn is_complete(&self) -> bool {
        self.warnings.is_empty()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# {}", self.meta)?;
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        for row in &self.rows {
            out.write_record(row.iter().map(|v| format_cell(*v)))?;
        }
        out.flush()
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        #[derive(Serialize)]
        struct Json<'a> {
            meta: &'a str,
            columns: &'a [String],
            rows: Vec<Vec<Option<f64>>>,
        }
        let rows = self.rows.iter().map(|r| r.iter().map(|v| v.is_finite().then_some(*v)).collect()).collect();
        serde_json::to_writer_pretty(&mut w, &Json { meta: &self.meta, columns: &self.columns, rows })?;
        writeln!(w)
    }
}

fn format_cell(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else {
        // shortest round-trip representation
        format!("{v:e}")
    }
}

fn cells_for(spec: &SweepSpec, lambda: f64) -> (Vec<f64>, Vec<String>) {
    let mut row = vec![lambda];
    let mut warnings = Vec::new();
    let cfg = NetworkConfig::new(lambda, spec.d, spec.alpha);
    let push = |name: String, v: Result<f64>, row: &mut Vec<f64>, warnings: &mut Vec<String>| match v {
        Ok(x) => row.push(x),
        Err(e) => {
            warnings.push(format!("lambda={lambda:e} {name}: {e}"));
            row.push(f64::NAN);
        }
    };
    for &rule in &spec.rules {
        let r = rule_tag(rule);
        for m in &spec.methods {
            let cfg = cfg.clone();
            match m {
                SweepMethod::Cognitive => {
                    let v = cfg.and_then(|c| match rule {
                        DecodingRule::Ian => ian::cognitive_throughput(&c),
                        DecodingRule::Opt => opt::cognitive_throughput(&c),
                    });
                    push(format!("cognitive_{r}_quadrature"), v.map(|t| t.value), &mut row, &mut warnings);
                }
                SweepMethod::Fixed => {
                    let v = cfg.and_then(|c| highest_throughput(&c, rule));
                    push(format!("fixed_rate_{r}_quadrature"), v.map(|s| s.throughput.value), &mut row, &mut warnings);
                }
                SweepMethod::Bounds => {
                    let lower = cfg.clone().and_then(|c| match rule {
                        DecodingRule::Ian => ian::lower_bound(&c, spec.y_ian),
                        DecodingRule::Opt => opt::lower_bound(&c, |i| spec.y_opt * opt::support_edge(i)),
                    });
                    push(format!("cognitive_{r}_lower_bound"), lower.map(|t| t.value), &mut row, &mut warnings);
                    let upper = cfg.clone().and_then(|c| match rule {
                        DecodingRule::Ian => ian::upper_bound(&c),
                        DecodingRule::Opt => opt::upper_bound(&c),
                    });
                    push(format!("cognitive_{r}_upper_bound"), upper.map(|t| t.value), &mut row, &mut warnings);
                    if rule == DecodingRule::Ian {
                        let asym = cfg.and_then(|c| ian::asymptote(&c));
                        push("cognitive_ian_asymptote".into(), asym.map(|t| t.value), &mut row, &mut warnings);
                    }
                }
                SweepMethod::Simulate => {
                    let est = cfg.and_then(|c| estimate_cognitive(&c, rule, &spec.sim, spec.realizations, spec.seed));
                    match est {
                        Ok(e) => {
                            row.push(e.mean);
                            row.push(e.stderr);
                        }
                        Err(e) => {
                            warnings.push(format!("lambda={lambda:e} cognitive_{r}_simulated: {e}"));
                            row.push(f64::NAN);
                            row.push(f64::NAN);
                        }
                    }
                }
            }
        }
    }
    (row, warnings)
}

/// Evaluates every requested cell on the density grid.
pub fn run_sweep(spec: &SweepSpec) -> Result<Table> {
    run_sweep_named(spec, "sweep")
}

fn run_sweep_named(spec: &SweepSpec, command: &str) -> Result<Table> {
    spec.validate()?;
    let results: Vec<(Vec<f64>, Vec<String>)> = spec.grid().into_par_iter().map(|l| cells_for(spec, l)).collect();
    let mut rows = Vec::with_capacity(results.len());
    let mut warnings = Vec::new();
    for (row, w) in results {
        rows.push(row);
        warnings.extend(w);
    }
    Ok(Table { meta: spec.meta(command), columns: spec.columns(), rows, warnings })
}

pub const FIGURES: [u8; 5] = [2, 3, 4, 5, 6];

/// Pinned specification of a figure (`α = 4`, `d = 1`).
pub fn figure_spec(fig: u8) -> Result<SweepSpec> {
    let base = SweepSpec::default();
    let spec = match fig {
        2 => SweepSpec {
            rules: vec![DecodingRule::Ian],
            methods: vec![SweepMethod::Cognitive, SweepMethod::Bounds],
            y_ian: 1.0,
            ..base
        },
        3 => SweepSpec { methods: vec![SweepMethod::Cognitive], ..base },
        4 => SweepSpec {
            rules: vec![DecodingRule::Opt],
            methods: vec![SweepMethod::Cognitive, SweepMethod::Bounds],
            y_opt: 2.0,
            ..base
        },
        5 => SweepSpec { methods: vec![SweepMethod::Cognitive, SweepMethod::Fixed], ..base },
        6 => SweepSpec { points: 10, methods: vec![SweepMethod::Cognitive, SweepMethod::Simulate], ..base },
        other => return Err(Error::Config(format!("no figure {other}; choose from 2, 3, 4, 5, 6"))),
    };
    Ok(spec)
}

/// Data behind one figure. Figure 6 is the tightness study; `realizations`
/// and `seed` only affect it.
pub fn figure(fig: u8, realizations: usize, seed: u64) -> Result<Table> {
    let mut spec = figure_spec(fig)?;
    if fig != 6 {
        return run_sweep_named(&spec, &format!("figures fig={fig}"));
    }
    spec.realizations = realizations;
    spec.seed = seed;
    let rows = tightness_report(&spec.grid(), spec.d, spec.alpha, realizations, seed)?;
    let meta = format!(
        "pppt schema={SCHEMA_VERSION} version={TOOL_VERSION} command=figures fig=6 alpha={} d={} lambda_min={} \
         lambda_max={} points={} scale=log realizations={realizations} seed={seed} mode=full rate_mode=exact,lower",
        spec.alpha, spec.d, spec.lambda_min, spec.lambda_max, spec.points
    );
    Ok(tightness_table(meta, &rows))
}

pub fn tightness_table(meta: String, rows: &[TightnessRow]) -> Table {
    Table {
        meta,
        columns: TightnessRow::COLUMNS.iter().map(|c| c.to_string()).collect(),
        rows: rows.iter().map(|r| r.values().to_vec()).collect(),
        warnings: Vec::new(),
    }
}

/// Rate (or SIR) densities on a grid. OPT with `n` gives the conditional
/// rate density given `n` jointly decoded interferers.
pub fn pdf_table(cfg: &NetworkConfig, rule: DecodingRule, n: Option<usize>, xs: &[f64]) -> Result<Table> {
    let mut meta = format!(
        "pppt schema={SCHEMA_VERSION} version={TOOL_VERSION} command=pdf rule={} alpha={} d={} lambda={}",
        rule_tag(rule),
        cfg.alpha(),
        cfg.d(),
        cfg.lambda()
    );
    let rows: Vec<Vec<f64>> = match (rule, n) {
        (DecodingRule::Ian, None) => {
            let dist = IanRateDistribution::new(*cfg);
            xs.iter().map(|&x| vec![x, dist.pdf_rate(x)]).collect()
        }
        (DecodingRule::Ian, Some(_)) => {
            return Err(Error::Config("--n only applies to OPT".into()));
        }
        (DecodingRule::Opt, Some(n)) => {
            let _ = write!(meta, " n={n}");
            let dist = OptRateDistribution::new(*cfg);
            xs.iter().map(|&x| vec![x, dist.pdf_rate_conditional(n, x)]).collect()
        }
        (DecodingRule::Opt, None) => {
            let dist = OptRateDistribution::new(*cfg);
            let support = dist.support()?;
            xs.iter()
                .map(|&x| vec![x, support.iter().map(|(i, w)| w * dist.pdf_rate_conditional(i, x)).sum()])
                .collect()
        }
    };
    Ok(Table { meta, columns: vec!["x".into(), "density".into()], rows, warnings: Vec::new() })
}
