//! Reference values from independent formulations.
//!
//! Throughputs below were computed at 20 significant digits with mpmath
//! from the tail form `E[R] = ∫ P(R > x) dx` (for OPT, per decoding state),
//! which shares no code or algebra with the library's substituted integrals.

use std::f64::consts::{LN_2, PI};

use approx::assert_relative_eq;
use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, DiscreteCDF, Poisson};
use statrs::function::gamma as sgamma;

use pppt_core::fixed_rate::highest_throughput;
use pppt_core::model::sample_realization_stream;
use pppt_core::numerics::special::{gamma, upper_incomplete_gamma};
use pppt_core::numerics::{integrate, poisson_weight, QuadratureSpec, SeriesTruncation};
use pppt_core::opt::support_edge;
use pppt_core::{ian, opt, DecodingRule, NetworkConfig};

const THROUGHPUTS: [(f64, f64, f64, f64, f64); 6] = [
    // (λ, d, α, C_IAN, C_OPT)
    (0.01, 1.0, 4.0, 0.08455352021385354, 0.08592913885374078),
    (1.0 / PI, 1.0, 4.0, 0.3153748667714467, 0.5218436965632379),
    (1.0, 1.0, 4.0, 0.2125606627640448, 0.7813167321292386),
    (10.0, 1.0, 4.0, 0.02906084401697021, 1.617944680955927),
    (0.5, 1.0, 3.0, 0.2914206249899648, 0.5476408273385758),
    (2.0, 0.5, 6.0, 1.241363852722086, 2.999929098881182),
];

fn cfg(lambda: f64, d: f64, alpha: f64) -> NetworkConfig {
    NetworkConfig::new(lambda, d, alpha).unwrap()
}

#[test]
fn cognitive_throughputs_match_reference() {
    for (lambda, d, alpha, c_ian, c_opt) in THROUGHPUTS {
        let c = cfg(lambda, d, alpha);
        assert_relative_eq!(ian::cognitive_throughput(&c).unwrap().value, c_ian, max_relative = 1e-9);
        assert_relative_eq!(opt::cognitive_throughput(&c).unwrap().value, c_opt, max_relative = 1e-9);
    }
}

#[test]
fn unit_density_bounds_and_fixed_rate() {
    let c = cfg(1.0 / PI, 1.0, 4.0);
    assert_relative_eq!(ian::upper_bound(&c).unwrap().value, 3f64.log2() / PI, max_relative = 1e-14);
    assert_relative_eq!(opt::upper_bound(&c).unwrap().value, 0.6102748428, max_relative = 1e-9);
    let t = highest_throughput(&c, DecodingRule::Ian).unwrap();
    assert_relative_eq!(t.thresholds[0].beta, 1.6386493020309, max_relative = 1e-10);
    assert_relative_eq!(t.throughput.value, 0.1238730324588447, max_relative = 1e-10);
}

#[test]
fn optimal_density_reference() {
    let o = ian::optimal_density(1.0, 4.0).unwrap();
    assert_relative_eq!(o.lambda, 0.2452533841, max_relative = 1e-8);
    assert_relative_eq!(o.lambda * PI, 0.7704862297, max_relative = 1e-8);
    assert_relative_eq!(o.throughput.value, 0.3195667699, max_relative = 1e-8);
}

#[test]
fn asymptote_constant_reference() {
    // (π)^{-2}·Γ(3)/ln 2
    assert_relative_eq!(ian::asymptote_constant(1.0, 4.0), 2.0 / (PI * PI * LN_2), max_relative = 1e-14);
}

/// Fixed-rate OPT throughput by brute force: every decoding state maximized
/// on a fine threshold grid.
#[test]
fn opt_fixed_rate_against_grid_search() {
    for lambda in [0.05, 1.0 / PI, 2.0] {
        let c = cfg(lambda, 1.0, 4.0);
        let mu = c.link_disc_mean();
        let support = SeriesTruncation::default().support(mu).unwrap();
        let mut total = 0.0;
        for (i, w) in support.iter() {
            let k = 1.0 + i as f64;
            let best = (0..200_000)
                .map(|j| 1.0 + j as f64 * 1e-4)
                .map(|b| (k * b).ln_1p() / LN_2 / k * (-mu * (b.sqrt() - 1.0)).exp())
                .fold(0.0, f64::max);
            total += w * best;
        }
        let t = highest_throughput(&c, DecodingRule::Opt).unwrap().throughput.value;
        // boundary thresholds sit 1e-9 above β = 1, which the grid hits exactly
        assert!(t >= lambda * total * (1.0 - 1e-8), "λ={lambda}: {t} < {}", lambda * total);
        assert_relative_eq!(t, lambda * total, max_relative = 1e-7);
    }
}

#[test]
fn special_functions_against_statrs() {
    for z in [0.3, 1.0, 1.5, 2.0, 3.0, 4.0, 7.5, 20.0] {
        assert_relative_eq!(gamma(z), sgamma::gamma(z), max_relative = 1e-12);
        for a in [0.01, 0.5, 1.0, 3.0, 10.0, 40.0] {
            let ours = upper_incomplete_gamma(z, a).unwrap();
            let theirs = sgamma::gamma_ur(z, a) * sgamma::gamma(z);
            assert_relative_eq!(ours, theirs, max_relative = 1e-9);
        }
    }
}

#[test]
fn poisson_weights_against_statrs() {
    for mean in [0.1, 1.0, 7.0, 150.0] {
        let p = Poisson::new(mean).unwrap();
        for i in [0u64, 1, 2, 5, 10, 100, 200] {
            let ours = poisson_weight(mean, i as usize);
            let theirs = p.pmf(i);
            if theirs > 1e-250 {
                assert_relative_eq!(ours, theirs, max_relative = 1e-10);
            }
        }
    }
}

#[test]
fn truncated_sir_mean_by_quadrature() {
    let spec = QuadratureSpec::default().with_rel_tol(1e-11);
    for (lambda, alpha) in [(0.05, 3.0), (0.4, 4.0), (3.0, 5.0)] {
        let c = cfg(lambda, 1.0, alpha);
        let mu = c.link_disc_mean();
        // survival form: E[β] = 1 + ∫₁^∞ P(β > x) dx
        let direct =
            1.0 + integrate(|x: f64| (-mu * (x.powf(2.0 / alpha) - 1.0)).exp(), 1.0, f64::INFINITY, &spec).unwrap();
        let m = opt::OptRateDistribution::new(c).mean_truncated_sir().unwrap();
        assert_relative_eq!(m, direct, max_relative = 1e-8);
    }
}

#[test]
fn opt_lower_bound_is_markov_on_the_tail() {
    // P(R ≥ y | i) from the tail of the conditional density
    let c = cfg(0.7, 1.0, 4.0);
    let dist = opt::OptRateDistribution::new(c);
    let spec = QuadratureSpec::default().with_rel_tol(1e-11);
    let support = dist.support().unwrap();
    let mut expected = 0.0;
    for (i, w) in support.iter() {
        let y = 2.0 * support_edge(i);
        let tail = integrate(|x| dist.pdf_rate_conditional(i, x), y, f64::INFINITY, &spec).unwrap();
        expected += w * y * tail;
    }
    let lb = opt::lower_bound(&c, |i| 2.0 * support_edge(i)).unwrap().value;
    assert_relative_eq!(lb, 0.7 * expected, max_relative = 1e-8);
}

/// Interferer counts in the sampling window follow Poisson(λπR²).
#[test]
fn interferer_counts_are_poisson() {
    let c = cfg(0.2, 1.0, 4.0);
    let window = 10.0;
    let mean = 0.2 * PI * window * window;
    let n = 20_000u64;
    let counts: Vec<usize> =
        (0..n).map(|k| sample_realization_stream(&c, window, 3, k).unwrap().interferers.len()).collect();

    let law = Poisson::new(mean).unwrap();
    let (lo, hi) = ((mean - 3.0 * mean.sqrt()) as u64, (mean + 3.0 * mean.sqrt()) as u64);
    let mut observed = vec![0.0; (hi - lo + 3) as usize];
    for &k in &counts {
        let k = k as u64;
        let bin = if k < lo {
            0
        } else if k > hi {
            observed.len() - 1
        } else {
            (k - lo + 1) as usize
        };
        observed[bin] += 1.0;
    }
    let mut expected = vec![0.0; observed.len()];
    expected[0] = law.cdf(lo - 1);
    for k in lo..=hi {
        expected[(k - lo + 1) as usize] = law.pmf(k);
    }
    let last = expected.len() - 1;
    expected[last] = 1.0 - law.cdf(hi);
    let chi2: f64 = observed
        .iter()
        .zip(&expected)
        .map(|(o, p)| {
            let e = p * n as f64;
            (o - e) * (o - e) / e
        })
        .sum();
    let dof = (observed.len() - 1) as f64;
    let p_value = 1.0 - ChiSquared::new(dof).unwrap().cdf(chi2);
    assert!(p_value > 1e-3, "chi2 = {chi2} on {dof} dof, p = {p_value}");
}

/// Uniform placement: the fraction of interferers within radius r of the
/// origin is r²/R².
#[test]
fn interferers_are_uniform_in_the_window() {
    let c = cfg(1.0, 1.0, 4.0);
    let real = sample_realization_stream(&c, 40.0, 5, 0).unwrap();
    let n = real.interferers.len() as f64;
    for r in [10.0, 20.0, 30.0] {
        let inside = real.interferers.iter().filter(|p| p.norm() < r).count() as f64;
        let p = (r / 40.0f64).powi(2);
        let sd = (n * p * (1.0 - p)).sqrt();
        assert!((inside - n * p).abs() < 4.0 * sd, "r={r}: {inside} vs {}", n * p);
    }
}
