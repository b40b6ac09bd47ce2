use std::f64::consts::PI;

use proptest::prelude::*;

use pppt_core::fixed_rate::{compare_c_vs_t, highest_throughput};
use pppt_core::model::{Point, SpatialRealization};
use pppt_core::opt::support_edge;
use pppt_core::sim::{rate_ian, rate_opt, InterferenceMode, RateMode};
use pppt_core::{ian, opt, DecodingRule, NetworkConfig};

fn scene(d: f64, alpha: f64, points: Vec<Point>) -> SpatialRealization {
    SpatialRealization {
        cfg: NetworkConfig::new(1.0, d, alpha).unwrap(),
        typical_rx: Point::ORIGIN,
        typical_tx: Point { x: d, y: 0.0 },
        interferers: points,
        window_radius: 1e3,
        seed: 0,
        stream: 0,
    }
}

fn point() -> impl Strategy<Value = Point> {
    (0.05f64..20.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| Point { x: r * t.cos(), y: r * t.sin() })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bounds_enclose_cognitive_throughput(
        lambda in 1e-3f64..30.0,
        d in 0.2f64..5.0,
        alpha in 2.2f64..8.0,
        y in 0.05f64..6.0,
        scale in 1.01f64..4.0,
    ) {
        let c = NetworkConfig::new(lambda, d, alpha).unwrap();
        let ci = ian::cognitive_throughput(&c).unwrap().value;
        prop_assert!(ian::lower_bound(&c, y).unwrap().value <= ci + 1e-9);
        prop_assert!(ci <= ian::upper_bound(&c).unwrap().value + 1e-9);
        let co = opt::cognitive_throughput(&c).unwrap().value;
        prop_assert!(opt::lower_bound(&c, |i| scale * support_edge(i)).unwrap().value <= co + 1e-9);
        prop_assert!(co <= opt::upper_bound(&c).unwrap().value + 1e-9);
        prop_assert!(co >= ci - 1e-9);
    }

    #[test]
    fn fixed_rate_never_exceeds_cognitive(lambda in 1e-3f64..20.0, alpha in 2.2f64..7.0) {
        let c = NetworkConfig::new(lambda, 1.0, alpha).unwrap();
        let cmp = compare_c_vs_t(&c).unwrap();
        prop_assert!(cmp.gap_ian >= -1e-9 && cmp.gap_opt >= -1e-9);
    }

    #[test]
    fn throughput_depends_on_density_and_distance_through_link_disc_mean(
        mu in 0.01f64..20.0,
        d in 0.2f64..5.0,
        alpha in 2.5f64..6.0,
    ) {
        // C(λ, d)/λ is a function of λπd² only
        let a = NetworkConfig::new(mu / PI, 1.0, alpha).unwrap();
        let b = NetworkConfig::new(mu / (PI * d * d), d, alpha).unwrap();
        for rule in [DecodingRule::Ian, DecodingRule::Opt] {
            let (ta, tb) = match rule {
                DecodingRule::Ian => (ian::cognitive_throughput(&a), ian::cognitive_throughput(&b)),
                DecodingRule::Opt => (opt::cognitive_throughput(&a), opt::cognitive_throughput(&b)),
            };
            let ra = ta.unwrap().value / a.lambda();
            let rb = tb.unwrap().value / b.lambda();
            prop_assert!((ra / rb - 1.0).abs() < 1e-8, "{rule}: {ra} vs {rb}");
            let fa = highest_throughput(&a, rule).unwrap().throughput.value / a.lambda();
            let fb = highest_throughput(&b, rule).unwrap().throughput.value / b.lambda();
            prop_assert!((fa / fb - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn aggregate_interference_never_raises_the_rate(
        d in 0.3f64..3.0,
        alpha in 2.5f64..6.0,
        points in prop::collection::vec(point(), 1..40),
    ) {
        let real = scene(d, alpha, points);
        prop_assert!(rate_ian(&real, InterferenceMode::Full) <= rate_ian(&real, InterferenceMode::ClosestOnly));
        for mode in [InterferenceMode::Full, InterferenceMode::ClosestOnly] {
            prop_assert!(
                rate_opt(&real, mode, RateMode::LowerBoundPowers) <= rate_opt(&real, mode, RateMode::ExactPowers) + 1e-12
            );
        }
        prop_assert!(
            rate_opt(&real, InterferenceMode::Full, RateMode::ExactPowers)
                <= rate_opt(&real, InterferenceMode::ClosestOnly, RateMode::ExactPowers) + 1e-12
        );
    }

    #[test]
    fn adding_an_interferer_never_raises_the_rate(
        d in 0.3f64..3.0,
        alpha in 2.5f64..6.0,
        points in prop::collection::vec(point(), 0..30),
        extra in point(),
    ) {
        let before = scene(d, alpha, points.clone());
        let mut more = points;
        more.push(extra);
        let after = scene(d, alpha, more);
        prop_assert!(rate_ian(&after, InterferenceMode::Full) <= rate_ian(&before, InterferenceMode::Full));
        prop_assert!(
            rate_opt(&after, InterferenceMode::Full, RateMode::LowerBoundPowers)
                <= rate_opt(&before, InterferenceMode::Full, RateMode::LowerBoundPowers) + 1e-12
        );
        // with exact powers a strong decoded interferer adds to the sum rate,
        // so only noise-set additions are monotone
        if extra.norm() >= d {
            prop_assert!(
                rate_opt(&after, InterferenceMode::Full, RateMode::ExactPowers)
                    <= rate_opt(&before, InterferenceMode::Full, RateMode::ExactPowers)
            );
        }
    }
}

#[test]
fn exact_power_rate_can_grow_with_a_decoded_interferer() {
    // d = 1, α = 4: far interferer at 1 gives R = log₂2 = 1; a decoded one at
    // 0.1 raises the sum rate to log₂(1 + 10001)/2 ≈ 6.6
    let one = scene(1.0, 4.0, vec![Point { x: 0.0, y: 1.0 }]);
    let two = scene(1.0, 4.0, vec![Point { x: 0.0, y: 1.0 }, Point { x: 0.1, y: 0.0 }]);
    let a = rate_opt(&one, InterferenceMode::Full, RateMode::ExactPowers);
    let b = rate_opt(&two, InterferenceMode::Full, RateMode::ExactPowers);
    assert!((a - 1.0).abs() < 1e-12);
    assert!(b > a);
}

#[test]
fn optimal_density_scales_inversely_with_link_area() {
    let base = ian::optimal_density(1.0, 4.0).unwrap().lambda;
    for d in [0.5, 2.0, 3.0] {
        let l = ian::optimal_density(d, 4.0).unwrap().lambda;
        assert!((l * d * d / base - 1.0).abs() < 1e-8, "d={d}");
    }
    for alpha in [3.0, 5.0, 6.0] {
        let o = ian::optimal_density(1.0, alpha).unwrap();
        assert!(((o.golden_section_lambda - o.lambda) / o.lambda).abs() < 1e-3);
    }
}
