#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { rel_tol: 1e-8, abs_tol: 1e-12, max_subdivisions: 2000 }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Config("quadrature tolerances must be positive".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Config("max_subdivisions must be at least 1".into()));
        }
        Ok(())
    }
}

// 21-point Kronrod rule with its embedded 10-point Gauss rule (QUADPACK qk21).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_522_368_838,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    let mut eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::Numerical(format!("integrand is {y} at x = {x:e}")))
        }
    };

    let fc = eval(center)?;
    let mut res_g = 0.0;
    let mut res_k = WGK[10] * fc;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    #[allow(clippy::needless_range_loop)]
    for j in 0..5 {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_g += WG[j] * (f1 + f2);
        res_k += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    #[allow(clippy::needless_range_loop)]
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_k += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half;
    res_abs *= abs_half;
    res_asc *= abs_half;
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Segment { a, b, value, error })
}

fn adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    let first = kronrod21(&mut f, a, b)?;
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::with_capacity(spec.max_subdivisions + 1);
    heap.push(first);
    // segments too narrow to split further keep contributing their error
    let mut frozen_err = 0.0;

    let target = |v: f64| spec.abs_tol.max(spec.rel_tol * v.abs());

    let mut segments = 1;
    while total_err + frozen_err > target(total) {
        if segments >= spec.max_subdivisions {
            return Err(Error::Quadrature { estimate: total, error_bound: total_err + frozen_err });
        }
        let Some(worst) = heap.pop() else {
            return Err(Error::Quadrature { estimate: total, error_bound: frozen_err });
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) || (worst.b - worst.a) <= 4.0 * f64::EPSILON * mid.abs() {
            total_err -= worst.error;
            frozen_err += worst.error;
            if heap.is_empty() {
                return Err(Error::Quadrature { estimate: total, error_bound: frozen_err });
            }
            continue;
        }
        let left = kronrod21(&mut f, worst.a, mid)?;
        let right = kronrod21(&mut f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        segments += 1;

        // resynchronize the running sums now and then
        if segments % 64 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
    Ok(heap.iter().map(|s| s.value).sum())
}

/// Integrates `f` over `[a, b]`, where `b` may be `+∞`.
///
/// Finite ranges use globally adaptive 21-point Gauss–Kronrod bisection;
/// `[a, ∞)` is mapped onto `[0, 1)` by `x = a + t/(1 - t)`. Integrable
/// endpoint singularities are fine as long as `f` is finite at the
/// (interior) quadrature nodes.
pub fn integrate<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    spec.validate()?;
    if !a.is_finite() || b.is_nan() || !(a < b) {
        return Err(Error::Domain(format!("integration range [{a}, {b}] is not an interval")));
    }
    if b == f64::INFINITY {
        adaptive(
            |t| {
                let s = 1.0 - t;
                let y = f(a + t / s);
                if y == 0.0 {
                    0.0
                } else {
                    y / (s * s)
                }
            },
            0.0,
            1.0,
            spec,
        )
    } else {
        adaptive(f, a, b, spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn exponential_tail() {
        let v = integrate(|x| (-x).exp(), 0.0, f64::INFINITY, &QuadratureSpec::default()).unwrap();
        assert!((v - 1.0).abs() < 1e-8);
    }

    #[test]
    fn inverse_sqrt_endpoint_singularity() {
        let v = integrate(|x| x.powf(-0.5), 0.0, 1.0, &QuadratureSpec::default()).unwrap();
        assert!((v - 2.0).abs() < 1e-6, "{v}");
    }

    #[test]
    fn rayleigh_density_normalizes() {
        for &lambda in &[0.1, 1.0, 10.0] {
            let v = integrate(
                |x| 2.0 * lambda * PI * x * (-lambda * PI * x * x).exp(),
                0.0,
                f64::INFINITY,
                &QuadratureSpec::default(),
            )
            .unwrap();
            assert!((v - 1.0).abs() < 1e-8, "lambda {lambda}: {v}");
        }
    }

    #[test]
    fn polynomials_are_exact() {
        // K21 integrates degree-31 polynomials exactly
        let v = integrate(|x| x.powi(7) - 3.0 * x.powi(2), -1.0, 2.0, &QuadratureSpec::default()).unwrap();
        assert!((v - (255.0 / 8.0 - 9.0)).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_ranges() {
        let s = QuadratureSpec::default();
        assert!(integrate(|x| x, 1.0, 1.0, &s).is_err());
        assert!(integrate(|x| x, 2.0, 1.0, &s).is_err());
        assert!(integrate(|x| x, f64::NEG_INFINITY, 1.0, &s).is_err());
    }

    #[test]
    fn reports_nonconvergence_with_best_estimate() {
        let spec = QuadratureSpec { rel_tol: 1e-14, abs_tol: 1e-300, max_subdivisions: 3 };
        match integrate(|x| (50.0 * x).sin().abs(), 0.0, 10.0, &spec) {
            Err(Error::Quadrature { estimate, error_bound }) => {
                assert!(estimate.is_finite() && error_bound > 0.0);
            }
            other => panic!("expected nonconvergence, got {other:?}"),
        }
    }

    #[test]
    fn nonfinite_integrand_is_an_error() {
        let r = integrate(|_| f64::NAN, 0.0, 1.0, &QuadratureSpec::default());
        assert!(matches!(r, Err(Error::Numerical(_))));
    }
}
