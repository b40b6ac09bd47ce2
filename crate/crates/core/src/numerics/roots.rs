use crate::error::{Error, Result};

const MAX_ITER: usize = 500;

/// Root of `h` in `[lo, hi]` by Brent's method.
///
/// Requires a sign change on the bracket. Each step falls back to bisection
/// whenever the interpolation step would not shrink the bracket enough, so
/// convergence is guaranteed. Stops once the bracket is narrower than
/// `tol` (plus a few ulps of the root) or `h` vanishes exactly.
pub fn find_root<H>(mut h: H, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    H: FnMut(f64) -> f64,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Domain(format!("root bracket [{lo}, {hi}] is not an interval")));
    }
    if !(tol > 0.0) {
        return Err(Error::Config(format!("root tolerance must be positive, got {tol}")));
    }

    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (h(a), h(b));
    if !(fa.is_finite() && fb.is_finite()) {
        return Err(Error::Numerical(format!("non-finite residual at bracket ends ({fa}, {fb})")));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket { lo, hi });
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }

        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }

        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }

        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = h(b);
        if !fb.is_finite() {
            return Err(Error::Numerical(format!("non-finite residual at x = {b:e}")));
        }
    }
    Err(Error::Numerical(format!("root search did not converge within {MAX_ITER} iterations")))
}

/// Golden-section search for the maximum of a unimodal `g` on `[lo, hi]`.
///
/// Returns `(argmax, max)`; the argmax is located to within `tol`.
pub fn maximize_unimodal<G>(mut g: G, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)>
where
    G: FnMut(f64) -> f64,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Domain(format!("search interval [{lo}, {hi}] is not an interval")));
    }
    if !(tol > 0.0) {
        return Err(Error::Config(format!("search tolerance must be positive, got {tol}")));
    }
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);

    let mut eval = |x: f64| -> Result<f64> {
        let y = g(x);
        if y.is_nan() {
            Err(Error::Numerical(format!("objective is NaN at x = {x:e}")))
        } else {
            Ok(y)
        }
    };

    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut g1 = eval(x1)?;
    let mut g2 = eval(x2)?;

    while (b - a).abs() > tol {
        if g1 < g2 {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + inv_phi * (b - a);
            g2 = eval(x2)?;
        } else {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - inv_phi * (b - a);
            g1 = eval(x1)?;
        }
    }
    let x = 0.5 * (a + b);
    let y = eval(x)?;
    Ok((x, y))
}
