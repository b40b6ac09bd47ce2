//! Quadrature, root finding, unimodal maximization, special functions and
//! Poisson-series truncation used by the analytic modules.

mod quadrature;
mod roots;
mod series;
pub mod special;

pub use quadrature::{integrate, QuadratureSpec};
pub use roots::{find_root, maximize_unimodal};
pub use series::{poisson_weight, PoissonSupport, SeriesTruncation};

/// `ln(1 + e^z)` without overflow for large `z` or cancellation for small.
#[inline]
pub fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Pairwise (cascade) summation; the result depends only on the slice order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 64;
    if xs.len() <= BLOCK {
        xs.iter().sum()
    } else {
        let (left, right) = xs.split_at(xs.len() / 2);
        pairwise_sum(left) + pairwise_sum(right)
    }
}
