//! Gauss–Legendre quadrature on a finite interval.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};

/// Fixed Gauss–Legendre rule on [-1, 1], mapped to any interval on use.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub const DEFAULT_NODES: usize = 129;

    /// Builds an `n`-point rule; `n` must be odd.
    pub fn gauss_legendre(n: usize) -> Result<Self> {
        if n == 0 || n.is_multiple_of(2) {
            return Err(Error::InvalidParameter {
                name: "quadrature_nodes",
                reason: format!("node count must be a positive odd integer, got {n}"),
            });
        }
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let half = n.div_ceil(2);
        for i in 0..half {
            // Tricomi-style starting guess, then Newton on P_n.
            let mut x = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        // The centre node of an odd rule is exactly zero.
        nodes[n / 2] = 0.0;
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto `[lo, hi]`.
    pub fn mapped(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    /// `∫_lo^hi f(x) dx` for a real integrand.
    pub fn integrate(&self, lo: f64, hi: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.mapped(lo, hi).map(|(x, w)| w * f(x)).sum()
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self::gauss_legendre(Self::DEFAULT_NODES).expect("default node count is odd")
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_even_counts() {
        assert!(QuadratureRule::gauss_legendre(0).is_err());
        assert!(QuadratureRule::gauss_legendre(64).is_err());
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [1, 3, 17, 129, 257] {
            let q = QuadratureRule::gauss_legendre(n).unwrap();
            let s: f64 = q.integrate(-2.0, 5.0, |_| 1.0);
            assert!((s - 7.0).abs() < 1e-12, "n={n}: {s}");
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let q = QuadratureRule::gauss_legendre(5).unwrap();
        // ∫_0^1 x^9 dx = 1/10
        let s = q.integrate(0.0, 1.0, |x| x.powi(9));
        assert!((s - 0.1).abs() < 1e-14);
    }

    #[test]
    fn smooth_oscillatory_integrand() {
        let q = QuadratureRule::default();
        // ∫_0^π sin(20x)^2 dx = π/2
        let s = q.integrate(0.0, PI, |x| (20.0 * x).sin().powi(2));
        assert!((s - PI / 2.0).abs() < 1e-12);
    }
}
