//! Uniform DOA-error model and the expected steering quantities.
//!
//! With the true angle written as `θ = θ̂ + Δ`, `Δ ~ U[-ε, ε]`, the expected
//! manifold entry `i` is `(1/2ε) ∫ exp(j 2π (d/λ) i sin(θ̂ + Δ)) dΔ`. The
//! integral is evaluated directly over `Δ` with Gauss–Legendre.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::array::{steering_vector, Angle, ArrayConfig};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::quadrature::QuadratureRule;

/// Maximum DOA estimation error `ε`; errors are uniform on `[-ε, ε]`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AngleErrorModel {
    epsilon: f64,
}

impl AngleErrorModel {
    pub const PERFECT: AngleErrorModel = AngleErrorModel { epsilon: 0.0 };

    pub fn new(epsilon: Angle) -> Result<Self> {
        let e = epsilon.radians();
        if !(0.0..FRAC_PI_2).contains(&e) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: format!("must lie in [0, pi/2) rad, got {e}"),
            });
        }
        Ok(Self { epsilon: e })
    }

    pub fn from_degrees(degrees: f64) -> Result<Self> {
        Self::new(Angle::from_degrees(degrees))
    }

    pub fn epsilon(&self) -> Angle {
        Angle::from_radians(self.epsilon)
    }

    pub fn is_perfect(&self) -> bool {
        self.epsilon == 0.0
    }

    /// Density of `Δ`. Degenerate (a point mass) at `ε = 0`, reported as 0.
    pub fn pdf(&self, delta: f64) -> f64 {
        if self.epsilon > 0.0 && delta.abs() <= self.epsilon {
            0.5 / self.epsilon
        } else {
            0.0
        }
    }
}

/// `r = E[a(θ̂ + Δ)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedSteering(Vec<C64>);

impl ExpectedSteering {
    /// Wraps an arbitrary N-vector, e.g. an exact steering vector.
    pub fn from_vec(entries: Vec<C64>) -> Self {
        Self(entries)
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `N×Q` matrix whose column `q` is the expected steering of interferer `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedInterferenceMatrix(CMatrix);

impl ExpectedInterferenceMatrix {
    pub fn from_matrix(m: CMatrix) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn n_antennas(&self) -> usize {
        self.0.nrows()
    }

    pub fn n_interferers(&self) -> usize {
        self.0.ncols()
    }
}

pub fn expected_steering(
    cfg: &ArrayConfig,
    theta_hat: Angle,
    err: &AngleErrorModel,
    quad: &QuadratureRule,
) -> ExpectedSteering {
    if err.is_perfect() {
        return ExpectedSteering(steering_vector(cfg, theta_hat).into_inner());
    }
    let eps = err.epsilon;
    let step = cfg.phase_step();
    let n = cfg.n_antennas();
    let mut acc = alloc::vec![C64::new(0.0, 0.0); n];
    for (delta, w) in quad.mapped(-eps, eps) {
        let s = libm::sin(theta_hat.radians() + delta);
        for (i, a) in acc.iter_mut().enumerate().skip(1) {
            *a += C64::from_polar(w, step * i as f64 * s);
        }
    }
    let scale = 0.5 / eps;
    acc[0] = C64::new(1.0, 0.0);
    for a in acc.iter_mut().skip(1) {
        *a *= scale;
    }
    ExpectedSteering(acc)
}

pub fn expected_interference_matrix(
    cfg: &ArrayConfig,
    theta_hats: &[Angle],
    err: &AngleErrorModel,
    quad: &QuadratureRule,
) -> ExpectedInterferenceMatrix {
    for (i, a) in theta_hats.iter().enumerate() {
        for b in &theta_hats[i + 1..] {
            if (a.radians() - b.radians()).abs() < 1e-9 {
                log::warn!(
                    "duplicate interferer DOA {:.6} rad; interference matrix is rank deficient",
                    a.radians()
                );
            }
        }
    }
    let columns: Vec<ExpectedSteering> = theta_hats
        .iter()
        .map(|&t| expected_steering(cfg, t, err, quad))
        .collect();
    let n = cfg.n_antennas();
    let m = CMatrix::from_fn(n, columns.len(), |i, q| columns[q].0[i]);
    ExpectedInterferenceMatrix(m)
}

/// `E[sin(θ̂ + Δ)] = sin θ̂ · sin ε / ε`, or `sin θ̂` at `ε = 0`.
pub fn expected_sin(theta_hat: Angle, err: &AngleErrorModel) -> f64 {
    let eps = err.epsilon;
    if eps == 0.0 {
        theta_hat.sin()
    } else {
        theta_hat.sin() * libm::sin(eps) / eps
    }
}
