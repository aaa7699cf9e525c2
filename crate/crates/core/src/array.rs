//! Uniform linear array geometry, steering vectors and the sub-connected
//! hybrid beamformer containers.
//!
//! Antenna `m` (0-based) of subarray `k` (0-based) sits at global index
//! `k * M + m`, and every formula in the crate uses that mapping.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::linalg::{dot_h, norm_sqr, CMatrix, C64, ZERO};

/// Beam gains and SINRs below this are reported at this floor.
pub const GAIN_FLOOR_DB: f64 = -120.0;

/// Angle in radians. Degrees only appear at the crate boundary.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    pub const fn from_radians(radians: f64) -> Self {
        Angle(radians)
    }

    pub fn from_degrees(degrees: f64) -> Self {
        Angle(degrees.to_radians())
    }

    #[inline]
    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }

    #[inline]
    pub fn sin(self) -> f64 {
        libm::sin(self.0)
    }

    /// True for physical directions of arrival, |θ| ≤ π/2.
    pub fn is_physical(self) -> bool {
        self.0.abs() <= FRAC_PI_2 + 1e-12
    }
}

impl core::ops::Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        Angle(self.0 + rhs.0)
    }
}

impl core::ops::Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        Angle(self.0 - rhs.0)
    }
}

impl core::ops::Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle(-self.0)
    }
}

/// ULA of `N = K·M` elements split into `K` contiguous subarrays.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArrayConfig {
    n_antennas: usize,
    n_subarrays: usize,
    antennas_per_subarray: usize,
    spacing_over_wavelength: f64,
}

impl ArrayConfig {
    pub const DEFAULT_SPACING: f64 = 0.5;

    /// Half-wavelength array with `n_antennas` split into `n_subarrays`.
    pub fn new(n_antennas: usize, n_subarrays: usize) -> Result<Self> {
        Self::with_spacing(n_antennas, n_subarrays, Self::DEFAULT_SPACING)
    }

    pub fn with_spacing(
        n_antennas: usize,
        n_subarrays: usize,
        spacing_over_wavelength: f64,
    ) -> Result<Self> {
        if n_antennas == 0 || n_subarrays == 0 {
            return Err(Error::Config(format!(
                "antenna and subarray counts must be positive (N={n_antennas}, K={n_subarrays})"
            )));
        }
        if !n_antennas.is_multiple_of(n_subarrays) {
            return Err(Error::Config(format!(
                "N={n_antennas} is not divisible by K={n_subarrays}"
            )));
        }
        if !(spacing_over_wavelength > 0.0 && spacing_over_wavelength.is_finite()) {
            return Err(Error::Config(format!(
                "spacing d/lambda must be positive, got {spacing_over_wavelength}"
            )));
        }
        Ok(Self {
            n_antennas,
            n_subarrays,
            antennas_per_subarray: n_antennas / n_subarrays,
            spacing_over_wavelength,
        })
    }

    /// Same aperture with one RF chain per antenna.
    pub fn fully_digital(&self) -> Self {
        Self {
            n_subarrays: self.n_antennas,
            antennas_per_subarray: 1,
            ..*self
        }
    }

    #[inline]
    pub fn n_antennas(&self) -> usize {
        self.n_antennas
    }

    #[inline]
    pub fn n_subarrays(&self) -> usize {
        self.n_subarrays
    }

    #[inline]
    pub fn antennas_per_subarray(&self) -> usize {
        self.antennas_per_subarray
    }

    #[inline]
    pub fn spacing_over_wavelength(&self) -> f64 {
        self.spacing_over_wavelength
    }

    #[inline]
    pub fn global_index(&self, subarray: usize, element: usize) -> usize {
        subarray * self.antennas_per_subarray + element
    }

    /// Electrical phase step between adjacent elements, `2π (d/λ)`.
    #[inline]
    pub(crate) fn phase_step(&self) -> f64 {
        2.0 * PI * self.spacing_over_wavelength
    }
}

/// Array manifold `a(θ)`: unit-modulus entries, first entry exactly 1.
#[derive(Clone, Debug, PartialEq)]
pub struct SteeringVector(Vec<C64>);

impl SteeringVector {
    pub fn as_slice(&self) -> &[C64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<C64> {
        self.0
    }
}

pub fn steering_vector(cfg: &ArrayConfig, theta: Angle) -> SteeringVector {
    let step = cfg.phase_step() * theta.sin();
    SteeringVector(
        (0..cfg.n_antennas())
            .map(|i| {
                if i == 0 {
                    C64::new(1.0, 0.0)
                } else {
                    C64::from_polar(1.0, step * i as f64)
                }
            })
            .collect(),
    )
}

/// Sub-connected phase-shifter network, stored as its `K×M` phases.
///
/// The dense `N×K` form is block diagonal with block `k` equal to
/// `f_k = M^{-1/2} [e^{jα_{k,1}}, …, e^{jα_{k,M}}]ᵀ`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalogBeamformer {
    cfg: ArrayConfig,
    /// Row-major `K×M`.
    phases: Vec<f64>,
}

impl AnalogBeamformer {
    /// `phases` is row-major `K×M` (subarray-major, i.e. global antenna order).
    pub fn from_phases(cfg: &ArrayConfig, phases: Vec<f64>) -> Result<Self> {
        if phases.len() != cfg.n_antennas() {
            return Err(Error::Config(format!(
                "phase matrix has {} entries, expected K*M = {}",
                phases.len(),
                cfg.n_antennas()
            )));
        }
        Ok(Self { cfg: *cfg, phases })
    }

    pub fn config(&self) -> &ArrayConfig {
        &self.cfg
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn phase(&self, subarray: usize, element: usize) -> f64 {
        self.phases[self.cfg.global_index(subarray, element)]
    }

    fn amplitude(&self) -> f64 {
        1.0 / libm::sqrt(self.cfg.antennas_per_subarray() as f64)
    }

    /// Per-antenna complex gain `(1/√M) e^{jα}` in global order.
    pub fn element_weights(&self) -> impl Iterator<Item = C64> + '_ {
        let amp = self.amplitude();
        self.phases.iter().map(move |&a| C64::from_polar(amp, a))
    }

    /// Explicit `N×K` block-diagonal matrix.
    pub fn densify(&self) -> CMatrix {
        let m = self.cfg.antennas_per_subarray();
        let weights: Vec<C64> = self.element_weights().collect();
        CMatrix::from_fn(self.cfg.n_antennas(), self.cfg.n_subarrays(), |i, k| {
            if i / m == k {
                weights[i]
            } else {
                ZERO
            }
        })
    }

    /// `W_RF · w_BB`.
    pub fn combine(&self, wbb: &DigitalBeamformer) -> Result<TotalBeamformer> {
        let k = self.cfg.n_subarrays();
        if wbb.len() != k {
            return Err(Error::Dimension {
                expected: k,
                found: wbb.len(),
            });
        }
        let m = self.cfg.antennas_per_subarray();
        Ok(TotalBeamformer(
            self.element_weights()
                .enumerate()
                .map(|(i, f)| f * wbb.as_slice()[i / m])
                .collect(),
        ))
    }

    /// `W_RF^H · x` for an N-vector `x`.
    pub fn project(&self, x: &[C64]) -> Result<Vec<C64>> {
        let n = self.cfg.n_antennas();
        if x.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: x.len(),
            });
        }
        let m = self.cfg.antennas_per_subarray();
        let mut out = alloc::vec![ZERO; self.cfg.n_subarrays()];
        for (i, (f, &xi)) in self.element_weights().zip(x).enumerate() {
            out[i / m] += f.conj() * xi;
        }
        Ok(out)
    }
}

/// Validating constructor for a phase matrix.
pub fn assemble_analog(cfg: &ArrayConfig, phases: Vec<f64>) -> Result<AnalogBeamformer> {
    AnalogBeamformer::from_phases(cfg, phases)
}

/// Baseband combining weights `w_BB`, one per RF chain.
#[derive(Clone, Debug, PartialEq)]
pub struct DigitalBeamformer(Vec<C64>);

impl DigitalBeamformer {
    pub fn new(weights: Vec<C64>) -> Self {
        Self(weights)
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

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.0)
    }

    /// Multiplies every weight by the same complex factor.
    pub fn scaled(&self, factor: C64) -> Self {
        Self(self.0.iter().map(|w| w * factor).collect())
    }
}

/// End-to-end spatial filter `v = W_RF w_BB` over all N antennas.
#[derive(Clone, Debug, PartialEq)]
pub struct TotalBeamformer(Vec<C64>);

impl TotalBeamformer {
    pub fn new(entries: Vec<C64>) -> Self {
        Self(entries)
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<C64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(norm_sqr(&self.0))
    }
}

pub fn effective_beamformer(
    wrf: &AnalogBeamformer,
    wbb: &DigitalBeamformer,
) -> Result<TotalBeamformer> {
    wrf.combine(wbb)
}

/// Subarray-domain steering `W_RF^H a`.
pub fn subarray_steering(wrf: &AnalogBeamformer, a: &[C64]) -> Result<Vec<C64>> {
    wrf.project(a)
}

pub(crate) fn to_db(power: f64) -> f64 {
    if power > 0.0 {
        (10.0 * libm::log10(power)).max(GAIN_FLOOR_DB)
    } else {
        GAIN_FLOOR_DB
    }
}

/// `10 log10 |v^H a(θ)|²`, floored at [`GAIN_FLOOR_DB`].
pub fn beam_gain(v: &[C64], cfg: &ArrayConfig, theta: Angle) -> Result<f64> {
    if v.len() != cfg.n_antennas() {
        return Err(Error::Dimension {
            expected: cfg.n_antennas(),
            found: v.len(),
        });
    }
    if v.iter().all(|z| *z == ZERO) {
        return Err(Error::ZeroBeamformer);
    }
    let a = steering_vector(cfg, theta);
    Ok(to_db(dot_h(v, a.as_slice()).norm_sqr()))
}
