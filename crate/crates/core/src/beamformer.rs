//! Beamformer constructions for the sub-connected hybrid receiver.
//!
//! The robust design runs in one pass:
//!
//! 1. point the phase shifters along the expected desired direction,
//! 2. build the total beamformer `v_opt` by null-space projection of the
//!    expected desired steering onto the complement of the expected
//!    interference span,
//! 3. compute diagonally loaded Capon weights on the RF-chain outputs,
//! 4. re-derive the analog phases so `W_RF w_BB` follows the phases of
//!    `v_opt`.
//!
//! The digital weights from step 3 are kept as-is after step 4.

use alloc::format;
use alloc::vec::Vec;

use crate::array::{
    steering_vector, AnalogBeamformer, Angle, ArrayConfig, DigitalBeamformer, TotalBeamformer,
};
use crate::error::{Error, Result};
use crate::expectation::{
    expected_interference_matrix, expected_sin, expected_steering, AngleErrorModel,
    ExpectedInterferenceMatrix, ExpectedSteering,
};
use crate::linalg::{cholesky, cholesky_solve, dot_h, norm, svd, CMatrix, C64};
use crate::quadrature::QuadratureRule;

/// Relative threshold below which a singular value counts as zero.
pub const SVD_RELATIVE_TOLERANCE: f64 = 1e-10;

/// `|w_k|` at or below this triggers the phase-extraction fallback.
pub const DIGITAL_WEIGHT_TOLERANCE: f64 = 1e-12;

/// Orthonormal basis `F` of the null space of `R^H`.
#[derive(Clone, Debug)]
pub struct NullSpaceBasis {
    basis: CMatrix,
    singular_values: Vec<f64>,
    rank_deficient: bool,
}

impl NullSpaceBasis {
    /// `N×(N−Q)`, orthonormal columns.
    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    /// Singular values of `R^H`, non-increasing. Only the leading `Q` are
    /// meaningful.
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    /// Set when one of the leading `Q` singular values fell below tolerance,
    /// i.e. interferers are (nearly) coincident.
    pub fn is_rank_deficient(&self) -> bool {
        self.rank_deficient
    }
}

/// Takes the trailing `N − Q` right-singular vectors of `R^H`.
///
/// The dimension is fixed by `Q`, not by the numerical rank.
pub fn null_space_basis(interference: &ExpectedInterferenceMatrix) -> Result<NullSpaceBasis> {
    let n = interference.n_antennas();
    let q = interference.n_interferers();
    if q >= n {
        return Err(Error::TooManyInterferers {
            interferers: q,
            antennas: n,
        });
    }
    if q == 0 {
        return Ok(NullSpaceBasis {
            basis: CMatrix::identity(n),
            singular_values: Vec::new(),
            rank_deficient: false,
        });
    }
    let decomposition = svd(&interference.matrix().adjoint());
    let sigma = decomposition.singular_values;
    let cutoff = SVD_RELATIVE_TOLERANCE * sigma[0];
    let rank_deficient = sigma[..q].iter().any(|&s| s <= cutoff);
    if rank_deficient {
        log::warn!("interference matrix is rank deficient; interferers nearly coincide");
    }
    let v = &decomposition.right_vectors;
    let basis = CMatrix::from_fn(n, n - q, |i, j| v[(i, q + j)]);
    Ok(NullSpaceBasis {
        basis,
        singular_values: sigma,
        rank_deficient,
    })
}

/// `v_opt = F F^H r / ‖F^H r‖`: the unit vector in the null space of `R^H`
/// that maximises `|v^H r|`.
pub fn nsp_total_beamformer(
    r: &ExpectedSteering,
    interference: &ExpectedInterferenceMatrix,
) -> Result<TotalBeamformer> {
    if r.len() != interference.n_antennas() {
        return Err(Error::Dimension {
            expected: interference.n_antennas(),
            found: r.len(),
        });
    }
    let r_norm = norm(r.as_slice());
    if r_norm == 0.0 {
        return Err(Error::DegenerateSteering);
    }
    let f = null_space_basis(interference)?;
    let coords = f.basis.adjoint_mul_vec(r.as_slice())?;
    let c_norm = norm(&coords);
    if c_norm <= SVD_RELATIVE_TOLERANCE * r_norm {
        return Err(Error::DegenerateGeometry);
    }
    let unit: Vec<C64> = coords.iter().map(|c| c / c_norm).collect();
    Ok(TotalBeamformer::new(f.basis.mul_vec(&unit)?))
}

/// How the loading factor `γ` is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DiagonalLoading {
    /// Absolute `γ`.
    Fixed(f64),
    /// `γ = factor · σ_n²`, resolved against the noise power at solve time.
    NoiseMultiple(f64),
}

impl DiagonalLoading {
    pub const DEFAULT_NOISE_MULTIPLE: f64 = 20.0;

    pub fn gamma(&self, noise_power: f64) -> f64 {
        match *self {
            DiagonalLoading::Fixed(g) => g,
            DiagonalLoading::NoiseMultiple(f) => f * noise_power,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let v = match *self {
            DiagonalLoading::Fixed(g) => g,
            DiagonalLoading::NoiseMultiple(f) => f,
        };
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                reason: format!("loading must be finite and nonnegative, got {v}"),
            });
        }
        Ok(())
    }
}

impl Default for DiagonalLoading {
    fn default() -> Self {
        DiagonalLoading::NoiseMultiple(Self::DEFAULT_NOISE_MULTIPLE)
    }
}

/// `R̂ = (1/L) Σ y(l) y(l)^H` over the RF-chain snapshots.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleCovariance {
    matrix: CMatrix,
    snapshots: usize,
}

impl SampleCovariance {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn snapshots_used(&self) -> usize {
        self.snapshots
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// `snapshots` is `K×L`, one column per snapshot.
pub fn sample_covariance(snapshots: &CMatrix) -> Result<SampleCovariance> {
    let k = snapshots.nrows();
    let l = snapshots.ncols();
    if l == 0 {
        return Err(Error::EmptyData);
    }
    let mut m = CMatrix::zeros(k, k);
    for s in 0..l {
        let y = snapshots.column(s);
        for j in 0..k {
            let yj = y[j].conj();
            for i in j..k {
                m[(i, j)] += y[i] * yj;
            }
        }
    }
    let inv_l = 1.0 / l as f64;
    for j in 0..k {
        m[(j, j)] = C64::new(m[(j, j)].re * inv_l, 0.0);
        for i in (j + 1)..k {
            let z = m[(i, j)] * inv_l;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    Ok(SampleCovariance {
        matrix: m,
        snapshots: l,
    })
}

/// Phase-shifter settings pointing the array at `E[sin θ_d]`.
///
/// `α_{k,m,0} = 2π (d/λ) ((k−1)M + m − 1) E[sin(θ̂_d + Δ)]`; at `ε = 0` this is
/// the plain pointing network.
pub fn initial_analog_phases(
    cfg: &ArrayConfig,
    theta_hat_d: Angle,
    err: &AngleErrorModel,
) -> AnalogBeamformer {
    let step = cfg.phase_step() * expected_sin(theta_hat_d, err);
    let phases = (0..cfg.n_antennas()).map(|i| step * i as f64).collect();
    AnalogBeamformer::from_phases(cfg, phases).expect("phase count matches configuration")
}

/// Diagonally loaded Capon weights
/// `w = (R̂+γI)^{-1} a / (a^H (R̂+γI)^{-1} a)`, so that `w^H a = 1`.
pub fn dl_digital_beamformer(
    cov: &SampleCovariance,
    a_sub: &[C64],
    gamma: f64,
) -> Result<DigitalBeamformer> {
    let k = cov.dim();
    if a_sub.len() != k {
        return Err(Error::Dimension {
            expected: k,
            found: a_sub.len(),
        });
    }
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            reason: format!("loading must be finite and nonnegative, got {gamma}"),
        });
    }
    if a_sub.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::DegenerateSteering);
    }
    let mut loaded = cov.matrix.clone();
    for i in 0..k {
        loaded[(i, i)] += gamma;
    }
    let l = cholesky(&loaded)?;
    let x = cholesky_solve(&l, a_sub);
    let denom = dot_h(a_sub, &x);
    if denom.norm().is_nan() || denom.norm() <= 0.0 || !denom.re.is_finite() {
        return Err(Error::IllConditioned);
    }
    // Dividing by the complex a^H x (not its real part) keeps w^H a = 1 even
    // when rounding leaves a small imaginary component.
    Ok(DigitalBeamformer::new(
        x.into_iter().map(|z| z / denom).collect(),
    ))
}

/// Analog phases chosen so `W_RF w_BB` matches the phases of `v_opt`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseExtraction {
    pub analog: AnalogBeamformer,
    /// Subarrays whose digital weight was ~0; their phases copy `v_opt`.
    pub fallback_subarrays: Vec<usize>,
}

/// `α_{k,m} = arg(v_opt[(k−1)M+m] / w_k)`.
pub fn extract_analog_phases(
    v_opt: &TotalBeamformer,
    w_bb: &DigitalBeamformer,
    cfg: &ArrayConfig,
) -> Result<PhaseExtraction> {
    let n = cfg.n_antennas();
    let k = cfg.n_subarrays();
    if v_opt.as_slice().len() != n {
        return Err(Error::Dimension {
            expected: n,
            found: v_opt.as_slice().len(),
        });
    }
    if w_bb.len() != k {
        return Err(Error::Dimension {
            expected: k,
            found: w_bb.len(),
        });
    }
    let m = cfg.antennas_per_subarray();
    let mut fallback_subarrays = Vec::new();
    let mut phases = Vec::with_capacity(n);
    for (sub, &w) in w_bb.as_slice().iter().enumerate() {
        let degenerate = w.norm() <= DIGITAL_WEIGHT_TOLERANCE;
        if degenerate {
            log::warn!("digital weight of subarray {sub} is ~0; copying v_opt phases");
            fallback_subarrays.push(sub);
        }
        for e in 0..m {
            let v = v_opt.as_slice()[cfg.global_index(sub, e)];
            phases.push(if degenerate { v.arg() } else { (v / w).arg() });
        }
    }
    Ok(PhaseExtraction {
        analog: AnalogBeamformer::from_phases(cfg, phases)?,
        fallback_subarrays,
    })
}

/// Output of a hybrid design.
#[derive(Clone, Debug, PartialEq)]
pub struct HybridDesign {
    /// Network used while the covariance was measured.
    pub initial_analog: AnalogBeamformer,
    /// Final phase shifters.
    pub analog: AnalogBeamformer,
    pub digital: DigitalBeamformer,
    /// `v_opt` when the design has an NSP stage.
    pub total: Option<TotalBeamformer>,
    pub fallback_subarrays: Vec<usize>,
}

impl HybridDesign {
    /// `W_RF w_BB`.
    pub fn effective(&self) -> TotalBeamformer {
        self.analog
            .combine(&self.digital)
            .expect("design dimensions are consistent")
    }
}

/// One pass of the robust hybrid design.
///
/// `cov` must have been measured through
/// `initial_analog_phases(cfg, theta_hat_d, err)`.
pub fn robust_hybrid_adb(
    cfg: &ArrayConfig,
    theta_hat_d: Angle,
    interferer_theta_hats: &[Angle],
    err: &AngleErrorModel,
    quad: &QuadratureRule,
    cov: &SampleCovariance,
    gamma: f64,
) -> Result<HybridDesign> {
    if cov.dim() != cfg.n_subarrays() {
        return Err(Error::Dimension {
            expected: cfg.n_subarrays(),
            found: cov.dim(),
        });
    }
    let initial_analog = initial_analog_phases(cfg, theta_hat_d, err);

    let r = expected_steering(cfg, theta_hat_d, err, quad);
    let interference = expected_interference_matrix(cfg, interferer_theta_hats, err, quad);
    let v_opt = nsp_total_beamformer(&r, &interference)?;

    let a_sub = initial_analog.project(r.as_slice())?;
    let digital = dl_digital_beamformer(cov, &a_sub, gamma)?;

    let PhaseExtraction {
        analog,
        fallback_subarrays,
    } = extract_analog_phases(&v_opt, &digital, cfg)?;

    Ok(HybridDesign {
        initial_analog,
        analog,
        digital,
        total: Some(v_opt),
        fallback_subarrays,
    })
}

/// The same pipeline with every expectation taken at `ε = 0`, fed the
/// (possibly erroneous) estimates directly.
pub fn nsp_hybrid_baseline(
    cfg: &ArrayConfig,
    theta_hat_d: Angle,
    interferer_theta_hats: &[Angle],
    quad: &QuadratureRule,
    cov: &SampleCovariance,
    gamma: f64,
) -> Result<HybridDesign> {
    robust_hybrid_adb(
        cfg,
        theta_hat_d,
        interferer_theta_hats,
        &AngleErrorModel::PERFECT,
        quad,
        cov,
        gamma,
    )
}

/// Pointing phase shifters plus loaded Capon weights; no null steering.
///
/// With `cfg.fully_digital()` this is plain element-space diagonal loading.
pub fn dl_baseline(
    cfg: &ArrayConfig,
    theta_hat_d: Angle,
    cov: &SampleCovariance,
    gamma: f64,
) -> Result<HybridDesign> {
    let analog = initial_analog_phases(cfg, theta_hat_d, &AngleErrorModel::PERFECT);
    let a = steering_vector(cfg, theta_hat_d);
    let a_sub = analog.project(a.as_slice())?;
    let digital = dl_digital_beamformer(cov, &a_sub, gamma)?;
    Ok(HybridDesign {
        initial_analog: analog.clone(),
        analog,
        digital,
        total: None,
        fallback_subarrays: Vec::new(),
    })
}
