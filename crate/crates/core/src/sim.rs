//! Baseband snapshot generation, output metrics and Monte Carlo drivers.
//!
//! Every trial derives its own ChaCha stream from the master seed and the
//! trial index, so per-trial results do not depend on evaluation order.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::array::{
    steering_vector, to_db, AnalogBeamformer, Angle, ArrayConfig, DigitalBeamformer, GAIN_FLOOR_DB,
};
use crate::beamformer::{
    dl_baseline, initial_analog_phases, nsp_hybrid_baseline, robust_hybrid_adb, sample_covariance,
    DiagonalLoading, HybridDesign,
};
use crate::error::{Error, Result};
use crate::expectation::AngleErrorModel;
use crate::linalg::{dot_h, CMatrix, C64};
use crate::quadrature::QuadratureRule;

/// Baseband symbol model for the desired and interfering sources.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SourceModel {
    /// Circular complex Gaussian.
    #[default]
    Gaussian,
    /// Unit-energy QPSK scaled to the source power.
    Qpsk,
}

/// One desired source, `Q` interferers, white noise, and the DOA-error model.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub cfg: ArrayConfig,
    pub theta_d: Angle,
    pub interferer_thetas: Vec<Angle>,
    /// `σ_d² / σ_n²` in dB.
    pub desired_snr_db: f64,
    /// One entry per interferer, `σ_q² / σ_n²` in dB.
    pub interferer_snr_db: Vec<f64>,
    /// `σ_n²`.
    pub noise_power: f64,
    pub err: AngleErrorModel,
    pub snapshots: usize,
    pub seed: u64,
    pub source_model: SourceModel,
}

impl Scenario {
    /// The reference geometry: 32 elements in 4 subarrays, desired source at
    /// 60°, interferers at 30° and −15° with 0 dB / 15 dB SNRs, ε = 3°.
    pub fn reference() -> Self {
        Self {
            cfg: ArrayConfig::new(32, 4).expect("32 is divisible by 4"),
            theta_d: Angle::from_degrees(60.0),
            interferer_thetas: alloc::vec![Angle::from_degrees(30.0), Angle::from_degrees(-15.0)],
            desired_snr_db: 0.0,
            interferer_snr_db: alloc::vec![15.0, 15.0],
            noise_power: 1.0,
            err: AngleErrorModel::from_degrees(3.0).expect("3 degrees is in range"),
            snapshots: 200,
            seed: 0,
            source_model: SourceModel::Gaussian,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.interferer_snr_db.len() != self.interferer_thetas.len() {
            return Err(Error::InvalidParameter {
                name: "interferer_snr_db",
                reason: format!(
                    "{} SNRs given for {} interferers",
                    self.interferer_snr_db.len(),
                    self.interferer_thetas.len()
                ),
            });
        }
        if !self.desired_snr_db.is_finite() || self.interferer_snr_db.iter().any(|s| !s.is_finite())
        {
            return Err(Error::InvalidParameter {
                name: "snr_db",
                reason: "all SNRs must be finite".into(),
            });
        }
        if !(self.noise_power > 0.0 && self.noise_power.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "noise_power",
                reason: format!("must be positive, got {}", self.noise_power),
            });
        }
        if self.snapshots == 0 {
            return Err(Error::InvalidParameter {
                name: "snapshots",
                reason: "need at least one snapshot".into(),
            });
        }
        let all = core::iter::once(&self.theta_d).chain(&self.interferer_thetas);
        if let Some(bad) = all.into_iter().find(|t| !t.is_physical()) {
            return Err(Error::InvalidParameter {
                name: "theta",
                reason: format!("{} deg is outside [-90, 90]", bad.degrees()),
            });
        }
        Ok(())
    }

    pub fn n_interferers(&self) -> usize {
        self.interferer_thetas.len()
    }

    pub fn desired_power(&self) -> f64 {
        self.noise_power * db_to_linear(self.desired_snr_db)
    }

    pub fn interferer_powers(&self) -> impl Iterator<Item = f64> + '_ {
        self.interferer_snr_db
            .iter()
            .map(|&s| self.noise_power * db_to_linear(s))
    }

    /// Source powers, desired first.
    fn source_powers(&self) -> Vec<f64> {
        core::iter::once(self.desired_power())
            .chain(self.interferer_powers())
            .collect()
    }

    fn true_angles(&self) -> Vec<Angle> {
        core::iter::once(self.theta_d)
            .chain(self.interferer_thetas.iter().copied())
            .collect()
    }
}

#[inline]
pub(crate) fn db_to_linear(db: f64) -> f64 {
    libm::pow(10.0, db / 10.0)
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn complex_gaussian(rng: &mut ChaCha8Rng, power: f64) -> C64 {
    let s = libm::sqrt(0.5 * power);
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(s * re, s * im)
}

fn qpsk(rng: &mut ChaCha8Rng, power: f64) -> C64 {
    let s = libm::sqrt(0.5 * power);
    let b: u8 = rng.random_range(0..4);
    C64::new(
        if b & 1 == 0 { s } else { -s },
        if b & 2 == 0 { s } else { -s },
    )
}

fn noise_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, power: f64) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng, power))
}

/// Source symbols and receiver noise for one realisation.
#[derive(Clone, Debug)]
struct SignalDraw {
    /// `(Q+1)×L`, desired source first.
    sources: CMatrix,
    /// `branches×L`.
    noise: CMatrix,
}

impl SignalDraw {
    fn sources(rng: &mut ChaCha8Rng, s: &Scenario) -> CMatrix {
        let powers = s.source_powers();
        let model = s.source_model;
        CMatrix::from_fn(powers.len(), s.snapshots, |i, _| match model {
            SourceModel::Gaussian => complex_gaussian(rng, powers[i]),
            SourceModel::Qpsk => qpsk(rng, powers[i]),
        })
    }

    /// `y(l) = W_RF^H A s(l) + n(l)` with `A` built from the true DOAs.
    fn observe(&self, s: &Scenario, wrf: &AnalogBeamformer) -> Result<CMatrix> {
        let branches = wrf.config().n_subarrays();
        if self.noise.nrows() != branches {
            return Err(Error::Dimension {
                expected: branches,
                found: self.noise.nrows(),
            });
        }
        let cfg = wrf.config();
        let mixing_cols: Vec<Vec<C64>> = s
            .true_angles()
            .into_iter()
            .map(|t| wrf.project(steering_vector(cfg, t).as_slice()))
            .collect::<Result<_>>()?;
        let mixing = CMatrix::from_fn(branches, mixing_cols.len(), |i, j| mixing_cols[j][i]);
        let mut y = mixing.matmul(&self.sources)?;
        for l in 0..y.ncols() {
            for (o, n) in y.column_mut(l).iter_mut().zip(self.noise.column(l)) {
                *o += n;
            }
        }
        Ok(y)
    }
}

/// `K×L` RF-chain snapshots through `wrf`, deterministic in `s.seed`.
///
/// Noise is `CN(0, σ_n²)` per RF chain, added after analog combining.
pub fn generate_snapshots(s: &Scenario, wrf: &AnalogBeamformer) -> Result<CMatrix> {
    s.validate()?;
    check_aperture(&s.cfg, wrf.config())?;
    let mut rng = trial_rng(s.seed, u64::MAX);
    let sources = SignalDraw::sources(&mut rng, s);
    let noise = noise_matrix(
        &mut rng,
        wrf.config().n_subarrays(),
        s.snapshots,
        s.noise_power,
    );
    SignalDraw { sources, noise }.observe(s, wrf)
}

fn check_aperture(scenario: &ArrayConfig, used: &ArrayConfig) -> Result<()> {
    if scenario.n_antennas() != used.n_antennas() {
        return Err(Error::Dimension {
            expected: scenario.n_antennas(),
            found: used.n_antennas(),
        });
    }
    Ok(())
}

/// Analytic output SINR in dB, scored against the true scenario.
///
/// `σ_d² |v^H a_d|² / (Σ_q σ_q² |v^H a_q|² + σ_n² ‖w_BB‖²)` with `v = W_RF w_BB`.
pub fn output_sinr(wrf: &AnalogBeamformer, wbb: &DigitalBeamformer, s: &Scenario) -> Result<f64> {
    check_aperture(&s.cfg, wrf.config())?;
    let v = wrf.combine(wbb)?;
    let noise_gain = wbb.norm_sqr();
    if noise_gain == 0.0 {
        return Err(Error::ZeroBeamformer);
    }
    let cfg = wrf.config();
    let response = |t: Angle| dot_h(v.as_slice(), steering_vector(cfg, t).as_slice()).norm_sqr();
    let signal = s.desired_power() * response(s.theta_d);
    let interference: f64 = s
        .interferer_thetas
        .iter()
        .zip(s.interferer_powers())
        .map(|(&t, p)| p * response(t))
        .sum();
    let denom = interference + s.noise_power * noise_gain;
    Ok(to_db(signal / denom))
}

/// Beam gain over `grid`, shifted so the largest value is 0 dB.
pub fn normalized_beam_pattern(
    wrf: &AnalogBeamformer,
    wbb: &DigitalBeamformer,
    cfg: &ArrayConfig,
    grid: &[Angle],
) -> Result<Vec<(Angle, f64)>> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: "angle grid is empty".into(),
        });
    }
    check_aperture(cfg, wrf.config())?;
    let v = wrf.combine(wbb)?;
    if v.as_slice().iter().all(|z| z.norm() == 0.0) {
        return Err(Error::ZeroBeamformer);
    }
    let powers: Vec<f64> = grid
        .iter()
        .map(|&t| dot_h(v.as_slice(), steering_vector(cfg, t).as_slice()).norm_sqr())
        .collect();
    let peak = powers.iter().cloned().fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(grid.iter().map(|&t| (t, GAIN_FLOOR_DB)).collect());
    }
    Ok(grid
        .iter()
        .zip(powers)
        .map(|(&t, p)| (t, to_db(p / peak)))
        .collect())
}

/// Beamformer construction strategies compared in the experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Robust design over the uniform error model.
    Robust,
    /// Same pipeline with `ε = 0`, exposed to the estimation errors.
    NspBaseline,
    /// Pointing phase shifters plus diagonal loading.
    DlBaseline,
    /// NSP pipeline run on the true DOAs.
    NspPerfectReference,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Robust,
        Method::NspBaseline,
        Method::DlBaseline,
        Method::NspPerfectReference,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Method::Robust => "robust",
            Method::NspBaseline => "nsp-baseline",
            Method::DlBaseline => "dl-baseline",
            Method::NspPerfectReference => "nsp-perfect-reference",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.id() == id)
    }
}

/// Receiver-side knobs shared by every method.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct MethodOptions {
    pub loading: DiagonalLoading,
    pub quadrature: QuadratureRule,
    /// Run the DL baseline on all N elements instead of through the pointing
    /// phase shifters.
    pub full_digital_dl: bool,
}

/// DOA estimates handed to the receiver.
#[derive(Clone, Debug, PartialEq)]
pub struct DoaEstimates {
    pub desired: Angle,
    pub interferers: Vec<Angle>,
}

/// All randomness of one Monte Carlo trial.
#[derive(Clone, Debug)]
pub struct Trial {
    pub index: u64,
    pub estimates: DoaEstimates,
    sources: CMatrix,
    subarray_noise: CMatrix,
    seed: u64,
}

impl Trial {
    /// Draws `Δθ ~ U[-ε, ε]` per source, sets `θ̂ = θ − Δθ`, then draws `L`
    /// snapshots worth of symbols and RF-chain noise.
    pub fn draw(s: &Scenario, index: u64) -> Self {
        let mut rng = trial_rng(s.seed, 2 * index);
        let eps = s.err.epsilon().radians();
        let mut estimate = |t: Angle| {
            let u: f64 = rng.random();
            t - Angle::from_radians(eps * (2.0 * u - 1.0))
        };
        let desired = estimate(s.theta_d);
        let interferers = s.interferer_thetas.iter().map(|&t| estimate(t)).collect();
        let sources = SignalDraw::sources(&mut rng, s);
        let subarray_noise =
            noise_matrix(&mut rng, s.cfg.n_subarrays(), s.snapshots, s.noise_power);
        Self {
            index,
            estimates: DoaEstimates {
                desired,
                interferers,
            },
            sources,
            subarray_noise,
            seed: s.seed,
        }
    }

    fn draw_for(&self, s: &Scenario, branches: usize) -> SignalDraw {
        let noise = if branches == self.subarray_noise.nrows() {
            self.subarray_noise.clone()
        } else {
            let mut rng = trial_rng(self.seed, 2 * self.index + 1);
            noise_matrix(&mut rng, branches, s.snapshots, s.noise_power)
        };
        SignalDraw {
            sources: self.sources.clone(),
            noise,
        }
    }

    /// Runs `method` on this trial's data and returns its design.
    pub fn design(
        &self,
        method: Method,
        s: &Scenario,
        opts: &MethodOptions,
    ) -> Result<HybridDesign> {
        let gamma = opts.loading.gamma(s.noise_power);
        let quad = &opts.quadrature;
        let (desired, interferers, err) = match method {
            Method::Robust => (
                self.estimates.desired,
                self.estimates.interferers.as_slice(),
                s.err,
            ),
            Method::NspBaseline | Method::DlBaseline => (
                self.estimates.desired,
                self.estimates.interferers.as_slice(),
                AngleErrorModel::PERFECT,
            ),
            Method::NspPerfectReference => (
                s.theta_d,
                s.interferer_thetas.as_slice(),
                AngleErrorModel::PERFECT,
            ),
        };
        let cfg = if method == Method::DlBaseline && opts.full_digital_dl {
            s.cfg.fully_digital()
        } else {
            s.cfg
        };
        let w0 = initial_analog_phases(&cfg, desired, &err);
        let y = self.draw_for(s, cfg.n_subarrays()).observe(s, &w0)?;
        let cov = sample_covariance(&y)?;
        match method {
            Method::DlBaseline => dl_baseline(&cfg, desired, &cov, gamma),
            Method::Robust => {
                robust_hybrid_adb(&cfg, desired, interferers, &err, quad, &cov, gamma)
            }
            Method::NspBaseline | Method::NspPerfectReference => {
                nsp_hybrid_baseline(&cfg, desired, interferers, quad, &cov, gamma)
            }
        }
    }

    /// Output SINR (dB) of `method` against the true scenario.
    pub fn sinr(&self, method: Method, s: &Scenario, opts: &MethodOptions) -> Result<f64> {
        let d = self.design(method, s, opts)?;
        output_sinr(&d.analog, &d.digital, s)
    }
}

/// Errors that mark a trial as degenerate rather than aborting the run.
pub fn is_degenerate(e: &Error) -> bool {
    matches!(
        e,
        Error::DegenerateGeometry | Error::DegenerateSteering | Error::IllConditioned
    )
}

/// Per-trial SINRs of one method.
#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarloReport {
    pub seed: u64,
    /// Successful trials only, in trial order.
    pub per_trial_sinr_db: Vec<f64>,
    pub failed_trials: usize,
}

impl MonteCarloReport {
    /// Collects per-trial outcomes; degenerate failures are counted, any other
    /// error aborts.
    pub fn from_outcomes(
        seed: u64,
        outcomes: impl IntoIterator<Item = Result<f64>>,
    ) -> Result<Self> {
        let mut per_trial_sinr_db = Vec::new();
        let mut failed_trials = 0;
        for o in outcomes {
            match o {
                Ok(v) => per_trial_sinr_db.push(v),
                Err(e) if is_degenerate(&e) => failed_trials += 1,
                Err(e) => return Err(e),
            }
        }
        Ok(Self {
            seed,
            per_trial_sinr_db,
            failed_trials,
        })
    }

    pub fn trials(&self) -> usize {
        self.per_trial_sinr_db.len() + self.failed_trials
    }

    /// NaN when every trial failed.
    pub fn mean(&self) -> f64 {
        mean(&self.per_trial_sinr_db)
    }

    pub fn std_error(&self) -> f64 {
        std_error(&self.per_trial_sinr_db)
    }
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub(crate) fn std_error(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64;
    libm::sqrt(var / n as f64)
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidParameter {
            name: "trials",
            reason: "need at least one trial".into(),
        });
    }
    Ok(())
}

/// Mean output SINR of `method` over `trials` independent DOA-error and
/// snapshot realisations.
pub fn monte_carlo_sinr(
    method: Method,
    s: &Scenario,
    trials: usize,
    opts: &MethodOptions,
) -> Result<MonteCarloReport> {
    s.validate()?;
    check_trials(trials)?;
    MonteCarloReport::from_outcomes(
        s.seed,
        (0..trials as u64).map(|t| Trial::draw(s, t).sinr(method, s, opts)),
    )
}

/// Root-mean-square SINR deviation (dB) from a reference method.
#[derive(Clone, Debug, PartialEq)]
pub struct RmseReport {
    pub seed: u64,
    /// `SINR_method − SINR_reference` per successful trial.
    pub deviations_db: Vec<f64>,
    pub failed_trials: usize,
}

impl RmseReport {
    pub fn from_outcomes(
        seed: u64,
        outcomes: impl IntoIterator<Item = (Result<f64>, Result<f64>)>,
    ) -> Result<Self> {
        let mut deviations_db = Vec::new();
        let mut failed_trials = 0;
        for (m, r) in outcomes {
            match (m, r) {
                (Ok(a), Ok(b)) => deviations_db.push(a - b),
                (Err(e), _) | (_, Err(e)) if !is_degenerate(&e) => return Err(e),
                _ => failed_trials += 1,
            }
        }
        Ok(Self {
            seed,
            deviations_db,
            failed_trials,
        })
    }

    pub fn rmse_db(&self) -> f64 {
        if self.deviations_db.is_empty() {
            return f64::NAN;
        }
        libm::sqrt(
            self.deviations_db.iter().map(|d| d * d).sum::<f64>() / self.deviations_db.len() as f64,
        )
    }

    /// Standard error of the RMSE by the delta method.
    pub fn std_error(&self) -> f64 {
        let sq: Vec<f64> = self.deviations_db.iter().map(|d| d * d).collect();
        let rmse = self.rmse_db();
        if rmse > 0.0 {
            std_error(&sq) / (2.0 * rmse)
        } else {
            0.0
        }
    }
}

/// RMSE of `method` against `reference`, both scored in the same trials.
pub fn rmse_vs_reference(
    method: Method,
    reference: Method,
    s: &Scenario,
    trials: usize,
    opts: &MethodOptions,
) -> Result<RmseReport> {
    s.validate()?;
    check_trials(trials)?;
    RmseReport::from_outcomes(
        s.seed,
        (0..trials as u64).map(|t| {
            let trial = Trial::draw(s, t);
            (trial.sinr(method, s, opts), trial.sinr(reference, s, opts))
        }),
    )
}
