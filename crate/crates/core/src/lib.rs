//! Robust hybrid analog/digital receive beamforming for uniform linear arrays.
//!
//! A sub-connected receiver has `N` antennas split into `K` subarrays, each
//! feeding one RF chain through per-antenna phase shifters. This crate designs
//! the phase shifters and the `K` digital weights so that co-channel
//! interferers are nulled while the desired signal is kept, with the
//! directions of arrival known only to within a uniform error `±ε`.
//!
//! The crate is `no_std` (it needs `alloc`) and performs no I/O. The
//! `hybridbf` crate carries configuration files, CSV output and the CLI.
//!
//! ```
//! use hybridbf_core::{Method, MethodOptions, Scenario, Trial};
//!
//! let scenario = Scenario::reference();
//! let trial = Trial::draw(&scenario, 0);
//! let sinr = trial.sinr(Method::Robust, &scenario, &MethodOptions::default()).unwrap();
//! assert!(sinr > 0.0);
//! ```

#![no_std]

extern crate alloc;

pub mod array;
pub mod beamformer;
mod error;
pub mod expectation;
pub mod linalg;
pub mod quadrature;
pub mod sim;

pub use array::{
    assemble_analog, beam_gain, effective_beamformer, steering_vector, subarray_steering,
    AnalogBeamformer, Angle, ArrayConfig, DigitalBeamformer, SteeringVector, TotalBeamformer,
    GAIN_FLOOR_DB,
};
pub use beamformer::{
    dl_baseline, dl_digital_beamformer, extract_analog_phases, initial_analog_phases,
    nsp_hybrid_baseline, nsp_total_beamformer, null_space_basis, robust_hybrid_adb,
    sample_covariance, DiagonalLoading, HybridDesign, NullSpaceBasis, PhaseExtraction,
    SampleCovariance,
};
pub use error::{Error, Result};
pub use expectation::{
    expected_interference_matrix, expected_sin, expected_steering, AngleErrorModel,
    ExpectedInterferenceMatrix, ExpectedSteering,
};
pub use linalg::{CMatrix, C64};
pub use quadrature::QuadratureRule;
pub use sim::{
    generate_snapshots, monte_carlo_sinr, normalized_beam_pattern, output_sinr, rmse_vs_reference,
    DoaEstimates, Method, MethodOptions, MonteCarloReport, RmseReport, Scenario, SourceModel,
    Trial,
};
