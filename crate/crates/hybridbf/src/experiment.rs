//! Sweep runners behind the five experiments.
//!
//! Trials run in parallel with rayon; per-trial results are collected in trial
//! order before any reduction, so tables are identical for any thread count.

use std::time::{SystemTime, UNIX_EPOCH};

use hybridbf_core::{
    normalized_beam_pattern, Angle, AngleErrorModel, Method, MonteCarloReport, RmseReport,
    Scenario, Trial,
};
use rayon::prelude::*;

use crate::config::{self, ExperimentId, ExperimentSpec};

pub const VERSION: &str = concat!("v", env!("CARGO_PKG_VERSION"));

/// Reference method for the RMSE experiment.
pub const RMSE_REFERENCE: Method = Method::NspPerfectReference;

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("{context}: {source}")]
    Core {
        context: String,
        source: hybridbf_core::Error,
    },
    #[error("invalid experiment setup: {0}")]
    Config(#[from] config::ConfigError),
}

/// Column-oriented results plus the metadata needed to rerun them.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Ordered `key = value` pairs written as comment lines.
    pub metadata: Vec<(String, String)>,
}

impl ResultTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Rebuilds the spec recorded in the metadata.
    pub fn spec(&self) -> Result<ExperimentSpec, config::ConfigError> {
        let text: String = self
            .metadata
            .iter()
            .filter(|(k, _)| config::is_key(k))
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect();
        config::RawConfig::parse(&text)?.resolve(None)
    }
}

/// Short method label used in column names.
pub fn short_name(m: Method) -> &'static str {
    match m {
        Method::Robust => "robust",
        Method::NspBaseline => "nsp",
        Method::DlBaseline => "dl",
        Method::NspPerfectReference => "nsp_ref",
    }
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ResultTable, ExperimentError> {
    let started = std::time::Instant::now();
    let mut failures = vec![0usize; spec.methods.len()];
    let (columns, rows) = match spec.experiment {
        ExperimentId::BeamPattern => beam_pattern(spec)?,
        ExperimentId::SinrVsSnr | ExperimentId::SinrVsSnrRobust => {
            sinr_vs_snr(spec, &mut failures)?
        }
        ExperimentId::RmseVsEpsilon => rmse_vs_epsilon(spec, &mut failures)?,
        ExperimentId::SinrVsSnapshots => sinr_vs_snapshots(spec, &mut failures)?,
    };
    log::info!(
        "{} finished in {:.2?}: {} rows",
        spec.experiment,
        started.elapsed(),
        rows.len()
    );

    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut metadata = vec![
        ("version".to_string(), VERSION.to_string()),
        ("timestamp".to_string(), timestamp.to_string()),
    ];
    metadata.extend(
        config::render(spec)
            .into_iter()
            .map(|(k, v)| (k.to_string(), v)),
    );
    if spec.experiment == ExperimentId::RmseVsEpsilon {
        metadata.push(("rmse_reference".into(), RMSE_REFERENCE.id().into()));
    }
    for (m, f) in spec.methods.iter().zip(&failures) {
        if *f > 0 {
            log::warn!("{}: {f} degenerate trials excluded", m.id());
        }
        metadata.push((format!("failed_trials_{}", short_name(*m)), f.to_string()));
    }
    Ok(ResultTable {
        columns,
        rows,
        metadata,
    })
}

type Table = (Vec<String>, Vec<Vec<f64>>);

fn core_err(context: impl Into<String>) -> impl FnOnce(hybridbf_core::Error) -> ExperimentError {
    let context = context.into();
    move |source| ExperimentError::Core { context, source }
}

/// Gains of every method's trial-0 design over the angle grid.
fn beam_pattern(spec: &ExperimentSpec) -> Result<Table, ExperimentError> {
    let s = &spec.scenario;
    let grid: Vec<Angle> = spec
        .sweep
        .values
        .iter()
        .map(|&d| Angle::from_degrees(d))
        .collect();
    let trial = Trial::draw(s, 0);
    let patterns = spec
        .methods
        .par_iter()
        .map(|&m| {
            let d = trial
                .design(m, s, &spec.options)
                .map_err(core_err(format!("{} design", m.id())))?;
            let cfg = *d.analog.config();
            normalized_beam_pattern(&d.analog, &d.digital, &cfg, &grid)
                .map_err(core_err(format!("{} pattern", m.id())))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut columns = vec![spec.sweep.parameter.column().to_string()];
    columns.extend(
        spec.methods
            .iter()
            .map(|m| format!("gain_{}_db", short_name(*m))),
    );
    let rows = spec
        .sweep
        .values
        .iter()
        .enumerate()
        .map(|(i, &deg)| {
            let mut row = vec![deg];
            row.extend(patterns.iter().map(|p| p[i].1));
            row
        })
        .collect();
    Ok((columns, rows))
}

/// Runs every method on each trial of `s`; element `j` of the result is the
/// report for `methods[j]`.
fn monte_carlo(
    s: &Scenario,
    methods: &[Method],
    spec: &ExperimentSpec,
) -> Result<Vec<MonteCarloReport>, ExperimentError> {
    let per_trial: Vec<Vec<_>> = (0..spec.trials as u64)
        .into_par_iter()
        .map(|t| {
            let trial = Trial::draw(s, t);
            methods
                .iter()
                .map(|&m| trial.sinr(m, s, &spec.options))
                .collect()
        })
        .collect();
    methods
        .iter()
        .enumerate()
        .map(|(j, m)| {
            MonteCarloReport::from_outcomes(s.seed, per_trial.iter().map(|o| o[j].clone()))
                .map_err(core_err(m.id()))
        })
        .collect()
}

fn sinr_vs_snr(spec: &ExperimentSpec, failures: &mut [usize]) -> Result<Table, ExperimentError> {
    let mut columns = vec![spec.sweep.parameter.column().to_string()];
    columns.extend(
        spec.methods
            .iter()
            .map(|m| format!("sinr_{}_db", short_name(*m))),
    );
    columns.extend(
        spec.methods
            .iter()
            .map(|m| format!("stderr_{}_db", short_name(*m))),
    );
    let mut rows = Vec::with_capacity(spec.sweep.values.len());
    for &snr in &spec.sweep.values {
        let mut s = spec.scenario.clone();
        s.desired_snr_db = snr;
        let reports = monte_carlo(&s, &spec.methods, spec)?;
        let mut row = vec![snr];
        row.extend(reports.iter().map(MonteCarloReport::mean));
        row.extend(reports.iter().map(MonteCarloReport::std_error));
        for (f, r) in failures.iter_mut().zip(&reports) {
            *f += r.failed_trials;
        }
        log::debug!("snr {snr} dB done");
        rows.push(row);
    }
    Ok((columns, rows))
}

fn rmse_vs_epsilon(
    spec: &ExperimentSpec,
    failures: &mut [usize],
) -> Result<Table, ExperimentError> {
    let mut columns = vec![spec.sweep.parameter.column().to_string()];
    columns.extend(
        spec.methods
            .iter()
            .map(|m| format!("rmse_{}_db", short_name(*m))),
    );
    columns.extend(
        spec.methods
            .iter()
            .map(|m| format!("stderr_{}_db", short_name(*m))),
    );
    let mut rows = Vec::with_capacity(spec.sweep.values.len());
    for &eps in &spec.sweep.values {
        let mut s = spec.scenario.clone();
        s.err = AngleErrorModel::from_degrees(eps).map_err(core_err("epsilon sweep"))?;
        let per_trial: Vec<_> = (0..spec.trials as u64)
            .into_par_iter()
            .map(|t| {
                let trial = Trial::draw(&s, t);
                let reference = trial.sinr(RMSE_REFERENCE, &s, &spec.options);
                let scores: Vec<_> = spec
                    .methods
                    .iter()
                    .map(|&m| trial.sinr(m, &s, &spec.options))
                    .collect();
                (reference, scores)
            })
            .collect();
        let reports = spec
            .methods
            .iter()
            .enumerate()
            .map(|(j, m)| {
                RmseReport::from_outcomes(
                    s.seed,
                    per_trial
                        .iter()
                        .map(|(r, scores)| (scores[j].clone(), r.clone())),
                )
                .map_err(core_err(m.id()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut row = vec![eps];
        row.extend(reports.iter().map(RmseReport::rmse_db));
        row.extend(reports.iter().map(RmseReport::std_error));
        for (f, r) in failures.iter_mut().zip(&reports) {
            *f += r.failed_trials;
        }
        log::debug!("epsilon {eps} deg done");
        rows.push(row);
    }
    Ok((columns, rows))
}

fn snr_label(snr: f64) -> String {
    format!("snr{snr}")
}

fn sinr_vs_snapshots(
    spec: &ExperimentSpec,
    failures: &mut [usize],
) -> Result<Table, ExperimentError> {
    let mut columns = vec![spec.sweep.parameter.column().to_string()];
    for prefix in ["sinr", "stderr"] {
        for m in &spec.methods {
            for &snr in &spec.snapshot_snrs_db {
                columns.push(format!("{prefix}_{}_{}_db", short_name(*m), snr_label(snr)));
            }
        }
    }
    let mut rows = Vec::with_capacity(spec.sweep.values.len());
    for &l in &spec.sweep.values {
        let mut means = vec![Vec::new(); spec.methods.len()];
        let mut errs = vec![Vec::new(); spec.methods.len()];
        for &snr in &spec.snapshot_snrs_db {
            let mut s = spec.scenario.clone();
            s.snapshots = l as usize;
            s.desired_snr_db = snr;
            let reports = monte_carlo(&s, &spec.methods, spec)?;
            for (j, r) in reports.iter().enumerate() {
                means[j].push(r.mean());
                errs[j].push(r.std_error());
                failures[j] += r.failed_trials;
            }
        }
        log::debug!("L = {l} done");
        let mut row = vec![l];
        row.extend(means.into_iter().flatten());
        row.extend(errs.into_iter().flatten());
        rows.push(row);
    }
    Ok((columns, rows))
}
