//! Flat `key = value` scenario files.
//!
//! One assignment per line, `#` starts a comment, lists are comma separated.
//! Angles take an optional `deg` or `rad` suffix (bare numbers are degrees).
//! Every key is optional; missing keys fall back to the reference scenario and
//! the per-experiment defaults in [`ExperimentId::defaults`]. See
//! `docs/config.md` for the full schema.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use hybridbf_core::{
    Angle, AngleErrorModel, ArrayConfig, DiagonalLoading, Method, MethodOptions, QuadratureRule,
    Scenario, SourceModel,
};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` is set twice")]
    DuplicateKey { line: usize, key: String },
    #[error("{field}: cannot parse {value:?}: {reason}")]
    Value {
        field: &'static str,
        value: String,
        reason: String,
    },
    #[error("{field}: {reason}")]
    Invalid { field: &'static str, reason: String },
}

type Result<T> = std::result::Result<T, ConfigError>;

/// The five reproducible experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExperimentId {
    BeamPattern,
    SinrVsSnr,
    SinrVsSnrRobust,
    RmseVsEpsilon,
    SinrVsSnapshots,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 5] = [
        ExperimentId::BeamPattern,
        ExperimentId::SinrVsSnr,
        ExperimentId::SinrVsSnrRobust,
        ExperimentId::RmseVsEpsilon,
        ExperimentId::SinrVsSnapshots,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ExperimentId::BeamPattern => "beam-pattern",
            ExperimentId::SinrVsSnr => "sinr-vs-snr",
            ExperimentId::SinrVsSnrRobust => "sinr-vs-snr-robust",
            ExperimentId::RmseVsEpsilon => "rmse-vs-epsilon",
            ExperimentId::SinrVsSnapshots => "sinr-vs-snapshots",
        }
    }

    /// The swept quantity.
    pub fn sweep_parameter(self) -> SweepParameter {
        match self {
            ExperimentId::BeamPattern => SweepParameter::AngleDeg,
            ExperimentId::SinrVsSnr | ExperimentId::SinrVsSnrRobust => SweepParameter::SnrDb,
            ExperimentId::RmseVsEpsilon => SweepParameter::EpsilonDeg,
            ExperimentId::SinrVsSnapshots => SweepParameter::Snapshots,
        }
    }

    /// Settings that differ from the reference scenario unless the config
    /// overrides them.
    pub fn defaults(self) -> ExperimentDefaults {
        let snr_grid = grid(-15.0, 15.0, 2.5);
        match self {
            ExperimentId::BeamPattern => ExperimentDefaults {
                epsilon_deg: 0.0,
                methods: vec![Method::Robust, Method::DlBaseline],
                sweep: grid(-90.0, 90.0, 0.1),
            },
            ExperimentId::SinrVsSnr => ExperimentDefaults {
                epsilon_deg: 0.0,
                methods: vec![Method::Robust, Method::DlBaseline],
                sweep: snr_grid,
            },
            ExperimentId::SinrVsSnrRobust => ExperimentDefaults {
                epsilon_deg: 3.0,
                methods: vec![
                    Method::Robust,
                    Method::NspBaseline,
                    Method::DlBaseline,
                    Method::NspPerfectReference,
                ],
                sweep: snr_grid,
            },
            ExperimentId::RmseVsEpsilon => ExperimentDefaults {
                epsilon_deg: 3.0,
                methods: vec![Method::Robust, Method::DlBaseline, Method::NspBaseline],
                sweep: (1..=10).map(f64::from).collect(),
            },
            ExperimentId::SinrVsSnapshots => ExperimentDefaults {
                epsilon_deg: 3.0,
                methods: vec![Method::Robust],
                sweep: (0..=8).map(|p| f64::from(1u32 << p)).collect(),
            },
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ExperimentId {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.id() == s)
            .ok_or_else(|| ConfigError::Value {
                field: "experiment",
                value: s.into(),
                reason: format!("expected one of {}", Self::ALL.map(|e| e.id()).join(", ")),
            })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentDefaults {
    pub epsilon_deg: f64,
    pub methods: Vec<Method>,
    pub sweep: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParameter {
    AngleDeg,
    SnrDb,
    EpsilonDeg,
    Snapshots,
}

impl SweepParameter {
    /// Column name of the sweep axis.
    pub fn column(self) -> &'static str {
        match self {
            SweepParameter::AngleDeg => "angle_deg",
            SweepParameter::SnrDb => "snr_db",
            SweepParameter::EpsilonDeg => "epsilon_deg",
            SweepParameter::Snapshots => "snapshots",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

/// A fully resolved and validated experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub experiment: ExperimentId,
    pub scenario: Scenario,
    pub sweep: Sweep,
    pub methods: Vec<Method>,
    pub trials: usize,
    pub options: MethodOptions,
    /// Desired-signal SNRs of the snapshot experiment, one curve each.
    pub snapshot_snrs_db: Vec<f64>,
    pub output: Option<PathBuf>,
}

pub const DEFAULT_TRIALS: usize = 1000;
pub const DEFAULT_SNAPSHOT_SNRS_DB: [f64; 3] = [-10.0, 0.0, 10.0];

const KEYS: &[&str] = &[
    "experiment",
    "n_antennas",
    "n_subarrays",
    "spacing",
    "theta_d",
    "interferers",
    "desired_snr_db",
    "interferer_snr_db",
    "noise_power",
    "epsilon",
    "snapshots",
    "seed",
    "trials",
    "gamma",
    "gamma_noise_mult",
    "quadrature_nodes",
    "source_model",
    "full_digital_dl",
    "methods",
    "sweep",
    "snapshot_snrs_db",
    "output",
];

pub fn is_key(key: &str) -> bool {
    KEYS.contains(&key)
}

/// Parsed but unresolved assignments, keyed by name.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawConfig {
    values: BTreeMap<&'static str, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                text: raw.trim().into(),
            })?;
            let key = key.trim();
            let known =
                KEYS.iter()
                    .find(|k| **k == key)
                    .ok_or_else(|| ConfigError::UnknownKey {
                        line,
                        key: key.into(),
                    })?;
            if values.insert(*known, value.trim().to_string()).is_some() {
                return Err(ConfigError::DuplicateKey {
                    line,
                    key: key.into(),
                });
            }
        }
        Ok(Self { values })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Sets `key`, replacing any value from the file.
    pub fn set(&mut self, key: &'static str, value: impl Into<String>) {
        debug_assert!(KEYS.contains(&key), "unknown key {key}");
        self.values.insert(key, value.into());
    }

    pub fn remove(&mut self, key: &str) {
        self.values.remove(key);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Applies defaults for `experiment` (or the file's `experiment` key when
    /// `None`) and validates everything.
    pub fn resolve(&self, experiment: Option<ExperimentId>) -> Result<ExperimentSpec> {
        let from_file = self.get("experiment").map(str::parse).transpose()?;
        let experiment = match (experiment, from_file) {
            (Some(a), Some(b)) if a != b => {
                return Err(ConfigError::Invalid {
                    field: "experiment",
                    reason: format!("config names `{b}` but `{a}` was requested"),
                })
            }
            (Some(a), _) => a,
            (None, Some(b)) => b,
            (None, None) => {
                return Err(ConfigError::Invalid {
                    field: "experiment",
                    reason: "no experiment given".into(),
                })
            }
        };
        let defaults = experiment.defaults();
        let reference = Scenario::reference();

        let n: usize = self
            .number("n_antennas")?
            .unwrap_or(reference.cfg.n_antennas());
        let k: usize = self
            .number("n_subarrays")?
            .unwrap_or(reference.cfg.n_subarrays());
        let spacing: f64 = self
            .number("spacing")?
            .unwrap_or(ArrayConfig::DEFAULT_SPACING);
        let cfg = array_config(n, k, spacing)?;

        let theta_d = self.angle("theta_d")?.unwrap_or(reference.theta_d);
        let interferer_thetas = match self.get("interferers") {
            Some(v) => parse_list(v, "interferers", parse_angle)?,
            None => reference.interferer_thetas.clone(),
        };
        let desired_snr_db = self
            .number("desired_snr_db")?
            .unwrap_or(reference.desired_snr_db);
        let interferer_snr_db = match self.get("interferer_snr_db") {
            Some(v) => {
                let list = parse_list(v, "interferer_snr_db", parse_number)?;
                if list.len() == 1 {
                    vec![list[0]; interferer_thetas.len()]
                } else {
                    list
                }
            }
            None => vec![15.0; interferer_thetas.len()],
        };
        let noise_power = self.number("noise_power")?.unwrap_or(reference.noise_power);
        let epsilon = self
            .angle("epsilon")?
            .unwrap_or(Angle::from_degrees(defaults.epsilon_deg));
        let err = AngleErrorModel::new(epsilon).map_err(|e| ConfigError::Invalid {
            field: "epsilon",
            reason: e.to_string(),
        })?;
        let snapshots = self.number("snapshots")?.unwrap_or(reference.snapshots);
        let seed = self.number("seed")?.unwrap_or(reference.seed);
        let source_model = match self.get("source_model") {
            None | Some("gaussian") => SourceModel::Gaussian,
            Some("qpsk") => SourceModel::Qpsk,
            Some(other) => {
                return Err(ConfigError::Value {
                    field: "source_model",
                    value: other.into(),
                    reason: "expected gaussian or qpsk".into(),
                })
            }
        };
        let scenario = Scenario {
            cfg,
            theta_d,
            interferer_thetas,
            desired_snr_db,
            interferer_snr_db,
            noise_power,
            err,
            snapshots,
            seed,
            source_model,
        };
        scenario.validate().map_err(|e| ConfigError::Invalid {
            field: scenario_field(&e),
            reason: e.to_string(),
        })?;

        let trials: usize = self.number("trials")?.unwrap_or(DEFAULT_TRIALS);
        if trials == 0 {
            return Err(ConfigError::Invalid {
                field: "trials",
                reason: "need at least one trial".into(),
            });
        }

        let loading = match (
            self.number::<f64>("gamma")?,
            self.number::<f64>("gamma_noise_mult")?,
        ) {
            (Some(_), Some(_)) => {
                return Err(ConfigError::Invalid {
                    field: "gamma",
                    reason: "set either gamma or gamma_noise_mult, not both".into(),
                })
            }
            (Some(g), None) => DiagonalLoading::Fixed(g),
            (None, Some(f)) => DiagonalLoading::NoiseMultiple(f),
            (None, None) => DiagonalLoading::default(),
        };
        loading.validate().map_err(|e| ConfigError::Invalid {
            field: match loading {
                DiagonalLoading::Fixed(_) => "gamma",
                DiagonalLoading::NoiseMultiple(_) => "gamma_noise_mult",
            },
            reason: e.to_string(),
        })?;
        let quadrature = match self.number::<usize>("quadrature_nodes")? {
            Some(q) => QuadratureRule::gauss_legendre(q).map_err(|e| ConfigError::Invalid {
                field: "quadrature_nodes",
                reason: e.to_string(),
            })?,
            None => QuadratureRule::default(),
        };
        let full_digital_dl = match self.get("full_digital_dl") {
            None => false,
            Some(v) => parse_bool(v, "full_digital_dl")?,
        };
        let options = MethodOptions {
            loading,
            quadrature,
            full_digital_dl,
        };

        let methods = match self.get("methods") {
            Some(v) => parse_list(v, "methods", |s| {
                Method::from_id(s).ok_or_else(|| {
                    format!(
                        "unknown method; expected one of {}",
                        Method::ALL.map(|m| m.id()).join(", ")
                    )
                })
            })?,
            None => defaults.methods.clone(),
        };
        if methods.is_empty() {
            return Err(ConfigError::Invalid {
                field: "methods",
                reason: "method list is empty".into(),
            });
        }
        if experiment == ExperimentId::RmseVsEpsilon
            && methods.contains(&Method::NspPerfectReference)
        {
            return Err(ConfigError::Invalid {
                field: "methods",
                reason: "nsp-perfect-reference is the RMSE reference and cannot be a method".into(),
            });
        }

        let values = match self.get("sweep") {
            Some(v) => parse_sweep(v)?,
            None => defaults.sweep.clone(),
        };
        let sweep = Sweep {
            parameter: experiment.sweep_parameter(),
            values,
        };
        check_sweep(&sweep)?;

        let snapshot_snrs_db = match self.get("snapshot_snrs_db") {
            Some(v) => parse_list(v, "snapshot_snrs_db", parse_number)?,
            None => DEFAULT_SNAPSHOT_SNRS_DB.to_vec(),
        };
        if experiment == ExperimentId::SinrVsSnapshots && snapshot_snrs_db.is_empty() {
            return Err(ConfigError::Invalid {
                field: "snapshot_snrs_db",
                reason: "need at least one SNR".into(),
            });
        }

        Ok(ExperimentSpec {
            experiment,
            scenario,
            sweep,
            methods,
            trials,
            options,
            snapshot_snrs_db,
            output: self.get("output").map(PathBuf::from),
        })
    }

    fn number<T: FromStr>(&self, field: &'static str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        self.get(field)
            .map(|v| parse_number(v).map_err(|reason| value_error(field, v, reason)))
            .transpose()
    }

    fn angle(&self, field: &'static str) -> Result<Option<Angle>> {
        self.get(field)
            .map(|v| parse_angle(v).map_err(|reason| value_error(field, v, reason)))
            .transpose()
    }
}

/// Reads, parses and resolves a config file; the experiment comes from its
/// `experiment` key.
pub fn load_scenario(path: &Path) -> Result<ExperimentSpec> {
    RawConfig::read(path)?.resolve(None)
}

/// Renders `spec` back into config syntax. Parsing the output reproduces
/// `spec` exactly.
pub fn render(spec: &ExperimentSpec) -> Vec<(&'static str, String)> {
    let s = &spec.scenario;
    let mut out = vec![
        ("experiment", spec.experiment.id().to_string()),
        ("n_antennas", s.cfg.n_antennas().to_string()),
        ("n_subarrays", s.cfg.n_subarrays().to_string()),
        ("spacing", fmt_f64(s.cfg.spacing_over_wavelength())),
        ("theta_d", fmt_rad(s.theta_d)),
        (
            "interferers",
            s.interferer_thetas
                .iter()
                .map(|&t| fmt_rad(t))
                .collect::<Vec<_>>()
                .join(", "),
        ),
        ("desired_snr_db", fmt_f64(s.desired_snr_db)),
        (
            "interferer_snr_db",
            s.interferer_snr_db
                .iter()
                .map(|&v| fmt_f64(v))
                .collect::<Vec<_>>()
                .join(", "),
        ),
        ("noise_power", fmt_f64(s.noise_power)),
        ("epsilon", fmt_rad(s.err.epsilon())),
        ("snapshots", s.snapshots.to_string()),
        ("seed", s.seed.to_string()),
        ("trials", spec.trials.to_string()),
    ];
    out.push(match spec.options.loading {
        DiagonalLoading::Fixed(g) => ("gamma", fmt_f64(g)),
        DiagonalLoading::NoiseMultiple(f) => ("gamma_noise_mult", fmt_f64(f)),
    });
    out.extend([
        (
            "quadrature_nodes",
            spec.options.quadrature.len().to_string(),
        ),
        (
            "source_model",
            match s.source_model {
                SourceModel::Gaussian => "gaussian",
                SourceModel::Qpsk => "qpsk",
            }
            .to_string(),
        ),
        ("full_digital_dl", spec.options.full_digital_dl.to_string()),
        (
            "methods",
            spec.methods
                .iter()
                .map(|m| m.id())
                .collect::<Vec<_>>()
                .join(", "),
        ),
        ("sweep", render_sweep(&spec.sweep.values)),
        (
            "snapshot_snrs_db",
            spec.snapshot_snrs_db
                .iter()
                .map(|&v| fmt_f64(v))
                .collect::<Vec<_>>()
                .join(", "),
        ),
    ]);
    out
}

// Shortest round-tripping representation.
fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

fn fmt_rad(a: Angle) -> String {
    format!("{:?}rad", a.radians())
}

fn value_error(field: &'static str, value: &str, reason: String) -> ConfigError {
    ConfigError::Value {
        field,
        value: value.into(),
        reason,
    }
}

fn array_config(n: usize, k: usize, spacing: f64) -> Result<ArrayConfig> {
    if n == 0 {
        return Err(ConfigError::Invalid {
            field: "n_antennas",
            reason: "must be positive".into(),
        });
    }
    if k == 0 {
        return Err(ConfigError::Invalid {
            field: "n_subarrays",
            reason: "must be positive".into(),
        });
    }
    if !n.is_multiple_of(k) {
        return Err(ConfigError::Invalid {
            field: "n_antennas",
            reason: format!("{n} antennas cannot be split evenly into n_subarrays = {k}"),
        });
    }
    ArrayConfig::with_spacing(n, k, spacing).map_err(|e| ConfigError::Invalid {
        field: "spacing",
        reason: e.to_string(),
    })
}

fn scenario_field(e: &hybridbf_core::Error) -> &'static str {
    match e {
        hybridbf_core::Error::InvalidParameter { name, .. } => match *name {
            "theta" => "theta_d/interferers",
            "snr_db" => "desired_snr_db/interferer_snr_db",
            other => other,
        },
        _ => "scenario",
    }
}

fn check_sweep(sweep: &Sweep) -> Result<()> {
    let invalid = |reason: String| ConfigError::Invalid {
        field: "sweep",
        reason,
    };
    if sweep.values.is_empty() {
        return Err(invalid("sweep has no values".into()));
    }
    for &v in &sweep.values {
        if !v.is_finite() {
            return Err(invalid(format!("{v} is not finite")));
        }
        match sweep.parameter {
            SweepParameter::AngleDeg if v.abs() > 90.0 => {
                return Err(invalid(format!("angle {v} deg is outside [-90, 90]")))
            }
            SweepParameter::EpsilonDeg if !(0.0..90.0).contains(&v) => {
                return Err(invalid(format!("epsilon {v} deg is outside [0, 90)")))
            }
            SweepParameter::Snapshots if v < 1.0 || v.fract() != 0.0 => {
                return Err(invalid(format!(
                    "snapshot count {v} is not a positive integer"
                )))
            }
            _ => {}
        }
    }
    Ok(())
}

fn parse_number<T: FromStr>(s: &str) -> std::result::Result<T, String>
where
    T::Err: fmt::Display,
{
    s.trim().parse::<T>().map_err(|e| e.to_string())
}

/// Degrees unless suffixed with `rad`.
pub fn parse_angle(s: &str) -> std::result::Result<Angle, String> {
    let s = s.trim();
    let (num, radians) = if let Some(v) = s.strip_suffix("rad") {
        (v, true)
    } else if let Some(v) = s.strip_suffix("deg").or_else(|| s.strip_suffix('°')) {
        (v, false)
    } else {
        (s, false)
    };
    let x: f64 = num.trim().parse().map_err(|e| format!("{e}"))?;
    if !x.is_finite() {
        return Err("angle must be finite".into());
    }
    Ok(if radians {
        Angle::from_radians(x)
    } else {
        Angle::from_degrees(x)
    })
}

fn parse_bool(s: &str, field: &'static str) -> Result<bool> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(value_error(field, s, "expected true or false".into())),
    }
}

/// Comma-separated list; an empty value or `none` is the empty list.
fn parse_list<T>(
    s: &str,
    field: &'static str,
    item: impl Fn(&str) -> std::result::Result<T, String>,
) -> Result<Vec<T>> {
    let s = s.trim();
    if s.is_empty() || s == "none" {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| item(p.trim()).map_err(|reason| value_error(field, p.trim(), reason)))
        .collect()
}

/// `lo, lo + step, …, hi`, with each point rounded to 1e-9 so decimal steps
/// land on clean values.
pub fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n)
        .map(|i| ((lo + step * i as f64) * 1e9).round() / 1e9)
        .collect()
}

/// Either a comma list or `start:step:stop`.
fn parse_sweep(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 1 {
        return parse_list(s, "sweep", parse_number);
    }
    let bad = |reason: &str| value_error("sweep", s, reason.into());
    let [lo, step, hi] = parts[..] else {
        return Err(bad("range must be start:step:stop"));
    };
    let lo: f64 = parse_number(lo).map_err(|e| bad(&e))?;
    let step: f64 = parse_number(step).map_err(|e| bad(&e))?;
    let hi: f64 = parse_number(hi).map_err(|e| bad(&e))?;
    if !(step > 0.0 && step.is_finite() && lo.is_finite() && hi >= lo) {
        return Err(bad("need finite start <= stop and a positive step"));
    }
    let n = (hi - lo) / step;
    if n > 1e6 || (n - n.round()).abs() > 1e-6 {
        return Err(bad("stop is not start plus a whole number of steps"));
    }
    Ok(grid(lo, hi, step))
}

/// Compact `start:step:stop` when `values` is such a grid.
fn render_sweep(values: &[f64]) -> String {
    if values.len() >= 3 {
        let step = ((values[1] - values[0]) * 1e9).round() / 1e9;
        let (lo, hi) = (values[0], values[values.len() - 1]);
        if step > 0.0 && grid(lo, hi, step) == values {
            return format!("{lo:?}:{step:?}:{hi:?}");
        }
    }
    values
        .iter()
        .map(|&v| fmt_f64(v))
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_reference_scenario() {
        let spec = RawConfig::parse("")
            .unwrap()
            .resolve(Some(ExperimentId::SinrVsSnrRobust))
            .unwrap();
        assert_eq!(spec.scenario, Scenario::reference());
        assert_eq!(spec.trials, DEFAULT_TRIALS);
        assert_eq!(spec.sweep.values.len(), 13);
    }

    #[test]
    fn degree_suffix() {
        let a = parse_angle("3deg").unwrap();
        assert!((a.radians() - 0.052_359_9).abs() < 1e-7);
        assert_eq!(parse_angle("3").unwrap(), a);
        assert_eq!(parse_angle("0.5rad").unwrap(), Angle::from_radians(0.5));
    }

    #[test]
    fn angle_grid_has_tenth_degree_steps() {
        let g = ExperimentId::BeamPattern.defaults().sweep;
        assert_eq!(g.len(), 1801);
        assert_eq!(g[0], -90.0);
        assert!((g[1200] - 30.0).abs() < 1e-9);
        assert_eq!(*g.last().unwrap(), 90.0);
    }

    #[test]
    fn comments_and_blank_lines() {
        let raw = RawConfig::parse("# header\n\n seed = 4 # trailing\n").unwrap();
        assert_eq!(raw.get("seed"), Some("4"));
    }
}
