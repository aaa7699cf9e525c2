//! Gnuplot script next to each CSV.

use std::fmt::Write;
use std::path::Path;

use crate::config::{ExperimentId, SweepParameter};
use crate::experiment::ResultTable;
use crate::output::{write_atomically, OutputError};

fn axis_label(p: SweepParameter) -> &'static str {
    match p {
        SweepParameter::AngleDeg => "angle (deg)",
        SweepParameter::SnrDb => "SNR (dB)",
        SweepParameter::EpsilonDeg => "epsilon (deg)",
        SweepParameter::Snapshots => "snapshots L",
    }
}

/// A script that plots every metric column of `table` (read from `csv_name`)
/// against the sweep column and writes `<stem>.png`.
pub fn gnuplot_script(table: &ResultTable, experiment: ExperimentId, csv_name: &str) -> String {
    let stem = csv_name.strip_suffix(".csv").unwrap_or(csv_name);
    let ylabel = match experiment {
        ExperimentId::BeamPattern => "normalized gain (dB)",
        ExperimentId::RmseVsEpsilon => "RMSE (dB)",
        _ => "SINR (dB)",
    };
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set datafile commentschars '#'");
    let _ = writeln!(s, "set terminal pngcairo size 900,560");
    let _ = writeln!(s, "set output '{stem}.png'");
    let _ = writeln!(s, "set title '{experiment}'");
    let _ = writeln!(
        s,
        "set xlabel '{}'",
        axis_label(experiment.sweep_parameter())
    );
    let _ = writeln!(s, "set ylabel '{ylabel}'");
    let _ = writeln!(s, "set grid");
    let _ = writeln!(s, "set key outside right noenhanced autotitle columnhead");
    match experiment {
        ExperimentId::BeamPattern => {
            let _ = writeln!(s, "set xrange [-90:90]");
            let _ = writeln!(s, "set yrange [-80:0]");
        }
        ExperimentId::SinrVsSnapshots => {
            let _ = writeln!(s, "set logscale x 2");
        }
        _ => {}
    }
    let curves: Vec<String> = table
        .columns
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| !c.starts_with("stderr_"))
        .map(|(i, _)| {
            let style = if experiment == ExperimentId::BeamPattern {
                "lines"
            } else {
                "linespoints"
            };
            format!(
                "'{csv_name}' using 1:{} with {style} title columnhead({})",
                i + 1,
                i + 1
            )
        })
        .collect();
    let _ = writeln!(s, "plot {}", curves.join(", \\\n     "));
    s
}

/// Writes the script to `path`, pointing it at `csv_path`.
pub fn emit_gnuplot(
    table: &ResultTable,
    experiment: ExperimentId,
    csv_path: &Path,
    path: &Path,
) -> Result<(), OutputError> {
    let name = csv_path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| csv_path.display().to_string());
    write_atomically(path, gnuplot_script(table, experiment, &name).as_bytes())
}
