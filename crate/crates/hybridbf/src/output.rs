//! CSV files with `# key = value` metadata headers.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::experiment::ResultTable;

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: {reason}")]
    Malformed { path: PathBuf, reason: String },
}

/// Rounds to 6 significant digits and prints the shortest decimal that
/// reads back as the rounded value.
pub fn format_value(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.5e}").parse().expect("formatted float parses");
    rounded.to_string()
}

/// Renders the whole file in memory.
pub fn render_csv(table: &ResultTable) -> Result<Vec<u8>, csv::Error> {
    let mut buf = Vec::new();
    for (k, v) in &table.metadata {
        writeln!(buf, "# {k} = {v}")?;
    }
    let mut w = csv::Writer::from_writer(&mut buf);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|&v| format_value(v)))?;
    }
    w.flush()?;
    drop(w);
    Ok(buf)
}

/// Writes `table` to `path`. The file appears only once it is complete.
pub fn emit_csv(table: &ResultTable, path: &Path) -> Result<(), OutputError> {
    let bytes = render_csv(table).map_err(|source| OutputError::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    write_atomically(path, &bytes)
}

pub(crate) fn write_atomically(path: &Path, bytes: &[u8]) -> Result<(), OutputError> {
    let io_err = |source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

/// Reads a file written by [`emit_csv`].
pub fn read_csv(path: &Path) -> Result<ResultTable, OutputError> {
    let text = fs::read_to_string(path).map_err(|source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv(&text).map_err(|reason| OutputError::Malformed {
        path: path.to_path_buf(),
        reason,
    })
}

pub fn parse_csv(text: &str) -> Result<ResultTable, String> {
    let mut metadata = Vec::new();
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        let body = line[1..].trim();
        let (k, v) = body
            .split_once(" = ")
            .ok_or_else(|| format!("metadata line without ` = `: {line:?}"))?;
        metadata.push((k.trim().to_string(), v.trim().to_string()));
    }
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let columns: Vec<String> = r
        .headers()
        .map_err(|e| e.to_string())?
        .iter()
        .map(String::from)
        .collect();
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let row = rec
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|e| format!("row {}: {f:?}: {e}", i + 1))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(ResultTable {
        columns,
        rows,
        metadata,
    })
}
