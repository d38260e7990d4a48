//! Deterministic output writers: RFC-4180 CSV files and JSON run manifests.
//!
//! Floats are rendered with the shortest round-trip representation and a '.'
//! decimal separator regardless of locale, so identical inputs always yield
//! byte-identical files. Manifests deliberately contain no wall-clock
//! timings; reproducibility proxies (residuals, warnings, output listing)
//! stand in for them.

use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

/// Shortest round-trip float rendering; infinities render as `inf`/`-inf`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let mut s = format!("{v}");
    // keep integral values visibly floating point
    if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN") {
        s.push_str(".0");
    }
    s
}

fn escape_field(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') || field.contains('\r') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Renders header + rows as RFC-4180 text (CRLF line endings, mandatory
/// header row).
pub fn render_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(
        &header
            .iter()
            .map(|h| escape_field(h))
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push_str("\r\n");
    for row in rows {
        debug_assert_eq!(row.len(), header.len(), "CSV row width mismatch");
        out.push_str(
            &row.iter()
                .map(|f| escape_field(f))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push_str("\r\n");
    }
    out
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> std::io::Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(render_csv(header, rows).as_bytes())?;
    Ok(())
}

/// Reproducibility manifest written next to every output file.
///
/// Field order is fixed by declaration order, making serialization
/// deterministic. No wall-clock runtimes are recorded — they would break the
/// byte-identical rerun contract.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub threads: usize,
    /// Resolved configuration echo, internal units.
    pub config: String,
    /// Output files produced by the run, in write order.
    pub outputs: Vec<String>,
    /// Largest relative eigenpair residual encountered (0 when no
    /// eigensolve ran).
    pub residual_max: f64,
    pub warnings: Vec<String>,
}

impl Manifest {
    pub fn new(command: &str, seed: u64, threads: usize, config: String) -> Self {
        Manifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            threads,
            config,
            outputs: Vec::new(),
            residual_max: 0.0,
            warnings: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serialization");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json())
    }
}
