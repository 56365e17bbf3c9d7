//! File formats: CSV eigenvalue lists, matrix JSON, report envelopes.
//!
//! Lists travel as CSV with one nonnegative decimal per line, nonincreasing
//! from top to bottom; readers validate the order and point at the offending
//! line. Matrices travel as JSON objects `{dim, entries}` with `entries` a
//! row-major array of `[re, im]` pairs. Reports are JSON envelopes
//! `{schema, command, config, results}` rendered with sorted keys, so a
//! fixed configuration produces byte-identical output.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::densop::HermitianMatrix;
use crate::eigenlist::EigenvalueList;
use crate::linalg::CMat;
use crate::{Error, Result};
use num_complex::Complex64;

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn parse_err(path: &Path, line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        reason: reason.into(),
    }
}

/// Parse CSV list text: one value per line, blank lines and `#` comments
/// skipped, order validated. `path` only labels errors.
pub fn parse_list_csv(text: &str, path: &Path) -> Result<EigenvalueList> {
    let mut values = Vec::new();
    let mut prev: Option<(f64, usize)> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value: f64 = line
            .parse()
            .map_err(|_| parse_err(path, line_no, format!("not a decimal number: {line:?}")))?;
        if !value.is_finite() {
            return Err(parse_err(path, line_no, "value must be finite"));
        }
        if value < 0.0 {
            return Err(parse_err(path, line_no, "list entries must be nonnegative"));
        }
        if let Some((p, p_line)) = prev {
            if value > p {
                return Err(parse_err(
                    path,
                    line_no,
                    format!("list must be nonincreasing: {value} exceeds {p} from line {p_line}"),
                ));
            }
        }
        prev = Some((value, line_no));
        values.push(value);
    }
    EigenvalueList::from_values(&values)
}

/// Read a CSV list file.
pub fn read_list_csv(path: &Path) -> Result<EigenvalueList> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_list_csv(&text, path)
}

/// Render a list as CSV, one shortest-round-trip decimal per line.
pub fn list_to_csv(list: &EigenvalueList) -> String {
    let mut out = String::new();
    for v in list.values() {
        out.push_str(&format!("{v}\n"));
    }
    out
}

/// Write a list as a CSV file.
pub fn write_list_csv(path: &Path, list: &EigenvalueList) -> Result<()> {
    std::fs::write(path, list_to_csv(list)).map_err(|e| io_err(path, e))
}

/// On-disk matrix form: dimension plus row-major `[re, im]` entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    /// Side length of the square matrix.
    pub dim: usize,
    /// `dim * dim` complex entries in row-major order.
    pub entries: Vec<[f64; 2]>,
}

impl MatrixJson {
    /// Snapshot a matrix.
    pub fn from_matrix(m: &CMat) -> Self {
        let dim = m.nrows();
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                entries.push([m[(r, c)].re, m[(r, c)].im]);
            }
        }
        Self { dim, entries }
    }

    /// Rebuild the dense matrix, checking the entry count.
    pub fn to_matrix(&self) -> Result<CMat> {
        if self.entries.len() != self.dim * self.dim {
            return Err(Error::ShapeMismatch {
                shape: vec![self.entries.len()],
                dim: self.dim * self.dim,
            });
        }
        let mut m = CMat::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                let [re, im] = self.entries[r * self.dim + c];
                m[(r, c)] = Complex64::new(re, im);
            }
        }
        Ok(m)
    }

    /// Rebuild and validate as Hermitian.
    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        HermitianMatrix::new(self.to_matrix()?)
    }
}

/// Read a matrix JSON file.
pub fn read_matrix_json(path: &Path) -> Result<MatrixJson> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| parse_err(path, e.line(), e.to_string()))
}

/// Write a matrix JSON file.
pub fn write_matrix_json(path: &Path, m: &CMat) -> Result<()> {
    let json = serde_json::to_string_pretty(&MatrixJson::from_matrix(m))
        .expect("matrix serialization cannot fail");
    std::fs::write(path, json + "\n").map_err(|e| io_err(path, e))
}

/// Assemble the versioned report envelope.
pub fn report_envelope(
    command: &str,
    config: serde_json::Value,
    results: serde_json::Value,
) -> serde_json::Value {
    serde_json::json!({
        "schema": 1,
        "command": command,
        "config": config,
        "results": results,
    })
}

/// Render a report deterministically: sorted keys, trailing newline.
pub fn render_report(report: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("report serialization cannot fail");
    text.push('\n');
    text
}

/// Write pre-rendered text, mapping failures to [`Error::Io`].
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cr;
    use approx::assert_relative_eq;

    #[test]
    fn list_round_trips_through_csv() {
        let list = EigenvalueList::from_values(&[0.45, 0.15, 0.15, 0.15, 0.05, 0.05]).unwrap();
        let text = list_to_csv(&list);
        let back = parse_list_csv(&text, Path::new("mem")).unwrap();
        assert_eq!(back.values(), list.values());
    }

    #[test]
    fn csv_parser_skips_blanks_and_comments() {
        let text = "# spectrum\n0.75\n\n  0.25\n";
        let list = parse_list_csv(text, Path::new("mem")).unwrap();
        assert_eq!(list.len(), 2);
        assert_relative_eq!(list.get(0), 0.75, epsilon = 1e-15);
    }

    #[test]
    fn csv_parser_reports_offending_line() {
        let bad_order = "0.25\n0.75\n";
        match parse_list_csv(bad_order, Path::new("mem")) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        let bad_token = "0.5\nabc\n";
        match parse_list_csv(bad_token, Path::new("mem")) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        let negative = "0.5\n-0.1\n";
        assert!(matches!(
            parse_list_csv(negative, Path::new("mem")),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn matrix_round_trips_through_json() {
        let mut m = CMat::zeros(2, 2);
        m[(0, 0)] = cr(0.25);
        m[(0, 1)] = Complex64::new(0.1, -0.3);
        m[(1, 0)] = Complex64::new(0.1, 0.3);
        m[(1, 1)] = cr(0.75);
        let json = MatrixJson::from_matrix(&m);
        let text = serde_json::to_string(&json).unwrap();
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        let rebuilt = back.to_hermitian().unwrap();
        assert!(crate::linalg::max_abs(&(rebuilt.matrix() - &m)) < 1e-15);
    }

    #[test]
    fn matrix_entry_count_is_checked() {
        let bad = MatrixJson {
            dim: 2,
            entries: vec![[1.0, 0.0]; 3],
        };
        assert!(matches!(bad.to_matrix(), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn files_round_trip_on_disk() {
        let dir = tempfile::tempdir().unwrap();
        let list_path = dir.path().join("list.csv");
        let list = EigenvalueList::from_values(&[0.6, 0.4]).unwrap();
        write_list_csv(&list_path, &list).unwrap();
        assert_eq!(read_list_csv(&list_path).unwrap().values(), list.values());

        let m_path = dir.path().join("m.json");
        let mut m = CMat::zeros(2, 2);
        m[(0, 1)] = Complex64::new(0.0, 1.0);
        m[(1, 0)] = Complex64::new(0.0, -1.0);
        write_matrix_json(&m_path, &m).unwrap();
        let back = read_matrix_json(&m_path).unwrap().to_matrix().unwrap();
        assert!(crate::linalg::max_abs(&(back - m)) < 1e-15);

        let missing = read_list_csv(&dir.path().join("absent.csv"));
        assert!(matches!(missing, Err(Error::Io { .. })));
    }

    #[test]
    fn report_envelope_shape_and_determinism() {
        let config = serde_json::json!({"seed": 7, "trials": 3});
        let results = serde_json::json!({"pass": true});
        let a = render_report(&report_envelope("verify", config.clone(), results.clone()));
        let b = render_report(&report_envelope("verify", config, results));
        assert_eq!(a, b);
        assert!(a.ends_with('\n'));
        let parsed: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(parsed["schema"], 1);
        assert_eq!(parsed["command"], "verify");
    }
}
