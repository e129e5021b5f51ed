use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Number, Value};

use super::sweep::SweepRow;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::InvalidArgument(format!("unknown format `{s}` (expected csv or json)"))),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        })
    }
}

/// Formats like C's `%.9g`: nine significant digits, trailing zeros removed,
/// scientific notation outside `1e-4 <= |x| < 1e9`.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent in scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Ordered (column, value) pairs of one row.
fn cells(row: &SweepRow) -> Vec<(String, f64)> {
    let mut out = vec![("value".to_string(), row.value)];
    for col in &row.schemes {
        let p = col.scheme.prefix();
        out.push((format!("{p}_c_d"), col.c_d));
        if let Some(a) = col.analytic {
            out.push((format!("{p}_c_soc_analytic"), a.c_soc_analytic));
            out.push((format!("{p}_p0_analytic"), a.p0_analytic));
        }
        if let Some(m) = col.mc {
            out.push((format!("{p}_c_soc_mc"), m.c_soc_mc));
            out.push((format!("{p}_c_soc_mc_stderr"), m.c_soc_mc_stderr));
            out.push((format!("{p}_p0_mc"), m.p0_mc));
            out.push((format!("{p}_p0_mc_stderr"), m.p0_mc_stderr));
        }
    }
    out
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidArgument(format!("csv encoding failed: {other:?}")),
    }
}

/// Serializes rows in grid order. Output bytes depend only on the rows.
pub fn render_report(rows: &[SweepRow], format: ReportFormat) -> Result<Vec<u8>> {
    let first = rows
        .first()
        .ok_or_else(|| Error::InvalidArgument("cannot emit a report with no rows".into()))?;
    let header: Vec<String> = cells(first).into_iter().map(|(k, _)| k).collect();
    for row in rows {
        let keys: Vec<String> = cells(row).into_iter().map(|(k, _)| k).collect();
        if keys != header {
            return Err(Error::InvalidArgument("rows do not share one column layout".into()));
        }
    }

    match format {
        ReportFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            w.write_record(&header).map_err(csv_error)?;
            for row in rows {
                w.write_record(cells(row).iter().map(|(_, v)| format_sig9(*v)))
                    .map_err(csv_error)?;
            }
            w.into_inner()
                .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
        }
        ReportFormat::Json => {
            let array: Vec<Value> = rows
                .iter()
                .map(|row| {
                    let mut obj = Map::new();
                    for (k, v) in cells(row) {
                        let rounded: f64 = format_sig9(v).parse().expect("formatted float parses");
                        let num = Number::from_f64(rounded).ok_or_else(|| {
                            Error::Domain(format!("column {k} is not finite: {v}"))
                        })?;
                        obj.insert(k, Value::Number(num));
                    }
                    Ok(Value::Object(obj))
                })
                .collect::<Result<_>>()?;
            let mut bytes = serde_json::to_vec_pretty(&array)
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
    }
}

/// Writes the report atomically (temp file in the destination directory,
/// then rename) and returns the number of bytes written.
pub fn emit_report(rows: &[SweepRow], format: ReportFormat, destination: &Path) -> Result<usize> {
    let bytes = render_report(rows, format)?;
    let dir = match destination.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(&bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(destination).map_err(|e| Error::Io(e.error))?;
    Ok(bytes.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::Scheme;
    use crate::cli::sweep::{AnalyticColumns, SchemeColumns};

    #[test]
    fn sig9_matches_printf_g() {
        let cases = [
            (34246.462614071_9, "34246.4626"),
            (122099.384910636, "122099.385"),
            (0.1, "0.1"),
            (100.0, "100"),
            (-8609.832767388, "-8609.83277"),
            (8.19401262399052e-40, "8.19401262e-40"),
            (0.99999000005, "0.99999"),
            (1.0e9, "1e9"),
            (999999999.5, "1e9"),
            (123456789.0, "123456789"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-5"),
        ];
        for (x, want) in cases {
            assert_eq!(format_sig9(x), want, "{x}");
        }
    }

    fn row(v: f64) -> SweepRow {
        SweepRow {
            value: v,
            schemes: vec![SchemeColumns {
                scheme: Scheme::Af,
                c_d: 2.0 * v,
                analytic: Some(AnalyticColumns { c_soc_analytic: v, p0_analytic: 0.5 }),
                mc: None,
            }],
        }
    }

    #[test]
    fn csv_layout() {
        let bytes = render_report(&[row(1.0), row(2.5)], ReportFormat::Csv).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        assert_eq!(
            text,
            "value,af_c_d,af_c_soc_analytic,af_p0_analytic\n1,2,1,0.5\n2.5,5,2.5,0.5\n"
        );
    }

    #[test]
    fn json_layout() {
        let bytes = render_report(&[row(1.0)], ReportFormat::Json).unwrap();
        let v: Value = serde_json::from_slice(&bytes).unwrap();
        let obj = v[0].as_object().unwrap();
        let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        assert_eq!(keys, ["value", "af_c_d", "af_c_soc_analytic", "af_p0_analytic"]);
        assert_eq!(obj["af_c_d"], 2.0);
    }

    #[test]
    fn empty_rows_rejected() {
        assert!(render_report(&[], ReportFormat::Csv).is_err());
        let dir = tempfile::tempdir().unwrap();
        assert!(emit_report(&[], ReportFormat::Json, &dir.path().join("x.json")).is_err());
    }

    #[test]
    fn writes_and_counts_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let n = emit_report(&[row(1.0)], ReportFormat::Csv, &path).unwrap();
        assert_eq!(std::fs::read(&path).unwrap().len(), n);
    }

    #[test]
    fn unwritable_destination_is_io_error() {
        let e = emit_report(&[row(1.0)], ReportFormat::Csv, Path::new("/nonexistent-dir/x/out.csv"))
            .unwrap_err();
        assert_eq!(e.exit_code(), 4);
    }
}
