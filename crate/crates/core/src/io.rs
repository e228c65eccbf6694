//! CSV ingestion and output formatting.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::gaussian::SampleSet;

/// Decimal text of `x` with 17 significant digits, enough to round-trip any
/// double. Non-finite values are written `inf`, `-inf`, `nan`.
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

/// Inverse of [`format_f64`]; also accepts anything `f64::from_str` does.
pub fn parse_f64(s: &str) -> Result<f64> {
    let t = s.trim();
    match t.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
        "nan" => Ok(f64::NAN),
        _ => t.parse().map_err(|_| Error::Parse(format!("not a number: `{t}`"))),
    }
}

/// Reads one observation per row. Lines starting with `#` are skipped. A
/// first row that does not parse as numbers is taken as a header.
pub fn read_samples<R: Read>(reader: R, sigma: f64) -> Result<SampleSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut data = Vec::new();
    let mut dim = None;
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: Result<Vec<f64>> = record.iter().map(parse_f64).collect();
        let row = match parsed {
            Ok(row) => row,
            Err(_) if line == 0 => continue,
            Err(e) => return Err(Error::Parse(format!("row {}: {e}", line + 1))),
        };
        if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
            return Err(Error::Parse(format!("row {}: non-finite value {bad}", line + 1)));
        }
        match dim {
            None => dim = Some(row.len()),
            Some(d) if d != row.len() => {
                return Err(Error::DimensionMismatch {
                    data: row.len(),
                    model: d,
                })
            }
            _ => {}
        }
        data.extend(row);
    }
    let dim = dim.ok_or_else(|| Error::invalid("input", "no observations found"))?;
    SampleSet::from_flat(data, dim, sigma)
}

pub fn read_samples_path(path: &Path, sigma: f64) -> Result<SampleSet> {
    read_samples(std::fs::File::open(path)?, sigma)
}

/// Writes `# key=value` comment lines.
pub fn write_echo<W: Write>(w: &mut W, echo: &[(String, String)]) -> Result<()> {
    for (k, v) in echo {
        writeln!(w, "# {k}={v}")?;
    }
    Ok(())
}
