//! Fixed-format CSV helpers shared by the history types.

use std::io::{self, Write};

/// Scientific notation with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "NaN".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

pub fn write_row<W: Write>(w: &mut W, values: &[f64]) -> io::Result<()> {
    let mut first = true;
    for v in values {
        if !first {
            w.write_all(b",")?;
        }
        first = false;
        w.write_all(fmt_f64(*v).as_bytes())?;
    }
    w.write_all(b"\n")
}

/// Parse every record of a headered numeric CSV, checking the header.
pub fn read_rows<R: io::Read>(r: R, header: &[&str]) -> crate::Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let got: Vec<String> = rdr.headers()?.iter().map(|s| s.trim().to_string()).collect();
    if got != header {
        return Err(crate::Error::Csv(format!(
            "unexpected header {got:?}, expected {header:?}"
        )));
    }
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|s| {
                s.trim().parse::<f64>().map_err(|e| {
                    crate::Error::Csv(format!("row {}: `{s}`: {e}", line + 2))
                })
            })
            .collect::<crate::Result<Vec<f64>>>()?;
        if row.len() != header.len() {
            return Err(crate::Error::Csv(format!("row {}: wrong field count", line + 2)));
        }
        out.push(row);
    }
    Ok(out)
}
