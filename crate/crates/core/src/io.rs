//! Plain-text CSV for series and tables.
//!
//! Numbers are written with 17 significant digits so that values read back
//! compare equal to the ones written.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::simulate::TimeSeries;

/// Round-trip decimal form of `v`.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV text with a header line and one line per row.
pub fn table_csv<R: AsRef<[f64]>>(header: &[&str], rows: &[R]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.as_ref().iter().map(|v| fmt_num(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Columns `t,x,y` or `t,x,y,phi`.
pub fn series_to_csv(ts: &TimeSeries) -> String {
    let mut out = String::with_capacity(ts.len() * 100);
    out.push_str(if ts.phi.is_some() { "t,x,y,phi\n" } else { "t,x,y\n" });
    for i in 0..ts.len() {
        let _ = write!(out, "{},{},{}", fmt_num(ts.t[i]), fmt_num(ts.x[i]), fmt_num(ts.y[i]));
        if let Some(p) = &ts.phi {
            let _ = write!(out, ",{}", fmt_num(p[i]));
        }
        out.push('\n');
    }
    out
}

/// Parse a series written by [`series_to_csv`]; `y` and `phi` are optional.
pub fn series_from_csv(text: &str) -> Result<TimeSeries> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| Error::InvalidArgument("empty CSV".into()))?
        .split(',')
        .map(str::trim)
        .collect();
    let col = |name: &str| header.iter().position(|h| *h == name);
    let (Some(it), Some(ix)) = (col("t"), col("x")) else {
        return Err(Error::InvalidArgument("CSV needs `t` and `x` columns".into()));
    };
    let (iy, ip) = (col("y"), col("phi"));
    let (mut t, mut x, mut y, mut phi) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (n, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != header.len() {
            return Err(Error::InvalidArgument(format!(
                "CSV line {} has {} fields, expected {}",
                n + 2,
                cells.len(),
                header.len()
            )));
        }
        let num = |i: usize| -> Result<f64> {
            cells[i].parse::<f64>().map_err(|_| {
                Error::InvalidArgument(format!("CSV line {}: `{}` is not a number", n + 2, cells[i]))
            })
        };
        t.push(num(it)?);
        x.push(num(ix)?);
        y.push(iy.map(num).transpose()?.unwrap_or(0.0));
        if let Some(i) = ip {
            phi.push(num(i)?);
        }
    }
    TimeSeries::from_columns(t, x, y, ip.map(|_| phi))
}
