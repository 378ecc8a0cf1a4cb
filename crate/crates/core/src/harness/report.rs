use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::estimate_orders;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Pretty,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "pretty" => Ok(Format::Pretty),
            _ => Err(Error::InvalidArgument(format!("unknown format `{s}`"))),
        }
    }
}

/// One ladder entry. Orders compare this row with the previous one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub k: f64,
    pub local: Option<f64>,
    pub local_order: Option<f64>,
    pub global: Option<f64>,
    pub global_order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ErrorReport {
    pub rows: Vec<ErrorRow>,
}

fn with_orders(errors: Option<&[f64]>, len: usize) -> Vec<(Option<f64>, Option<f64>)> {
    match errors {
        None => vec![(None, None); len],
        Some(e) => {
            let orders = estimate_orders(e);
            e.iter().enumerate().map(|(i, v)| (Some(*v), if i == 0 { None } else { orders[i - 1] })).collect()
        }
    }
}

impl ErrorReport {
    pub fn new(ks: &[f64], local: Option<&[f64]>, global: Option<&[f64]>) -> Self {
        let l = with_orders(local, ks.len());
        let g = with_orders(global, ks.len());
        let rows = ks
            .iter()
            .zip(l.into_iter().zip(g))
            .map(|(&k, ((local, local_order), (global, global_order)))| ErrorRow {
                k,
                local,
                local_order,
                global,
                global_order,
            })
            .collect();
        Self { rows }
    }

    pub fn ks(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.k).collect()
    }

    /// Local errors, if every row has one.
    pub fn local_errors(&self) -> Option<Vec<f64>> {
        self.rows.iter().map(|r| r.local).collect()
    }

    pub fn global_errors(&self) -> Option<Vec<f64>> {
        self.rows.iter().map(|r| r.global).collect()
    }

    /// Orders between neighbouring rows (length `rows - 1`).
    pub fn local_orders(&self) -> Vec<Option<f64>> {
        self.rows.iter().skip(1).map(|r| r.local_order).collect()
    }

    pub fn global_orders(&self) -> Vec<Option<f64>> {
        self.rows.iter().skip(1).map(|r| r.global_order).collect()
    }
}

const HEADER: [&str; 5] = ["k", "local_error", "local_order", "global_error", "global_order"];

fn full(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

/// `1.5838e-04` style: five significant digits, two-digit signed exponent.
fn sci5(x: f64) -> String {
    let s = format!("{x:.4e}");
    match s.split_once('e') {
        Some((mant, exp)) => {
            let e: i32 = exp.parse().unwrap_or(0);
            format!("{mant}e{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
        }
        None => s,
    }
}

pub fn emit_report(report: &ErrorReport, format: Format) -> String {
    match format {
        Format::Csv => emit_csv(report),
        Format::Pretty => emit_pretty(report),
    }
}

fn emit_csv(report: &ErrorReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER).expect("write to memory");
    for r in &report.rows {
        w.write_record([full(Some(r.k)), full(r.local), full(r.local_order), full(r.global), full(r.global_order)])
            .expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("ASCII output")
}

fn emit_pretty(report: &ErrorReport) -> String {
    let mut lines: Vec<Vec<String>> =
        vec![std::iter::once(String::new()).chain(report.rows.iter().map(|r| format!("k={}", sci5(r.k)))).collect()];
    let mut add = |label: &str, f: &dyn Fn(&ErrorRow) -> Option<f64>, order: bool| {
        if report.rows.iter().all(|r| f(r).is_none()) && !order {
            return false;
        }
        let cells = report.rows.iter().map(|r| match f(r) {
            Some(v) if order => format!("{v:.4}"),
            Some(v) => sci5(v),
            None => String::new(),
        });
        lines.push(std::iter::once(label.to_string()).chain(cells).collect());
        true
    };
    if add("L∞-local error", &|r| r.local, false) {
        add("Order", &|r| r.local_order, true);
    }
    if add("L∞-global error", &|r| r.global, false) {
        add("Order", &|r| r.global_order, true);
    }
    let cols = lines[0].len();
    let widths: Vec<usize> = (0..cols).map(|c| lines.iter().map(|l| l[c].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for l in &lines {
        let cells: Vec<String> =
            l.iter().zip(&widths).map(|(s, w)| format!("{s}{}", " ".repeat(w - s.chars().count()))).collect();
        let _ = writeln!(out, "{}", cells.join(" | ").trim_end());
    }
    out
}

/// Reads back the CSV written by [`emit_report`].
pub fn parse_csv(text: &str) -> Result<ErrorReport> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    if header.iter().ne(HEADER) {
        return Err(Error::InvalidArgument(format!("unexpected CSV header {header:?}")));
    }
    let cell = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|_| Error::InvalidArgument(format!("bad number `{s}`")))
        }
    };
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::InvalidArgument(e.to_string()))?;
        rows.push(ErrorRow {
            k: cell(&rec[0])?.ok_or_else(|| Error::InvalidArgument("missing k".into()))?,
            local: cell(&rec[1])?,
            local_order: cell(&rec[2])?,
            global: cell(&rec[3])?,
            global_order: cell(&rec[4])?,
        });
    }
    Ok(ErrorReport { rows })
}
