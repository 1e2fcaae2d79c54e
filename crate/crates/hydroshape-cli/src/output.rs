//! Rendering: fixed-width tables (9 significant digits), RFC-4180 CSV and
//! JSON with 17-significant-digit round-trip-exact numbers.

use serde::{Serialize, Serializer};

use hydroshape::{ComplexityReport, MeasureResult};

use crate::CliError;

/// f64 serialized as a JSON number with 17 significant digits.
#[derive(Clone, Copy, Debug)]
pub struct F17(pub f64);

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            // JSON has no non-finite numbers
            return serializer.serialize_str(if self.0.is_nan() {
                "nan"
            } else if self.0 > 0.0 {
                "inf"
            } else {
                "-inf"
            });
        }
        let text = format!("{:.16e}", self.0);
        let number: serde_json::Number =
            text.parse().map_err(|_| serde::ser::Error::custom("unrepresentable value"))?;
        number.serialize(serializer)
    }
}

pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn fmt9(v: f64) -> String {
    format!("{v:.8e}")
}

#[derive(Serialize)]
pub struct JsonMeasure {
    pub value: F17,
    pub err_est: F17,
    pub method: &'static str,
}

impl From<MeasureResult> for JsonMeasure {
    fn from(m: MeasureResult) -> Self {
        JsonMeasure { value: F17(m.value), err_est: F17(m.err_est), method: m.method.label() }
    }
}

#[derive(Serialize)]
pub struct JsonReport {
    pub method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disequilibrium_pos: Option<JsonMeasure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shannon_pos: Option<JsonMeasure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complexity_pos: Option<JsonMeasure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disequilibrium_mom: Option<JsonMeasure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shannon_mom: Option<JsonMeasure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complexity_mom: Option<JsonMeasure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product: Option<JsonMeasure>,
}

impl JsonReport {
    pub fn from_report(report: &ComplexityReport, spaces: Spaces) -> Self {
        let method = report.complexity_pos.method.label();
        let (pos, mom) = (spaces.position(), spaces.momentum());
        JsonReport {
            method,
            disequilibrium_pos: pos.then_some(report.disequilibrium_pos.into()),
            shannon_pos: pos.then_some(report.shannon_pos.into()),
            complexity_pos: pos.then_some(report.complexity_pos.into()),
            disequilibrium_mom: mom.then_some(report.disequilibrium_mom.into()),
            shannon_mom: mom.then_some(report.shannon_mom.into()),
            complexity_mom: mom.then_some(report.complexity_mom.into()),
            product: (pos && mom).then_some(report.product.into()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Spaces {
    Position,
    Momentum,
    Both,
}

impl Spaces {
    pub fn position(self) -> bool {
        matches!(self, Spaces::Position | Spaces::Both)
    }

    pub fn momentum(self) -> bool {
        matches!(self, Spaces::Momentum | Spaces::Both)
    }
}

/// One output line: a (state, space, method) triple with its measures.
pub struct Row {
    pub d: usize,
    pub n: u32,
    pub mu: String,
    pub z: f64,
    pub space: &'static str,
    pub method: &'static str,
    pub disequilibrium: Option<f64>,
    pub shannon: Option<f64>,
    pub complexity: Option<f64>,
    pub product: Option<f64>,
    pub err_est: Option<f64>,
    pub error: Option<String>,
}

pub fn mu_label(mu: &[i32]) -> String {
    mu.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")
}

/// Expand a report into one row per requested space.
pub fn rows_from_report(
    d: usize,
    n: u32,
    mu: &[i32],
    z: f64,
    report: &ComplexityReport,
    spaces: Spaces,
) -> Vec<Row> {
    let method = report.complexity_pos.method.label();
    let product = (spaces.position() && spaces.momentum()).then_some(report.product.value);
    let mut rows = Vec::new();
    let mut push = |space, dis: MeasureResult, s: MeasureResult, c: MeasureResult| {
        rows.push(Row {
            d,
            n,
            mu: mu_label(mu),
            z,
            space,
            method,
            disequilibrium: Some(dis.value),
            shannon: Some(s.value),
            complexity: Some(c.value),
            product,
            err_est: Some(c.err_est),
            error: None,
        });
    };
    if spaces.position() {
        push("position", report.disequilibrium_pos, report.shannon_pos, report.complexity_pos);
    }
    if spaces.momentum() {
        push("momentum", report.disequilibrium_mom, report.shannon_mom, report.complexity_mom);
    }
    rows
}

pub const CSV_HEADER: [&str; 12] = [
    "D",
    "n",
    "mu",
    "Z",
    "space",
    "method",
    "disequilibrium",
    "shannon",
    "complexity",
    "product",
    "err_est",
    "error",
];

fn opt17(v: Option<f64>) -> String {
    v.map(fmt17).unwrap_or_default()
}

pub fn write_csv<W: std::io::Write>(out: W, rows: &[Row]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.d.to_string(),
            r.n.to_string(),
            r.mu.clone(),
            fmt17(r.z),
            r.space.to_string(),
            r.method.to_string(),
            opt17(r.disequilibrium),
            opt17(r.shannon),
            opt17(r.complexity),
            opt17(r.product),
            opt17(r.err_est),
            r.error.clone().unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::Numerical(format!("write failed: {e}")))?;
    Ok(())
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Numerical(format!("csv write failed: {e}"))
}

fn opt9(v: Option<f64>) -> String {
    v.map(fmt9).unwrap_or_else(|| "-".into())
}

pub fn render_table(rows: &[Row]) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    writeln!(
        out,
        "{:>2} {:>2} {:<12} {:>6} {:<9} {:<9} {:>16} {:>16} {:>16} {:>16} {:>9}",
        "D", "n", "mu", "Z", "space", "method", "disequilibrium", "shannon", "complexity", "product", "err_est"
    )
    .expect("string write");
    for r in rows {
        writeln!(
            out,
            "{:>2} {:>2} {:<12} {:>6} {:<9} {:<9} {:>16} {:>16} {:>16} {:>16} {:>9}",
            r.d,
            r.n,
            r.mu,
            format!("{}", r.z),
            r.space,
            r.method,
            opt9(r.disequilibrium),
            opt9(r.shannon),
            opt9(r.complexity),
            opt9(r.product),
            r.err_est.map(|e| format!("{e:.1e}")).unwrap_or_else(|| "-".into()),
        )
        .expect("string write");
        if let Some(err) = &r.error {
            writeln!(out, "    error: {err}").expect("string write");
        }
    }
    out
}

/// Write to stdout; a closed pipe downstream is a normal way for a reader
/// to stop early, not an error.
pub fn emit(text: &str) -> Result<(), CliError> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        Err(e) => Err(CliError::Numerical(format!("write failed: {e}"))),
    }
}

#[derive(Serialize)]
pub struct JsonRow {
    pub d: usize,
    pub n: u32,
    pub mu: String,
    pub z: F17,
    pub space: &'static str,
    pub method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disequilibrium: Option<F17>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shannon: Option<F17>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complexity: Option<F17>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product: Option<F17>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub err_est: Option<F17>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl From<&Row> for JsonRow {
    fn from(r: &Row) -> Self {
        JsonRow {
            d: r.d,
            n: r.n,
            mu: r.mu.clone(),
            z: F17(r.z),
            space: r.space,
            method: r.method,
            disequilibrium: r.disequilibrium.map(F17),
            shannon: r.shannon.map(F17),
            complexity: r.complexity.map(F17),
            product: r.product.map(F17),
            err_est: r.err_est.map(F17),
            error: r.error.clone(),
        }
    }
}
