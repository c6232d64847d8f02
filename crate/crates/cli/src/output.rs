use crate::args::Format;
use crate::error::CliError;
use rmt_core::GridFunction;
use serde::Serialize;
use serde_json::{Map, Value};
use std::fmt;
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(u64),
    S(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // Debug is the shortest representation that parses back exactly
            Cell::F(x) => write!(f, "{x:?}"),
            Cell::I(i) => write!(f, "{i}"),
            Cell::S(s) if s.contains([',', '"', '\n']) => write!(f, "\"{}\"", s.replace('"', "\"\"")),
            Cell::S(s) => f.write_str(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::I(i as u64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::S(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::S(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::S(b.to_string())
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "{}", self.header.join(","))?;
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(|c| c.to_string()).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub params: Value,
    pub seed: Option<u64>,
    pub metrics: Map<String, Value>,
    pub pass: bool,
    #[serde(skip)]
    pub table: Option<Table>,
}

impl Report {
    pub fn new(command: &str, params: impl Serialize, seed: Option<u64>) -> Self {
        Report {
            command: command.into(),
            params: serde_json::to_value(params).unwrap_or(Value::Null),
            seed,
            metrics: Map::new(),
            pass: true,
            table: None,
        }
    }

    pub fn metric(&mut self, key: &str, v: impl Into<Value>) {
        self.metrics.insert(key.into(), v.into());
    }

    /// Non-finite numbers become strings so the JSON stays valid.
    pub fn metric_f(&mut self, key: &str, v: f64) {
        let value = serde_json::Number::from_f64(v).map(Value::Number).unwrap_or_else(|| Value::String(format!("{v:?}")));
        self.metrics.insert(key.into(), value);
    }

    pub fn write<W: Write>(&self, format: Format, w: &mut W) -> Result<(), CliError> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *w, self).map_err(|e| CliError::Io(e.into()))?;
                writeln!(w)?;
            }
            Format::Csv => match &self.table {
                Some(t) => t.write_csv(w)?,
                None => {
                    let mut t = Table::new(&["metric", "value"]);
                    for (k, v) in &self.metrics {
                        let cell = match v {
                            Value::Number(n) => n.as_f64().map(Cell::F).unwrap_or_else(|| Cell::S(n.to_string())),
                            Value::String(s) => Cell::S(s.clone()),
                            other => Cell::S(other.to_string()),
                        };
                        t.push(vec![k.as_str().into(), cell]);
                    }
                    t.push(vec!["pass".into(), self.pass.into()]);
                    t.write_csv(w)?;
                }
            },
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OverlayStats {
    pub sup_distance: f64,
    pub ks: f64,
    pub bins: usize,
}

/// Compare a histogram with a theory curve on the histogram's grid.
pub fn overlay_stats(histogram: &GridFunction, curve: &GridFunction) -> Result<(Vec<f64>, OverlayStats), CliError> {
    if histogram.xs.is_empty() || histogram.ys.iter().all(|y| *y == 0.0) {
        return Err(rmt_core::Error::EmptyHistogram.into());
    }
    if curve.xs.is_empty() || curve.hi() < histogram.lo() || curve.lo() > histogram.hi() {
        return Err(rmt_core::Error::DisjointSupports.into());
    }
    let theory: Vec<f64> = histogram.xs.iter().map(|&x| curve.eval(x)).collect();
    let sup = histogram.ys.iter().zip(&theory).map(|(h, t)| (h - t).abs()).fold(0.0, f64::max);
    let cdf = |ys: &[f64]| {
        let mut acc = vec![0.0; ys.len()];
        for i in 1..ys.len() {
            acc[i] = acc[i - 1] + 0.5 * (histogram.xs[i] - histogram.xs[i - 1]) * (ys[i] + ys[i - 1]);
        }
        let total = acc[ys.len() - 1];
        if total > 0.0 {
            acc.iter_mut().for_each(|a| *a /= total);
        }
        acc
    };
    let (ch, ct) = (cdf(&histogram.ys), cdf(&theory));
    let ks = ch.iter().zip(&ct).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok((theory, OverlayStats { sup_distance: sup, ks, bins: histogram.xs.len() }))
}

/// Write `x,hist,theory` to `path` and the statistics to `path` with a
/// `.json` extension.
pub fn emit_overlay(histogram: &GridFunction, curve: &GridFunction, path: &Path) -> Result<OverlayStats, CliError> {
    let (theory, stats) = overlay_stats(histogram, curve)?;
    let mut t = Table::new(&["x", "hist", "theory"]);
    for ((x, h), th) in histogram.xs.iter().zip(&histogram.ys).zip(&theory) {
        t.push(vec![(*x).into(), (*h).into(), (*th).into()]);
    }
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    t.write_csv(&mut f)?;
    f.flush()?;
    let sidecar = path.with_extension("json");
    std::fs::write(&sidecar, serde_json::to_string_pretty(&stats).map_err(|e| CliError::Io(e.into()))? + "\n")?;
    Ok(stats)
}

/// Bin average of `f` over equal-width bins centred on `xs`.
pub fn bin_average(xs: &[f64], f: impl Fn(f64) -> f64) -> Vec<f64> {
    let h = if xs.len() > 1 { xs[1] - xs[0] } else { 0.0 };
    const SUB: usize = 16;
    xs.iter()
        .map(|&x| (0..SUB).map(|k| f(x - 0.5 * h + h * (k as f64 + 0.5) / SUB as f64)).sum::<f64>() / SUB as f64)
        .collect()
}
