//! Tabular scan output with a fixed column schema per scan kind.

use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::numfmt::sig17;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanKind {
    ZeroLocus,
    ZeroCrossings,
    Blowup,
    Asymptotics,
    Convergence,
    Metrics,
}

impl ScanKind {
    pub fn header(&self) -> &'static [&'static str] {
        match self {
            ScanKind::ZeroLocus | ScanKind::ZeroCrossings => &["case", "nu", "nu_i", "s", "q2"],
            ScanKind::Blowup => &["h", "gap_abs", "axis", "lambda_w"],
            ScanKind::Asymptotics => &["distance", "difference", "source_height"],
            ScanKind::Convergence => &["grid_n", "error_l2", "error_max", "order_estimate"],
            ScanKind::Metrics => &["pair", "hausdorff", "modified", "ratio"],
        }
    }
}

impl fmt::Display for ScanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).ok().and_then(|v| v.as_str().map(str::to_owned));
        write!(f, "{}", s.unwrap_or_default())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            Cell::Text(_) => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(x) => sig17(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanDataset {
    pub kind: ScanKind,
    pub rows: Vec<Vec<Cell>>,
}

impl ScanDataset {
    pub fn new(kind: ScanKind) -> Self {
        Self { kind, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn header(&self) -> &'static [&'static str] {
        self.kind.header()
    }

    /// Numeric column by name.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header().iter().position(|h| *h == name)?;
        self.rows.iter().map(|r| r[idx].as_f64()).collect()
    }

    /// Every row matches the schema and every number is finite.
    pub fn validate(&self) -> Result<()> {
        let width = self.header().len();
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::OutOfBounds(format!("row {i} has {} fields, expected {width}", row.len())));
            }
            if row.iter().any(|c| matches!(c, Cell::Num(x) if !x.is_finite())) {
                return Err(Error::OutOfBounds(format!("row {i} has a non-finite value")));
            }
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.header())?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        self.validate()?;
        std::fs::write(path, self.to_csv_string()?)?;
        Ok(())
    }

    pub fn read_csv(kind: ScanKind, path: &Path) -> Result<Self> {
        let mut r = csv::Reader::from_path(path)?;
        let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
        if header != kind.header() {
            return Err(Error::ConfigParse(format!("unexpected header {header:?} for {kind}")));
        }
        let mut out = Self::new(kind);
        for rec in r.records() {
            let rec = rec?;
            out.push(
                rec.iter()
                    .map(|f| match f.parse::<i64>() {
                        Ok(i) => Cell::Int(i),
                        Err(_) => f.parse::<f64>().map(Cell::Num).unwrap_or_else(|_| Cell::Text(f.to_owned())),
                    })
                    .collect(),
            );
        }
        Ok(out)
    }
}

/// Least-squares slope of `log|y|` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.abs().ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let mut d = ScanDataset::new(ScanKind::Blowup);
        d.push(vec![0.1.into(), 2.5.into(), 3usize.into(), (2.0 / 3.0).into()]);
        d.push(vec![0.01.into(), 25.0.into(), 3usize.into(), (2.0 / 3.0).into()]);
        let s = d.to_csv_string().unwrap();
        assert!(s.starts_with("h,gap_abs,axis,lambda_w\n"));
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("b.csv");
        d.write_csv(&p).unwrap();
        let back = ScanDataset::read_csv(ScanKind::Blowup, &p).unwrap();
        assert_eq!(back.column("lambda_w").unwrap()[0], 2.0 / 3.0);
        assert_eq!(back.column("h").unwrap(), vec![0.1, 0.01]);
        assert!(ScanDataset::read_csv(ScanKind::ZeroLocus, &p).is_err());
    }

    #[test]
    fn schema_is_enforced() {
        let mut d = ScanDataset::new(ScanKind::Convergence);
        d.push(vec![9usize.into(), 1.0.into()]);
        assert!(d.validate().is_err());
        let mut d = ScanDataset::new(ScanKind::Convergence);
        d.push(vec![9usize.into(), f64::NAN.into(), 1.0.into(), 1.0.into()]);
        assert!(d.validate().is_err());
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [1e-1, 1e-2, 1e-3].iter().map(|&h| (h, 3.0 / h)).collect();
        assert!((loglog_slope(&pts) + 1.0).abs() < 1e-12);
    }
}
