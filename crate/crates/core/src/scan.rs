//! Growth scans over a size grid, CSV persistence and log-log exponent fits.

use std::io::{Read, Write};

use num_bigint::BigUint;
use rayon::prelude::*;
use thiserror::Error;

use crate::energy::energy_fractional;
use crate::generators::{generate, Family, FamilySpec, GenError};
use crate::lemmas::{diffset_lower_bound, sumset_lower_bound};

pub const DEFAULT_N_CAP: usize = 4096;
pub const SCHEMA: &str = "schema=1";
pub const COLUMNS: [&str; 11] = [
    "family",
    "n",
    "sumset",
    "diffset",
    "prodset",
    "E2",
    "E3",
    "E15",
    "margin_thm11",
    "margin_thm12_plus",
    "margin_thm12_minus",
];

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("n = {n} exceeds the cap {cap}")]
    GridTooLarge { n: usize, cap: usize },
    #[error("scan sizes must be at least 2, got {0}")]
    SizeTooSmall(usize),
    #[error(transparent)]
    Generate(#[from] GenError),
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("unknown column {0:?}")]
    UnknownColumn(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("malformed scan file: {0}")]
    Format(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub family: String,
    pub n: usize,
    pub sumset: usize,
    pub diffset: usize,
    /// Only for sets of positive elements.
    pub prodset: Option<usize>,
    pub e2: BigUint,
    pub e3: BigUint,
    pub e15: f64,
    /// `|A+A| / (n^{14/9} / (log2 n)^{2/9})`
    pub margin_thm11: f64,
    /// Same ratio, reported only when the product set is.
    pub margin_thm12_plus: Option<f64>,
    /// `|A-A| / (n^{8/5} / (log2 n)^{2/5})`
    pub margin_thm12_minus: f64,
}

impl ScanRow {
    pub fn from_set(family: &str, set: &crate::set::FiniteSet) -> Self {
        let n = set.len();
        let delta = set.self_difference_rep();
        let stats = set.doubling_stats();
        let positive = set.min().is_some_and(|m| m.is_positive());
        let margin_thm11 = stats.sumset_size as f64 / sumset_lower_bound(n);
        ScanRow {
            family: family.to_string(),
            n,
            sumset: stats.sumset_size,
            diffset: delta.len(),
            prodset: positive.then_some(stats.productset_size),
            e2: delta.power_sum(2),
            e3: delta.power_sum(3),
            e15: energy_fractional(set).value,
            margin_thm11,
            margin_thm12_plus: positive.then_some(margin_thm11),
            margin_thm12_minus: delta.len() as f64 / diffset_lower_bound(n),
        }
    }

    /// Numeric value of a column, for fitting.
    pub fn column(&self, name: &str) -> Result<Option<f64>, ScanError> {
        Ok(match name {
            "n" => Some(self.n as f64),
            "sumset" => Some(self.sumset as f64),
            "diffset" => Some(self.diffset as f64),
            "prodset" => self.prodset.map(|v| v as f64),
            "E2" => Some(big_f64(&self.e2)),
            "E3" => Some(big_f64(&self.e3)),
            "E15" => Some(self.e15),
            "margin_thm11" => Some(self.margin_thm11),
            "margin_thm12_plus" => self.margin_thm12_plus,
            "margin_thm12_minus" => Some(self.margin_thm12_minus),
            other => return Err(ScanError::UnknownColumn(other.to_string())),
        })
    }

    fn record(&self) -> Vec<String> {
        let opt = |v: Option<String>| v.unwrap_or_default();
        vec![
            self.family.clone(),
            self.n.to_string(),
            self.sumset.to_string(),
            self.diffset.to_string(),
            opt(self.prodset.map(|v| v.to_string())),
            self.e2.to_string(),
            self.e3.to_string(),
            self.e15.to_string(),
            self.margin_thm11.to_string(),
            opt(self.margin_thm12_plus.map(|v| v.to_string())),
            self.margin_thm12_minus.to_string(),
        ]
    }

    fn from_record(r: &csv::StringRecord) -> Result<Self, ScanError> {
        if r.len() != COLUMNS.len() {
            return Err(ScanError::Format(format!(
                "expected {} fields, got {}",
                COLUMNS.len(),
                r.len()
            )));
        }
        fn num<T: std::str::FromStr>(s: &str, col: &str) -> Result<T, ScanError> {
            s.parse()
                .map_err(|_| ScanError::Format(format!("bad {col} value {s:?}")))
        }
        fn opt<T: std::str::FromStr>(s: &str, col: &str) -> Result<Option<T>, ScanError> {
            if s.is_empty() {
                Ok(None)
            } else {
                num(s, col).map(Some)
            }
        }
        Ok(ScanRow {
            family: r[0].to_string(),
            n: num(&r[1], "n")?,
            sumset: num(&r[2], "sumset")?,
            diffset: num(&r[3], "diffset")?,
            prodset: opt(&r[4], "prodset")?,
            e2: num(&r[5], "E2")?,
            e3: num(&r[6], "E3")?,
            e15: num(&r[7], "E15")?,
            margin_thm11: num(&r[8], "margin_thm11")?,
            margin_thm12_plus: opt(&r[9], "margin_thm12_plus")?,
            margin_thm12_minus: num(&r[10], "margin_thm12_minus")?,
        })
    }
}

fn big_f64(x: &BigUint) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::INFINITY)
}

/// One row per grid size, in grid order. Row `i` uses seed `seed ^ i`.
pub fn scan_growth(
    family: &Family,
    grid: &[usize],
    seed: u64,
    cap: usize,
) -> Result<Vec<ScanRow>, ScanError> {
    if let Some(&n) = grid.iter().find(|&&n| n > cap) {
        return Err(ScanError::GridTooLarge { n, cap });
    }
    if let Some(&n) = grid.iter().find(|&&n| n < 2) {
        return Err(ScanError::SizeTooSmall(n));
    }
    let name = family.name();
    grid.par_iter()
        .enumerate()
        .map(|(i, &n)| {
            let set = generate(&FamilySpec::new(family.clone(), n, seed ^ i as u64))?;
            Ok(ScanRow::from_set(&name, &set))
        })
        .collect()
}

/// Writes the `schema=1` line, the column header, then the rows.
pub fn write_csv<W: Write>(rows: &[ScanRow], out: W) -> Result<(), ScanError> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
    w.write_record([SCHEMA])?;
    w.write_record(COLUMNS)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<ScanRow>, ScanError> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut records = r.records();
    match records.next() {
        Some(Ok(first)) if first.len() == 1 && &first[0] == SCHEMA => {}
        _ => return Err(ScanError::Format(format!("first line must be {SCHEMA}"))),
    }
    match records.next() {
        Some(Ok(h)) if h.iter().eq(COLUMNS.iter().copied()) => {}
        _ => return Err(ScanError::Format("unexpected column header".into())),
    }
    records.map(|rec| ScanRow::from_record(&rec?)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log2 space.
    pub residual: f64,
}

/// Least squares of `log2 y` on `log2 x`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<Fit, ScanError> {
    if points.len() < 2 {
        return Err(ScanError::DegenerateFit(format!("{} points", points.len())));
    }
    if points
        .iter()
        .any(|&(x, y)| !(x > 0.0 && y > 0.0) || !x.is_finite() || !y.is_finite())
    {
        return Err(ScanError::DegenerateFit(
            "values must be positive and finite".into(),
        ));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.log2(), y.log2())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return Err(ScanError::DegenerateFit("all x values equal".into()));
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = logs
        .iter()
        .map(|p| (p.1 - (intercept + slope * p.0)).powi(2))
        .sum();
    Ok(Fit {
        slope,
        intercept,
        residual: (ss / k).sqrt(),
    })
}

/// Fits `ycol` against `xcol`, skipping rows where either is missing.
pub fn fit_exponent(rows: &[ScanRow], xcol: &str, ycol: &str) -> Result<Fit, ScanError> {
    let mut pts = Vec::with_capacity(rows.len());
    for r in rows {
        if let (Some(x), Some(y)) = (r.column(xcol)?, r.column(ycol)?) {
            pts.push((x, y));
        }
    }
    fit_power_law(&pts)
}
