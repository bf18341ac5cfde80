//! On-disk artifacts of a run.
//!
//! * `coefficients.csv`: `index,re,im`, one row per raw coefficient `a_n`.
//!   Floats use the shortest representation that round-trips, so reading the
//!   file back reproduces every value bit for bit.
//! * `ledger.json`: run metadata (transform, density, fit settings, status)
//!   and one object per completed task.
//! * `verification.json`: written by `verify`.
//! * `plot/*.csv`: written by `plot-data`.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analysis::{radius_estimate, VerificationReport};
use crate::error::{Error, Result};
use crate::schedule::{FitBudget, ForgeState, LedgerEntry, UniversalSeries};
use crate::transform::TransformSpec;

pub const COEFFICIENTS_FILE: &str = "coefficients.csv";
pub const LEDGER_FILE: &str = "ledger.json";
pub const VERIFICATION_FILE: &str = "verification.json";
pub const PLOT_DIR: &str = "plot";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LedgerFile {
    pub transform: TransformSpec,
    pub density: f64,
    pub max_degree: usize,
    pub fit_budget: FitBudget,
    pub seed_length: usize,
    pub coefficient_count: usize,
    /// `"complete"` or `"failed"`.
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    pub total_elapsed_ms: f64,
    pub entries: Vec<LedgerEntry>,
}

#[derive(Serialize, Deserialize)]
struct CoefficientRow {
    index: usize,
    re: f64,
    im: f64,
}

pub fn write_coefficients(path: &Path, coefficients: &[Complex64]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    if coefficients.is_empty() {
        w.write_record(["index", "re", "im"])?;
    }
    for (index, a) in coefficients.iter().enumerate() {
        w.serialize(CoefficientRow { index, re: a.re, im: a.im })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_coefficients(path: &Path) -> Result<Vec<Complex64>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for row in r.deserialize() {
        let row: CoefficientRow = row?;
        if row.index != out.len() {
            return Err(Error::Artifact(format!(
                "{}: expected index {}, found {}",
                path.display(),
                out.len(),
                row.index
            )));
        }
        out.push(Complex64::new(row.re, row.im));
    }
    Ok(out)
}

/// Writes `coefficients.csv` and `ledger.json` into `dir`.
pub fn write_run(dir: &Path, series: &UniversalSeries, failure: Option<String>, total_elapsed_ms: f64) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_coefficients(&dir.join(COEFFICIENTS_FILE), &series.state.coefficients)?;
    let ledger = LedgerFile {
        transform: series.transform.clone(),
        density: series.density,
        max_degree: series.max_degree,
        fit_budget: series.budget,
        seed_length: series.state.seed_len,
        coefficient_count: series.state.coefficients.len(),
        status: if failure.is_some() { "failed" } else { "complete" }.into(),
        failure,
        total_elapsed_ms,
        entries: series.state.ledger.clone(),
    };
    fs::write(dir.join(LEDGER_FILE), serde_json::to_string_pretty(&ledger)?)?;
    Ok(())
}

/// Reads a run back; fails if the two files disagree.
pub fn read_run(dir: &Path) -> Result<(UniversalSeries, LedgerFile)> {
    let ledger_path = dir.join(LEDGER_FILE);
    let text = fs::read_to_string(&ledger_path)
        .map_err(|e| Error::Artifact(format!("cannot read {}: {e}", ledger_path.display())))?;
    let ledger: LedgerFile = serde_json::from_str(&text)
        .map_err(|e| Error::Artifact(format!("{}: {e}", ledger_path.display())))?;
    let coefficients = read_coefficients(&dir.join(COEFFICIENTS_FILE))
        .map_err(|e| Error::Artifact(format!("{}: {e}", COEFFICIENTS_FILE)))?;
    if coefficients.len() != ledger.coefficient_count {
        return Err(Error::Artifact(format!(
            "{COEFFICIENTS_FILE} has {} rows but the ledger records {}",
            coefficients.len(),
            ledger.coefficient_count
        )));
    }
    if let Some(e) = ledger.entries.iter().find(|e| e.chosen_n as usize >= coefficients.len()) {
        return Err(Error::Artifact(format!("entry {} refers to N = {} beyond the coefficients", e.task_index, e.chosen_n)));
    }
    ledger.transform.validate()?;
    let series = UniversalSeries {
        transform: ledger.transform.clone(),
        density: ledger.density,
        max_degree: ledger.max_degree,
        budget: ledger.fit_budget,
        state: ForgeState { coefficients, seed_len: ledger.seed_length, ledger: ledger.entries.clone() },
    };
    Ok((series, ledger))
}

pub fn write_verification(dir: &Path, report: &VerificationReport) -> Result<()> {
    fs::write(dir.join(VERIFICATION_FILE), serde_json::to_string_pretty(report)?)?;
    Ok(())
}

/// Window fraction used for the radius column of `plot/radius.csv`.
pub const PLOT_RADIUS_WINDOW: f64 = 0.5;

/// Writes `plot/errors.csv`, `plot/b_modulus.csv` and `plot/radius.csv`;
/// returns their paths.
///
/// `b_modulus.csv` lists `|b_n|` and `|b_n|^{1/n}` (empty for `n = 0`);
/// `radius.csv` lists the root-test radius estimate of `b_0..b_{L-1}` for
/// every prefix length `L`.
pub fn write_plot_data(dir: &Path, series: &UniversalSeries) -> Result<Vec<PathBuf>> {
    let plot = dir.join(PLOT_DIR);
    fs::create_dir_all(&plot)?;
    let coefficients = &series.state.coefficients;
    let b = match coefficients.len() {
        0 => Vec::new(),
        len => series.transform.coeffs_t(coefficients, len - 1)?,
    };

    let errors = plot.join("errors.csv");
    let mut w = csv::Writer::from_path(&errors)?;
    w.write_record(["task_index", "tol", "chosen_n", "achieved_error"])?;
    for e in &series.state.ledger {
        w.write_record([e.task_index.to_string(), e.tol.to_string(), e.chosen_n.to_string(), e.achieved_error.to_string()])?;
    }
    w.flush()?;

    let modulus = plot.join("b_modulus.csv");
    let mut w = csv::Writer::from_path(&modulus)?;
    w.write_record(["n", "abs_b", "root_abs_b"])?;
    for (n, bn) in b.iter().enumerate() {
        let root = if n == 0 { String::new() } else { bn.norm().powf(1.0 / n as f64).to_string() };
        w.write_record([n.to_string(), bn.norm().to_string(), root])?;
    }
    w.flush()?;

    let radius = plot.join("radius.csv");
    let mut w = csv::Writer::from_path(&radius)?;
    w.write_record(["prefix_length", "radius_estimate"])?;
    for len in 1..=b.len() {
        let est = radius_estimate(&b[..len], PLOT_RADIUS_WINDOW)?;
        w.write_record([len.to_string(), est.to_string()])?;
    }
    w.flush()?;

    Ok(vec![errors, modulus, radius])
}
