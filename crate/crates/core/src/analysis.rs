//! Independent re-verification of a finished series, the openness radius of
//! each achieved approximation, and a root-test divergence diagnostic.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::schedule::{LedgerEntry, UniversalSeries};
use crate::sets::{build_cloud, sup_gap_with};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationRow {
    pub task_index: usize,
    pub chosen_n: u64,
    pub tol: f64,
    pub recorded_error: f64,
    pub recomputed_error: f64,
    /// `recomputed_error - recorded_error`.
    pub delta: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub density_multiplier: f64,
    pub rows: Vec<VerificationRow>,
    pub all_pass: bool,
}

/// `max |T_N(a) - f|` over the validation grid of `entry`'s set at `density`.
pub fn entry_error(series: &UniversalSeries, entry: &LedgerEntry, density: f64, exec: Exec) -> Result<f64> {
    entry_error_for(series, &series.state.coefficients, entry, density, exec)
}

fn entry_error_for(
    series: &UniversalSeries,
    coefficients: &[Complex64],
    entry: &LedgerEntry,
    density: f64,
    exec: Exec,
) -> Result<f64> {
    let cloud = build_cloud(&entry.set, density)?;
    let values = series.transform.eval_tn(coefficients, entry.chosen_n as usize, &cloud.validation, exec)?;
    let reference = exec.map(&cloud.validation, |&z| entry.target.eval(z));
    sup_gap_with(&values, &reference, exec)
}

/// Recomputes every ledger entry on grids built at `density * density_multiplier`.
///
/// Entries are checked in parallel; a recomputation that cannot be carried
/// out at all is reported as a failing row with an infinite error.
pub fn verify_series(series: &UniversalSeries, density_multiplier: f64, exec: Exec) -> Result<VerificationReport> {
    if !(density_multiplier >= 1.0 && density_multiplier.is_finite()) {
        return Err(Error::Precondition(format!("density multiplier must be >= 1, got {density_multiplier}")));
    }
    let density = series.density * density_multiplier;
    let rows: Vec<VerificationRow> = exec.map(&series.state.ledger, |entry| {
        // the inner loops stay sequential; the entries are the parallel axis
        let recomputed = entry_error(series, entry, density, Exec::Sequential).unwrap_or(f64::INFINITY);
        VerificationRow {
            task_index: entry.task_index,
            chosen_n: entry.chosen_n,
            tol: entry.tol,
            recorded_error: entry.achieved_error,
            recomputed_error: recomputed,
            delta: recomputed - entry.achieved_error,
            pass: recomputed < entry.tol,
        }
    });
    let all_pass = rows.iter().all(|r| r.pass);
    Ok(VerificationReport { density_multiplier, rows, all_pass })
}

/// Openness radius of one achieved approximation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    /// Allowed change of every `b_n`, `(tol - baseline) / (2 (N+1) M)`.
    pub epsilon: f64,
    /// Allowed change of every `a_k`, `k <= N`.
    pub delta: f64,
    pub n: u64,
    /// `max(1, max_K |z|^N)`.
    pub m: f64,
    pub baseline_error: f64,
    pub tol: f64,
}

/// Stability radius from the closed-form bound
/// `epsilon = (tol - baseline) / (2 (N + 1) M)` with `M = max(1, max|z|^N)`.
/// For linear transforms `|delta b_n| <= (sum_k |lambda_{n,k}|) max_k |delta a_k|`,
/// so dividing by the largest row sum gives the per-coefficient radius.
pub fn stability_radius(series: &UniversalSeries, entry_index: usize) -> Result<StabilityReport> {
    let entry = series
        .state
        .ledger
        .get(entry_index)
        .ok_or_else(|| Error::Precondition(format!("no ledger entry {entry_index}")))?;
    let cloud = build_cloud(&entry.set, series.density)?;
    stability_from_parts(series, entry.chosen_n, cloud.max_modulus, entry.tol, entry.achieved_error)
}

pub(crate) fn stability_from_parts(
    series: &UniversalSeries,
    n: u64,
    max_modulus: f64,
    tol: f64,
    baseline_error: f64,
) -> Result<StabilityReport> {
    if !series.transform.is_linear() {
        return Err(Error::UnsupportedTransform(
            "stability radius needs a linear transform (identity, cesaro, linear-triangular)".into(),
        ));
    }
    if !(baseline_error < tol) {
        return Err(Error::Precondition(format!("baseline error {baseline_error} is not below tol {tol}")));
    }
    let exponent = i32::try_from(n).map_err(|_| Error::Precondition("index too large".into()))?;
    let m = max_modulus.powi(exponent).max(1.0);
    let epsilon = (tol - baseline_error) / (2.0 * (n as f64 + 1.0) * m);
    let delta = epsilon / series.transform.max_row_abs_sum(n as usize)?;
    Ok(StabilityReport { epsilon, delta, n, m, baseline_error, tol })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationReport {
    pub stability: StabilityReport,
    pub trials: usize,
    pub max_error: f64,
    /// `(baseline + tol) / 2`.
    pub midpoint: f64,
    pub all_below_tol: bool,
    pub all_below_midpoint: bool,
}

/// Perturbs `a_0..a_N` of one entry by `trials` pseudo-random vectors with
/// every `|delta a_k| < delta` and re-measures the error on the entry's own grid.
///
/// Trial `t` draws from ChaCha8 seeded with `seed + t`; each component has a
/// uniform phase and modulus `delta (1 - 1e-9) (1 + u) / 2`, `u` uniform in
/// `[0, 1)`, so the perturbations stay close to the radius.
pub fn perturbation_check(
    series: &UniversalSeries,
    entry_index: usize,
    trials: usize,
    seed: u64,
    exec: Exec,
) -> Result<PerturbationReport> {
    let stability = stability_radius(series, entry_index)?;
    let entry = &series.state.ledger[entry_index];
    let big_n = entry.chosen_n as usize;
    let radius = stability.delta * (1.0 - 1e-9);

    let errors: Vec<Result<f64>> = exec.map_range(trials, |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t as u64));
        let mut coefficients = series.state.coefficients.clone();
        for a in coefficients.iter_mut().take(big_n + 1) {
            let modulus = radius * (1.0 + rng.gen::<f64>()) / 2.0;
            let phase = rng.gen::<f64>() * std::f64::consts::TAU;
            *a += Complex64::from_polar(modulus, phase);
        }
        entry_error_for(series, &coefficients, entry, series.density, Exec::Sequential)
    });
    let mut max_error = 0.0f64;
    for e in errors {
        max_error = max_error.max(e?);
    }
    let midpoint = (stability.baseline_error + stability.tol) / 2.0;
    Ok(PerturbationReport {
        all_below_tol: max_error < stability.tol,
        all_below_midpoint: max_error < midpoint + 1e-12,
        midpoint,
        max_error,
        trials,
        stability,
    })
}

/// `1 / max |b_n|^{1/n}` over the trailing `ceil(window_fraction * len)`
/// entries with `n >= 1` and `b_n != 0`; `+inf` when there are none.
pub fn radius_estimate(b: &[Complex64], window_fraction: f64) -> Result<f64> {
    if !(window_fraction > 0.0 && window_fraction <= 1.0) {
        return Err(Error::Precondition(format!("window fraction must lie in (0, 1], got {window_fraction}")));
    }
    let window = ((window_fraction * b.len() as f64).ceil() as usize).min(b.len());
    let start = b.len() - window;
    let root_max = (start.max(1)..b.len())
        .filter(|&n| b[n].norm() > 0.0)
        .map(|n| (b[n].norm().ln() / n as f64).exp())
        .fold(0.0f64, f64::max);
    Ok(if root_max > 0.0 { 1.0 / root_max } else { f64::INFINITY })
}
