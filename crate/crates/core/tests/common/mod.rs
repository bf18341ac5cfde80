#![allow(dead_code)]

use uniseries::analysis::entry_error;
use uniseries::config::RunConfig;
use uniseries::schedule::{enumerate_tasks, extend, run_forge, ForgeOutcome, ForgeState};
use uniseries::{Complex64, Exec, TransformSpec, UniversalSeries};

pub const LADDER_64: &str = "tol_ladder = [1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625]";

pub const TARGETS_1_Z_Z2: &str = r#"
[[targets]]
coefficients = [[1.0, 0.0]]
[[targets]]
coefficients = [[0.0, 0.0], [1.0, 0.0]]
[[targets]]
coefficients = [[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]
"#;

/// The desk-scale suite: a segment and a slit annulus around the origin.
pub fn desk_config(transform: &str, mu: &str, output_dir: &str) -> String {
    format!(
        r#"task_budget = 20
{LADDER_64}
output_dir = "{output_dir}"

[transform]
kind = "{transform}"

[mu]
{mu}

[[sets]]
shape = "segment"
z1 = [1.0, 0.0]
z2 = [2.0, 0.0]

[[sets]]
shape = "slit-annulus"
r_in = 0.5
r_out = 2.0
gap_angle = 3.141592653589793
gap_half_width = 0.5
{TARGETS_1_Z_Z2}"#
    )
}

/// A catalog of two short segments that the construction completes with the
/// default growth limit; used where a finished multi-set run is needed.
pub fn short_segments_config(transform: &str, mu: &str, task_budget: usize, output_dir: &str) -> String {
    format!(
        r#"task_budget = {task_budget}
density = 32
{LADDER_64}
output_dir = "{output_dir}"

[transform]
kind = "{transform}"

[mu]
{mu}

[[sets]]
shape = "segment"
z1 = [1.0, 0.0]
z2 = [1.2, 0.0]

[[sets]]
shape = "segment"
z1 = [0.0, 1.0]
z2 = [0.0, 1.2]
{TARGETS_1_Z_Z2}"#
    )
}

pub const MU_ALL: &str = r#"kind = "all""#;
pub const MU_ODD: &str = "kind = \"arithmetic\"\nstart = 1\nstep = 2";

pub fn forge(config_text: &str) -> ForgeOutcome {
    let cfg = RunConfig::from_toml_str(config_text).expect("valid config");
    run_forge(&cfg.plan(Exec::default()).unwrap()).unwrap()
}

/// Replays a run task by task and checks, after every step, that the
/// previous coefficients survive unchanged as a prefix.
pub fn replay_preserves_prefix(config_text: &str) -> Result<usize, String> {
    let cfg = RunConfig::from_toml_str(config_text).map_err(|e| e.to_string())?;
    let plan = cfg.plan(Exec::default()).map_err(|e| e.to_string())?;
    let tasks = enumerate_tasks(plan.sets.clone(), plan.targets.clone(), plan.ladder.clone(), plan.mu.clone())
        .map_err(|e| e.to_string())?;
    let mut state = ForgeState::seeded(plan.seed_prefix.clone());
    let mut steps = 0;
    for task in tasks.take(plan.task_budget) {
        let Ok(next) = extend(&state, &task, &plan.transform, &plan.options) else { break };
        if next.coefficients.len() <= state.coefficients.len() {
            return Err(format!("task {} did not grow the sequence", task.index));
        }
        if next.coefficients[..state.coefficients.len()] != state.coefficients[..] {
            return Err(format!("task {} modified existing coefficients", task.index));
        }
        if next.ledger[..state.ledger.len()] != state.ledger[..] {
            return Err(format!("task {} rewrote earlier ledger entries", task.index));
        }
        state = next;
        steps += 1;
    }
    Ok(steps)
}

/// Checks that `T_N` does not move inside each entry's padding range.
/// Linear kinds must give exactly zero padded `b_n`; wrapped kinds may drift
/// by `1e-10`.
pub fn padding_is_invariant(series: &UniversalSeries) -> Result<(), String> {
    let coefficients = &series.state.coefficients;
    if coefficients.is_empty() {
        return Ok(());
    }
    let b = series.transform.coeffs_t(coefficients, coefficients.len() - 1).map_err(|e| e.to_string())?;
    let exact = matches!(series.transform, TransformSpec::Identity | TransformSpec::Cesaro);
    let allowed = if series.transform.is_linear() && exact { 0.0 } else { 1e-10 };
    for e in &series.state.ledger {
        for n in e.padding_start..=e.chosen_n {
            let n = n as usize;
            if n < b.len() && b[n].norm() > allowed {
                return Err(format!("task {}: b_{n} = {} inside padding", e.task_index, b[n]));
            }
        }
    }
    Ok(())
}

/// Every entry re-measured on the final coefficients matches its recorded
/// error and stays below tolerance; chosen N strictly increase and blocks tile
/// the sequence after the seed.
pub fn history_is_monotone(series: &UniversalSeries) -> Result<(), String> {
    let mut expected_start = series.state.seed_len as u64;
    let mut last_n: Option<u64> = None;
    for e in &series.state.ledger {
        let err = entry_error(series, e, series.density, Exec::Sequential).map_err(|e| e.to_string())?;
        if (err - e.achieved_error).abs() > 1e-12 {
            return Err(format!("task {}: recorded {} but re-measured {err}", e.task_index, e.achieved_error));
        }
        if err >= e.tol || err.is_nan() {
            return Err(format!("task {}: error {err} not below tol {}", e.task_index, e.tol));
        }
        if last_n.is_some_and(|n| e.chosen_n <= n) {
            return Err(format!("task {}: chosen N {} is not increasing", e.task_index, e.chosen_n));
        }
        if e.block_start != expected_start || e.block_end != e.chosen_n {
            return Err(format!("task {}: block {}..={} breaks the tiling", e.task_index, e.block_start, e.block_end));
        }
        if !e.mu.contains(e.chosen_n) {
            return Err(format!("task {}: N = {} is outside mu", e.task_index, e.chosen_n));
        }
        expected_start = e.chosen_n + 1;
        last_n = Some(e.chosen_n);
    }
    Ok(())
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Gaussian elimination with partial pivoting on the full matrix; knows
/// nothing about triangular structure.
pub fn dense_solve(mut m: Vec<Vec<Complex64>>, mut rhs: Vec<Complex64>) -> Vec<Complex64> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm())).unwrap();
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let (upper, lower) = m.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for (row, r) in lower.iter_mut().enumerate() {
            let f = r[col] / pivot_row[col];
            for (x, p) in r[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
            let b = rhs[col];
            rhs[col + 1 + row] -= f * b;
        }
    }
    let mut x = vec![c(0.0, 0.0); n];
    for row in (0..n).rev() {
        let s = (row + 1..n).fold(rhs[row], |acc, k| acc - m[row][k] * x[k]);
        x[row] = s / m[row][row];
    }
    x
}
