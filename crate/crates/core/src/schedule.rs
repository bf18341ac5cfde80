//! Task enumeration and the block-by-block extension of the coefficient
//! sequence.
//!
//! Each task asks for an index `N` in the admissible set `mu` with
//! `max_K |T_N(a) - f| < tol`. [`extend`] answers one task without touching
//! the coefficients already chosen: it fits a polynomial `p` to
//! `(f - T_{N0}(a)) / z^{N0+1}` on `K`, appends coefficients making
//! `b_{N0+1+n} = p_n`, pads with coefficients making the following `b` values
//! zero until the first admissible `N >= N0 + deg p + 1`, and records the
//! achieved error in the ledger.

use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::approx::{fit_polynomial_weighted, shifted_target, ErrorWeight};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::pairing;
use crate::poly::ComplexPolynomial;
use crate::sets::{build_cloud, sup_gap_with, CompactSetSpec};
use crate::transform::TransformSpec;

/// Admissible indices `mu`, an infinite subset of the naturals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MuSpec {
    All,
    Arithmetic { start: u64, step: u64 },
    /// The listed indices, then every `then_step`-th index after the last one.
    Explicit { indices: Vec<u64>, then_step: u64 },
}

impl MuSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            MuSpec::All => Ok(()),
            MuSpec::Arithmetic { step, .. } if *step == 0 => Err(Error::Config("mu step must be >= 1".into())),
            MuSpec::Arithmetic { .. } => Ok(()),
            MuSpec::Explicit { indices, then_step } => {
                if *then_step == 0 {
                    return Err(Error::Config("mu then_step must be >= 1".into()));
                }
                if indices.is_empty() || indices.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Config("mu indices must be nonempty and strictly increasing".into()));
                }
                Ok(())
            }
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        match self {
            MuSpec::All => true,
            MuSpec::Arithmetic { start, step } => n >= *start && (n - start).is_multiple_of(*step),
            MuSpec::Explicit { indices, then_step } => {
                let last = *indices.last().expect("validated mu");
                indices.binary_search(&n).is_ok() || (n > last && (n - last).is_multiple_of(*then_step))
            }
        }
    }

    /// Smallest member of `mu` that is `>= n`.
    pub fn smallest_at_least(&self, n: u64) -> u64 {
        let arith = |start: u64, step: u64| {
            if n <= start {
                start
            } else {
                start + (n - start).div_ceil(step) * step
            }
        };
        match self {
            MuSpec::All => n,
            MuSpec::Arithmetic { start, step } => arith(*start, *step),
            MuSpec::Explicit { indices, then_step } => match indices.iter().find(|&&i| i >= n) {
                Some(&i) => i,
                None => arith(*indices.last().expect("validated mu"), *then_step),
            },
        }
    }
}

/// The tolerances `1/s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TolLadder {
    /// `1/s` for `s = 1, 2, ...`; written as the string `"harmonic"`.
    Harmonic(HarmonicTag),
    List(Vec<f64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HarmonicTag {
    Harmonic,
}

impl TolLadder {
    pub fn harmonic() -> Self {
        TolLadder::Harmonic(HarmonicTag::Harmonic)
    }

    fn get(&self, s: usize) -> Option<f64> {
        match self {
            TolLadder::Harmonic(_) => Some(1.0 / (s as f64 + 1.0)),
            TolLadder::List(l) => l.get(s).copied(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            TolLadder::List(l) if l.is_empty() => Err(Error::Config("tolerance ladder is empty".into())),
            TolLadder::List(l) if l.iter().any(|t| !(t.is_finite() && *t > 0.0)) => {
                Err(Error::Config("tolerances must be positive and finite".into()))
            }
            _ => Ok(()),
        }
    }
}

/// One approximation demand: within `tol` of `target` on `set`, at some `N` in `mu`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Task {
    /// Position in the task stream.
    pub index: usize,
    /// Zero-based catalog coordinates (set, target, tolerance).
    pub m: usize,
    pub j: usize,
    pub s: usize,
    pub set: CompactSetSpec,
    pub target: ComplexPolynomial,
    pub tol: f64,
    pub mu: MuSpec,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{} (m={}, j={}, s={}) {} tol {}", self.index, self.m, self.j, self.s, self.set, self.tol)
    }
}

/// Deterministic stream over all `(m, j, s)` triples.
///
/// The stream runs in rounds, one per tolerance `s`. Each round visits every
/// `(set, target)` pair once, in Cantor anti-diagonal order of `(m, j)`, so
/// every pair is served at a tolerance before any pair is revisited at a
/// smaller one.
#[derive(Clone, Debug)]
pub struct TaskStream {
    sets: Vec<CompactSetSpec>,
    targets: Vec<ComplexPolynomial>,
    ladder: TolLadder,
    mu: MuSpec,
    round: Vec<(usize, usize)>,
    next: usize,
}

impl Iterator for TaskStream {
    type Item = Task;

    fn next(&mut self) -> Option<Task> {
        let index = self.next;
        let s = index / self.round.len();
        let tol = self.ladder.get(s)?;
        let (m, j) = self.round[index % self.round.len()];
        self.next += 1;
        Some(Task {
            index,
            m,
            j,
            s,
            set: self.sets[m].clone(),
            target: self.targets[j].clone(),
            tol,
            mu: self.mu.clone(),
        })
    }
}

pub fn enumerate_tasks(
    sets: Vec<CompactSetSpec>,
    targets: Vec<ComplexPolynomial>,
    ladder: TolLadder,
    mu: MuSpec,
) -> Result<TaskStream> {
    if sets.is_empty() {
        return Err(Error::Config("set catalog is empty".into()));
    }
    if targets.is_empty() {
        return Err(Error::Config("target catalog is empty".into()));
    }
    ladder.validate()?;
    mu.validate()?;
    let want = sets.len() * targets.len();
    let mut round = Vec::with_capacity(want);
    let mut n = 0u64;
    while round.len() < want {
        let (m, j) = pairing::unpair(n);
        if (m as usize) < sets.len() && (j as usize) < targets.len() {
            round.push((m as usize, j as usize));
        }
        n += 1;
    }
    Ok(TaskStream { sets, targets, ladder, mu, round, next: 0 })
}

/// How the fit tolerance is derived from the task tolerance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitBudget {
    /// Uniform error below `tol / (2M)` with `M = max(1, max|z|^{N0+1})`.
    #[default]
    Uniform,
    /// Error weighted by `|z|^{N0+1}` below `tol / 2`, which bounds the same
    /// final quantity `max |z^{N0+1} (p - g)|` without the worst-case factor `M`.
    Weighted,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ForgeOptions {
    pub density: f64,
    pub max_degree: usize,
    pub budget: FitBudget,
    pub exec: Exec,
}

impl Default for ForgeOptions {
    fn default() -> Self {
        Self { density: 16.0, max_degree: 64, budget: FitBudget::Uniform, exec: Exec::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub task_index: usize,
    pub m: usize,
    pub j: usize,
    pub s: usize,
    pub set: CompactSetSpec,
    pub target: ComplexPolynomial,
    pub tol: f64,
    pub mu: MuSpec,
    pub chosen_n: u64,
    pub achieved_error: f64,
    /// First and last coefficient index written by this entry (inclusive).
    pub block_start: u64,
    pub block_end: u64,
    /// First index of the zero padding; equals `block_end + 1` when there is none.
    pub padding_start: u64,
    pub fit_degree: usize,
    pub fit_tol: f64,
    pub fit_error: f64,
    pub elapsed_ms: f64,
}

/// The growing coefficient sequence and its ledger.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ForgeState {
    pub coefficients: Vec<Complex64>,
    pub seed_len: usize,
    pub ledger: Vec<LedgerEntry>,
}

impl ForgeState {
    pub fn seeded(prefix: Vec<Complex64>) -> Self {
        Self { seed_len: prefix.len(), coefficients: prefix, ledger: Vec::new() }
    }
}

/// One density step; returns the extended state, leaving `state` untouched.
pub fn extend(state: &ForgeState, task: &Task, transform: &TransformSpec, opts: &ForgeOptions) -> Result<ForgeState> {
    let started = Instant::now();
    let fail = |reason: String, achieved_error: Option<f64>| Error::ApproximationFailed {
        task_index: task.index,
        task: task.to_string(),
        reason,
        achieved_error,
    };
    if !(task.tol > 0.0) {
        return Err(Error::Precondition("task tolerance must be positive".into()));
    }

    let cloud = build_cloud(&task.set, opts.density)?;
    let prefix = &state.coefficients;
    let len = prefix.len();
    let (gs, gv) = shifted_target(transform, prefix, &task.target, &cloud, opts.exec)?;

    let shift = i32::try_from(len).map_err(|_| Error::Precondition("sequence too long".into()))?;
    let (weight, fit_tol) = match opts.budget {
        FitBudget::Uniform => (ErrorWeight::Uniform, task.tol / (2.0 * cloud.max_modulus.powi(shift).max(1.0))),
        FitBudget::Weighted => (ErrorWeight::ModulusPower(shift), task.tol / 2.0),
    };
    let fit = fit_polynomial_weighted(&cloud, &gs, &gv, weight, fit_tol, opts.max_degree)
        .map_err(|e| fail(format!("polynomial fit: {e}"), None))?;

    let mut coefficients = prefix.clone();
    for &pn in fit.polynomial.coefficients() {
        let a = transform.solve_last(&coefficients, pn)?;
        coefficients.push(a);
    }
    let padding_start = coefficients.len() as u64;
    let chosen_n = task.mu.smallest_at_least((len + fit.degree) as u64);
    while (coefficients.len() as u64) <= chosen_n {
        let a = transform.solve_last(&coefficients, Complex64::new(0.0, 0.0))?;
        coefficients.push(a);
    }

    let values = transform.eval_tn(&coefficients, chosen_n as usize, &cloud.validation, opts.exec)?;
    let reference = opts.exec.map(&cloud.validation, |&z| task.target.eval(z));
    let achieved_error = sup_gap_with(&values, &reference, opts.exec)?;
    if !(achieved_error < task.tol) {
        return Err(fail(
            format!("achieved error {achieved_error:e} is not below tolerance {}", task.tol),
            Some(achieved_error),
        ));
    }

    let mut ledger = state.ledger.clone();
    ledger.push(LedgerEntry {
        task_index: task.index,
        m: task.m,
        j: task.j,
        s: task.s,
        set: task.set.clone(),
        target: task.target.clone(),
        tol: task.tol,
        mu: task.mu.clone(),
        chosen_n,
        achieved_error,
        block_start: len as u64,
        block_end: chosen_n,
        padding_start,
        fit_degree: fit.degree,
        fit_tol,
        fit_error: fit.validation_error,
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    });
    Ok(ForgeState { coefficients, seed_len: state.seed_len, ledger })
}

/// Everything a run needs.
#[derive(Clone, Debug)]
pub struct ForgePlan {
    pub transform: TransformSpec,
    pub sets: Vec<CompactSetSpec>,
    pub targets: Vec<ComplexPolynomial>,
    pub ladder: TolLadder,
    pub mu: MuSpec,
    pub task_budget: usize,
    pub seed_prefix: Vec<Complex64>,
    pub options: ForgeOptions,
}

/// The result of a run: final coefficients and ledger plus what is needed to
/// re-verify them.
#[derive(Clone, Debug)]
pub struct UniversalSeries {
    pub transform: TransformSpec,
    pub density: f64,
    pub max_degree: usize,
    pub budget: FitBudget,
    pub state: ForgeState,
}

#[derive(Debug)]
pub struct ForgeOutcome {
    pub series: UniversalSeries,
    /// The error that aborted the run, if any; `series` then holds the partial ledger.
    pub failure: Option<Error>,
}

pub fn run_forge(plan: &ForgePlan) -> Result<ForgeOutcome> {
    plan.transform.validate()?;
    for set in &plan.sets {
        set.validate()?;
    }
    let tasks = enumerate_tasks(plan.sets.clone(), plan.targets.clone(), plan.ladder.clone(), plan.mu.clone())?;
    let mut state = ForgeState::seeded(plan.seed_prefix.clone());
    let mut failure = None;
    for task in tasks.take(plan.task_budget) {
        match extend(&state, &task, &plan.transform, &plan.options) {
            Ok(next) => state = next,
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }
    Ok(ForgeOutcome {
        series: UniversalSeries {
            transform: plan.transform.clone(),
            density: plan.options.density,
            max_degree: plan.options.max_degree,
            budget: plan.options.budget,
            state,
        },
        failure,
    })
}
