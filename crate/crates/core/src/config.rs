//! Run configuration, read from TOML.
//!
//! Complex numbers are written as `[re, im]` pairs.
//!
//! ```toml
//! task_budget = 20
//! density = 16.0
//! max_degree = 64
//! tol_ladder = [1.0, 0.5, 0.25]   # or "harmonic" for 1/s, s = 1, 2, ...
//! output_dir = "runs/demo"
//!
//! [transform]
//! kind = "cesaro"
//!
//! [mu]
//! kind = "arithmetic"
//! start = 1
//! step = 2
//!
//! [[sets]]
//! shape = "segment"
//! z1 = [1.0, 0.0]
//! z2 = [2.0, 0.0]
//!
//! [[targets]]
//! coefficients = [[0.0, 0.0], [1.0, 0.0]]
//! ```

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::enumerate::enumerate_polynomials;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::poly::ComplexPolynomial;
use crate::schedule::{FitBudget, ForgeOptions, ForgePlan, MuSpec, TolLadder};
use crate::sets::{exhaustion_member, CompactSetSpec};
use crate::transform::TransformSpec;

/// Overrides `output_dir` when set.
pub const OUTPUT_DIR_ENV: &str = "UNISERIES_OUTPUT_DIR";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetConfig {
    pub coefficients: ComplexPolynomial,
}

fn default_density() -> f64 {
    16.0
}

fn default_max_degree() -> usize {
    64
}

fn default_ladder() -> TolLadder {
    TolLadder::harmonic()
}

fn default_mu() -> MuSpec {
    MuSpec::All
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("uniseries-out")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub transform: TransformSpec,
    #[serde(default)]
    pub sets: Vec<CompactSetSpec>,
    /// Appends exhaustion members `K_1..K_count` to the set catalog.
    #[serde(default)]
    pub exhaustion_count: u64,
    #[serde(default)]
    pub targets: Vec<TargetConfig>,
    /// Appends enumerated polynomials `j = 1..=count` to the target catalog.
    #[serde(default)]
    pub enumerated_targets: u64,
    #[serde(default = "default_ladder")]
    pub tol_ladder: TolLadder,
    #[serde(default = "default_mu")]
    pub mu: MuSpec,
    pub task_budget: usize,
    #[serde(default)]
    pub seed_prefix: Vec<Complex64>,
    #[serde(default = "default_density")]
    pub density: f64,
    #[serde(default = "default_max_degree")]
    pub max_degree: usize,
    #[serde(default)]
    pub fit_budget: FitBudget,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.density.is_finite() && self.density > 0.0) {
            return Err(Error::Config(format!("density must be positive, got {}", self.density)));
        }
        self.transform.validate()?;
        for set in &self.sets {
            set.validate()?;
        }
        self.mu.validate()?;
        if self.sets.is_empty() && self.exhaustion_count == 0 {
            return Err(Error::Config("set catalog is empty".into()));
        }
        if self.targets.is_empty() && self.enumerated_targets == 0 {
            return Err(Error::Config("target catalog is empty".into()));
        }
        if self.seed_prefix.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::Config("seed prefix has non-finite entries".into()));
        }
        Ok(())
    }

    pub fn set_catalog(&self) -> Result<Vec<CompactSetSpec>> {
        let mut sets = self.sets.clone();
        for m in 1..=self.exhaustion_count {
            sets.push(exhaustion_member(m)?);
        }
        Ok(sets)
    }

    pub fn target_catalog(&self) -> Vec<ComplexPolynomial> {
        let mut targets: Vec<ComplexPolynomial> = self.targets.iter().map(|t| t.coefficients.clone()).collect();
        targets.extend((1..=self.enumerated_targets).map(enumerate_polynomials));
        targets
    }

    pub fn plan(&self, exec: Exec) -> Result<ForgePlan> {
        Ok(ForgePlan {
            transform: self.transform.clone(),
            sets: self.set_catalog()?,
            targets: self.target_catalog(),
            ladder: self.tol_ladder.clone(),
            mu: self.mu.clone(),
            task_budget: self.task_budget,
            seed_prefix: self.seed_prefix.clone(),
            options: ForgeOptions {
                density: self.density,
                max_degree: self.max_degree,
                budget: self.fit_budget,
                exec,
            },
        })
    }

    /// Output directory after applying the environment override.
    pub fn resolved_output_dir(&self) -> PathBuf {
        match std::env::var_os(OUTPUT_DIR_ENV) {
            Some(dir) if !dir.is_empty() => PathBuf::from(dir),
            _ => self.output_dir.clone(),
        }
    }
}
