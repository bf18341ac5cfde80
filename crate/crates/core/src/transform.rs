//! Coefficient functionals `b_n(a_0, ..., a_n)` and the generalized partial
//! sums `T_N(a)(z) = sum_{n<=N} b_n(a_0..a_n) z^n` built from them.
//!
//! Four families are supported. `Identity` and `Cesaro` are kept as their own
//! kinds (rather than as special tables) so that their inverses are exact in
//! floating point: the Cesaro closed form `a_n = (n+1) t - sum_{k<n} a_k`
//! yields an exactly zero `b_n` when `t = 0`, which the zero padding between
//! scheduled blocks relies on.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::poly::horner;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Rule producing the row `(lambda_{n,0}, ..., lambda_{n,n})` for any `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum LambdaRule {
    /// `lambda_{n,k} = delta_{n,k}`.
    Identity,
    /// `lambda_{n,k} = 1/(n+1)`.
    CesaroEquivalent,
    /// `lambda_{n,k} = value` for `n - width < k <= n`, zero elsewhere.
    ConstantBand { width: usize, value: Complex64 },
    /// Explicit rows; row `n` must have exactly `n + 1` entries. Rows past the
    /// end of the table are unavailable.
    Table { rows: Vec<Vec<Complex64>> },
}

impl LambdaRule {
    /// Materializes row `n`, rejecting a zero diagonal entry.
    pub fn row(&self, n: usize) -> Result<Vec<Complex64>> {
        let row = match self {
            LambdaRule::Identity => {
                let mut r = vec![ZERO; n + 1];
                r[n] = ONE;
                r
            }
            LambdaRule::CesaroEquivalent => vec![Complex64::new(1.0 / (n as f64 + 1.0), 0.0); n + 1],
            LambdaRule::ConstantBand { width, value } => {
                if *width == 0 {
                    return Err(Error::InvalidTransform("constant-band width must be >= 1".into()));
                }
                (0..=n)
                    .map(|k| if n - k < *width { *value } else { ZERO })
                    .collect()
            }
            LambdaRule::Table { rows } => {
                let r = rows.get(n).ok_or_else(|| {
                    Error::InvalidTransform(format!(
                        "lambda table has {} rows; row {n} requested",
                        rows.len()
                    ))
                })?;
                if r.len() != n + 1 {
                    return Err(Error::InvalidTransform(format!(
                        "lambda table row {n} has {} entries, expected {}",
                        r.len(),
                        n + 1
                    )));
                }
                r.clone()
            }
        };
        if row[n] == ZERO {
            return Err(Error::InvalidTransform(format!("lambda_{{{n},{n}}} is zero")));
        }
        Ok(row)
    }

    fn validate(&self) -> Result<()> {
        match self {
            LambdaRule::Table { rows } => {
                for n in 0..rows.len() {
                    self.row(n)?;
                }
                Ok(())
            }
            _ => self.row(0).map(|_| ()),
        }
    }

    /// Largest row index this rule can produce, if bounded.
    pub fn max_row(&self) -> Option<usize> {
        match self {
            LambdaRule::Table { rows } => rows.len().checked_sub(1),
            _ => None,
        }
    }
}

type ScalarMap = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A user-supplied homeomorphism of the plane together with its inverse.
#[derive(Clone)]
pub struct CustomPsi {
    pub name: String,
    pub forward: ScalarMap,
    pub inverse: ScalarMap,
}

impl fmt::Debug for CustomPsi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomPsi").field("name", &self.name).finish_non_exhaustive()
    }
}

/// Homeomorphism wrapped around the linear combination in `WrappedLinear`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Psi {
    /// `w -> alpha w + beta`, `alpha != 0`.
    Affine { alpha: Complex64, beta: Complex64 },
    /// `r e^{i theta} -> r^rho e^{i theta}`, `rho > 0`.
    RadialPower { rho: f64 },
    /// Library-only; cannot be written to a run artifact.
    #[serde(skip)]
    Custom(CustomPsi),
}

impl Psi {
    pub fn forward(&self, w: Complex64) -> Complex64 {
        match self {
            Psi::Affine { alpha, beta } => alpha * w + beta,
            Psi::RadialPower { rho } => radial_power(w, *rho),
            Psi::Custom(c) => (c.forward)(w),
        }
    }

    pub fn inverse(&self, w: Complex64) -> Complex64 {
        match self {
            Psi::Affine { alpha, beta } => (w - beta) / alpha,
            Psi::RadialPower { rho } => radial_power(w, 1.0 / rho),
            Psi::Custom(c) => (c.inverse)(w),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Psi::Affine { alpha, .. } if *alpha == ZERO => {
                return Err(Error::InvalidTransform("affine psi requires alpha != 0".into()))
            }
            Psi::RadialPower { rho } if !(rho.is_finite() && *rho > 0.0) => {
                return Err(Error::InvalidTransform(format!("radial-power psi requires rho > 0, got {rho}")))
            }
            _ => {}
        }
        for &w in PSI_PROBES.iter() {
            let back = self.inverse(self.forward(w));
            if !((back - w).norm() <= 1e-12 * w.norm().max(1.0)) {
                return Err(Error::InvalidTransform(format!(
                    "psi inverse fails the round trip at {w}: got {back}"
                )));
            }
        }
        Ok(())
    }
}

const PSI_PROBES: [Complex64; 9] = [
    Complex64::new(0.0, 0.0),
    Complex64::new(1.0, 0.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(0.5, -2.0),
    Complex64::new(3.0, 4.0),
    Complex64::new(-7.25, 0.1),
    Complex64::new(1e-3, 0.0),
    Complex64::new(0.0, 1e3),
];

fn radial_power(w: Complex64, rho: f64) -> Complex64 {
    let r = w.norm();
    if r == 0.0 {
        ZERO
    } else {
        w * (r.powf(rho) / r)
    }
}

/// The family `{b_n}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TransformSpec {
    /// `b_n = a_n`: ordinary partial sums.
    Identity,
    /// `b_n = (a_0 + ... + a_n)/(n+1)`.
    Cesaro,
    /// `b_n = sum_k lambda_{n,k} a_k`.
    LinearTriangular { lambda: LambdaRule },
    /// `b_n = psi(sum_k lambda_{n,k} a_k)`.
    WrappedLinear { lambda: LambdaRule, psi: Psi },
}

impl TransformSpec {
    pub fn linear(lambda: LambdaRule) -> Result<Self> {
        let t = TransformSpec::LinearTriangular { lambda };
        t.validate()?;
        Ok(t)
    }

    pub fn wrapped(lambda: LambdaRule, psi: Psi) -> Result<Self> {
        let t = TransformSpec::WrappedLinear { lambda, psi };
        t.validate()?;
        Ok(t)
    }

    /// Checks the rule's first rows (every row of a table) and the psi round trip.
    pub fn validate(&self) -> Result<()> {
        match self {
            TransformSpec::Identity | TransformSpec::Cesaro => Ok(()),
            TransformSpec::LinearTriangular { lambda } => lambda.validate(),
            TransformSpec::WrappedLinear { lambda, psi } => {
                lambda.validate()?;
                psi.validate()
            }
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            TransformSpec::Identity => "identity",
            TransformSpec::Cesaro => "cesaro",
            TransformSpec::LinearTriangular { .. } => "linear-triangular",
            TransformSpec::WrappedLinear { .. } => "wrapped-linear",
        }
    }

    /// True for the kinds whose `b_n` is linear in the coefficients.
    pub fn is_linear(&self) -> bool {
        !matches!(self, TransformSpec::WrappedLinear { .. })
    }

    /// `b_n(a_0, ..., a_n)` where `n + 1 = prefix.len()`.
    pub fn apply_b(&self, prefix: &[Complex64]) -> Result<Complex64> {
        let n = prefix
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::Precondition("apply_b needs a nonempty prefix".into()))?;
        Ok(match self {
            TransformSpec::Identity => prefix[n],
            TransformSpec::Cesaro => sum(prefix) / (n as f64 + 1.0),
            TransformSpec::LinearTriangular { lambda } => dot(&lambda.row(n)?, prefix),
            TransformSpec::WrappedLinear { lambda, psi } => psi.forward(dot(&lambda.row(n)?, prefix)),
        })
    }

    /// `(b_0, ..., b_N)` for the given prefix.
    pub fn coeffs_t(&self, prefix: &[Complex64], big_n: usize) -> Result<Vec<Complex64>> {
        if prefix.len() < big_n + 1 {
            return Err(Error::Precondition(format!(
                "coeffs_T needs at least {} coefficients, prefix has {}",
                big_n + 1,
                prefix.len()
            )));
        }
        let prefix = &prefix[..=big_n];
        match self {
            TransformSpec::Identity => Ok(prefix.to_vec()),
            TransformSpec::Cesaro => {
                let mut acc = ZERO;
                Ok(prefix
                    .iter()
                    .enumerate()
                    .map(|(n, &a)| {
                        acc += a;
                        acc / (n as f64 + 1.0)
                    })
                    .collect())
            }
            _ => (0..=big_n).map(|n| self.apply_b(&prefix[..=n])).collect(),
        }
    }

    /// `T_N(a)(z)` at every point, by Horner on `coeffs_t`.
    pub fn eval_tn(
        &self,
        prefix: &[Complex64],
        big_n: usize,
        points: &[Complex64],
        exec: Exec,
    ) -> Result<Vec<Complex64>> {
        let b = self.coeffs_t(prefix, big_n)?;
        Ok(exec.map(points, |&z| horner(&b, z)))
    }

    /// The value `a_n` (with `n = prefix.len()`) for which `b_n(prefix, a_n) = target`.
    pub fn solve_last(&self, prefix: &[Complex64], target: Complex64) -> Result<Complex64> {
        let n = prefix.len();
        match self {
            TransformSpec::Identity => Ok(target),
            TransformSpec::Cesaro => Ok(target * (n as f64 + 1.0) - sum(prefix)),
            TransformSpec::LinearTriangular { lambda } => solve_linear(lambda, prefix, target),
            TransformSpec::WrappedLinear { lambda, psi } => solve_linear(lambda, prefix, psi.inverse(target)),
        }
    }

    /// The sequence `a` with `b_n(a_0..a_n) = c_n` for every `n`.
    pub fn pullback(&self, c: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut a = Vec::with_capacity(c.len());
        for &target in c {
            let next = self.solve_last(&a, target)?;
            a.push(next);
        }
        Ok(a)
    }

    /// `max_{n <= N} sum_k |lambda_{n,k}|`, the factor by which a uniform
    /// per-coefficient perturbation can grow in the `b` values.
    pub fn max_row_abs_sum(&self, big_n: usize) -> Result<f64> {
        let lambda = match self {
            TransformSpec::Identity | TransformSpec::Cesaro => return Ok(1.0),
            TransformSpec::LinearTriangular { lambda } => lambda,
            TransformSpec::WrappedLinear { .. } => {
                return Err(Error::UnsupportedTransform(
                    "wrapped-linear transforms have no global modulus of continuity".into(),
                ))
            }
        };
        let mut worst = 0.0f64;
        for n in 0..=big_n {
            worst = worst.max(lambda.row(n)?.iter().map(|l| l.norm()).sum());
        }
        Ok(worst)
    }
}

fn sum(xs: &[Complex64]) -> Complex64 {
    xs.iter().fold(ZERO, |acc, &x| acc + x)
}

fn dot(row: &[Complex64], xs: &[Complex64]) -> Complex64 {
    row.iter().zip(xs).fold(ZERO, |acc, (&l, &x)| acc + l * x)
}

fn solve_linear(lambda: &LambdaRule, prefix: &[Complex64], target: Complex64) -> Result<Complex64> {
    let n = prefix.len();
    let row = lambda.row(n)?;
    Ok((target - dot(&row[..n], prefix)) / row[n])
}
