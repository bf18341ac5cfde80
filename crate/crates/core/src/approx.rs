//! Constructive polynomial approximation on a discretized compact set.
//!
//! Given the values of a function `g` on a point cloud, [`fit_polynomial`]
//! escalates the degree `d = 0, 1, 2, ...` and at each step solves the
//! discrete least-squares problem on the sample nodes in a basis that is
//! orthonormal for the sample inner product. The basis is grown one degree at
//! a time by an Arnoldi step (multiply the last basis vector by `z`, then
//! classical Gram-Schmidt applied twice). Each basis polynomial is also carried
//! in monomial form, so the fitted polynomial can be handed back as plain
//! coefficients; the first degree whose monomial form meets the tolerance on
//! the validation nodes is accepted.
//!
//! Converting back to monomials is where precision is lost: on a set far
//! from the origin the orthonormal polynomials have huge, alternating
//! monomial coefficients. The growth factor of basis polynomial `q_d` is
//!
//! ```text
//! max_z w(z) sum_i |C_{d,i}| |z|^i  /  max_z w(z) |q_d(z)|
//! ```
//!
//! over the sample nodes, i.e. how much a Horner evaluation of the monomial
//! form can amplify rounding relative to the size of the values it produces.
//! Past [`GROWTH_LIMIT`] the fit stops with [`Error::IllConditioned`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::poly::{horner, ComplexPolynomial};
use crate::sets::PointCloud;
use crate::transform::TransformSpec;

pub const GROWTH_LIMIT: f64 = 1e12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Weight applied to pointwise errors, both in the least-squares objective
/// and in the validation check.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum ErrorWeight {
    #[default]
    Uniform,
    /// `w(z) = |z|^k`.
    ModulusPower(i32),
}

impl ErrorWeight {
    fn at(self, z: Complex64) -> f64 {
        match self {
            ErrorWeight::Uniform => 1.0,
            ErrorWeight::ModulusPower(k) => z.norm().powi(k),
        }
    }
}

/// An accepted fit.
#[derive(Clone, Debug, PartialEq)]
pub struct Fit {
    pub polynomial: ComplexPolynomial,
    pub degree: usize,
    /// Weighted max error on the validation nodes.
    pub validation_error: f64,
    /// Growth factor of the highest basis polynomial used.
    pub growth: f64,
}

/// Values of the shifted target `(f(z) - sum_{n<=N0} b_n z^n) / z^{N0+1}` on
/// the sample and validation nodes, where `N0 + 1 = prefix.len()`.
pub fn shifted_target(
    transform: &TransformSpec,
    prefix: &[Complex64],
    f: &ComplexPolynomial,
    cloud: &PointCloud,
    exec: Exec,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    if !(cloud.min_modulus > 0.0) {
        return Err(Error::Precondition("point cloud touches 0".into()));
    }
    let b = match prefix.len() {
        0 => Vec::new(),
        len => transform.coeffs_t(prefix, len - 1)?,
    };
    let shift = i32::try_from(prefix.len())
        .map_err(|_| Error::Precondition("prefix too long for the shift exponent".into()))?;
    let g = |z: &Complex64| (f.eval(*z) - horner(&b, *z)) / z.powi(shift);
    Ok((exec.map(&cloud.samples, g), exec.map(&cloud.validation, g)))
}

/// Least-squares fit with degree escalation; see the module docs.
pub fn fit_polynomial(
    cloud: &PointCloud,
    g_samples: &[Complex64],
    g_validation: &[Complex64],
    tol: f64,
    max_degree: usize,
) -> Result<Fit> {
    fit_polynomial_weighted(cloud, g_samples, g_validation, ErrorWeight::Uniform, tol, max_degree)
}

pub fn fit_polynomial_weighted(
    cloud: &PointCloud,
    g_samples: &[Complex64],
    g_validation: &[Complex64],
    weight: ErrorWeight,
    tol: f64,
    max_degree: usize,
) -> Result<Fit> {
    if g_samples.len() != cloud.samples.len() || g_validation.len() != cloud.validation.len() {
        return Err(Error::Precondition("target values do not match the cloud grids".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tolerance must be positive, got {tol}")));
    }
    if cloud.samples.is_empty() {
        return Err(Error::Precondition("empty sample grid".into()));
    }

    let zs = &cloud.samples;
    let n = zs.len();
    let w2: Vec<f64> = zs.iter().map(|&z| weight.at(z).powi(2)).collect();
    let inner = |u: &[Complex64], v: &[Complex64]| -> Complex64 {
        u.iter().zip(v).zip(&w2).fold(ZERO, |acc, ((a, b), w)| acc + a.conj() * b * *w) / n as f64
    };
    let norm = |u: &[Complex64]| inner(u, u).re.sqrt();
    let wmax: Vec<f64> = w2.iter().map(|w| w.sqrt()).collect();
    let weighted_val: Vec<f64> = cloud.validation.iter().map(|&z| weight.at(z)).collect();

    // basis values at the samples and their monomial coefficients
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut monomial: Vec<Vec<Complex64>> = Vec::new();
    let mut p: Vec<Complex64> = Vec::new();
    let mut best = (f64::INFINITY, 0usize);

    for d in 0..=max_degree {
        if d >= n {
            break;
        }
        let (q, coeffs) = if d == 0 {
            let ones = vec![Complex64::new(1.0, 0.0); n];
            let nu = norm(&ones);
            if !(nu > 0.0) {
                break;
            }
            (ones.iter().map(|o| o / nu).collect::<Vec<_>>(), vec![Complex64::new(1.0 / nu, 0.0)])
        } else {
            let prev = &basis[d - 1];
            let mut v: Vec<Complex64> = prev.iter().zip(zs).map(|(q, z)| q * z).collect();
            let before = norm(&v);
            let mut h = vec![ZERO; d];
            for _ in 0..2 {
                for (j, qj) in basis.iter().enumerate() {
                    let hj = inner(qj, &v);
                    h[j] += hj;
                    for (vi, qi) in v.iter_mut().zip(qj) {
                        *vi -= hj * qi;
                    }
                }
            }
            let hd = norm(&v);
            if !(hd > 1e-14 * before) {
                // the samples cannot support another independent degree
                break;
            }
            let mut coeffs = vec![ZERO; d + 1];
            for (i, c) in monomial[d - 1].iter().enumerate() {
                coeffs[i + 1] += c;
            }
            for (j, cj) in monomial.iter().enumerate() {
                for (i, c) in cj.iter().enumerate() {
                    coeffs[i] -= h[j] * c;
                }
            }
            for c in coeffs.iter_mut() {
                *c /= hd;
            }
            (v.iter().map(|x| x / hd).collect(), coeffs)
        };

        let growth = growth_factor(&coeffs, &q, zs, &wmax);
        if !(growth <= GROWTH_LIMIT) {
            return Err(Error::IllConditioned {
                degree: d,
                last_safe_degree: d.checked_sub(1),
                growth,
                best_error: best.0,
            });
        }

        let cd = inner(&q, g_samples);
        p.push(ZERO);
        for (pi, c) in p.iter_mut().zip(&coeffs) {
            *pi += cd * c;
        }
        basis.push(q);
        monomial.push(coeffs);

        let err = cloud
            .validation
            .iter()
            .zip(g_validation)
            .zip(&weighted_val)
            .map(|((&z, &g), &w)| w * (horner(&p, z) - g).norm())
            .fold(0.0, f64::max);
        if err < best.0 {
            best = (err, d);
        }
        if err < tol {
            return Ok(Fit {
                polynomial: ComplexPolynomial::new(p),
                degree: d,
                validation_error: err,
                growth,
            });
        }
    }
    Err(Error::MaxDegreeExceeded { max_degree, tol, best_error: best.0, best_degree: best.1 })
}

fn growth_factor(coeffs: &[Complex64], q: &[Complex64], zs: &[Complex64], w: &[f64]) -> f64 {
    let mut bound = 0.0f64;
    let mut actual = 0.0f64;
    for ((z, qz), wz) in zs.iter().zip(q).zip(w) {
        let r = z.norm();
        let b = coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm());
        bound = bound.max(wz * b);
        actual = actual.max(wz * qz.norm());
    }
    bound / actual
}
