use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A polynomial with complex coefficients, constant term first.
///
/// The empty sequence and any all-zero sequence both denote the zero polynomial.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexPolynomial {
    coefficients: Vec<Complex64>,
}

impl ComplexPolynomial {
    pub fn new(coefficients: Vec<Complex64>) -> Self {
        Self { coefficients }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(degree: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); degree + 1];
        c[degree] = Complex64::new(1.0, 0.0);
        Self::new(c)
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<Complex64> {
        self.coefficients
    }

    /// Storage degree, `len - 1`; the empty polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    /// Coefficients with trailing zeros removed.
    pub fn trimmed(&self) -> Vec<Complex64> {
        let mut c = self.coefficients.clone();
        while c.last() == Some(&Complex64::new(0.0, 0.0)) {
            c.pop();
        }
        c
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.coefficients, z)
    }
}

impl From<Vec<Complex64>> for ComplexPolynomial {
    fn from(c: Vec<Complex64>) -> Self {
        Self::new(c)
    }
}

/// Horner evaluation of `sum c[n] z^n`.
pub fn horner(coefficients: &[Complex64], z: Complex64) -> Complex64 {
    coefficients
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// `max_i |values[i] - reference[i]|`, 0 for empty input.
pub fn max_abs_diff(values: &[Complex64], reference: &[Complex64]) -> f64 {
    values
        .iter()
        .zip(reference)
        .map(|(v, r)| (v - r).norm())
        .fold(0.0, f64::max)
}
