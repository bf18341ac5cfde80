//! Enumeration of all polynomials with Gaussian-rational coefficients.
//!
//! The decode of an index `j` is fixed bit-for-bit as follows.
//!
//! * `pair`/`unpair` is the Cantor pairing `pair(x, y) = (x+y)(x+y+1)/2 + y`.
//! * Rationals: `rational(0) = 0`; for `k >= 1`, `rational(2k - 1) = cw(k)` and
//!   `rational(2k) = -cw(k)`, where `cw(k) = fusc(k) / fusc(k + 1)` is the
//!   Calkin-Wilf sequence built from Stern's diatomic `fusc`. Every rational
//!   appears exactly once and always in lowest terms with a positive
//!   denominator.
//! * Gaussian rationals: `gaussian(n) = rational(x) + i rational(y)` with
//!   `(x, y) = unpair(n)`; `gaussian(0) = 0`.
//! * Polynomials: `j = 0` is the zero polynomial. For `j >= 1`,
//!   `(d, code) = unpair(j - 1)` gives the degree `d`, and `code` is split into
//!   `d + 1` naturals `x_0..x_d` by repeated unpairing (`code -> (x_0, rest)`,
//!   `rest -> (x_1, rest')`, ..., `x_d` is the final rest). Coefficient `k < d`
//!   is `gaussian(x_k)`; the leading coefficient is `gaussian(x_d + 1)`, which
//!   is never zero.
//!
//! Each step is a bijection, so `j -> polynomial` is a bijection from the
//! naturals onto polynomials with Gaussian-rational coefficients (trailing
//! zeros stripped). Coefficients are reported as `(pa, qa, pb, qb)` meaning
//! `pa/qa + i pb/qb`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::pairing::{unpair, unpair_tuple};
use crate::poly::ComplexPolynomial;

/// `pa/qa + i pb/qb` in lowest terms, `qa, qb >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaussianRational {
    pub pa: i64,
    pub qa: u64,
    pub pb: i64,
    pub qb: u64,
}

impl GaussianRational {
    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.pa as f64 / self.qa as f64, self.pb as f64 / self.qb as f64)
    }

    pub fn is_zero(self) -> bool {
        self.pa == 0 && self.pb == 0
    }
}

/// Stern's diatomic sequence.
pub fn fusc(mut n: u64) -> u64 {
    let (mut a, mut b) = (1u64, 0u64);
    while n > 0 {
        if n & 1 == 1 {
            b += a;
        } else {
            a += b;
        }
        n >>= 1;
    }
    b
}

/// `n`-th rational as `(numerator, denominator)`.
pub fn rational(n: u64) -> (i64, u64) {
    if n == 0 {
        return (0, 1);
    }
    let k = n.div_ceil(2);
    let (p, q) = (fusc(k) as i64, fusc(k + 1));
    if n % 2 == 1 {
        (p, q)
    } else {
        (-p, q)
    }
}

pub fn gaussian(n: u64) -> GaussianRational {
    let (x, y) = unpair(n);
    let (pa, qa) = rational(x);
    let (pb, qb) = rational(y);
    GaussianRational { pa, qa, pb, qb }
}

/// Exact coefficients of the `j`-th polynomial, constant term first.
pub fn enumerate_exact(j: u64) -> Vec<GaussianRational> {
    if j == 0 {
        return Vec::new();
    }
    let (d, code) = unpair(j - 1);
    let d = d as usize;
    let xs = unpair_tuple(code, d + 1);
    let mut out: Vec<GaussianRational> = xs[..d].iter().map(|&x| gaussian(x)).collect();
    out.push(gaussian(xs[d] + 1));
    out
}

/// The `j`-th polynomial with Gaussian-rational coefficients.
pub fn enumerate_polynomials(j: u64) -> ComplexPolynomial {
    ComplexPolynomial::new(enumerate_exact(j).into_iter().map(GaussianRational::to_complex).collect())
}
