//! Cantor pairing on the naturals.
//!
//! `pair(x, y) = (x + y)(x + y + 1)/2 + y`, a bijection `N x N -> N` that walks
//! the anti-diagonals `x + y = 0, 1, 2, ...` with `y` increasing along each.

pub fn pair(x: u64, y: u64) -> u64 {
    let s = x + y;
    s * (s + 1) / 2 + y
}

/// Inverse of [`pair`].
pub fn unpair(n: u64) -> (u64, u64) {
    // w = floor((sqrt(8n + 1) - 1) / 2), computed in integers
    let w = ((8 * n as u128 + 1).isqrt() as u64 - 1) / 2;
    let t = w * (w + 1) / 2;
    let y = n - t;
    (w - y, y)
}

/// Decodes `n` into a `k`-tuple (`k >= 1`) by repeated unpairing:
/// `n -> (x_0, rest)`, `rest -> (x_1, rest')`, ..., the last component is the final rest.
pub fn unpair_tuple(mut n: u64, k: usize) -> Vec<u64> {
    assert!(k >= 1, "tuple arity must be at least 1");
    let mut out = Vec::with_capacity(k);
    for _ in 1..k {
        let (x, rest) = unpair(n);
        out.push(x);
        n = rest;
    }
    out.push(n);
    out
}
