mod common;

use common::{c, dense_solve};
use proptest::prelude::*;
use uniseries::{Complex64, LambdaRule, Psi, TransformSpec};

fn complex(bound: f64) -> impl Strategy<Value = Complex64> {
    (-bound..bound, -bound..bound).prop_map(|(re, im)| c(re, im))
}

/// Diagonal with modulus in [0.5, 2] and any phase, so the system stays well posed.
fn diagonal() -> impl Strategy<Value = Complex64> {
    (0.5f64..2.0, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn table(size: usize) -> impl Strategy<Value = LambdaRule> {
    let rows: Vec<_> = (0..size)
        .map(|n| (proptest::collection::vec(complex(1.0), n), diagonal()).prop_map(|(mut r, d)| {
            r.push(d);
            r
        }))
        .collect();
    rows.prop_map(|rows| LambdaRule::Table { rows })
}

fn psi() -> impl Strategy<Value = Psi> {
    prop_oneof![
        (diagonal(), complex(2.0)).prop_map(|(alpha, beta)| Psi::Affine { alpha, beta }),
        (0.5f64..2.0).prop_map(|rho| Psi::RadialPower { rho }),
    ]
}

fn transform(size: usize) -> impl Strategy<Value = TransformSpec> {
    prop_oneof![
        Just(TransformSpec::Identity),
        Just(TransformSpec::Cesaro),
        table(size).prop_map(|lambda| TransformSpec::LinearTriangular { lambda }),
        (table(size), psi()).prop_map(|(lambda, psi)| TransformSpec::WrappedLinear { lambda, psi }),
    ]
}

fn rel_gap(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = a.iter().chain(b).map(|x| x.norm()).fold(1.0, f64::max);
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn pullback_then_coeffs_t_round_trips(
        (t, c_vals) in (1usize..=12).prop_flat_map(|n| (transform(n), proptest::collection::vec(complex(3.0), n)))
    ) {
        let a = t.pullback(&c_vals).unwrap();
        let back = t.coeffs_t(&a, a.len() - 1).unwrap();
        prop_assert!(rel_gap(&back, &c_vals) <= 1e-9, "{:?}", t);
    }

    #[test]
    fn coeffs_t_then_pullback_round_trips(
        (t, a) in (1usize..=12).prop_flat_map(|n| (transform(n), proptest::collection::vec(complex(3.0), n)))
    ) {
        let b = t.coeffs_t(&a, a.len() - 1).unwrap();
        let again = t.pullback(&b).unwrap();
        let b2 = t.coeffs_t(&again, again.len() - 1).unwrap();
        prop_assert!(rel_gap(&b2, &b) <= 1e-9);
        if matches!(t, TransformSpec::Identity | TransformSpec::Cesaro) {
            prop_assert!(rel_gap(&again, &a) <= 1e-12);
        }
    }

    #[test]
    fn solve_last_hits_its_target(
        (t, prefix, target) in (1usize..=12).prop_flat_map(|n| (transform(n), proptest::collection::vec(complex(3.0), n - 1), complex(3.0)))
    ) {
        let mut full = prefix.clone();
        full.push(t.solve_last(&prefix, target).unwrap());
        let got = t.apply_b(&full).unwrap();
        prop_assert!((got - target).norm() <= 1e-9 * target.norm().max(1.0));
    }

    #[test]
    fn triangular_solve_matches_dense_elimination(
        (lambda, rhs) in (1usize..=12).prop_flat_map(|n| (table(n), proptest::collection::vec(complex(3.0), n)))
    ) {
        let n = rhs.len();
        let t = TransformSpec::LinearTriangular { lambda: lambda.clone() };
        let a = t.pullback(&rhs).unwrap();
        let matrix: Vec<Vec<Complex64>> = (0..n)
            .map(|i| {
                let mut row = lambda.row(i).unwrap();
                row.resize(n, c(0.0, 0.0));
                row
            })
            .collect();
        let oracle = dense_solve(matrix, rhs);
        prop_assert!(rel_gap(&a, &oracle) <= 1e-8);
    }

    #[test]
    fn cesaro_matches_its_table(a in proptest::collection::vec(complex(5.0), 1..40)) {
        let table = TransformSpec::LinearTriangular { lambda: LambdaRule::CesaroEquivalent };
        let n = a.len() - 1;
        let direct = TransformSpec::Cesaro.coeffs_t(&a, n).unwrap();
        let generic = table.coeffs_t(&a, n).unwrap();
        prop_assert!(rel_gap(&direct, &generic) <= 1e-12);
    }

    #[test]
    fn cesaro_padding_is_exactly_zero(a in proptest::collection::vec(complex(5.0), 1..30), pad in 1usize..20) {
        let t = TransformSpec::Cesaro;
        let mut seq = a.clone();
        for _ in 0..pad {
            let next = t.solve_last(&seq, c(0.0, 0.0)).unwrap();
            seq.push(next);
        }
        let b = t.coeffs_t(&seq, seq.len() - 1).unwrap();
        for bn in &b[a.len()..] {
            prop_assert_eq!(*bn, c(0.0, 0.0));
        }
    }

    #[test]
    fn psi_inverts(p in psi(), w in complex(10.0)) {
        let back = p.inverse(p.forward(w));
        prop_assert!((back - w).norm() <= 1e-12 * w.norm().max(1.0));
    }
}
