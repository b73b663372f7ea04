use proptest::prelude::*;

use super::*;

/// Roots of unity of order ≤ 12 times q^e for e in a small grid: 46 · 5 = 230 points.
fn pool() -> Vec<Coordinate> {
    let exps = [(-1, 1), (-1, 2), (0, 1), (1, 3), (3, 2)];
    let mut out = Vec::new();
    for n in 1..=12u64 {
        for a in 0..n {
            let z = RootOfUnity::new(a as i64, n);
            if z.order() != n {
                continue;
            }
            for &(p, r) in &exps {
                out.push(Coordinate::new(z, rat(p, r)));
            }
        }
    }
    out
}

#[test]
fn pool_is_large_enough() {
    assert!(pool().len() >= 200);
}

#[test]
fn root_then_power_is_identity_on_pool() {
    for x in pool() {
        for k in 1..=6u64 {
            assert_eq!(coord_root(&x, k).pow(k as i64), x, "k={k} x={x}");
        }
    }
}

#[test]
fn embedding_is_multiplicative_on_pool() {
    let p = pool();
    // Every pair would be 50k cyclotomic products; a stride keeps coverage broad and fast.
    for (i, a) in p.iter().enumerate() {
        for b in p.iter().skip(i % 7).step_by(7) {
            let lhs = QCyclo::from_coordinate(&coord_mul(a, b));
            let rhs = QCyclo::from_coordinate(a).mul(&QCyclo::from_coordinate(b));
            assert_eq!(lhs, rhs, "{a} * {b}");
        }
    }
}

fn arb_coord() -> impl Strategy<Value = Coordinate> {
    (1u64..=30, 0i64..30, -6i64..=6, 1i64..=4)
        .prop_map(|(n, a, p, r)| Coordinate::from_parts(a, n, p, r))
}

/// Conductors dividing 24, so that products of three elements stay at conductor ≤ 24.
fn arb_cyclo() -> impl Strategy<Value = Cyclo> {
    (prop::sample::select(vec![1u64, 2, 3, 4, 6, 8, 12, 24]), prop::collection::vec(-5i64..=5, 0..30)).prop_map(|(n, v)| {
        Cyclo::reduce_from(n, v.into_iter().map(|c| rat(c, 1)).collect())
    })
}

proptest! {
    #[test]
    fn group_law(a in arb_coord(), b in arb_coord(), c in arb_coord()) {
        prop_assert_eq!(coord_mul(&coord_mul(&a, &b), &c), coord_mul(&a, &coord_mul(&b, &c)));
        prop_assert_eq!(coord_mul(&a, &b), coord_mul(&b, &a));
        prop_assert!(coord_mul(&a, &a.inv()).is_one());
    }

    #[test]
    fn every_root_is_a_root(x in arb_coord(), k in 1u64..=8) {
        for t in x.all_roots(k) {
            prop_assert_eq!(t.pow(k as i64), x.clone());
        }
    }

    #[test]
    fn reduction_is_idempotent(x in arb_cyclo()) {
        let again = Cyclo::reduce_from(x.conductor(), x.coeffs().to_vec());
        prop_assert_eq!(again.coeffs(), x.coeffs());
    }

    #[test]
    fn lifted_equality_is_an_equivalence(x in arb_cyclo(), m1 in 1u64..=4, m2 in 1u64..=4) {
        let a = x.lift(x.conductor() * m1);
        let b = x.lift(x.conductor() * m2);
        prop_assert_eq!(&a, &x);
        prop_assert_eq!(&b, &a);
        prop_assert_eq!(&x, &b);
    }

    #[test]
    fn ring_axioms(a in arb_cyclo(), b in arb_cyclo(), c in arb_cyclo()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn embedding_is_multiplicative(a in arb_coord(), b in arb_coord()) {
        prop_assert_eq!(
            QCyclo::from_coordinate(&coord_mul(&a, &b)),
            QCyclo::from_coordinate(&a).mul(&QCyclo::from_coordinate(&b))
        );
    }
}
