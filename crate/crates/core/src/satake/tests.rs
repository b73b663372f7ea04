use proptest::prelude::*;

use super::*;

fn c(a: i64, n: u64, p: i64, r: i64) -> Coordinate {
    Coordinate::from_parts(a, n, p, r)
}

fn one() -> Coordinate {
    Coordinate::one()
}

fn neg() -> Coordinate {
    c(1, 2, 0, 1)
}

fn p(v: Vec<Coordinate>) -> SatakeParam {
    SatakeParam::new(v)
}

fn rep(alg: CyclicAlgebra, blocks: Vec<Vec<Coordinate>>) -> SphericalRepE {
    SphericalRepE::new(alg, blocks.into_iter().map(p).collect()).unwrap()
}

#[test]
fn unramified_character_examples() {
    assert_eq!(param_of_unramified_character(&one(), 1), p(vec![one()]));
    assert_eq!(param_of_unramified_character(&one(), 2), p(vec![c(0, 1, -1, 2), c(0, 1, 1, 2)]));
    assert_eq!(
        param_of_unramified_character(&neg(), 3),
        p(vec![c(1, 2, -1, 1), c(1, 2, 0, 1), c(1, 2, 1, 1)])
    );
}

#[test]
fn kappa_twist_examples() {
    assert_eq!(kappa_twist(&p(vec![one(), neg()]), &neg()), p(vec![one(), neg()]));
    assert_eq!(kappa_twist(&p(vec![one()]), &neg()), p(vec![neg()]));
    let i = c(1, 4, 0, 1);
    assert_eq!(
        kappa_twist(&p(vec![c(0, 1, -1, 2), c(0, 1, 1, 2)]), &i),
        p(vec![c(1, 4, -1, 2), c(1, 4, 1, 2)])
    );
}

#[test]
fn x_of_examples() {
    let m1 = RootOfUnity::new(1, 2);
    assert_eq!(x_of(&p(vec![one(), neg()]), 2, m1).unwrap(), 1);
    assert_eq!(x_of(&p(vec![one()]), 2, m1).unwrap(), 2);
    let fourth = p((0..4).map(|a| c(a, 4, 0, 1)).collect());
    assert_eq!(x_of(&fourth, 4, RootOfUnity::new(1, 4)).unwrap(), 1);
    assert!(x_of(&fourth, 4, RootOfUnity::new(1, 2)).is_err());
}

#[test]
fn delta_examples() {
    let trivial = CyclicAlgebra::field(1).unwrap();
    let y = rep(trivial, vec![vec![c(1, 3, 1, 2), one()]]);
    assert_eq!(delta_map(&y), p(y.flatten()));

    let f2 = CyclicAlgebra::field(2).unwrap();
    assert_eq!(delta_map(&rep(f2, vec![vec![one()]])), p(vec![one(), neg()]));

    let y = rep(f2, vec![vec![c(0, 1, -1, 1), c(0, 1, 1, 1)]]);
    assert_eq!(
        delta_map(&y),
        p(vec![c(0, 1, -1, 2), c(0, 1, 1, 2), c(1, 2, -1, 2), c(1, 2, 1, 2)])
    );
    // Same as the parameters of 1_{F,2} and its κ-twist side by side.
    let triv2 = param_of_unramified_character(&one(), 2);
    assert_eq!(delta_map(&y), triv2.concat(&kappa_twist(&triv2, &neg())));
}

#[test]
fn ai_fiber_examples() {
    let f2 = CyclicAlgebra::field(2).unwrap();
    let fib = ai_fiber(&p(vec![one(), neg()]), f2).unwrap();
    assert_eq!(fib, vec![rep(f2, vec![vec![one()]])]);

    let split = CyclicAlgebra::split(2).unwrap();
    let (a, b) = (c(0, 1, 1, 1), c(1, 3, 0, 1));
    let fib = ai_fiber(&p(vec![a.clone(), b.clone()]), split).unwrap();
    assert_eq!(fib.len(), 2);
    assert!(fib.contains(&rep(split, vec![vec![a.clone()], vec![b.clone()]])));
    assert!(fib.contains(&rep(split, vec![vec![b], vec![a]])));

    let err = ai_fiber(&p(vec![one(), one()]), f2).unwrap_err();
    assert_eq!(err.kind(), "NotStable");
}

#[test]
fn ai_fiber_errors() {
    let f2 = CyclicAlgebra::field(2).unwrap();
    assert_eq!(ai_fiber(&p(vec![one()]), f2).unwrap_err().kind(), "RankMismatch");
    let big = p((0..14).map(|k| c(k % 2, 2, k / 2, 1)).collect());
    assert_eq!(ai_fiber(&big, f2).unwrap_err().kind(), "BudgetExceeded");
}

#[test]
fn fiber_exceeds_gamma_orbit_for_two_blocks_of_two() {
    let split = CyclicAlgebra::split(2).unwrap();
    let y = rep(split, vec![vec![c(0, 1, 1, 1), c(0, 1, 2, 1)], vec![c(0, 1, 3, 1), c(0, 1, 4, 1)]]);
    let fib = ai_fiber(&delta_map(&y), split).unwrap();
    assert_eq!(y.gamma_orbit().len(), 2);
    assert_eq!(fib.len(), 6);
}

#[test]
fn bc_map_examples() {
    let f2 = CyclicAlgebra::field(2).unwrap();
    assert_eq!(bc_map(&p(vec![one(), neg()]), f2), rep(f2, vec![vec![one(), one()]]));
    let s3 = CyclicAlgebra::split(3).unwrap();
    let (a, b) = (c(1, 5, 1, 1), c(0, 1, -1, 3));
    let ab = vec![a, b];
    assert_eq!(bc_map(&p(ab.clone()), s3), rep(s3, vec![ab.clone(), ab.clone(), ab]));
    let f3 = CyclicAlgebra::field(3).unwrap();
    assert_eq!(bc_map(&p(vec![c(1, 3, 1, 1)]), f3), rep(f3, vec![vec![c(0, 1, 3, 1)]]));
}

#[test]
fn bc_fiber_examples() {
    let f2 = CyclicAlgebra::field(2).unwrap();
    assert_eq!(bc_fiber(&rep(f2, vec![vec![one()]])).unwrap(), vec![p(vec![one()]), p(vec![neg()])]);
    let fib = bc_fiber(&rep(f2, vec![vec![one(), one()]])).unwrap();
    assert_eq!(fib.len(), 3);
    for y in [p(vec![one(), one()]), p(vec![one(), neg()]), p(vec![neg(), neg()])] {
        assert!(fib.contains(&y));
    }
    let s2 = CyclicAlgebra::split(2).unwrap();
    let blk = vec![c(1, 3, 1, 2), one()];
    assert_eq!(bc_fiber(&rep(s2, vec![blk.clone(), blk.clone()])).unwrap(), vec![p(blk)]);
    let err = bc_fiber(&rep(s2, vec![vec![one()], vec![neg()]])).unwrap_err();
    assert_eq!(err.kind(), "BlocksDiffer");
}

#[test]
fn ia_bc_examples() {
    let f2 = CyclicAlgebra::field(2).unwrap();
    assert!(check_ia_bc_compat(&rep(f2, vec![vec![one()]])));
    let f1 = CyclicAlgebra::field(1).unwrap();
    assert!(check_ia_bc_compat(&rep(f1, vec![vec![c(1, 7, 2, 3)]])));
    let f3 = CyclicAlgebra::field(3).unwrap();
    assert!(check_ia_bc_compat(&rep(f3, vec![vec![c(0, 1, 3, 1)]])));
    let a = CyclicAlgebra::new(4, 2).unwrap();
    assert!(check_ia_bc_compat(&rep(a, vec![vec![one()], vec![c(1, 3, 1, 1)]])));
}

#[test]
fn algebra_validation() {
    assert_eq!(CyclicAlgebra::new(4, 3).unwrap_err().kind(), "InvalidAlgebra");
    let a = CyclicAlgebra::field(4).unwrap();
    assert!(a.with_zeta(RootOfUnity::new(3, 4)).is_ok());
    assert!(a.with_zeta(RootOfUnity::new(1, 2)).is_err());
}

#[test]
fn json_shapes() {
    let y = param_of_unramified_character(&one(), 2);
    let s = serde_json::to_string(&y).unwrap();
    assert_eq!(s, r#"{"rank":2,"coords":[{"zeta":[0,1],"qexp":[-1,2]},{"zeta":[0,1],"qexp":[1,2]}]}"#);
    assert_eq!(serde_json::from_str::<SatakeParam>(&s).unwrap(), y);
    assert!(serde_json::from_str::<SatakeParam>(r#"{"rank":3,"coords":[]}"#).is_err());

    let e = rep(CyclicAlgebra::field(2).unwrap(), vec![vec![one()]]);
    let s = serde_json::to_string(&e).unwrap();
    assert_eq!(s, r#"{"algebra":{"d":2,"r":1,"s":2,"zeta":[1,2]},"blocks":[[{"zeta":[0,1],"qexp":[0,1]}]]}"#);
    assert_eq!(serde_json::from_str::<SphericalRepE>(&s).unwrap(), e);
    assert!(serde_json::from_str::<SphericalRepE>(r#"{"algebra":{"d":2,"r":1,"s":1},"blocks":[[]]}"#).is_err());
}

// Property checks. Coordinates are roots of unity of order ≤ 24 times q^e with
// e ∈ {−1, −1/2, 0, 1/2, 1}.

fn arb_coord() -> impl Strategy<Value = Coordinate> {
    (1u64..=24, 0i64..24, prop::sample::select(vec![(-1, 1), (-1, 2), (0, 1), (1, 2), (1, 1)]))
        .prop_map(|(n, a, (e, r))| c(a, n, e, r))
}

fn arb_algebra() -> impl Strategy<Value = CyclicAlgebra> {
    prop::sample::select(vec![(1, 1), (2, 1), (2, 2), (3, 1), (3, 3), (4, 1), (4, 2), (4, 4), (6, 1), (6, 2), (6, 3)])
        .prop_map(|(d, r)| CyclicAlgebra::new(d, r).unwrap())
}

fn arb_rep() -> impl Strategy<Value = SphericalRepE> {
    (arb_algebra(), 1usize..=3).prop_flat_map(|(alg, m)| {
        prop::collection::vec(prop::collection::vec(arb_coord(), m), alg.r() as usize)
            .prop_map(move |blocks| rep(alg, blocks))
    })
}

/// Lexicographic enumeration of all root choices (bounded to keep the test fast).
fn all_root_choices(y: &SphericalRepE) -> Vec<SatakeParam> {
    let alg = y.algebra();
    let s = alg.s();
    let flat = y.flatten();
    let total = (s as usize).pow(flat.len() as u32);
    (0..total.min(4096))
        .map(|mut idx| {
            let mut out = Vec::new();
            for x in &flat {
                let t = x.all_roots(s)[idx % s as usize].clone();
                idx /= s as usize;
                for j in 0..s as i64 {
                    out.push(t.twist(alg.zeta().pow(j)));
                }
            }
            SatakeParam::new(out)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn delta_is_independent_of_roots(y in arb_rep()) {
        let d = delta_map(&y);
        for alt in all_root_choices(&y) {
            prop_assert_eq!(&alt, &d);
        }
    }

    #[test]
    fn delta_is_galois_invariant_and_kappa_stable(y in arb_rep()) {
        let d = delta_map(&y);
        for k in 0..y.algebra().r() as usize {
            prop_assert_eq!(&delta_map(&y.rotate(k)), &d);
        }
        prop_assert_eq!(&kappa_twist(&d, &y.algebra().zeta_coord()), &d);
        prop_assert_eq!(d.rank(), y.m() * y.algebra().d() as usize);
    }

    #[test]
    fn central_character(y in arb_rep()) {
        let alg = y.algebra();
        let lhs = delta_map(&y).product();
        let rhs = &central_twist(alg, y.m()) * &SatakeParam::new(y.flatten()).product();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn delta_image_independent_of_generator(y in arb_rep(), a in 1u64..24) {
        let alg = y.algebra();
        let s = alg.s();
        prop_assume!(num_integer::gcd(a, s) == 1);
        let alt = alg.with_zeta(RootOfUnity::new(a as i64, s)).unwrap();
        let y2 = SphericalRepE::new(alt, y.blocks().to_vec()).unwrap();
        prop_assert_eq!(delta_map(&y2), delta_map(&y));
    }

    #[test]
    fn ai_fiber_round_trip(y in arb_rep()) {
        prop_assume!(y.m() * y.algebra().d() as usize <= DEFAULT_MAX_RANK);
        let fib = ai_fiber(&delta_map(&y), y.algebra()).unwrap();
        prop_assert!(fib.contains(&y));
        for z in y.gamma_orbit() {
            prop_assert!(fib.contains(&z));
        }
        for z in &fib {
            prop_assert_eq!(delta_map(z), delta_map(&y));
        }
        if y.algebra().r() == 1 {
            prop_assert_eq!(fib.len(), 1);
        }
    }

    #[test]
    fn bc_fiber_round_trip(alg in arb_algebra(), coords in prop::collection::vec(arb_coord(), 1..=4)) {
        let y = SatakeParam::new(coords);
        let z = bc_map(&y, alg);
        let fib = bc_fiber(&z).unwrap();
        prop_assert!(fib.contains(&y));
        for w in &fib {
            prop_assert_eq!(&bc_map(w, alg), &z);
            // Members differ from y coordinatewise by s-th roots of unity, up to order.
            let mut pool: Vec<Coordinate> = y.coords().to_vec();
            for x in w.coords() {
                let pos = pool.iter().position(|u| {
                    let q = x * &u.inv();
                    q.qexp() == &BigRational::from_integer(0.into()) && alg.s() % q.zeta().order() == 0
                });
                prop_assert!(pos.is_some());
                pool.remove(pos.unwrap());
            }
        }
    }

    #[test]
    fn ia_bc_compat_holds(y in arb_rep()) {
        prop_assert!(check_ia_bc_compat(&y));
    }
}
