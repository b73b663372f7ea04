//! Seeded randomized suites checking the invariants of every module. The same
//! `(suite, seed, cases)` always produces the same report.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{rat, Coordinate, Cyclo, QCyclo, RootOfUnity};
use crate::error::Result;
use crate::global::{self, GlobalDiscrete, InducedGlobal, LocalDatum, Place, Verdict};
use crate::hecke::{ai_transfer, bc_transfer, constant_term, satake_eval, SymLaurent, Tensor};
use crate::reps::{self, AtomRef, CuspidalAtom, Elliptic, EssDiscrete, Factor, Pair, Product, Speh};
use crate::satake::{
    ai_fiber, bc_fiber, bc_map, central_twist, check_ia_bc_compat, delta_map, x_of, CyclicAlgebra, SatakeParam,
    SphericalRepE,
};

pub const SUITES: [&str; 5] = ["arith", "satake", "hecke", "reps", "global"];
pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_CASES: usize = 50;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PropertyReport {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub properties: Vec<PropertyReport>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.properties.iter().all(|p| p.failed == 0)
    }
}

/// Limits forwarded from the command line.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub degree_budget: u32,
    pub max_rank: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { degree_budget: crate::hecke::DEFAULT_DEGREE_BUDGET, max_rank: crate::satake::DEFAULT_MAX_RANK }
    }
}

type Check = fn(&mut ChaCha8Rng, Limits) -> std::result::Result<(), String>;

fn run(suite: &str, seed: u64, cases: usize, limits: Limits, checks: &[(&str, Check)]) -> SuiteReport {
    let properties = checks
        .iter()
        .enumerate()
        .map(|(i, (name, check))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((i as u64 + 1) << 48) ^ fxhash(suite));
            let mut rep = PropertyReport { name: name.to_string(), passed: 0, failed: 0, first_failure: None };
            for case in 0..cases {
                match check(&mut rng, limits) {
                    Ok(()) => rep.passed += 1,
                    Err(e) => {
                        rep.failed += 1;
                        rep.first_failure.get_or_insert_with(|| format!("case {case}: {e}"));
                    }
                }
            }
            rep
        })
        .collect();
    SuiteReport { suite: suite.to_string(), seed, cases, properties }
}

fn fxhash(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Run one named suite, or `None` for an unknown name.
pub fn run_suite(name: &str, seed: u64, cases: usize, limits: Limits) -> Option<SuiteReport> {
    let checks: &[(&str, Check)] = match name {
        "arith" => &[
            ("coordinate_group_law", arith_group_law),
            ("canonical_root", arith_root),
            ("cyclo_ring_axioms", arith_ring),
            ("embedding_multiplicative", arith_embedding),
        ],
        "satake" => &[
            ("delta_root_independence", satake_root_independence),
            ("central_character", satake_central_character),
            ("orbit_divides_r", satake_orbit_divides),
            ("ai_fiber_contains_orbit", satake_ai_fiber),
            ("bc_fiber_contains_preimage", satake_bc_fiber),
            ("ia_bc_compat", satake_compat),
        ],
        "hecke" => &[
            ("ai_transfer_oracle", hecke_ai_oracle),
            ("constant_term_oracle", hecke_constant_term),
            ("bc_transfer_oracle", hecke_bc_oracle),
        ],
        "reps" => &[
            ("consistency_square", reps_square),
            ("genericity_equivalence", reps_generic),
            ("fiber_closure", reps_fiber),
            ("elliptic_bijection", reps_elliptic),
        ],
        "global" => &[
            ("placewise_lift_coherence", global_coherence),
            ("separate_round_trip", global_separate),
            ("local_identity", global_local_identity),
            ("global_compat", global_compat),
        ],
        _ => return None,
    };
    Some(run(name, seed, cases, limits, checks))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{}: {e}", e.kind()))
}

const ORDERS: [u64; 8] = [1, 2, 3, 4, 6, 8, 12, 24];

/// A coordinate with root-of-unity order dividing 24 and a small `q`-exponent.
pub fn random_coordinate(rng: &mut impl Rng) -> Coordinate {
    let n = *ORDERS.choose(rng).expect("nonempty");
    Coordinate::from_parts(rng.gen_range(0..n as i64), n, rng.gen_range(-3..=3), *[1, 2, 3].choose(rng).expect("nonempty"))
}

pub fn random_param(rng: &mut impl Rng, n: usize) -> SatakeParam {
    (0..n).map(|_| random_coordinate(rng)).collect()
}

/// An algebra with `d` drawn from `ds` and `r | d` uniform.
pub fn random_algebra(rng: &mut impl Rng, ds: &[u64]) -> CyclicAlgebra {
    let d = *ds.choose(rng).expect("nonempty");
    let divs: Vec<u64> = (1..=d).filter(|r| d.is_multiple_of(*r)).collect();
    CyclicAlgebra::new(d, *divs.choose(rng).expect("nonempty")).expect("r divides d")
}

pub fn random_rep_e(rng: &mut impl Rng, alg: CyclicAlgebra, m: usize) -> SphericalRepE {
    SphericalRepE::new(alg, (0..alg.r()).map(|_| random_param(rng, m)).collect()).expect("equal block ranks")
}

/// A random symmetric Laurent polynomial of degree at most `deg` in `n` variables.
pub fn random_poly(rng: &mut impl Rng, n: usize, deg: u32) -> SymLaurent {
    let terms: Vec<(Vec<u32>, QCyclo)> = (0..rng.gen_range(1..=4))
        .map(|_| {
            let mut v = vec![0u32; n];
            for _ in 0..rng.gen_range(0..=deg) {
                v[rng.gen_range(0..n)] += 1;
            }
            let k = *[-3, -2, -1, 1, 2, 3].choose(rng).expect("nonempty");
            let c = QCyclo::from_coordinate(&random_coordinate(rng)).scale(&rat(k, 1));
            (v, c)
        })
        .collect();
    SymLaurent::from_terms(n, rng.gen_range(0..=1), terms).expect("lengths bounded by n")
}

fn arith_group_law(rng: &mut ChaCha8Rng, _: Limits) -> std::result::Result<(), String> {
    let (a, b, c) = (random_coordinate(rng), random_coordinate(rng), random_coordinate(rng));
    ensure(&(&a * &b) * &c == &a * &(&b * &c), || format!("associativity fails for {a}, {b}, {c}"))?;
    ensure((&a * &a.inv()).is_one(), || format!("{a} times its inverse is not 1"))?;
    ensure(&a * &b == &b * &a, || format!("{a} and {b} do not commute"))
}

fn arith_root(rng: &mut ChaCha8Rng, _: Limits) -> std::result::Result<(), String> {
    let a = random_coordinate(rng);
    let k = rng.gen_range(1..=12u64);
    ensure(a.root(k).pow(k as i64) == a, || format!("canonical {k}-th root of {a} fails"))?;
    let roots = a.all_roots(k);
    ensure(roots.len() == k as usize && roots.iter().all(|t| t.pow(k as i64) == a), || format!("all {k}-th roots of {a}"))
}

fn random_cyclo(rng: &mut ChaCha8Rng) -> Cyclo {
    let n = *[1u64, 2, 3, 4, 6, 8, 12].choose(rng).expect("nonempty");
    let raw: Vec<_> = (0..n).map(|_| rat(rng.gen_range(-3..=3), rng.gen_range(1..=3))).collect();
    Cyclo::reduce_from(n, raw)
}

fn arith_ring(rng: &mut ChaCha8Rng, _: Limits) -> std::result::Result<(), String> {
    let (a, b, c) = (random_cyclo(rng), random_cyclo(rng), random_cyclo(rng));
    ensure(a.mul(&b.add(&c)) == a.mul(&b).add(&a.mul(&c)), || format!("distributivity fails for {a}, {b}, {c}"))?;
    ensure(a.mul(&b) == b.mul(&a), || format!("{a}·{b} ≠ {b}·{a}"))?;
    ensure(a.sub(&a).is_zero(), || format!("{a} - {a} ≠ 0"))
}

fn arith_embedding(rng: &mut ChaCha8Rng, _: Limits) -> std::result::Result<(), String> {
    let (a, b) = (random_coordinate(rng), random_coordinate(rng));
    let lhs = QCyclo::from_coordinate(&(&a * &b));
    let rhs = QCyclo::from_coordinate(&a).mul(&QCyclo::from_coordinate(&b));
    ensure(lhs == rhs, || format!("embedding is not multiplicative on {a}, {b}"))
}

fn satake_case(rng: &mut ChaCha8Rng) -> SphericalRepE {
    let alg = random_algebra(rng, &[2, 3, 4, 6]);
    let m = rng.gen_range(1..=3usize);
    random_rep_e(rng, alg, m)
}

/// Every `s`-th root choice gives the same multiset (one random choice per coordinate).
fn satake_root_independence(rng: &mut ChaCha8Rng, _: Limits) -> std::result::Result<(), String> {
    let y = satake_case(rng);
    let alg = y.algebra();
    let s = alg.s();
    let mut out = Vec::new();
    for c in y.flatten() {
        let roots = c.all_roots(s);
        let t = roots.choose(rng).expect("s ≥ 1");
        out.extend((0..s as i64).map(|j| t.twist(alg.zeta().pow(j))));
    }
    ensure(SatakeParam::new(out) == delta_map(&y), || format!("root choice changes δ({y})"))
}

fn satake_central_character(rng: &mut ChaCha8Rng, _: Limits) -> std::result::Result<(), String> {
    let y = satake_case(rng);
    let lhs = delta_map(&y).product();
    let rhs = &central_twist(y.algebra(), y.m()) * &SatakeParam::new(y.flatten()).product();
    ensure(lhs == rhs, || format!("central character of δ({y})"))
}

fn satake_orbit_divides(rng: &mut ChaCha8Rng, _: Limits) -> std::result::Result<(), String> {
    let y = satake_case(rng);
    let d = y.algebra().d();
    let x = lift(x_of(&delta_map(&y), d, RootOfUnity::primitive(d)))?;
    let r = y.algebra().r();
    ensure(r.is_multiple_of(x), || format!("κ-orbit size {x} does not divide r = {r}"))
}

fn satake_ai_fiber(rng: &mut ChaCha8Rng, limits: Limits) -> std::result::Result<(), String> {
    let alg = random_algebra(rng, &[2, 3, 4]);
    let m = rng.gen_range(1..=2usize);
    let y = random_rep_e(rng, alg, m);
    if y.flatten().len() * alg.s() as usize > limits.max_rank {
        return Ok(());
    }
    let fib = lift(ai_fiber(&delta_map(&y), alg))?;
    ensure(y.gamma_orbit().iter().all(|z| fib.contains(z)), || format!("fiber of δ({y}) misses its Γ-orbit"))?;
    ensure(fib.iter().all(|z| delta_map(z) == delta_map(&y)), || format!("fiber of δ({y}) has a stray element"))
}

fn satake_bc_fiber(rng: &mut ChaCha8Rng, _: Limits) -> std::result::Result<(), String> {
    let alg = random_algebra(rng, &[2, 3, 4]);
    let n = rng.gen_range(1..=3usize);
    let y = random_param(rng, n);
    let z = bc_map(&y, alg);
    let fib = lift(bc_fiber(&z))?;
    ensure(fib.contains(&y), || format!("bc fiber of {z} misses {y}"))?;
    ensure(fib.iter().all(|w| bc_map(w, alg) == z), || format!("bc fiber of {z} has a stray element"))
}

fn satake_compat(rng: &mut ChaCha8Rng, _: Limits) -> std::result::Result<(), String> {
    let y = satake_case(rng);
    ensure(check_ia_bc_compat(&y), || format!("bc ∘ δ fails on {y}"))
}

fn hecke_case(rng: &mut ChaCha8Rng) -> (SymLaurent, SphericalRepE) {
    let (d, r, m) = *[(2u64, 1u64, 1usize), (2, 1, 2), (2, 2, 1), (2, 2, 2), (3, 1, 1), (3, 3, 1), (3, 1, 2), (1, 1, 3)]
        .choose(rng)
        .expect("nonempty");
    let alg = CyclicAlgebra::new(d, r).expect("valid");
    let f = random_poly(rng, m * d as usize, 4);
    (f, random_rep_e(rng, alg, m))
}

fn hecke_ai_oracle(rng: &mut ChaCha8Rng, limits: Limits) -> std::result::Result<(), String> {
    let (f, y) = hecke_case(rng);
    let lhs = lift(satake_eval(&f, &delta_map(&y)))?;
    let bf = lift(ai_transfer(&f, y.algebra(), limits.degree_budget))?;
    let rhs = lift(satake_eval(&bf, &SatakeParam::new(y.flatten())))?;
    ensure(lhs == rhs, || format!("tr π_δ(y)(f) ≠ tr Π_y(bf) for f = {f}, y = {y}"))
}

fn hecke_constant_term(rng: &mut ChaCha8Rng, limits: Limits) -> std::result::Result<(), String> {
    let (f, y) = hecke_case(rng);
    let g = lift(ai_transfer(&f, y.algebra(), limits.degree_budget))?;
    let t = lift(constant_term(&g, y.algebra().r() as usize))?;
    let lhs = lift(t.eval(&y))?;
    let rhs = lift(satake_eval(&g, &SatakeParam::new(y.flatten())))?;
    ensure(lhs == rhs, || format!("restriction of {g} to blocks"))
}

fn hecke_bc_oracle(rng: &mut ChaCha8Rng, limits: Limits) -> std::result::Result<(), String> {
    let (d, r, n) = *[(1u64, 1u64, 2usize), (2, 1, 1), (2, 1, 2), (2, 2, 2), (3, 1, 2), (3, 3, 1)].choose(rng).expect("nonempty");
    let alg = CyclicAlgebra::new(d, r).expect("valid");
    let factors: Vec<SymLaurent> = (0..r).map(|_| random_poly(rng, n, 2)).collect();
    let t = lift(Tensor::from_factors(&factors))?;
    let y = random_param(rng, n);
    let lhs = lift(t.eval(&bc_map(&y, alg)))?;
    let rhs = lift(satake_eval(&lift(bc_transfer(&t, alg, limits.degree_budget.max(18)))?, &y))?;
    ensure(lhs == rhs, || format!("bc transfer of {t} at {y}"))
}

/// An unramified unitary product over the degree-`d` field, rank at most 6.
pub fn random_unramified_product(rng: &mut impl Rng, d: u64) -> Product {
    loop {
        let k = rng.gen_range(1..=3);
        let factors: Vec<Factor> = (0..k)
            .map(|_| {
                let mu = random_coordinate(rng);
                let atom = Arc::new(CuspidalAtom::unramified_e(format!("chi{mu}"), d, mu).expect("payload atom"));
                let q = rng.gen_range(1..=3);
                let base = EssDiscrete::square_integrable(AtomRef::new(atom, 0), 1).expect("k = 1");
                let speh = Speh::new(base, q).expect("q ≥ 1");
                if rng.gen_bool(0.4) {
                    Factor::Pair(Pair::new(speh, rat(rng.gen_range(1..=5), 11)).expect("α < 1/2"))
                } else {
                    Factor::Speh(speh)
                }
            })
            .collect();
        let p = Product::new(factors);
        if p.rank() <= 6 {
            return p;
        }
    }
}

/// A symbolic product over `E` with opaque atoms and Galois translates.
pub fn random_symbolic_product(rng: &mut impl Rng, d: u64) -> Product {
    let divs: Vec<u64> = (1..=d).filter(|r| d.is_multiple_of(*r)).collect();
    let k = rng.gen_range(1..=3);
    let factors = (0..k)
        .map(|_| {
            let r = *divs.choose(rng).expect("nonempty");
            let id = rng.gen_range(0..4u32);
            let atom = Arc::new(CuspidalAtom::new_e(format!("a{id}r{r}"), 1 + id % 2, d, r).expect("r divides d"));
            let atom_ref = AtomRef::new(atom, rng.gen_range(0..6));
            let base = EssDiscrete::square_integrable(atom_ref, rng.gen_range(1..=3)).expect("k ≥ 1");
            let speh = Speh::new(base, rng.gen_range(1..=3)).expect("q ≥ 1");
            if rng.gen_bool(0.3) {
                Factor::Pair(Pair::new(speh, rat(rng.gen_range(1..=4), 9)).expect("α < 1/2"))
            } else {
                Factor::Speh(speh)
            }
        })
        .collect();
    Product::new(factors)
}

fn reps_square(rng: &mut ChaCha8Rng, _: Limits) -> std::result::Result<(), String> {
    let d = *[1u64, 2, 3, 4, 6].choose(rng).expect("nonempty");
    let tau = random_unramified_product(rng, d);
    let lhs = lift(reps::specialize_f(&lift(reps::lift_unitary(&tau))?))?;
    let rhs = delta_map(&lift(reps::specialize_e(&tau, d))?);
    ensure(lhs == rhs, || format!("specialize ∘ lift ≠ δ ∘ specialize on {tau}"))
}

fn reps_generic(rng: &mut ChaCha8Rng, _: Limits) -> std::result::Result<(), String> {
    let d = *[2u64, 3, 4, 6].choose(rng).expect("nonempty");
    let tau = random_symbolic_product(rng, d);
    let pi = lift(reps::lift_unitary(&tau))?;
    ensure(reps::is_generic(&tau) == reps::is_generic(&pi), || format!("genericity of {tau} and {pi}"))
}

fn reps_fiber(rng: &mut ChaCha8Rng, _: Limits) -> std::result::Result<(), String> {
    let d = *[2u64, 3, 4, 6].choose(rng).expect("nonempty");
    let tau = random_symbolic_product(rng, d);
    let pi = lift(reps::lift_unitary(&tau))?;
    let fib = lift(reps::fiber_unitary(&pi))?;
    ensure(fib.contains(&tau), || format!("fiber of {pi} misses {tau}"))?;
    for t in &fib {
        ensure(lift(reps::lift_unitary(t))? == pi, || format!("{t} in the fiber lifts elsewhere"))?;
    }
    Ok(())
}

fn reps_elliptic(rng: &mut ChaCha8Rng, _: Limits) -> std::result::Result<(), String> {
    let d = *[2u64, 3, 4, 6].choose(rng).expect("nonempty");
    let divs: Vec<u64> = (1..=d).filter(|r| d.is_multiple_of(*r)).collect();
    let r = *divs.choose(rng).expect("nonempty");
    let size = rng.gen_range(1..=2);
    let k = rng.gen_range(1..=5);
    let atom = Arc::new(lift(CuspidalAtom::new_e(format!("ell{size}"), size, d, r))?);
    let levis = Elliptic::all_levis(size, k);
    ensure(levis.len() == 1 << (k - 1), || format!("{} levis for k = {k}", levis.len()))?;
    let mut images = std::collections::BTreeSet::new();
    for l in &levis {
        let e = lift(Elliptic::new(AtomRef::new(atom.clone(), 0), k, l.clone()))?;
        images.insert(lift(reps::lift_elliptic(&e))?);
    }
    ensure(images.len() == levis.len(), || format!("lift_elliptic is not injective for k = {k}"))?;
    let sq = images.iter().filter(|p| reps::is_generic(p)).count();
    ensure(sq == 1, || format!("{sq} square-integrable images for k = {k}"))
}

/// Places with residue degrees dividing `d`, and a consistent `u(Λ, q)` over them.
pub fn random_global(rng: &mut impl Rng, d: u64, r: u64) -> (Vec<Place>, GlobalDiscrete) {
    let divs: Vec<u64> = (1..=d).filter(|f| d.is_multiple_of(*f)).collect();
    let places: Vec<Place> = (0..rng.gen_range(1..=3))
        .map(|i| Place::new(format!("v{i}"), d, *divs.choose(rng).expect("nonempty")).expect("f divides d"))
        .collect();
    let size = rng.gen_range(1..=2u32);
    let tag: u32 = rng.gen();
    let atom = Arc::new(CuspidalAtom::new_e(format!("L{tag:08x}"), size, d, r).expect("r divides d"));
    let g = atom.g();
    let locals: BTreeMap<String, SphericalRepE> = places
        .iter()
        .map(|p| {
            let c = g.gcd(&p.e()) as usize;
            let blocks: Vec<SatakeParam> = (0..c).map(|_| random_param(rng, size as usize)).collect();
            (p.label().to_string(), global::periodic_local(p, g, &blocks).expect("period matches"))
        })
        .collect();
    let q = rng.gen_range(1..=2);
    let pi = GlobalDiscrete::new_e(&places, AtomRef::new(atom, rng.gen_range(0..d)), q, locals).expect("consistent data");
    (places, pi)
}

fn random_dr(rng: &mut ChaCha8Rng) -> (u64, u64) {
    let d = rng.gen_range(1..=4u64);
    let divs: Vec<u64> = (1..=d).filter(|r| d % r == 0).collect();
    (d, *divs.choose(rng).expect("nonempty"))
}

fn global_coherence(rng: &mut ChaCha8Rng, _: Limits) -> std::result::Result<(), String> {
    let (d, r) = random_dr(rng);
    let (places, pi) = random_global(rng, d, r);
    let lifted = lift(global::global_ai_lift(&places, &pi))?;
    for p in &places {
        let (LocalDatum::E(y), LocalDatum::F(x)) = (lift(pi.local(p))?, lift(lifted.local(p))?) else {
            return Err("wrong sides".into());
        };
        ensure(x == delta_map(&y), || format!("place {}: lift ≠ δ-map", p.label()))?;
    }
    Ok(())
}

fn global_separate(rng: &mut ChaCha8Rng, _: Limits) -> std::result::Result<(), String> {
    let (d, r) = random_dr(rng);
    let (places, pi) = random_global(rng, d, r);
    let g = pi.atom().atom().g();
    let j = rng.gen_range(0..d.max(1));
    let l = rng.gen_range(1..=2);
    let pow = |x: &GlobalDiscrete| InducedGlobal::new(d, places.clone(), vec![x.clone(); l]);
    let v = lift(global::separate(&lift(pow(&pi))?, &lift(pow(&pi.translated(j)))?))?;
    ensure(v == Verdict::Same { l, gamma: j % g }, || format!("separating a Galois twist gave {v}"))
}

fn global_local_identity(rng: &mut ChaCha8Rng, _: Limits) -> std::result::Result<(), String> {
    let n = rng.gen_range(1..=4);
    let base = random_param(rng, n);
    let (a, b) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
    let delta = base.repeat(a);
    let delta_p = base.repeat(b);
    let d = rng.gen_range(1..=4);
    ensure(lift(global::lemma46_local_identity(&delta, b, &delta_p, a, d))?, || format!("identity fails on {base}"))
}

fn global_compat(rng: &mut ChaCha8Rng, _: Limits) -> std::result::Result<(), String> {
    let (d, r) = random_dr(rng);
    let (places, pi) = random_global(rng, d, r);
    ensure(lift(global::check_global_compat(&places, &pi))?, || format!("compatibility fails for {}", pi.atom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_and_is_deterministic() {
        for name in SUITES {
            let a = run_suite(name, 7, 50, Limits::default()).expect("known suite");
            assert!(a.ok(), "{a:?}");
            assert_eq!(a, run_suite(name, 7, 50, Limits::default()).expect("known suite"));
        }
        assert!(run_suite("nope", 0, 1, Limits::default()).is_none());
    }
}
