//! Acceptance criteria, one PASS/FAIL line each. Oracles here are written independently of
//! the library routes they check.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use kappalift::arith::rat;
use kappalift::global::{self, GlobalDiscrete, InducedGlobal, Place, Verdict};
use kappalift::hecke::{ai_transfer, bc_transfer, satake_eval, DEFAULT_DEGREE_BUDGET};
use kappalift::reps::{self, AtomRef, CuspidalAtom, Elliptic, EssDiscrete, Factor, Pair, Product, Speh};
use kappalift::satake::{ai_fiber, bc_fiber, bc_map, check_ia_bc_compat, delta_map};
use kappalift::{Coordinate, CyclicAlgebra, QCyclo, RootOfUnity, SatakeParam, SphericalRepE, SymLaurent, Tensor};
use num_integer::Integer;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn rng(criterion: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + criterion)
}

fn divisors(d: u64) -> Vec<u64> {
    (1..=d).filter(|r| d.is_multiple_of(*r)).collect()
}

fn coord(rng: &mut impl Rng, max_order: u64) -> Coordinate {
    let n = rng.gen_range(1..=max_order);
    Coordinate::from_parts(rng.gen_range(0..n as i64), n, rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

fn rep_e(rng: &mut impl Rng, alg: CyclicAlgebra, m: usize, max_order: u64) -> SphericalRepE {
    let blocks = (0..alg.r()).map(|_| SatakeParam::new((0..m).map(|_| coord(rng, max_order)).collect())).collect();
    SphericalRepE::new(alg, blocks).expect("equal block ranks")
}

/// All `s`-th roots, from the angle and exponent directly.
fn roots(c: &Coordinate, s: u64) -> Vec<Coordinate> {
    let (a, n) = (c.zeta().num() as i64, c.zeta().order());
    let qexp = c.qexp() / BigRational::from_integer(s.into());
    (0..s as i64).map(|k| Coordinate::new(RootOfUnity::new(a + k * n as i64, n * s), qexp.clone())).collect()
}

fn sorted(mut v: Vec<Coordinate>) -> Vec<Coordinate> {
    v.sort();
    v
}

fn zeta_power(alg: CyclicAlgebra, j: u64) -> Coordinate {
    Coordinate::root_of_unity(alg.zeta().pow(j as i64))
}

/// `δ(y)` for one fixed choice of roots, one per coordinate.
fn delta_with(y: &SphericalRepE, chosen: &[Coordinate]) -> Vec<Coordinate> {
    let alg = y.algebra();
    sorted(chosen.iter().flat_map(|t| (0..alg.s()).map(move |j| t * &zeta_power(alg, j))).collect())
}

fn delta_oracle(y: &SphericalRepE) -> Vec<Coordinate> {
    let chosen: Vec<Coordinate> = y.flatten().iter().map(|c| roots(c, y.algebra().s())[0].clone()).collect();
    delta_with(y, &chosen)
}

fn power_oracle(y: &[Coordinate], alpha: &[u32]) -> Coordinate {
    y.iter().zip(alpha).fold(Coordinate::one(), |acc, (c, &e)| &acc * &c.pow(e as i64))
}

fn permutations(v: &[u32]) -> BTreeSet<Vec<u32>> {
    if v.len() <= 1 {
        return BTreeSet::from([v.to_vec()]);
    }
    let mut out = BTreeSet::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.insert(tail);
        }
    }
    out
}

/// `m_λ(y)` as a sum over distinct rearrangements of the padded exponent vector.
fn monomial_oracle(lambda: &[u32], y: &[Coordinate]) -> QCyclo {
    let mut padded = lambda.to_vec();
    padded.resize(y.len(), 0);
    permutations(&padded).iter().fold(QCyclo::zero(), |acc, a| acc.add(&QCyclo::from_coordinate(&power_oracle(y, a))))
}

fn det_power(y: &[Coordinate], shift: u32) -> Coordinate {
    y.iter().fold(Coordinate::one(), |acc, c| &acc * c).pow(-(shift as i64))
}

fn eval_oracle(f: &SymLaurent, y: &[Coordinate]) -> QCyclo {
    let sum = f.body().iter().fold(QCyclo::zero(), |acc, (l, c)| acc.add(&c.mul(&monomial_oracle(l, y))));
    sum.mul_coordinate(&det_power(y, f.shift()))
}

fn tensor_oracle(t: &Tensor, blocks: &[SatakeParam]) -> QCyclo {
    let sum = t.terms().iter().fold(QCyclo::zero(), |acc, (ls, c)| {
        let v = ls.iter().zip(blocks).fold(c.clone(), |v, (l, b)| v.mul(&monomial_oracle(l, b.coords())));
        acc.add(&v)
    });
    let all: Vec<Coordinate> = blocks.iter().flat_map(|b| b.coords().to_vec()).collect();
    sum.mul_coordinate(&det_power(&all, t.shift()))
}

fn bc_oracle(y: &[Coordinate], alg: CyclicAlgebra) -> Vec<Vec<Coordinate>> {
    let block = sorted(y.iter().map(|c| c.pow(alg.s() as i64)).collect());
    vec![block; alg.r() as usize]
}

fn random_partition(rng: &mut impl Rng, n: usize, max_weight: u32) -> Vec<u32> {
    let mut v = vec![0u32; n];
    for _ in 0..rng.gen_range(0..=max_weight) {
        v[rng.gen_range(0..n)] += 1;
    }
    v.sort_unstable_by(|a, b| b.cmp(a));
    v.retain(|&x| x > 0);
    v
}

fn small_coef(rng: &mut impl Rng) -> QCyclo {
    let k = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
    QCyclo::from_coordinate(&coord(rng, 6)).scale(&rat(k, 1))
}

/// Pool of criteria 1 and 4: `m ≤ 3`, `d ∈ {2,3,4,6}`, `r | d`, root orders ≤ 24.
fn delta_pool() -> Vec<SphericalRepE> {
    let mut rng = rng(1);
    (0..520)
        .map(|_| {
            let d = *[2u64, 3, 4, 6].choose(&mut rng).expect("nonempty");
            let r = *divisors(d).choose(&mut rng).expect("nonempty");
            let m = rng.gen_range(1..=3);
            rep_e(&mut rng, CyclicAlgebra::new(d, r).expect("r | d"), m, 24)
        })
        .collect()
}

fn criterion_1(pool: &[SphericalRepE]) -> Outcome {
    let start = Instant::now();
    let mut choices = 0u64;
    for y in pool {
        let per: Vec<Vec<Coordinate>> = y.flatten().iter().map(|c| roots(c, y.algebra().s())).collect();
        let want = delta_map(y);
        let mut idx = vec![0usize; per.len()];
        loop {
            let chosen: Vec<Coordinate> = idx.iter().zip(&per).map(|(&i, rs)| rs[i].clone()).collect();
            if delta_with(y, &chosen) != want.coords() {
                return Err(format!("root choice {idx:?} changes δ({y})"));
            }
            choices += 1;
            let Some(pos) = (0..idx.len()).find(|&p| idx[p] + 1 < per[p].len()) else { break };
            idx[pos] += 1;
            idx[..pos].iter_mut().for_each(|i| *i = 0);
        }
    }
    within(start, 30, format!("{} parameters, {choices} root choices", pool.len()))
}

fn within(start: Instant, secs: u64, msg: String) -> Outcome {
    let t = start.elapsed();
    if t > Duration::from_secs(secs) {
        Err(format!("{msg}; took {t:.1?} > {secs} s"))
    } else {
        Ok(format!("{msg} in {t:.1?}"))
    }
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(2);
    let settings = [(1u64, 1u64, 4usize), (2, 1, 1), (2, 1, 2), (2, 1, 3), (2, 2, 1), (2, 2, 2), (2, 2, 3), (3, 1, 1), (3, 1, 2), (3, 3, 1), (3, 3, 2)];
    let cases = 120;
    for i in 0..cases {
        let (d, r, m) = settings[i % settings.len()];
        let alg = CyclicAlgebra::new(d, r).expect("r | d");
        let n = m * d as usize;
        let terms: Vec<(Vec<u32>, QCyclo)> =
            (0..rng.gen_range(1..=3)).map(|_| (random_partition(&mut rng, n, 6), small_coef(&mut rng))).collect();
        let f = SymLaurent::from_terms(n, rng.gen_range(0..=1), terms).expect("partitions fit");
        let y = rep_e(&mut rng, alg, m, 24);
        let bf = ai_transfer(&f, alg, DEFAULT_DEGREE_BUDGET).map_err(|e| format!("ai_transfer({f}): {e}"))?;
        let lhs = eval_oracle(&f, &delta_oracle(&y));
        let rhs = eval_oracle(&bf, &y.flatten());
        let lib_lhs = satake_eval(&f, &delta_map(&y)).map_err(|e| e.to_string())?;
        let lib_rhs = satake_eval(&bf, &SatakeParam::new(y.flatten())).map_err(|e| e.to_string())?;
        if lhs != rhs || lib_lhs != lhs || lib_rhs != rhs {
            return Err(format!("f = {f}, y = {y}: {lhs} vs {rhs}"));
        }
    }
    within(start, 60, format!("{cases} pairs (f, y)"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(3);
    let settings = [(1u64, 1u64, 3usize), (2, 1, 1), (2, 1, 2), (2, 1, 3), (2, 2, 1), (2, 2, 2), (2, 2, 3), (3, 1, 1), (3, 1, 2), (3, 3, 1), (3, 3, 2)];
    let cases = 120;
    for i in 0..cases {
        let (d, r, n) = settings[i % settings.len()];
        let alg = CyclicAlgebra::new(d, r).expect("r | d");
        let deg = 6 / alg.s() as u32;
        let terms: Vec<(Vec<Vec<u32>>, QCyclo)> = (0..rng.gen_range(1..=3))
            .map(|_| ((0..r).map(|_| random_partition(&mut rng, n, deg / r as u32)).collect(), small_coef(&mut rng)))
            .collect();
        let t = Tensor::from_terms(n, r as usize, rng.gen_range(0..=1), terms).expect("partitions fit");
        let y: Vec<Coordinate> = (0..n).map(|_| coord(&mut rng, 24)).collect();
        let bt = bc_transfer(&t, alg, 18).map_err(|e| format!("bc_transfer({t}): {e}"))?;
        let z: Vec<SatakeParam> = bc_oracle(&y, alg).into_iter().map(SatakeParam::new).collect();
        let lhs = tensor_oracle(&t, &z);
        let rhs = eval_oracle(&bt, &y);
        let y = SatakeParam::new(y);
        let lib_lhs = t.eval(&bc_map(&y, alg)).map_err(|e| e.to_string())?;
        let lib_rhs = satake_eval(&bt, &y).map_err(|e| e.to_string())?;
        if lhs != rhs || lib_lhs != lhs || lib_rhs != rhs {
            return Err(format!("t = {t}, y = {y}: {lhs} vs {rhs}"));
        }
    }
    within(start, 60, format!("{cases} pairs (f, y)"))
}

fn criterion_4(pool: &[SphericalRepE]) -> Outcome {
    for y in pool {
        let alg = y.algebra();
        let (m, r, s) = (y.m() as u64, alg.r(), alg.s());
        let twist = zeta_power(alg, m * r * s * (s - 1) / 2);
        let lhs = delta_map(y).product();
        let rhs = &twist * &y.flatten().iter().fold(Coordinate::one(), |a, c| &a * c);
        if lhs != rhs {
            return Err(format!("central character of δ({y}): {lhs} vs {rhs}"));
        }
    }
    Ok(format!("{} parameters", pool.len()))
}

/// Multisets of size `k` drawn from `pool`, as sorted vectors.
fn multisets(pool: &[Coordinate], k: usize) -> Vec<Vec<Coordinate>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, c) in pool.iter().enumerate() {
        for mut rest in multisets(&pool[i..], k - 1) {
            rest.insert(0, c.clone());
            out.push(rest);
        }
    }
    out
}

fn block_tuples(choices: &[Vec<Coordinate>], r: usize) -> Vec<Vec<Vec<Coordinate>>> {
    (0..r).fold(vec![Vec::new()], |acc, _| {
        acc.iter().flat_map(|t| choices.iter().map(move |b| [t.clone(), vec![b.clone()]].concat())).collect()
    })
}

fn ai_brute_force(y: &SphericalRepE) -> BTreeSet<SphericalRepE> {
    let alg = y.algebra();
    let target = delta_oracle(y);
    let pool: Vec<Coordinate> =
        target.iter().map(|x| x.pow(alg.s() as i64)).collect::<BTreeSet<_>>().into_iter().collect();
    block_tuples(&multisets(&pool, y.m()), alg.r() as usize)
        .into_iter()
        .map(|bs| SphericalRepE::new(alg, bs.into_iter().map(SatakeParam::new).collect()).expect("shape"))
        .filter(|z| delta_oracle(z) == target)
        .collect()
}

fn gamma_orbit_oracle(y: &SphericalRepE) -> BTreeSet<SphericalRepE> {
    let r = y.blocks().len();
    (0..r)
        .map(|k| {
            let blocks = (0..r).map(|i| y.blocks()[(i + k) % r].clone()).collect();
            SphericalRepE::new(y.algebra(), blocks).expect("shape")
        })
        .collect()
}

fn bc_brute_force(z: &SphericalRepE) -> BTreeSet<SatakeParam> {
    let alg = z.algebra();
    let pool: Vec<Coordinate> =
        z.blocks()[0].coords().iter().flat_map(|c| roots(c, alg.s())).collect::<BTreeSet<_>>().into_iter().collect();
    let target: Vec<Vec<Coordinate>> = z.blocks().iter().map(|b| b.coords().to_vec()).collect();
    multisets(&pool, z.m()).into_iter().filter(|w| bc_oracle(w, alg) == target).map(SatakeParam::new).collect()
}

fn criterion_5() -> Outcome {
    let mut rng = rng(5);
    let settings = [(2u64, 1u64, 1usize), (2, 1, 2), (2, 2, 1), (2, 2, 2), (3, 1, 1), (3, 3, 1), (4, 1, 1), (4, 2, 1), (4, 4, 1)];
    // A small coordinate pool so that coincidences between coordinates are common.
    let small = |rng: &mut ChaCha8Rng| {
        let n = *[1u64, 2, 4].choose(rng).expect("nonempty");
        Coordinate::from_parts(rng.gen_range(0..n as i64), n, rng.gen_range(0..=1), 1)
    };
    let instances = 240;
    let (mut ai_ok, mut orbit_ok, mut bc_ok, mut strict) = (0, 0, 0, Vec::new());
    for i in 0..instances {
        let (d, r, m) = settings[i % settings.len()];
        let alg = CyclicAlgebra::new(d, r).expect("r | d");
        let blocks = (0..r).map(|_| SatakeParam::new((0..m).map(|_| small(&mut rng)).collect())).collect();
        let y = SphericalRepE::new(alg, blocks).expect("shape");
        let fib: BTreeSet<SphericalRepE> = ai_fiber(&delta_map(&y), alg).map_err(|e| e.to_string())?.into_iter().collect();
        if fib != ai_brute_force(&y) {
            return Err(format!("ai_fiber(δ({y})) differs from brute force"));
        }
        ai_ok += 1;
        if fib == gamma_orbit_oracle(&y) {
            orbit_ok += 1;
        } else if strict.len() < 2 {
            strict.push(format!("{y}: fiber {} > Γ-orbit {}", fib.len(), gamma_orbit_oracle(&y).len()));
        }

        let n = (d as usize * m).min(4);
        let w = SatakeParam::new((0..n).map(|_| small(&mut rng)).collect());
        let z = bc_map(&w, alg);
        let bfib: BTreeSet<SatakeParam> = bc_fiber(&z).map_err(|e| e.to_string())?.into_iter().collect();
        if bfib != bc_brute_force(&z) {
            return Err(format!("bc_fiber({z}) differs from brute force"));
        }
        bc_ok += 1;
    }
    let summary = format!(
        "ai fiber = brute force {ai_ok}/{instances}, bc fiber = brute force {bc_ok}/{instances}, ai fiber = Γ-orbit {orbit_ok}/{instances}"
    );
    if orbit_ok == instances {
        Ok(summary)
    } else {
        Err(format!("{summary}; e.g. {}", strict.join("; ")))
    }
}

/// `{ζ_d^j q^{(m-1)/2 - i}}`: the lift of the trivial character, in closed form.
fn trivial_lift_oracle(d: u64, m: u32) -> Vec<Coordinate> {
    let mut out = Vec::new();
    for j in 0..d as i64 {
        for i in 0..m as i64 {
            out.push(Coordinate::new(RootOfUnity::new(j, d), rat(m as i64 - 1 - 2 * i, 2)));
        }
    }
    sorted(out)
}

fn criterion_6() -> Outcome {
    let mut n = 0;
    for d in 1..=4 {
        for m in 1..=4 {
            let triv = reps::trivial_e(d, m).map_err(|e| e.to_string())?;
            let lhs = reps::specialize_f(&reps::lift_unitary(&triv).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            let rhs = delta_map(&reps::specialize_e(&triv, d).map_err(|e| e.to_string())?);
            let want = trivial_lift_oracle(d, m);
            if lhs != rhs || lhs.coords() != want.as_slice() {
                return Err(format!("d={d}, m={m}: {lhs} vs {rhs}"));
            }
            n += 1;
        }
    }
    Ok(format!("{n} pairs (d, m)"))
}

/// A unitary product of unramified Speh representations and pairs, with its lift in closed form.
fn unramified_case(rng: &mut impl Rng, d: u64) -> (Product, Vec<Coordinate>) {
    loop {
        let mut factors = Vec::new();
        let mut lifted = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let mu = coord(rng, 12);
            let atom = Arc::new(CuspidalAtom::unramified_e(format!("mu{mu}"), d, mu.clone()).expect("payload"));
            let q = rng.gen_range(1..=3u32);
            let speh = Speh::new(EssDiscrete::square_integrable(AtomRef::new(atom, 0), 1).expect("k"), q).expect("q");
            let alpha = rng.gen_bool(0.4).then(|| rat(rng.gen_range(1..=5), 11));
            let shifts: Vec<BigRational> = match &alpha {
                Some(a) => vec![a.clone(), -a.clone()],
                None => vec![rat(0, 1)],
            };
            for t in roots(&mu, d) {
                for i in 0..q as i64 {
                    for a in &shifts {
                        lifted.push(t.shift_q(&(rat(q as i64 - 1 - 2 * i, 2) + a)));
                    }
                }
            }
            factors.push(match alpha {
                Some(a) => Factor::Pair(Pair::new(speh, a).expect("α < 1/2")),
                None => Factor::Speh(speh),
            });
        }
        let p = Product::new(factors);
        if p.rank() <= 6 {
            return (p, sorted(lifted));
        }
    }
}

fn criterion_7() -> Outcome {
    let mut rng = rng(7);
    let cases = 240;
    for _ in 0..cases {
        let d = *[1u64, 2, 3, 4, 6].choose(&mut rng).expect("nonempty");
        let (tau, want) = unramified_case(&mut rng, d);
        let lhs = reps::specialize_f(&reps::lift_unitary(&tau).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let rhs = delta_map(&reps::specialize_e(&tau, d).map_err(|e| e.to_string())?);
        if lhs != rhs || lhs.coords() != want.as_slice() {
            return Err(format!("{tau} over d={d}: {lhs} vs {rhs}"));
        }
    }
    Ok(format!("{cases} products"))
}

/// Compositions of `k` read off the subsets of the `k - 1` gaps.
fn compositions_oracle(k: u32) -> BTreeSet<Vec<u32>> {
    (0..1u32 << (k - 1))
        .map(|mask| {
            let mut parts = vec![1u32];
            for gap in 0..k - 1 {
                if mask >> gap & 1 == 1 {
                    parts.push(1);
                } else {
                    *parts.last_mut().expect("nonempty") += 1;
                }
            }
            parts
        })
        .collect()
}

fn criterion_8() -> Outcome {
    let mut atoms = 0;
    for d in 1..=6u64 {
        for r in divisors(d) {
            for size in 1..=2 {
                let atom = Arc::new(CuspidalAtom::new_e(format!("rho{d}.{r}.{size}"), size, d, r).expect("r | d"));
                atoms += 1;
                for k in 1..=5 {
                    let levis = Elliptic::all_levis(size, k);
                    let want: BTreeSet<Vec<u32>> =
                        compositions_oracle(k).into_iter().map(|c| c.iter().map(|x| x * size).collect()).collect();
                    if levis.len() != 1 << (k - 1) || levis.iter().cloned().collect::<BTreeSet<_>>() != want {
                        return Err(format!("size {size}, k = {k}: {} levis", levis.len()));
                    }
                    let mut images = BTreeSet::new();
                    for l in levis {
                        let e = Elliptic::new(AtomRef::new(atom.clone(), 0), k, l).map_err(|e| e.to_string())?;
                        images.insert(reps::lift_elliptic(&e).map_err(|e| e.to_string())?);
                    }
                    if images.len() != 1 << (k - 1) {
                        return Err(format!("{} is not injective on k = {k}", atom.id()));
                    }
                    let sq = images
                        .iter()
                        .filter(|p| p.factors().iter().all(|f| matches!(f, Factor::Elliptic(e) if e.levi.len() == 1)))
                        .count();
                    if sq != 1 {
                        return Err(format!("{sq} square-integrable images for {} and k = {k}", atom.id()));
                    }
                }
            }
        }
    }
    Ok(format!("{atoms} atoms, k ≤ 5"))
}

fn random_places(rng: &mut impl Rng, d: u64) -> Vec<Place> {
    let fs = divisors(d);
    (0..rng.gen_range(1..=3))
        .map(|i| Place::new(format!("v{i}"), d, *fs.choose(rng).expect("nonempty")).expect("f | d"))
        .collect()
}

fn random_discrete(rng: &mut impl Rng, places: &[Place], atom: Arc<CuspidalAtom>, q: u32, shift: i64) -> GlobalDiscrete {
    let g = atom.g();
    let locals: BTreeMap<String, SphericalRepE> = places
        .iter()
        .map(|p| {
            let c = g.gcd(&p.e()) as usize;
            let blocks: Vec<SatakeParam> = (0..c)
                .map(|_| SatakeParam::new((0..atom.size()).map(|_| coord(rng, 8).shift_q(&rat(shift, 1))).collect()))
                .collect();
            (p.label().to_string(), global::periodic_local(p, g, &blocks).expect("period"))
        })
        .collect();
    GlobalDiscrete::new_e(places, AtomRef::new(atom, 0), q, locals).expect("consistent data")
}

fn criterion_9() -> Outcome {
    let mut rng = rng(9);
    for i in 0..1000 {
        let base = SatakeParam::new((0..rng.gen_range(1..=3)).map(|_| coord(&mut rng, 12)).collect());
        let (l, lp) = (rng.gen_range(1..=3usize), rng.gen_range(1..=3usize));
        let common = l.lcm(&lp) * rng.gen_range(1..=2);
        let (delta, delta_p) = (base.repeat(common / l), base.repeat(common / lp));
        let d = rng.gen_range(1..=6);
        match global::lemma46_local_identity(&delta, l, &delta_p, lp, d) {
            Ok(true) => {}
            other => return Err(format!("instance {i}: {other:?} on {base}")),
        }
    }
    let (mut same, mut distinct) = (0, 0);
    for i in 0..240 {
        let d = rng.gen_range(1..=4u64);
        let r = *divisors(d).choose(&mut rng).expect("nonempty");
        let places = random_places(&mut rng, d);
        let atom = Arc::new(CuspidalAtom::new_e(format!("D{i}"), rng.gen_range(1..=2), d, r).expect("r | d"));
        let q = rng.gen_range(1..=2);
        let delta = random_discrete(&mut rng, &places, atom.clone(), q, 0);
        let l = rng.gen_range(1..=2);
        let power = |x: &GlobalDiscrete| InducedGlobal::new(d, places.clone(), vec![x.clone(); l]).expect("power");
        let pi = power(&delta);
        let (pi_p, want) = if i % 2 == 0 {
            let gamma = rng.gen_range(0..d);
            (power(&delta.translated(gamma)), Verdict::Same { l, gamma: gamma % atom.g() })
        } else {
            let other = Arc::new(CuspidalAtom::new_e(format!("D{i}'"), atom.size(), d, r).expect("r | d"));
            (power(&random_discrete(&mut rng, &places, other, q, 1)), Verdict::Distinct { place: String::new() })
        };
        match (global::separate(&pi, &pi_p).map_err(|e| e.to_string())?, &want) {
            (got @ Verdict::Same { .. }, Verdict::Same { .. }) if got == want => same += 1,
            (Verdict::Distinct { .. }, Verdict::Distinct { .. }) => distinct += 1,
            (got, _) => return Err(format!("separate on instance {i}: {got}, expected {want}")),
        }
    }
    Ok(format!("1000 identities, {same} twisted pairs, {distinct} distinct pairs"))
}

fn criterion_10() -> Outcome {
    let mut rng = rng(10);
    let (mut global_n, mut local_n, mut place_types) = (0, 0, BTreeSet::new());
    for i in 0..240 {
        let d = rng.gen_range(2..=4u64);
        let r = if i % 2 == 0 { 1 } else { d };
        let places = random_places(&mut rng, d);
        place_types.extend(places.iter().map(|p| (d, p.f())));
        let atom = Arc::new(CuspidalAtom::new_e(format!("C{i}"), rng.gen_range(1..=2), d, r).expect("r | d"));
        let q = rng.gen_range(1..=2);
        let pi = random_discrete(&mut rng, &places, atom, q, 0);
        if !global::check_global_compat(&places, &pi).map_err(|e| e.to_string())? {
            return Err(format!("global compatibility fails on instance {i}"));
        }
        global_n += 1;
        let alg = CyclicAlgebra::new(d, r).expect("r | d");
        let m = rng.gen_range(1..=3);
        let y = rep_e(&mut rng, alg, m, 12);
        if !check_ia_bc_compat(&y) {
            return Err(format!("bc ∘ δ fails on {y}"));
        }
        local_n += 1;
    }
    Ok(format!("{global_n} global and {local_n} local instances over {} (d, f_v) place types", place_types.len()))
}

/// Generic unitary products: every Speh and pair has `q = 1`.
fn generic_oracle(p: &Product) -> bool {
    p.factors().iter().all(|f| match f {
        Factor::Speh(u) => u.q == 1,
        Factor::Pair(x) => x.speh.q == 1,
        Factor::Elliptic(e) => e.levi.len() == 1,
    })
}

fn criterion_11() -> Outcome {
    let mut rng = rng(11);
    let (mut generic, cases) = (0, 400);
    for _ in 0..cases {
        let d = *[2u64, 3, 4, 6].choose(&mut rng).expect("nonempty");
        let factors: Vec<Factor> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let r = *divisors(d).choose(&mut rng).expect("nonempty");
                let id = rng.gen_range(0..4u32);
                let atom = Arc::new(CuspidalAtom::new_e(format!("s{id}r{r}"), 1 + id % 2, d, r).expect("r | d"));
                let base = EssDiscrete::square_integrable(AtomRef::new(atom, rng.gen_range(0..d)), rng.gen_range(1..=3)).expect("k");
                let speh = Speh::new(base, rng.gen_range(1..=3)).expect("q");
                if rng.gen_bool(0.3) {
                    Factor::Pair(Pair::new(speh, rat(rng.gen_range(1..=4), 9)).expect("α < 1/2"))
                } else {
                    Factor::Speh(speh)
                }
            })
            .collect();
        let tau = Product::new(factors);
        let pi = reps::lift_unitary(&tau).map_err(|e| e.to_string())?;
        let (a, b) = (reps::is_generic(&tau), reps::is_generic(&pi));
        if a != b || a != generic_oracle(&tau) || b != generic_oracle(&pi) {
            return Err(format!("{tau} ↦ {pi}: {a} vs {b}"));
        }
        generic += a as usize;
    }
    Ok(format!("{cases} products, {generic} generic"))
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let pool = delta_pool();
    let criteria: Vec<Criterion> = vec![
        ("δ well-definedness", Box::new(|| criterion_1(&pool))),
        ("Hecke oracle", Box::new(criterion_2)),
        ("base-change oracle", Box::new(criterion_3)),
        ("central character", Box::new(|| criterion_4(&pool))),
        ("fibers", Box::new(criterion_5)),
        ("trivial-character chain", Box::new(criterion_6)),
        ("consistency square", Box::new(criterion_7)),
        ("elliptic combinatorics", Box::new(criterion_8)),
        ("local-global separation", Box::new(criterion_9)),
        ("compatibility", Box::new(criterion_10)),
        ("genericity equivalence", Box::new(criterion_11)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(msg) => println!("PASS criterion {} ({name}): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
