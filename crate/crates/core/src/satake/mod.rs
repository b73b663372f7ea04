//! Satake parameters over `F` and over cyclic unramified algebras `E`, the κ-lifting
//! map `δ`, the base-change map, and their fibers.

mod types;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::{rat, Coordinate, RootOfUnity};
use crate::error::{Error, Result};

#[allow(unused_imports)]
pub(crate) use types::AlgebraRepr;
pub use types::{CyclicAlgebra, SatakeParam, SphericalRepE};

/// Rank cap for the exponential fiber enumerations.
pub const DEFAULT_MAX_RANK: usize = 12;

/// `{ξ·q^{j-(n-1)/2} : 0 ≤ j < n}`, the parameter of `ξ∘det` on `GL_n`.
pub fn param_of_unramified_character(xi: &Coordinate, n: usize) -> SatakeParam {
    staircase(xi, n, &BigRational::from_integer(1.into()))
}

/// `{ξ·q^{step·(j-(n-1)/2)}}`: the unramified character staircase with residue
/// cardinality `q^step`.
pub fn staircase(xi: &Coordinate, n: usize, step: &BigRational) -> SatakeParam {
    let n_i = n as i64;
    (0..n_i)
        .map(|j| xi.shift_q(&(rat(2 * j - (n_i - 1), 2) * step)))
        .collect()
}

/// Multiply every coordinate by `zeta`.
pub fn kappa_twist(y: &SatakeParam, zeta: &Coordinate) -> SatakeParam {
    y.map(|c| c * zeta)
}

/// Size of the κ-orbit of `π_y`: the least `k ≥ 1` with `ζ_d^k·y ≡ y`.
pub fn x_of(y: &SatakeParam, d: u64, zeta_d: RootOfUnity) -> Result<u64> {
    if zeta_d.order() != d {
        return Err(Error::InvalidAlgebra(format!(
            "zeta {}/{} does not have exact order {d}",
            zeta_d.num(),
            zeta_d.order()
        )));
    }
    let z = Coordinate::root_of_unity(zeta_d);
    let mut cur = y.clone();
    for k in 1..=d {
        cur = kappa_twist(&cur, &z);
        if &cur == y {
            return Ok(k);
        }
    }
    unreachable!("ζ_d^d = 1 fixes every parameter")
}

/// `δ(y) = (t, ζt, …, ζ^{s-1}t)` with `t^s = y` taken coordinatewise.
pub fn delta_map(y: &SphericalRepE) -> SatakeParam {
    let alg = y.algebra();
    let s = alg.s();
    let mut out = Vec::with_capacity(y.m() * alg.d() as usize);
    for c in y.flatten() {
        let t = c.root(s);
        for j in 0..s as i64 {
            out.push(t.twist(alg.zeta().pow(j)));
        }
    }
    SatakeParam::new(out)
}

/// Every block is the coordinatewise `s`-th power of `y`.
pub fn bc_map(y: &SatakeParam, algebra: CyclicAlgebra) -> SphericalRepE {
    let s = algebra.s() as i64;
    let block = y.map(|c| c.pow(s));
    SphericalRepE::new(algebra, vec![block; algebra.r() as usize]).expect("blocks are equal by construction")
}

/// Multiset as sorted (value, multiplicity) pairs.
fn counts(v: &[Coordinate]) -> Vec<(Coordinate, usize)> {
    let mut m: BTreeMap<Coordinate, usize> = BTreeMap::new();
    for c in v {
        *m.entry(c.clone()).or_default() += 1;
    }
    m.into_iter().collect()
}

/// Ordered tuples of `parts` sub-multisets, each of size `size`, exhausting `pool`.
fn distributions(pool: &mut [(Coordinate, usize)], parts: usize, size: usize) -> Vec<Vec<Vec<Coordinate>>> {
    if parts == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(size);
    choose_block(pool, 0, size, &mut chosen, &mut |pool, block| {
        for mut rest in distributions(pool, parts - 1, size) {
            rest.insert(0, block.to_vec());
            out.push(rest);
        }
    });
    out
}

type BlockVisitor<'a> = dyn FnMut(&mut [(Coordinate, usize)], &[Coordinate]) + 'a;

/// Enumerate every sub-multiset of `pool` of the given size, temporarily removing it.
fn choose_block(
    pool: &mut [(Coordinate, usize)],
    start: usize,
    need: usize,
    chosen: &mut Vec<Coordinate>,
    k: &mut BlockVisitor<'_>,
) {
    if need == 0 {
        let snapshot = chosen.clone();
        k(pool, &snapshot);
        return;
    }
    if start >= pool.len() {
        return;
    }
    let avail = pool[start].1;
    for take in (0..=avail.min(need)).rev() {
        pool[start].1 -= take;
        for _ in 0..take {
            chosen.push(pool[start].0.clone());
        }
        choose_block(pool, start + 1, need - take, chosen, k);
        chosen.truncate(chosen.len() - take);
        pool[start].1 += take;
    }
}

/// Every `y` over `E` with `δ(y) ≡ π`.
///
/// `δ` only sees the multiset of all `mr` coordinates of `y`, so the fiber is the set
/// of all ways to deal the recovered multiset `Y = {t^s}` into `r` blocks of size `m`.
/// This contains the Galois orbit of any member and is strictly larger as soon as
/// `r ≥ 3`, or `r = 2` and `m ≥ 2`, with `Y` not too degenerate.
pub fn ai_fiber(pi: &SatakeParam, algebra: CyclicAlgebra) -> Result<Vec<SphericalRepE>> {
    ai_fiber_bounded(pi, algebra, DEFAULT_MAX_RANK)
}

pub fn ai_fiber_bounded(pi: &SatakeParam, algebra: CyclicAlgebra, max_rank: usize) -> Result<Vec<SphericalRepE>> {
    let n = pi.rank();
    let d = algebra.d() as usize;
    if !n.is_multiple_of(d) {
        return Err(Error::RankMismatch(format!("rank {n} is not divisible by d={d}")));
    }
    if n > max_rank {
        return Err(Error::BudgetExceeded(format!("rank {n} exceeds fiber cap {max_rank}")));
    }
    let zeta = algebra.zeta_coord();
    if &kappa_twist(pi, &zeta) != pi {
        return Err(Error::NotStable(format!("{pi} is not stable under multiplication by ζ")));
    }
    // Peel off ζ-orbits; each has exactly s elements with a common s-th power.
    let s = algebra.s();
    let mut rest = counts(pi.coords());
    let mut ys = Vec::with_capacity(n / s as usize);
    while let Some(idx) = rest.iter().position(|(_, c)| *c > 0) {
        let base = rest[idx].0.clone();
        for j in 0..s as i64 {
            let c = base.twist(algebra.zeta().pow(j));
            let slot = rest.iter_mut().find(|(v, _)| *v == c).expect("ζ-stable multiset");
            slot.1 -= 1;
        }
        ys.push(base.pow(s as i64));
    }
    let m = n / d;
    let mut pool = counts(&ys);
    let mut out: Vec<SphericalRepE> = distributions(&mut pool, algebra.r() as usize, m)
        .into_iter()
        .map(|blocks| {
            SphericalRepE::new(algebra, blocks.into_iter().map(SatakeParam::new).collect())
                .expect("equal block sizes")
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Every `y` over `F` with `bc_map(y) = z`.
pub fn bc_fiber(z: &SphericalRepE) -> Result<Vec<SatakeParam>> {
    bc_fiber_bounded(z, DEFAULT_MAX_RANK)
}

pub fn bc_fiber_bounded(z: &SphericalRepE, max_rank: usize) -> Result<Vec<SatakeParam>> {
    let blocks = z.blocks();
    if let Some(b) = blocks.iter().find(|b| *b != &blocks[0]) {
        return Err(Error::BlocksDiffer(format!("{} differs from {}", b, blocks[0])));
    }
    let n = z.m();
    if n > max_rank {
        return Err(Error::BudgetExceeded(format!("rank {n} exceeds fiber cap {max_rank}")));
    }
    let s = z.algebra().s();
    let mut partial: Vec<Vec<Coordinate>> = vec![Vec::new()];
    for (v, c) in counts(blocks[0].coords()) {
        let mut roots: Vec<(Coordinate, usize)> = v.all_roots(s).into_iter().map(|t| (t, usize::MAX)).collect();
        let mut choices = Vec::new();
        choose_block(&mut roots, 0, c, &mut Vec::new(), &mut |_, b| choices.push(b.to_vec()));
        partial = partial
            .iter()
            .flat_map(|p| {
                choices.iter().map(move |ch| {
                    let mut q = p.clone();
                    q.extend(ch.iter().cloned());
                    q
                })
            })
            .collect();
    }
    let mut out: Vec<SatakeParam> = partial.into_iter().map(SatakeParam::new).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Outcome of the base-change/induction compatibility check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatReport {
    pub ok: bool,
    /// First offending block, with the expected and observed multisets.
    pub counterexample: Option<String>,
}

/// Checks that base change of `δ(y)` is `Π × Π^σ × ⋯ × Π^{σ^{d-1}}`: at each factor
/// of `E`, the `d` Galois conjugates of `Π_y` contribute every `y(i)` exactly `s` times.
pub fn check_ia_bc_compat_report(y: &SphericalRepE) -> CompatReport {
    let alg = y.algebra();
    let bc = bc_map(&delta_map(y), alg);
    let expected = SatakeParam::new(y.flatten()).repeat(alg.s() as usize);
    for (i, b) in bc.blocks().iter().enumerate() {
        if b != &expected {
            return CompatReport {
                ok: false,
                counterexample: Some(format!("block {i}: expected {expected}, got {b}")),
            };
        }
    }
    CompatReport { ok: true, counterexample: None }
}

pub fn check_ia_bc_compat(y: &SphericalRepE) -> bool {
    check_ia_bc_compat_report(y).ok
}

/// `ζ^{e}` for the exponent appearing in the central-character identity,
/// `e = m·r·s(s-1)/2`.
pub fn central_twist(algebra: CyclicAlgebra, m: usize) -> Coordinate {
    let s = algebra.s() as i64;
    let e = BigInt::from(m as i64 * algebra.r() as i64) * BigInt::from(s * (s - 1) / 2);
    let e = i64::try_from(e % BigInt::from(s.max(1))).expect("reduced exponent fits");
    Coordinate::root_of_unity(algebra.zeta().pow(e))
}

#[cfg(test)]
mod tests;
