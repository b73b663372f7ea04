//! Symbolic representations over opaque cuspidal atoms: segments, Speh representations,
//! unitary products and elliptic representations, with the κ-lifting maps, their fibers,
//! and specialization of unramified data to Satake parameters.

mod json;

pub(crate) use json::{ref_repr, AtomRepr, AtomTable};
mod types;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_rational::BigRational;

use crate::arith::{Coordinate, RootOfUnity};
use crate::error::{Error, Result};
use crate::satake::{staircase, CyclicAlgebra, SatakeParam, SphericalRepE};

pub use json::{RepDocument, SpecializedRep};
pub use crate::json::DocError;
pub use types::{is_generic, AtomRef, CuspidalAtom, EssDiscrete, Elliptic, Factor, Pair, Product, Side, Speh};

type Memo = RwLock<HashMap<CuspidalAtom, Arc<CuspidalAtom>>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// The `F` atom paired with an `E` atom: size multiplied by `g`, `x = r`, and for an
/// unramified character the canonical `d`-th root of its value.
///
/// Pairing is memoised so that lifting the same atom twice yields the same `Arc`.
pub fn lifted_atom(e: &Arc<CuspidalAtom>) -> Result<Arc<CuspidalAtom>> {
    if e.side() != Side::E {
        return Err(Error::WrongSide(format!("atom {} is not over E", e.id())));
    }
    if let Some(a) = memo().read().expect("memo poisoned").get(e.as_ref()) {
        return Ok(a.clone());
    }
    let id = format!("lift({})", e.id());
    let f = match e.payload() {
        Some(mu) => CuspidalAtom::unramified_f(id, e.d(), mu.root(e.d()))?,
        None => CuspidalAtom::new_f(id, e.size() * e.g() as u32, e.d(), e.orbit())?,
    }
    .with_source(e.clone());
    let mut w = memo().write().expect("memo poisoned");
    Ok(w.entry(e.as_ref().clone()).or_insert_with(|| Arc::new(f)).clone())
}

fn e_atom(a: &AtomRef) -> Result<Arc<CuspidalAtom>> {
    if a.side() != Side::E {
        return Err(Error::WrongSide(format!("{a} is not over E")));
    }
    lifted_atom(a.atom())
}

/// `δ̃ × κδ̃ × ⋯ × κ^{r-1}δ̃`, the lift of an essentially square-integrable representation
/// of `GL(E)` with `r = r(δ_E)`; the twist and segment length are carried over.
pub fn lift_discrete(de: &EssDiscrete) -> Result<Product> {
    lift_factor(&Factor::Speh(Speh::new(de.clone(), 1)?))
}

/// `u × κu × ⋯ × κ^{r-1}u` with `u = u(δ, q)` and `x(u) = r`.
pub fn lift_speh(ue: &Speh) -> Result<Product> {
    lift_factor(&Factor::Speh(ue.clone()))
}

/// The elliptic representation with Levi `ι_g(M')`, in its `r` κ-translates.
pub fn lift_elliptic(e: &Elliptic) -> Result<Product> {
    lift_factor(&Factor::Elliptic(e.clone()))
}

/// Factorwise lift of a product over `E`. A pair `u(δ_E, q; α)` lifts to the `r` pairs
/// `ν^α κ^i u × ν^{-α} κ^i u`.
pub fn lift_unitary(tau: &Product) -> Result<Product> {
    let mut out = Vec::new();
    for f in tau.factors() {
        out.extend(lift_factor(f)?.factors().iter().cloned());
    }
    Ok(Product::new(out))
}

fn lift_factor(f: &Factor) -> Result<Product> {
    let src = f.atom();
    let atom = e_atom(src)?;
    let r = src.atom().orbit();
    let g = src.atom().g() as u32;
    let base = match f {
        Factor::Elliptic(e) => Factor::Elliptic(Elliptic {
            atom: AtomRef::new(atom.clone(), 0),
            k: e.k,
            levi: e.levi.iter().map(|m| m * g).collect(),
        }),
        other => other.with_atom(AtomRef::new(atom.clone(), 0)),
    };
    Ok(Product::new((0..r).map(|i| base.with_atom(AtomRef::new(atom.clone(), i))).collect()))
}

/// Every product over `E` with the same lift as `pi`: each `E` factor is replaced
/// independently by a Galois translate, duplicates removed.
///
/// `pi` must be the lift of a product over `E`, so that its atoms carry their source.
pub fn fiber_unitary(pi: &Product) -> Result<Vec<Product>> {
    // Group the F factors by their κ-orbit: translate index erased.
    let mut groups: BTreeMap<Factor, u64> = BTreeMap::new();
    for f in pi.factors() {
        let a = f.atom();
        if a.side() != Side::F {
            return Err(Error::WrongSide(format!("{a} is not over F")));
        }
        if a.atom().source().is_none() {
            return Err(Error::NoProvenance(format!("atom {} was not produced by a lift", a.atom().id())));
        }
        *groups.entry(f.with_atom(AtomRef::new(a.atom().clone(), 0))).or_default() += 1;
    }
    let mut e_factors: Vec<Factor> = Vec::new();
    for (f, count) in groups {
        let fa = f.atom().atom().clone();
        let src = fa.source().expect("checked above").clone();
        let r = src.orbit();
        if count % r != 0 {
            return Err(Error::ShapeError(format!(
                "{count} κ-translates of {} is not a union of orbits of size {r}",
                fa.id()
            )));
        }
        let g = src.g() as u32;
        let ef = match &f {
            Factor::Elliptic(e) => Factor::Elliptic(Elliptic {
                atom: AtomRef::new(src.clone(), 0),
                k: e.k,
                levi: e.levi.iter().map(|m| m / g).collect(),
            }),
            other => other.with_atom(AtomRef::new(src.clone(), 0)),
        };
        for _ in 0..count / r {
            e_factors.push(ef.clone());
        }
    }
    let mut seen: BTreeSet<Product> = BTreeSet::new();
    let mut stack: Vec<(usize, Vec<Factor>)> = vec![(0, Vec::new())];
    while let Some((i, chosen)) = stack.pop() {
        if i == e_factors.len() {
            seen.insert(Product::new(chosen));
            continue;
        }
        let f = &e_factors[i];
        for j in 0..f.atom().atom().g() {
            let mut next = chosen.clone();
            next.push(f.with_atom(f.atom().shifted(j)));
            stack.push((i + 1, next));
        }
    }
    Ok(seen.into_iter().collect())
}

/// Lift then fiber: the products over `E` sharing the lift of `tau`.
pub fn fiber_of(tau: &Product) -> Result<Vec<Product>> {
    fiber_unitary(&lift_unitary(tau)?)
}

fn unramified_value(f: &Factor) -> Result<(Coordinate, &EssDiscrete, u32)> {
    let (base, q) = match f {
        Factor::Speh(u) => (&u.base, u.q),
        Factor::Pair(p) => (&p.speh.base, p.speh.q),
        Factor::Elliptic(e) => {
            return Err(Error::NotUnramified(format!("elliptic {} with k={} is not spherical", e.atom, e.k)))
        }
    };
    if base.k != 1 {
        return Err(Error::NotUnramified(format!("segment of length {} is not spherical", base.k)));
    }
    let atom = base.atom.atom();
    let Some(v) = atom.payload() else {
        return Err(Error::NotUnramified(format!("atom {} has no unramified payload", atom.id())));
    };
    let v = match atom.side() {
        Side::F => v.twist(RootOfUnity::primitive(atom.d()).pow(base.atom.translate() as i64)),
        // A Galois translate of an unramified character of E is itself.
        Side::E => v.clone(),
    };
    Ok((v, base, q))
}

/// Satake coordinates of a product with unramified atoms, with `q_E = q^step`.
fn specialize_coords(p: &Product, step: i64) -> Result<Vec<Coordinate>> {
    let step_r = BigRational::from_integer(step.into());
    let mut out = Vec::new();
    for f in p.factors() {
        let (v, base, q) = unramified_value(f)?;
        // ν^c acts on the uniformiser by q_E^{-c}.
        let v = v.shift_q(&(-&base.twist * &step_r));
        let stair = staircase(&v, q as usize, &step_r);
        match f {
            Factor::Pair(pair) => {
                let a = &pair.alpha * &step_r;
                out.extend(stair.coords().iter().map(|c| c.shift_q(&-&a)));
                out.extend(stair.coords().iter().map(|c| c.shift_q(&a)));
            }
            _ => out.extend(stair.into_coords()),
        }
    }
    Ok(out)
}

/// The Satake parameter of an unramified product over `F`.
pub fn specialize_f(p: &Product) -> Result<SatakeParam> {
    if p.side() == Some(Side::E) {
        return Err(Error::WrongSide("product is over E".into()));
    }
    Ok(SatakeParam::new(specialize_coords(p, 1)?))
}

/// The Satake parameter of an unramified product over the degree-`d` unramified field `E`.
pub fn specialize_e(p: &Product, d: u64) -> Result<SphericalRepE> {
    if p.side() == Some(Side::F) {
        return Err(Error::WrongSide("product is over F".into()));
    }
    if let Some(f) = p.factors().iter().find(|f| f.atom().atom().d() != d) {
        return Err(Error::ShapeError(format!("atom {} has d={}, expected {d}", f.atom().atom().id(), f.atom().atom().d())));
    }
    let coords = specialize_coords(p, d as i64)?;
    SphericalRepE::new(CyclicAlgebra::field(d)?, vec![SatakeParam::new(coords)])
}

/// Dispatch on the side of the product.
pub fn specialize(p: &Product, d: u64) -> Result<SpecializedRep> {
    match p.side() {
        Some(Side::E) => Ok(SpecializedRep::E(specialize_e(p, d)?)),
        Some(Side::F) => Ok(SpecializedRep::F(specialize_f(p)?)),
        None if p.factors().is_empty() => Ok(SpecializedRep::F(SatakeParam::new(Vec::new()))),
        None => Err(Error::ShapeError("product mixes F and E factors".into())),
    }
}

/// `1_{E,m}`: the trivial representation of `GL_m(E)`, as `u(1_E, m)`.
pub fn trivial_e(d: u64, m: u32) -> Result<Product> {
    let atom = Arc::new(CuspidalAtom::unramified_e("1_E", d, Coordinate::one())?);
    let base = EssDiscrete::square_integrable(AtomRef::new(atom, 0), 1)?;
    Ok(Product::single(Factor::Speh(Speh::new(base, m)?)))
}
