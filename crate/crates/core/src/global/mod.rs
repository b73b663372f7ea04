//! A synthetic global layer: a finite set of unramified places with chosen residue degrees,
//! discrete representations `u(Λ, q)` given by their local data at those places, the global
//! κ-lift, rigidity, and the local shadows of the separation and compatibility arguments.
//!
//! "Almost all places" is modelled as "every stored place": no number-field arithmetic is done.

mod json;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::BigRational;

use crate::arith::{Coordinate, RootOfUnity};
use crate::error::{Error, Result};
use crate::reps::{lifted_atom, AtomRef, CuspidalAtom, Side};
use crate::satake::{bc_map, check_ia_bc_compat, delta_map, staircase, CyclicAlgebra, SatakeParam, SphericalRepE};

pub use json::{GlobalDocument, SeparateDocument};

/// A finite place `v` of `F`, unramified in `E`, with residue degree `f_v` and
/// `e_v = d / f_v` places of `E` above it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Place {
    label: String,
    d: u64,
    f: u64,
}

impl Place {
    pub fn new(label: impl Into<String>, d: u64, f: u64) -> Result<Self> {
        let label = label.into();
        if d == 0 || f == 0 || !d.is_multiple_of(f) {
            return Err(Error::InvalidAlgebra(format!("place {label}: f={f} does not divide d={d}")));
        }
        Ok(Place { label, d, f })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn f(&self) -> u64 {
        self.f
    }

    pub fn e(&self) -> u64 {
        self.d / self.f
    }

    /// `E ⊗ F_v`: `e_v` copies of the unramified extension of degree `f_v`.
    pub fn algebra(&self) -> CyclicAlgebra {
        CyclicAlgebra::new(self.d, self.e()).expect("f divides d")
    }

    /// `𝔎_v(ϖ_v)`, a primitive `f_v`-th root of unity.
    pub fn zeta(&self) -> RootOfUnity {
        self.algebra().zeta()
    }
}

/// The local datum of a representation at one place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalDatum {
    F(SatakeParam),
    E(SphericalRepE),
}

/// `u(Λ, q)` (over `E`) or `u(ρ, q)` (over `F`), a discrete automorphic representation
/// known through the unramified local components of its cuspidal datum.
///
/// Over `E`, `locals[v]` is the parameter of `Λ_v` (one block of rank `m₀` per place of `E`
/// above `v`); over `F`, it is the parameter of `ρ_v`. Both describe the untranslated atom:
/// a Galois translate rotates the blocks, a `𝔎`-translate multiplies by `𝔎_v(ϖ_v)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GlobalDiscrete {
    atom: AtomRef,
    q: u32,
    locals: BTreeMap<String, Vec<SatakeParam>>,
}

fn place_map(places: &[Place]) -> BTreeMap<&str, &Place> {
    places.iter().map(|p| (p.label(), p)).collect()
}

fn check_labels<T>(places: &[Place], locals: &BTreeMap<String, T>) -> Result<()> {
    let want: Vec<&str> = places.iter().map(Place::label).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let got: Vec<&str> = locals.keys().map(String::as_str).collect();
    if want != got {
        return Err(Error::PlaceSetMismatch(format!("local data at {got:?}, places {want:?}")));
    }
    Ok(())
}

impl GlobalDiscrete {
    /// `u(Λ, q)` over `E`, with `Λ_v` given at every place.
    pub fn new_e(places: &[Place], atom: AtomRef, q: u32, locals: BTreeMap<String, SphericalRepE>) -> Result<Self> {
        if atom.side() != Side::E {
            return Err(Error::WrongSide(format!("{atom} is not over E")));
        }
        check_labels(places, &locals)?;
        let pm = place_map(places);
        let m0 = atom.atom().size() as usize;
        let mut out = BTreeMap::new();
        for (label, y) in locals {
            let p = pm[label.as_str()];
            if y.algebra() != p.algebra() {
                return Err(Error::ShapeError(format!("place {label}: datum is over the wrong algebra")));
            }
            if y.m() != m0 {
                return Err(Error::RankMismatch(format!("place {label}: blocks of rank {}, atom size {m0}", y.m())));
            }
            out.insert(label, y.blocks().to_vec());
        }
        Self::finish(atom, q, out)
    }

    /// `u(ρ, q)` over `F`, with `ρ_v` given at every place.
    pub fn new_f(places: &[Place], atom: AtomRef, q: u32, locals: BTreeMap<String, SatakeParam>) -> Result<Self> {
        if atom.side() != Side::F {
            return Err(Error::WrongSide(format!("{atom} is not over F")));
        }
        check_labels(places, &locals)?;
        let m0 = atom.atom().size() as usize;
        let mut out = BTreeMap::new();
        for (label, y) in locals {
            if y.rank() != m0 {
                return Err(Error::RankMismatch(format!("place {label}: rank {}, atom size {m0}", y.rank())));
            }
            out.insert(label, vec![y]);
        }
        Self::finish(atom, q, out)
    }

    fn finish(atom: AtomRef, q: u32, locals: BTreeMap<String, Vec<SatakeParam>>) -> Result<Self> {
        if q == 0 {
            return Err(Error::ShapeError("Speh height must be positive".into()));
        }
        Ok(GlobalDiscrete { atom, q, locals })
    }

    pub fn atom(&self) -> &AtomRef {
        &self.atom
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn side(&self) -> Side {
        self.atom.side()
    }

    pub fn is_cuspidal(&self) -> bool {
        self.q == 1
    }

    /// The rank `size·q` (over `E` this is `m`, the rank of each block).
    pub fn rank(&self) -> usize {
        self.atom.atom().size() as usize * self.q as usize
    }

    /// The same representation with its atom translated by `γ^i` or `𝔎^i`.
    pub fn translated(&self, i: u64) -> Self {
        GlobalDiscrete { atom: self.atom.shifted(i), ..self.clone() }
    }

    fn stored(&self, p: &Place) -> Result<&Vec<SatakeParam>> {
        self.locals
            .get(p.label())
            .ok_or_else(|| Error::PlaceSetMismatch(format!("no local datum at {}", p.label())))
    }

    /// The cuspidal datum at `p`, translate applied.
    pub fn cusp_local(&self, p: &Place) -> Result<LocalDatum> {
        let blocks = self.stored(p)?;
        Ok(match self.side() {
            Side::E => {
                let y = SphericalRepE::new(p.algebra(), blocks.clone())?;
                LocalDatum::E(y.rotate(self.atom.translate() as usize))
            }
            Side::F => {
                let z = Coordinate::root_of_unity(p.zeta().pow(self.atom.translate() as i64));
                LocalDatum::F(blocks[0].map(|c| c * &z))
            }
        })
    }

    /// The local component of `u(·, q)` at `p`: the staircase of height `q` on every
    /// cuspidal coordinate, with residue cardinality `q_v^{f_v}` over `E`.
    pub fn local(&self, p: &Place) -> Result<LocalDatum> {
        Ok(match self.cusp_local(p)? {
            LocalDatum::E(y) => {
                let step = BigRational::from_integer(p.f().into());
                let blocks = y.blocks().iter().map(|b| speh_param(b, self.q, &step)).collect();
                LocalDatum::E(SphericalRepE::new(p.algebra(), blocks)?)
            }
            LocalDatum::F(y) => LocalDatum::F(speh_param(&y, self.q, &BigRational::from_integer(1.into()))),
        })
    }
}

fn speh_param(y: &SatakeParam, q: u32, step: &BigRational) -> SatakeParam {
    y.coords().iter().flat_map(|c| staircase(c, q as usize, step).into_coords()).collect()
}

/// A product `τ_1 × ⋯ × τ_s` of discrete representations, kept in sorted order, over a
/// fixed place set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedGlobal {
    d: u64,
    places: Arc<Vec<Place>>,
    factors: Vec<GlobalDiscrete>,
}

impl InducedGlobal {
    pub fn new(d: u64, places: Vec<Place>, mut factors: Vec<GlobalDiscrete>) -> Result<Self> {
        let mut places = places;
        places.sort();
        if places.windows(2).any(|w| w[0].label == w[1].label) {
            return Err(Error::ShapeError("duplicate place label".into()));
        }
        if let Some(p) = places.iter().find(|p| p.d != d) {
            return Err(Error::InvalidAlgebra(format!("place {} has d={}, expected {d}", p.label, p.d)));
        }
        if factors.is_empty() {
            return Err(Error::ShapeError("a product needs at least one factor".into()));
        }
        let side = factors[0].side();
        if factors.iter().any(|f| f.side() != side) {
            return Err(Error::ShapeError("factors over both F and E".into()));
        }
        for f in &factors {
            check_labels(&places, &f.locals)?;
            if f.atom.atom().d() != d {
                return Err(Error::ShapeError(format!("atom {} has d={}, expected {d}", f.atom.atom().id(), f.atom.atom().d())));
            }
        }
        factors.sort();
        Ok(InducedGlobal { d, places: Arc::new(places), factors })
    }

    pub fn single(d: u64, places: Vec<Place>, f: GlobalDiscrete) -> Result<Self> {
        Self::new(d, places, vec![f])
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn factors(&self) -> &[GlobalDiscrete] {
        &self.factors
    }

    pub fn side(&self) -> Side {
        self.factors[0].side()
    }

    /// Concatenation of the factor data at `p` (blockwise over `E`).
    pub fn local(&self, p: &Place) -> Result<LocalDatum> {
        let mut f_coords: Vec<Coordinate> = Vec::new();
        let mut e_blocks: Vec<Vec<Coordinate>> = vec![Vec::new(); p.e() as usize];
        for fac in &self.factors {
            match fac.local(p)? {
                LocalDatum::F(y) => f_coords.extend(y.into_coords()),
                LocalDatum::E(y) => {
                    for (acc, b) in e_blocks.iter_mut().zip(y.blocks()) {
                        acc.extend(b.coords().iter().cloned());
                    }
                }
            }
        }
        Ok(match self.side() {
            Side::F => LocalDatum::F(SatakeParam::new(f_coords)),
            Side::E => LocalDatum::E(SphericalRepE::new(p.algebra(), e_blocks.into_iter().map(SatakeParam::new).collect())?),
        })
    }
}

fn e_local(g: &InducedGlobal, p: &Place) -> Result<SphericalRepE> {
    match g.local(p)? {
        LocalDatum::E(y) => Ok(y),
        LocalDatum::F(_) => Err(Error::WrongSide("expected a representation over E".into())),
    }
}

fn f_local(g: &InducedGlobal, p: &Place) -> Result<SatakeParam> {
    match g.local(p)? {
        LocalDatum::F(y) => Ok(y),
        LocalDatum::E(_) => Err(Error::WrongSide("expected a representation over F".into())),
    }
}

/// The local parameter of the cuspidal `ρ` with `x(ρ) = r` lifting `Λ`, computed from the
/// blocks of `Λ_v` directly: with `c = gcd(g, e_v)` the blocks of a `σ^g`-stable `Λ_v`
/// repeat with period `c`, and `ρ_v` collects, for each coordinate `y` of the first `c`
/// blocks, the roots `t·ζ^{jr}` (`t^{f} = y`, `0 ≤ j < g/c`).
fn lifted_cusp_local(lambda: &SphericalRepE, p: &Place, r: u64, g: u64) -> SatakeParam {
    let c = g.gcd(&p.e());
    let zeta = p.zeta();
    let mut out = Vec::new();
    for block in &lambda.blocks()[..c as usize] {
        for y in block.coords() {
            let t = y.root(p.f());
            for j in 0..g / c {
                out.push(t.twist(zeta.pow((j * r) as i64)));
            }
        }
    }
    SatakeParam::new(out)
}

/// The global lift `π = δ × 𝔎δ × ⋯ × 𝔎^{r-1}δ` of `Π = u(Λ, q)` with `r = r(Λ)`,
/// `δ = u(ρ, q)` and `x(ρ) = r`.
///
/// The local data of `ρ` are built from those of `Λ`; at every place the local datum of `π`
/// is then compared with `δ_map(Π_v)`, and a disagreement is reported as `LocalMismatch`.
pub fn global_ai_lift(places: &[Place], pi: &GlobalDiscrete) -> Result<InducedGlobal> {
    let delta = lift_delta(places, pi)?;
    let r = pi.atom.atom().orbit();
    let d = pi.atom.atom().d();
    let lifted = InducedGlobal::new(d, places.to_vec(), (0..r).map(|i| delta.translated(i)).collect())?;
    for p in places {
        let LocalDatum::E(y) = pi.local(p)? else { unreachable!("checked over E") };
        if f_local(&lifted, p)? != delta_map(&y) {
            return Err(Error::LocalMismatch {
                place: p.label().to_string(),
                detail: format!("local lift differs from the δ-map of {y}"),
            });
        }
    }
    Ok(lifted)
}

/// `δ = u(ρ, q)` over `F`, before the `𝔎`-product is formed.
fn lift_delta(places: &[Place], pi: &GlobalDiscrete) -> Result<GlobalDiscrete> {
    if pi.side() != Side::E {
        return Err(Error::WrongSide(format!("{} is not over E", pi.atom)));
    }
    let src = pi.atom.atom();
    let (r, g) = (src.orbit(), src.g());
    let rho = lifted_atom(src)?;
    let mut locals = BTreeMap::new();
    for p in places {
        let LocalDatum::E(lambda) = pi.cusp_local(p)? else { unreachable!("checked over E") };
        locals.insert(p.label().to_string(), lifted_cusp_local(&lambda, p, r, g));
    }
    GlobalDiscrete::new_f(places, AtomRef::new(rho, 0), pi.q, locals)
}

/// Whether the local data agree at every stored place; by strong multiplicity one and
/// rigidity this is isomorphism of the induced representations.
pub fn rigidity_check(a: &InducedGlobal, b: &InducedGlobal) -> Result<bool> {
    if a.d != b.d || a.places != b.places {
        return Err(Error::PlaceSetMismatch("the two products live over different place sets".into()));
    }
    for p in a.places.iter() {
        if a.local(p)? != b.local(p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `det(1 - A ⊗ B^∨ X)^{-1}` as its multiset of inverse roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalRSFactor {
    inverse_roots: Vec<Coordinate>,
}

impl LocalRSFactor {
    pub fn inverse_roots(&self) -> &[Coordinate] {
        &self.inverse_roots
    }

    /// Order of the pole at `s = 1`: the multiplicity of `q` among the inverse roots.
    pub fn pole_order_at_one(&self) -> usize {
        let q = Coordinate::q_power(BigRational::from_integer(1.into()));
        self.inverse_roots.iter().filter(|c| **c == q).count()
    }

    /// The factor of `L^{k}`: every inverse root repeated `k` times.
    pub fn power(&self, k: usize) -> LocalRSFactor {
        let mut v: Vec<Coordinate> = self.inverse_roots.iter().flat_map(|c| std::iter::repeat_n(c.clone(), k)).collect();
        v.sort();
        LocalRSFactor { inverse_roots: v }
    }
}

/// Inverse roots `a·b^{-1}` over all pairs `a ∈ p1`, `b ∈ p2`.
pub fn rs_local_factor(p1: &SatakeParam, p2: &SatakeParam) -> LocalRSFactor {
    let mut v: Vec<Coordinate> =
        p1.coords().iter().flat_map(|a| p2.coords().iter().map(move |b| a * &b.inv())).collect();
    v.sort();
    LocalRSFactor { inverse_roots: v }
}

/// The local identity behind separation: if `l` copies of `delta` and `l'` copies of
/// `delta_p` agree, then `L(δ' × δ̌)^{d·l'}` and `L(δ × δ̌)^{d·l}` have the same inverse roots.
pub fn lemma46_local_identity(delta: &SatakeParam, l: usize, delta_p: &SatakeParam, l_p: usize, d: usize) -> Result<bool> {
    if delta.repeat(l) != delta_p.repeat(l_p) {
        return Err(Error::HypothesisViolated(format!("{l}·{delta} differs from {l_p}·{delta_p}")));
    }
    let lhs = rs_local_factor(delta_p, delta).power(d * l_p);
    let rhs = rs_local_factor(delta, delta).power(d * l);
    Ok(lhs == rhs)
}

/// Outcome of [`separate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// `l = l'` and `Δ' ≅ ^{σ^γ}Δ`.
    Same { l: usize, gamma: u64 },
    /// The weak lifts differ at `place`.
    Distinct { place: String },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Same { l, gamma } => write!(f, "same (l={l}, γ=σ^{gamma})"),
            Verdict::Distinct { place } => write!(f, "distinct at {place}"),
        }
    }
}

fn power_shape(pi: &InducedGlobal) -> Result<(&GlobalDiscrete, usize)> {
    let first = &pi.factors[0];
    if pi.side() != Side::E || pi.factors.iter().any(|f| f != first) {
        return Err(Error::ShapeError("expected a power Δ^{×l} of one representation over E".into()));
    }
    Ok((first, pi.factors.len()))
}

/// Separate `Π = Δ^{×l}` from `Π' = Δ'^{×l'}` through their `𝔎`-weak lifts.
///
/// If the lifts agree at every stored place, the Galois element relating `Δ` and `Δ'` is
/// read off at the atom level and cross-checked against the local data, and the local
/// Rankin–Selberg identity is verified at every place.
pub fn separate(pi: &InducedGlobal, pi_p: &InducedGlobal) -> Result<Verdict> {
    let (delta, l) = power_shape(pi)?;
    let (delta_p, l_p) = power_shape(pi_p)?;
    if pi.d != pi_p.d || pi.places != pi_p.places {
        return Err(Error::PlaceSetMismatch("the two products live over different place sets".into()));
    }
    for p in pi.places.iter() {
        if delta_map(&e_local(pi, p)?) != delta_map(&e_local(pi_p, p)?) {
            return Ok(Verdict::Distinct { place: p.label().to_string() });
        }
    }
    let (a, a_p) = (delta.atom(), delta_p.atom());
    if a.atom() != a_p.atom() || delta.q != delta_p.q || l != l_p {
        return Err(Error::HypothesisViolated(format!(
            "weak lifts of {} and {} agree at every stored place but the atoms differ; add places",
            a, a_p
        )));
    }
    let g = a.atom().g();
    let gamma = (a_p.translate() + g - a.translate()) % g;
    let moved = delta.translated(gamma);
    for p in pi.places.iter() {
        if moved.local(p)? != delta_p.local(p)? {
            return Err(Error::LocalMismatch {
                place: p.label().to_string(),
                detail: format!("σ^{gamma} does not carry the local datum of {a} to that of {a_p}"),
            });
        }
        let (x, x_p) = (delta_map(&delta.local_e(p)?), delta_map(&delta_p.local_e(p)?));
        if !lemma46_local_identity(&x, l, &x_p, l_p, pi.d as usize)? {
            return Err(Error::LocalMismatch { place: p.label().to_string(), detail: "local Rankin–Selberg identity fails".into() });
        }
    }
    Ok(Verdict::Same { l, gamma })
}

impl GlobalDiscrete {
    fn local_e(&self, p: &Place) -> Result<SphericalRepE> {
        match self.local(p)? {
            LocalDatum::E(y) => Ok(y),
            LocalDatum::F(_) => Err(Error::WrongSide("expected a representation over E".into())),
        }
    }
}

/// The placewise identities of the induction/base-change compatibility for `Π`:
///
/// * `Π̃ = Π × ^σΠ × ⋯ × ^{σ^{g-1}}Π` is the base change of `δ`, the discrete
///   representation with `x(δ) = r` built by the lift;
/// * `δ̃ = δ × 𝔎δ × ⋯ × 𝔎^{r-1}δ` has the local data of the `δ`-map of `Π`;
/// * the Satake-level identity [`check_ia_bc_compat`] holds for `Π_v`.
pub fn check_global_compat(places: &[Place], pi: &GlobalDiscrete) -> Result<bool> {
    let delta = lift_delta(places, pi)?;
    let src = pi.atom.atom();
    let (r, g) = (src.orbit(), src.g());
    let d = src.d();
    let pi_tilde = InducedGlobal::new(d, places.to_vec(), (0..g).map(|j| pi.translated(j)).collect())?;
    let delta_tilde = InducedGlobal::new(d, places.to_vec(), (0..r).map(|i| delta.translated(i)).collect())?;
    for p in places {
        let LocalDatum::F(dv) = delta.local(p)? else { unreachable!("δ is over F") };
        let y = pi.local_e(p)?;
        let ok = bc_map(&dv, p.algebra()) == e_local(&pi_tilde, p)?
            && f_local(&delta_tilde, p)? == delta_map(&y)
            && check_ia_bc_compat(&y);
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The local datum at `p` of a cuspidal `Λ` with Galois orbit of size `g`: the
/// `gcd(g, e_v)` given blocks repeated periodically over the `e_v` places above `p`.
pub fn periodic_local(p: &Place, g: u64, blocks: &[SatakeParam]) -> Result<SphericalRepE> {
    let c = g.gcd(&p.e()) as usize;
    if blocks.len() != c {
        return Err(Error::ShapeError(format!("place {}: {} blocks given, period is {c}", p.label(), blocks.len())));
    }
    SphericalRepE::new(p.algebra(), (0..p.e() as usize).map(|i| blocks[i % c].clone()).collect())
}

/// Build an `E` atom and its representation from raw local blocks (test and CLI helper).
pub fn discrete_e(
    places: &[Place],
    atom: Arc<CuspidalAtom>,
    translate: u64,
    q: u32,
    locals: BTreeMap<String, Vec<Vec<Coordinate>>>,
) -> Result<GlobalDiscrete> {
    let pm = place_map(places);
    let mut ys = BTreeMap::new();
    for (label, blocks) in locals {
        let p = pm
            .get(label.as_str())
            .ok_or_else(|| Error::PlaceSetMismatch(format!("unknown place {label}")))?;
        ys.insert(label, SphericalRepE::new(p.algebra(), blocks.into_iter().map(SatakeParam::new).collect())?);
    }
    GlobalDiscrete::new_e(places, AtomRef::new(atom, translate), q, ys)
}
