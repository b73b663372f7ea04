use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{rat, Coordinate};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    F,
    E,
}

impl Side {
    pub fn as_str(&self) -> &'static str {
        match self {
            Side::F => "F",
            Side::E => "E",
        }
    }
}

/// An opaque cuspidal representation, known only through its size and orbit data.
///
/// On the `F` side `orbit` is `x(ρ)`, the size of the κ-twist orbit; on the `E` side it is
/// `r(ρ_E)`, the order of the Galois stabiliser. Both divide `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CuspidalAtom {
    id: String,
    side: Side,
    size: u32,
    d: u64,
    orbit: u64,
    payload: Option<Coordinate>,
    source: Option<Arc<CuspidalAtom>>,
}

impl CuspidalAtom {
    fn build(
        id: impl Into<String>,
        side: Side,
        size: u32,
        d: u64,
        orbit: u64,
        payload: Option<Coordinate>,
    ) -> Result<Self> {
        let id = id.into();
        if size == 0 || d == 0 {
            return Err(Error::BadOrbit(format!("atom {id}: size and d must be positive")));
        }
        if orbit == 0 || !d.is_multiple_of(orbit) {
            let name = if side == Side::F { "x" } else { "r" };
            return Err(Error::BadOrbit(format!("atom {id}: {name}={orbit} does not divide d={d}")));
        }
        if payload.is_some() {
            // An unramified character: GL_1, Galois-fixed over E, with a full κ-orbit over F.
            if size != 1 || orbit != d {
                return Err(Error::BadOrbit(format!(
                    "atom {id}: an unramified character has size 1 and orbit {d}, got size {size}, orbit {orbit}"
                )));
            }
        }
        Ok(CuspidalAtom { id, side, size, d, orbit, payload, source: None })
    }

    /// A cuspidal representation of `GL_size(F)` with `x(ρ) = x`.
    pub fn new_f(id: impl Into<String>, size: u32, d: u64, x: u64) -> Result<Self> {
        Self::build(id, Side::F, size, d, x, None)
    }

    /// A cuspidal representation of `GL_size(E)` with `r(ρ_E) = r`.
    pub fn new_e(id: impl Into<String>, size: u32, d: u64, r: u64) -> Result<Self> {
        Self::build(id, Side::E, size, d, r, None)
    }

    /// The unramified character of `F^×` with `χ(ϖ) = xi`.
    pub fn unramified_f(id: impl Into<String>, d: u64, xi: Coordinate) -> Result<Self> {
        Self::build(id, Side::F, 1, d, d, Some(xi))
    }

    /// The unramified character of `E^×` with `χ(ϖ_E) = mu`.
    pub fn unramified_e(id: impl Into<String>, d: u64, mu: Coordinate) -> Result<Self> {
        Self::build(id, Side::E, 1, d, d, Some(mu))
    }

    pub(crate) fn with_source(mut self, source: Arc<CuspidalAtom>) -> Self {
        self.source = Some(source);
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// `x(ρ)` for `F` atoms, `r(ρ_E)` for `E` atoms.
    pub fn orbit(&self) -> u64 {
        self.orbit
    }

    /// `g = d / r` for `E` atoms.
    pub fn g(&self) -> u64 {
        self.d / self.orbit
    }

    /// Number of distinct translates: `x` over `F`, `g` over `E`.
    pub fn translates(&self) -> u64 {
        match self.side {
            Side::F => self.orbit,
            Side::E => self.g(),
        }
    }

    pub fn payload(&self) -> Option<&Coordinate> {
        self.payload.as_ref()
    }

    /// The `E` atom this one was lifted from, if any.
    pub fn source(&self) -> Option<&Arc<CuspidalAtom>> {
        self.source.as_ref()
    }
}

/// A κ-translate (over `F`) or Galois translate (over `E`) of an atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomRef {
    atom: Arc<CuspidalAtom>,
    translate: u64,
}

impl AtomRef {
    pub fn new(atom: Arc<CuspidalAtom>, translate: u64) -> Self {
        let t = translate % atom.translates();
        AtomRef { atom, translate: t }
    }

    pub fn atom(&self) -> &Arc<CuspidalAtom> {
        &self.atom
    }

    pub fn translate(&self) -> u64 {
        self.translate
    }

    pub fn side(&self) -> Side {
        self.atom.side
    }

    /// Apply `κ^i` (over `F`) or `γ^i` (over `E`).
    pub fn shifted(&self, i: u64) -> Self {
        Self::new(self.atom.clone(), self.translate + i)
    }
}

impl fmt::Display for AtomRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.translate, self.atom.side) {
            (0, _) => write!(f, "{}", self.atom.id),
            (t, Side::F) => write!(f, "κ^{t}{}", self.atom.id),
            (t, Side::E) => write!(f, "σ^{t}{}", self.atom.id),
        }
    }
}

/// `ν^twist · δ̃(ρ, k)`: the essentially square-integrable representation with
/// segment `[ρ, ν^{k-1}ρ]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EssDiscrete {
    pub atom: AtomRef,
    pub k: u32,
    pub twist: BigRational,
}

impl EssDiscrete {
    pub fn new(atom: AtomRef, k: u32, twist: BigRational) -> Result<Self> {
        if k == 0 {
            return Err(Error::ShapeError("segment length must be positive".into()));
        }
        Ok(EssDiscrete { atom, k, twist })
    }

    /// Square-integrable, no twist.
    pub fn square_integrable(atom: AtomRef, k: u32) -> Result<Self> {
        Self::new(atom, k, BigRational::zero())
    }

    pub fn rank(&self) -> u32 {
        self.atom.atom.size * self.k
    }

    pub fn side(&self) -> Side {
        self.atom.side()
    }
}

/// `u(δ, q)`, with `δ` possibly twisted by `ν^c` (the twist is carried by `base`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Speh {
    pub base: EssDiscrete,
    pub q: u32,
}

impl Speh {
    pub fn new(base: EssDiscrete, q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::ShapeError("Speh height must be positive".into()));
        }
        Ok(Speh { base, q })
    }

    pub fn rank(&self) -> u32 {
        self.base.rank() * self.q
    }
}

/// `ν^α u × ν^{-α} u`, a complementary-series pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pair {
    pub speh: Speh,
    pub alpha: BigRational,
}

impl Pair {
    /// Requires `0 < α < 1/2`.
    pub fn new(speh: Speh, alpha: BigRational) -> Result<Self> {
        if !alpha.is_positive() || alpha >= rat(1, 2) {
            return Err(Error::ShapeError(format!("pair exponent {alpha} is not in (0, 1/2)")));
        }
        Ok(Pair { speh, alpha })
    }

    pub fn rank(&self) -> u32 {
        2 * self.speh.rank()
    }
}

/// `ũ(ρ, k; M)`, the elliptic subquotient of `ν^{k-1}ρ × ⋯ × ρ` attached to the standard
/// Levi `M = GL_{m_1} × ⋯ × GL_{m_s}`.
///
/// `levi` lists the block ranks `m_i`; each is a multiple of the atom size and they sum to
/// `size·k`. For an atom of size one this is a composition of `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elliptic {
    pub atom: AtomRef,
    pub k: u32,
    pub levi: Vec<u32>,
}

impl Elliptic {
    pub fn new(atom: AtomRef, k: u32, levi: Vec<u32>) -> Result<Self> {
        let a = atom.atom.size;
        if k == 0 || levi.is_empty() || levi.iter().any(|&m| m == 0 || m % a != 0) || levi.iter().sum::<u32>() != a * k {
            return Err(Error::ShapeError(format!(
                "levi {levi:?} is not a decomposition of {} into multiples of {a}",
                a * k
            )));
        }
        Ok(Elliptic { atom, k, levi })
    }

    /// Every standard Levi containing `GL_a^k`, as block ranks.
    pub fn all_levis(size: u32, k: u32) -> Vec<Vec<u32>> {
        crate::hecke::partition::compositions_of(k)
            .into_iter()
            .map(|c| c.into_iter().map(|x| x * size).collect())
            .collect()
    }

    /// `levi = (size·k)`.
    pub fn is_square_integrable(&self) -> bool {
        self.levi.len() == 1
    }

    pub fn rank(&self) -> u32 {
        self.atom.atom.size * self.k
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    Speh(Speh),
    Pair(Pair),
    Elliptic(Elliptic),
}

impl Factor {
    pub fn rank(&self) -> u32 {
        match self {
            Factor::Speh(u) => u.rank(),
            Factor::Pair(p) => p.rank(),
            Factor::Elliptic(e) => e.rank(),
        }
    }

    pub fn atom(&self) -> &AtomRef {
        match self {
            Factor::Speh(u) => &u.base.atom,
            Factor::Pair(p) => &p.speh.base.atom,
            Factor::Elliptic(e) => &e.atom,
        }
    }

    pub fn side(&self) -> Side {
        self.atom().side()
    }

    /// The same factor with its atom reference replaced.
    pub fn with_atom(&self, atom: AtomRef) -> Factor {
        match self {
            Factor::Speh(u) => {
                Factor::Speh(Speh { base: EssDiscrete { atom, ..u.base.clone() }, q: u.q })
            }
            Factor::Pair(p) => Factor::Pair(Pair {
                speh: Speh { base: EssDiscrete { atom, ..p.speh.base.clone() }, q: p.speh.q },
                alpha: p.alpha.clone(),
            }),
            Factor::Elliptic(e) => Factor::Elliptic(Elliptic { atom, ..e.clone() }),
        }
    }

    /// Generic factors: `u(δ, 1)`, pairs of those, and essentially square-integrable
    /// elliptic representations.
    pub fn is_generic(&self) -> bool {
        match self {
            Factor::Speh(u) => u.q == 1,
            Factor::Pair(p) => p.speh.q == 1,
            Factor::Elliptic(e) => e.is_square_integrable(),
        }
    }

    /// Unitary building blocks: untwisted Speh representations and pairs with `0 < α < 1/2`.
    pub fn is_unitary(&self) -> bool {
        match self {
            Factor::Speh(u) => u.base.twist.is_zero(),
            Factor::Pair(p) => p.speh.base.twist.is_zero(),
            Factor::Elliptic(_) => false,
        }
    }
}

/// A product `τ_1 × ⋯ × τ_s`, kept in canonical (sorted) order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Product {
    factors: Vec<Factor>,
}

impl Product {
    pub fn new(mut factors: Vec<Factor>) -> Self {
        factors.sort();
        Product { factors }
    }

    pub fn single(f: Factor) -> Self {
        Product { factors: vec![f] }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn rank(&self) -> u32 {
        self.factors.iter().map(Factor::rank).sum()
    }

    /// The side of every factor, or `None` for an empty or mixed product.
    pub fn side(&self) -> Option<Side> {
        let s = self.factors.first()?.side();
        self.factors.iter().all(|f| f.side() == s).then_some(s)
    }

    pub fn is_unitary(&self) -> bool {
        self.factors.iter().all(Factor::is_unitary)
    }

    pub fn concat(&self, other: &Product) -> Product {
        let mut v = self.factors.clone();
        v.extend(other.factors.iter().cloned());
        Product::new(v)
    }
}

/// Whether every factor of the product is generic.
pub fn is_generic(p: &Product) -> bool {
    p.factors.iter().all(Factor::is_generic)
}

impl fmt::Display for EssDiscrete {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twist.is_zero() {
            write!(f, "δ({},{})", self.atom, self.k)
        } else {
            write!(f, "ν^{}δ({},{})", self.twist, self.atom, self.k)
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Speh(u) if u.q.is_one() => write!(f, "{}", u.base),
            Factor::Speh(u) => write!(f, "u({},{})", u.base, u.q),
            Factor::Pair(p) => write!(f, "u({},{};{})", p.speh.base, p.speh.q, p.alpha),
            Factor::Elliptic(e) => write!(f, "ũ({},{};{:?})", e.atom, e.k, e.levi),
        }
    }
}

impl fmt::Display for Product {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(" × "))
    }
}
