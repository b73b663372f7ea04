use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{Coordinate, RootOfUnity};
use crate::error::{Error, Result};
use crate::json::{parse_with, DocError, FromJson};

/// The datum `E = E_1 × ⋯ × E_r` with each `E_i/F` cyclic unramified of degree `s`,
/// together with the twist root `ζ` of exact order `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CyclicAlgebra {
    d: u64,
    r: u64,
    s: u64,
    zeta: RootOfUnity,
}

impl CyclicAlgebra {
    /// `r` factors of degree `d/r`, with the default root `ζ = exp(2πi/s)`.
    pub fn new(d: u64, r: u64) -> Result<Self> {
        if d == 0 || r == 0 || !d.is_multiple_of(r) {
            return Err(Error::InvalidAlgebra(format!("r={r} must be a positive divisor of d={d}")));
        }
        let s = d / r;
        Ok(CyclicAlgebra { d, r, s, zeta: RootOfUnity::primitive(s) })
    }

    pub fn field(d: u64) -> Result<Self> {
        Self::new(d, 1)
    }

    pub fn split(r: u64) -> Result<Self> {
        Self::new(r, r)
    }

    /// Replace the twist root. It must have exact order `s`.
    pub fn with_zeta(self, zeta: RootOfUnity) -> Result<Self> {
        if zeta.order() != self.s {
            return Err(Error::InvalidAlgebra(format!(
                "zeta {}/{} does not have exact order s={}",
                zeta.num(),
                zeta.order(),
                self.s
            )));
        }
        Ok(CyclicAlgebra { zeta, ..self })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn zeta(&self) -> RootOfUnity {
        self.zeta
    }

    pub fn zeta_coord(&self) -> Coordinate {
        Coordinate::root_of_unity(self.zeta)
    }
}

/// A Satake parameter: a multiset of coordinates, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SatakeParam {
    coords: Vec<Coordinate>,
}

impl SatakeParam {
    pub fn new(mut coords: Vec<Coordinate>) -> Self {
        coords.sort();
        SatakeParam { coords }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Coordinate] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Coordinate> {
        self.coords
    }

    /// Multiset union.
    pub fn concat(&self, other: &SatakeParam) -> SatakeParam {
        let mut v = self.coords.clone();
        v.extend_from_slice(&other.coords);
        SatakeParam::new(v)
    }

    pub fn map(&self, f: impl Fn(&Coordinate) -> Coordinate) -> SatakeParam {
        SatakeParam::new(self.coords.iter().map(f).collect())
    }

    /// `k` copies of this multiset.
    pub fn repeat(&self, k: usize) -> SatakeParam {
        SatakeParam::new(self.coords.iter().cycle().take(self.rank() * k).cloned().collect())
    }

    pub fn product(&self) -> Coordinate {
        self.coords.iter().fold(Coordinate::one(), |acc, c| &acc * c)
    }
}

impl FromIterator<Coordinate> for SatakeParam {
    fn from_iter<I: IntoIterator<Item = Coordinate>>(iter: I) -> Self {
        SatakeParam::new(iter.into_iter().collect())
    }
}

impl fmt::Display for SatakeParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A spherical representation `Π_{y(1)} ⊗ ⋯ ⊗ Π_{y(r)}` of `GL_m(E)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SphericalRepE {
    algebra: AlgebraKey,
    blocks: Vec<SatakeParam>,
}

/// Ordering wrapper so that representations can live in ordered sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct AlgebraKey(CyclicAlgebra);

impl Ord for AlgebraKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let k = |a: &CyclicAlgebra| (a.d, a.r, a.zeta);
        k(&self.0).cmp(&k(&other.0))
    }
}

impl PartialOrd for AlgebraKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl SphericalRepE {
    pub fn new(algebra: CyclicAlgebra, blocks: Vec<SatakeParam>) -> Result<Self> {
        if blocks.len() as u64 != algebra.r {
            return Err(Error::RankMismatch(format!(
                "expected {} blocks, got {}",
                algebra.r,
                blocks.len()
            )));
        }
        if let Some(b) = blocks.iter().find(|b| b.rank() != blocks[0].rank()) {
            return Err(Error::RankMismatch(format!(
                "blocks have ranks {} and {}",
                blocks[0].rank(),
                b.rank()
            )));
        }
        Ok(SphericalRepE { algebra: AlgebraKey(algebra), blocks })
    }

    pub fn algebra(&self) -> CyclicAlgebra {
        self.algebra.0
    }

    pub fn blocks(&self) -> &[SatakeParam] {
        &self.blocks
    }

    /// The common block rank `m`.
    pub fn m(&self) -> usize {
        self.blocks.first().map_or(0, SatakeParam::rank)
    }

    /// All coordinates of all blocks, in block order.
    pub fn flatten(&self) -> Vec<Coordinate> {
        self.blocks.iter().flat_map(|b| b.coords().iter().cloned()).collect()
    }

    /// The Galois action: cyclic rotation of the factors by `k` places.
    pub fn rotate(&self, k: usize) -> SphericalRepE {
        let mut blocks = self.blocks.clone();
        let r = blocks.len();
        if r > 0 {
            blocks.rotate_right(k % r);
        }
        SphericalRepE { algebra: self.algebra, blocks }
    }

    /// The orbit under the Galois group, which acts through cyclic rotation of
    /// factors (σ^r acts trivially on unramified parameters of each factor).
    pub fn gamma_orbit(&self) -> Vec<SphericalRepE> {
        let mut out: Vec<SphericalRepE> = (0..self.blocks.len().max(1)).map(|k| self.rotate(k)).collect();
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for SphericalRepE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "{}", parts.join(" ⊗ "))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamRepr {
    rank: usize,
    coords: Vec<Coordinate>,
}

impl Serialize for SatakeParam {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ParamRepr { rank: self.rank(), coords: self.coords.clone() }.serialize(s)
    }
}

impl ParamRepr {
    fn build(self) -> Result<SatakeParam> {
        if self.rank != self.coords.len() {
            return Err(Error::RankMismatch(format!("rank {} with {} coordinates", self.rank, self.coords.len())));
        }
        Ok(SatakeParam::new(self.coords))
    }
}

impl<'de> Deserialize<'de> for SatakeParam {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        ParamRepr::deserialize(d)?.build().map_err(serde::de::Error::custom)
    }
}

impl FromJson for SatakeParam {
    fn from_json(v: serde_json::Value) -> std::result::Result<Self, DocError> {
        parse_with(v, ParamRepr::build)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct AlgebraRepr {
    d: u64,
    r: u64,
    s: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    zeta: Option<[u64; 2]>,
}

impl AlgebraRepr {
    pub(crate) fn build(&self) -> Result<CyclicAlgebra> {
        let a = CyclicAlgebra::new(self.d, self.r)?;
        if a.s != self.s {
            return Err(Error::InvalidAlgebra(format!("d={} r={} forces s={}, got {}", self.d, self.r, a.s, self.s)));
        }
        match self.zeta {
            None => Ok(a),
            Some([num, den]) => {
                if den == 0 || num >= den {
                    return Err(Error::InvalidAlgebra(format!("zeta {num}/{den} is not a reduced fraction in [0,1)")));
                }
                a.with_zeta(RootOfUnity::new(num as i64, den))
            }
        }
    }
}

impl From<CyclicAlgebra> for AlgebraRepr {
    fn from(a: CyclicAlgebra) -> Self {
        AlgebraRepr { d: a.d, r: a.r, s: a.s, zeta: Some([a.zeta.num(), a.zeta.order()]) }
    }
}

impl Serialize for CyclicAlgebra {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AlgebraRepr::from(*self).serialize(s)
    }
}

impl FromJson for CyclicAlgebra {
    fn from_json(v: serde_json::Value) -> std::result::Result<Self, DocError> {
        parse_with(v, |r: AlgebraRepr| r.build())
    }
}

impl<'de> Deserialize<'de> for CyclicAlgebra {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        AlgebraRepr::deserialize(d)?.build().map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepERepr {
    algebra: AlgebraRepr,
    blocks: Vec<Vec<Coordinate>>,
}

impl Serialize for SphericalRepE {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RepERepr {
            algebra: self.algebra.0.into(),
            blocks: self.blocks.iter().map(|b| b.coords().to_vec()).collect(),
        }
        .serialize(s)
    }
}

impl RepERepr {
    fn build(self) -> Result<SphericalRepE> {
        SphericalRepE::new(self.algebra.build()?, self.blocks.into_iter().map(SatakeParam::new).collect())
    }
}

impl<'de> Deserialize<'de> for SphericalRepE {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        RepERepr::deserialize(d)?.build().map_err(serde::de::Error::custom)
    }
}

impl FromJson for SphericalRepE {
    fn from_json(v: serde_json::Value) -> std::result::Result<Self, DocError> {
        parse_with(v, RepERepr::build)
    }
}
