use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{GlobalDiscrete, InducedGlobal, Place};
use crate::arith::Coordinate;
use crate::error::{Error, Result};
use crate::json::{parse_with, DocError, FromJson};
use crate::reps::{ref_repr, AtomRepr, AtomTable, Side};
use crate::satake::SatakeParam;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlaceRepr {
    label: String,
    f: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiscreteRepr {
    atom: AtomRepr,
    #[serde(default = "one")]
    q: u32,
    /// Blocks of the cuspidal datum at each place; a single block over `F`.
    locals: BTreeMap<String, Vec<Vec<Coordinate>>>,
}

fn one() -> u32 {
    1
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocRepr {
    d: u64,
    places: Vec<PlaceRepr>,
    reps: Vec<DiscreteRepr>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeparateRepr {
    d: u64,
    places: Vec<PlaceRepr>,
    pi: Vec<DiscreteRepr>,
    pi_p: Vec<DiscreteRepr>,
}

/// A place set with a list of discrete representations over it.
///
/// ```json
/// {"d": 2, "places": [{"label": "v1", "f": 2}],
///  "reps": [{"atom": {"id": "L", "side": "E", "size": 1, "r": 1}, "q": 1,
///            "locals": {"v1": [[{"zeta": [0, 1], "qexp": [1, 3]}]]}}]}
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalDocument {
    pub d: u64,
    pub places: Vec<Place>,
    pub reps: Vec<GlobalDiscrete>,
}

/// Input of the separation check: `Π` and `Π'` over one place set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparateDocument {
    pub pi: InducedGlobal,
    pub pi_p: InducedGlobal,
}

fn places_of(d: u64, ps: &[PlaceRepr]) -> Result<Vec<Place>> {
    let mut out = ps.iter().map(|p| Place::new(p.label.clone(), d, p.f)).collect::<Result<Vec<_>>>()?;
    out.sort();
    if out.windows(2).any(|w| w[0].label == w[1].label) {
        return Err(Error::ShapeError("duplicate place label".into()));
    }
    Ok(out)
}

fn rep_of(table: &mut AtomTable, places: &[Place], r: &DiscreteRepr) -> Result<GlobalDiscrete> {
    let atom = table.atom_ref(&r.atom)?;
    match atom.side() {
        Side::E => super::discrete_e(places, atom.atom().clone(), atom.translate(), r.q, r.locals.clone()),
        Side::F => {
            let mut ys = BTreeMap::new();
            for (label, blocks) in &r.locals {
                let [block] = blocks.as_slice() else {
                    return Err(Error::ShapeError(format!("place {label}: a datum over F has one block")));
                };
                ys.insert(label.clone(), SatakeParam::new(block.clone()));
            }
            GlobalDiscrete::new_f(places, atom, r.q, ys)
        }
    }
}

fn rep_repr(g: &GlobalDiscrete) -> DiscreteRepr {
    DiscreteRepr {
        atom: ref_repr(&g.atom),
        q: g.q,
        locals: g
            .locals
            .iter()
            .map(|(l, bs)| (l.clone(), bs.iter().map(|b| b.coords().to_vec()).collect()))
            .collect(),
    }
}

fn places_repr(ps: &[Place]) -> Vec<PlaceRepr> {
    ps.iter().map(|p| PlaceRepr { label: p.label.clone(), f: p.f }).collect()
}

impl GlobalDocument {
    fn from_repr(doc: DocRepr) -> Result<Self> {
        let places = places_of(doc.d, &doc.places)?;
        let mut table = AtomTable::new(doc.d);
        let reps = doc.reps.iter().map(|r| rep_of(&mut table, &places, r)).collect::<Result<Vec<_>>>()?;
        Ok(GlobalDocument { d: doc.d, places, reps })
    }

    /// The product of all listed representations.
    pub fn induced(&self) -> Result<InducedGlobal> {
        InducedGlobal::new(self.d, self.places.clone(), self.reps.clone())
    }

    pub fn of_induced(g: &InducedGlobal) -> Self {
        GlobalDocument { d: g.d, places: g.places.to_vec(), reps: g.factors.clone() }
    }

    /// Parse, keeping domain errors apart from malformed JSON.
    pub fn from_value(v: serde_json::Value) -> std::result::Result<Self, DocError> {
        parse_with(v, Self::from_repr)
    }
}

impl SeparateDocument {
    fn from_repr(doc: SeparateRepr) -> Result<Self> {
        let places = places_of(doc.d, &doc.places)?;
        let mut table = AtomTable::new(doc.d);
        let pi = doc.pi.iter().map(|r| rep_of(&mut table, &places, r)).collect::<Result<Vec<_>>>()?;
        let pi_p = doc.pi_p.iter().map(|r| rep_of(&mut table, &places, r)).collect::<Result<Vec<_>>>()?;
        Ok(SeparateDocument {
            pi: InducedGlobal::new(doc.d, places.clone(), pi)?,
            pi_p: InducedGlobal::new(doc.d, places, pi_p)?,
        })
    }

    pub fn from_value(v: serde_json::Value) -> std::result::Result<Self, DocError> {
        parse_with(v, Self::from_repr)
    }
}

impl Serialize for GlobalDocument {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DocRepr { d: self.d, places: places_repr(&self.places), reps: self.reps.iter().map(rep_repr).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GlobalDocument {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        GlobalDocument::from_repr(DocRepr::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl Serialize for SeparateDocument {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeparateRepr {
            d: self.pi.d,
            places: places_repr(&self.pi.places),
            pi: self.pi.factors.iter().map(rep_repr).collect(),
            pi_p: self.pi_p.factors.iter().map(rep_repr).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SeparateDocument {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SeparateDocument::from_repr(SeparateRepr::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl Serialize for InducedGlobal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GlobalDocument::of_induced(self).serialize(s)
    }
}

impl FromJson for GlobalDocument {
    fn from_json(v: serde_json::Value) -> std::result::Result<Self, DocError> {
        Self::from_value(v)
    }
}

impl FromJson for SeparateDocument {
    fn from_json(v: serde_json::Value) -> std::result::Result<Self, DocError> {
        Self::from_value(v)
    }
}
