use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::types::{AtomRef, CuspidalAtom, Elliptic, EssDiscrete, Factor, Pair, Product, Side, Speh};
use crate::arith::Coordinate;
use crate::error::{Error, Result};
use crate::satake::{SatakeParam, SphericalRepE};
use crate::json::{DocError, FromJson};

/// A product of representations together with the degree `d` of the algebra.
///
/// ```json
/// {"d": 2, "rep": {"kind": "product", "factors": [
///   {"kind": "speh", "atom": {"id": "rho", "side": "E", "size": 1, "r": 2}, "k": 1, "q": 2}]}}
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepDocument {
    pub d: u64,
    pub rep: Product,
}

/// The output of specialization: a parameter over `F` or over `E`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpecializedRep {
    F(SatakeParam),
    E(SphericalRepE),
}

#[derive(Serialize, Deserialize, Clone)]
#[serde(deny_unknown_fields)]
pub(crate) struct AtomRepr {
    id: String,
    side: String,
    size: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    payload: Option<Coordinate>,
    #[serde(default, skip_serializing_if = "is_zero_u64")]
    translate: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    source: Option<Box<AtomRepr>>,
}

fn is_zero_u64(x: &u64) -> bool {
    *x == 0
}

type RatRepr = [i64; 2];

fn zero_rat() -> RatRepr {
    [0, 1]
}

fn is_zero_rat(x: &RatRepr) -> bool {
    x[0] == 0
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum ExprRepr {
    Discrete {
        atom: AtomRepr,
        k: u32,
        #[serde(default = "zero_rat", skip_serializing_if = "is_zero_rat")]
        twist: RatRepr,
    },
    Speh {
        atom: AtomRepr,
        k: u32,
        q: u32,
        #[serde(default = "zero_rat", skip_serializing_if = "is_zero_rat")]
        twist: RatRepr,
    },
    Pair {
        atom: AtomRepr,
        k: u32,
        q: u32,
        alpha: RatRepr,
    },
    Elliptic {
        atom: AtomRepr,
        k: u32,
        levi: Vec<u32>,
    },
    Product {
        factors: Vec<ExprRepr>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocRepr {
    d: u64,
    rep: ExprRepr,
}

fn rat_of(x: RatRepr) -> Result<BigRational> {
    if x[1] <= 0 {
        return Err(Error::ShapeError(format!("denominator of {}/{} must be positive", x[0], x[1])));
    }
    Ok(BigRational::new(BigInt::from(x[0]), BigInt::from(x[1])))
}

fn rat_repr(x: &BigRational) -> Result<RatRepr> {
    match (x.numer().to_i64(), x.denom().to_i64()) {
        (Some(p), Some(q)) => Ok([p, q]),
        _ => Err(Error::ShapeError(format!("rational {x} does not fit in 64 bits"))),
    }
}

/// Rebuilds atoms, checking that every use of an id describes the same atom.
pub(crate) struct AtomTable {
    d: u64,
    seen: HashMap<String, Arc<CuspidalAtom>>,
}

impl AtomTable {
    pub(crate) fn new(d: u64) -> Self {
        AtomTable { d, seen: HashMap::new() }
    }

    fn atom(&mut self, a: &AtomRepr) -> Result<Arc<CuspidalAtom>> {
        let atom = match (a.side.as_str(), a.x, a.r) {
            ("F", Some(x), None) => match &a.payload {
                Some(p) if a.size == 1 && x == self.d => CuspidalAtom::unramified_f(a.id.clone(), self.d, p.clone())?,
                Some(_) => return Err(Error::BadOrbit(format!("atom {}: a payload needs size 1 and x=d", a.id))),
                None => CuspidalAtom::new_f(a.id.clone(), a.size, self.d, x)?,
            },
            ("E", None, Some(r)) => match &a.payload {
                Some(p) if a.size == 1 && r == self.d => CuspidalAtom::unramified_e(a.id.clone(), self.d, p.clone())?,
                Some(_) => return Err(Error::BadOrbit(format!("atom {}: a payload needs size 1 and r=d", a.id))),
                None => CuspidalAtom::new_e(a.id.clone(), a.size, self.d, r)?,
            },
            _ => {
                return Err(Error::ShapeError(format!(
                    "atom {}: side must be \"F\" with \"x\" or \"E\" with \"r\"",
                    a.id
                )))
            }
        };
        let atom = match &a.source {
            Some(src) if atom.side() == Side::F => {
                let s = self.atom(src)?;
                if s.side() != Side::E {
                    return Err(Error::ShapeError(format!("source of {} must be over E", a.id)));
                }
                atom.with_source(s)
            }
            Some(_) => return Err(Error::ShapeError(format!("E atom {} cannot carry a source", a.id))),
            None => atom,
        };
        match self.seen.get(&a.id) {
            Some(prev) if prev.as_ref() != &atom => {
                Err(Error::ShapeError(format!("atom id {} is used for two different atoms", a.id)))
            }
            Some(prev) => Ok(prev.clone()),
            None => {
                let atom = Arc::new(atom);
                self.seen.insert(a.id.clone(), atom.clone());
                Ok(atom)
            }
        }
    }

    pub(crate) fn atom_ref(&mut self, a: &AtomRepr) -> Result<AtomRef> {
        let atom = self.atom(a)?;
        if a.translate >= atom.translates() {
            return Err(Error::BadOrbit(format!(
                "translate {} of {} is outside 0..{}",
                a.translate,
                a.id,
                atom.translates()
            )));
        }
        Ok(AtomRef::new(atom, a.translate))
    }

    fn factors(&mut self, e: &ExprRepr, out: &mut Vec<Factor>) -> Result<()> {
        match e {
            ExprRepr::Discrete { atom, k, twist } => {
                let base = EssDiscrete::new(self.atom_ref(atom)?, *k, rat_of(*twist)?)?;
                out.push(Factor::Speh(Speh::new(base, 1)?));
            }
            ExprRepr::Speh { atom, k, q, twist } => {
                let base = EssDiscrete::new(self.atom_ref(atom)?, *k, rat_of(*twist)?)?;
                out.push(Factor::Speh(Speh::new(base, *q)?));
            }
            ExprRepr::Pair { atom, k, q, alpha } => {
                let base = EssDiscrete::square_integrable(self.atom_ref(atom)?, *k)?;
                out.push(Factor::Pair(Pair::new(Speh::new(base, *q)?, rat_of(*alpha)?)?));
            }
            ExprRepr::Elliptic { atom, k, levi } => {
                out.push(Factor::Elliptic(Elliptic::new(self.atom_ref(atom)?, *k, levi.clone())?));
            }
            ExprRepr::Product { factors } => {
                for f in factors {
                    self.factors(f, out)?;
                }
            }
        }
        Ok(())
    }
}

fn atom_repr(a: &CuspidalAtom, translate: u64) -> AtomRepr {
    let (x, r) = match a.side() {
        Side::F => (Some(a.orbit()), None),
        Side::E => (None, Some(a.orbit())),
    };
    AtomRepr {
        id: a.id().to_string(),
        side: a.side().as_str().to_string(),
        size: a.size(),
        x,
        r,
        payload: a.payload().cloned(),
        translate,
        source: a.source().map(|s| Box::new(atom_repr(s, 0))),
    }
}

pub(crate) fn ref_repr(a: &AtomRef) -> AtomRepr {
    atom_repr(a.atom(), a.translate())
}

fn factor_repr(f: &Factor) -> Result<ExprRepr> {
    Ok(match f {
        Factor::Speh(u) => ExprRepr::Speh {
            atom: ref_repr(&u.base.atom),
            k: u.base.k,
            q: u.q,
            twist: rat_repr(&u.base.twist)?,
        },
        Factor::Pair(p) => {
            if !p.speh.base.twist.is_zero() {
                return Err(Error::ShapeError("a pair carries no extra twist".into()));
            }
            ExprRepr::Pair {
                atom: ref_repr(&p.speh.base.atom),
                k: p.speh.base.k,
                q: p.speh.q,
                alpha: rat_repr(&p.alpha)?,
            }
        }
        Factor::Elliptic(e) => ExprRepr::Elliptic { atom: ref_repr(&e.atom), k: e.k, levi: e.levi.clone() },
    })
}

impl RepDocument {
    pub fn new(d: u64, rep: Product) -> Self {
        RepDocument { d, rep }
    }

    fn from_repr(doc: DocRepr) -> Result<Self> {
        let mut table = AtomTable::new(doc.d);
        let mut factors = Vec::new();
        table.factors(&doc.rep, &mut factors)?;
        Ok(RepDocument { d: doc.d, rep: Product::new(factors) })
    }

    fn to_repr(&self) -> Result<DocRepr> {
        let factors = self.rep.factors().iter().map(factor_repr).collect::<Result<Vec<_>>>()?;
        Ok(DocRepr { d: self.d, rep: ExprRepr::Product { factors } })
    }

    /// Parse, keeping domain errors (bad orbits, invalid shapes) apart from malformed JSON.
    pub fn from_value(v: serde_json::Value) -> std::result::Result<Self, DocError> {
        let repr: DocRepr = serde_json::from_value(v).map_err(|e| DocError::Malformed(e.to_string()))?;
        Self::from_repr(repr).map_err(DocError::Domain)
    }
}

impl FromJson for RepDocument {
    fn from_json(v: serde_json::Value) -> std::result::Result<Self, DocError> {
        Self::from_value(v)
    }
}

impl Serialize for RepDocument {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr().map_err(serde::ser::Error::custom)?.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RepDocument {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        RepDocument::from_repr(DocRepr::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
