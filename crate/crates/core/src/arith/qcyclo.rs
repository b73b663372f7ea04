use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::coordinate::{Coordinate, RootOfUnity};
use super::cyclo::Cyclo;

/// Finite sums `Σ c_e q^e` with `c_e` cyclotomic and `e` rational: the group ring
/// of the value group, with cyclotomic relations imposed.
#[derive(Clone, Debug, Default)]
pub struct QCyclo {
    terms: BTreeMap<BigRational, Cyclo>,
}

impl QCyclo {
    pub fn zero() -> Self {
        QCyclo { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_coordinate(&Coordinate::one())
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_term(BigRational::zero(), Cyclo::from_rational(c))
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn from_root(z: RootOfUnity) -> Self {
        Self::from_coordinate(&Coordinate::root_of_unity(z))
    }

    pub fn from_term(qexp: BigRational, c: Cyclo) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(qexp, c);
        }
        QCyclo { terms }
    }

    /// The embedding of the value group.
    pub fn from_coordinate(x: &Coordinate) -> Self {
        Self::from_term(x.qexp().clone(), Cyclo::from_root(x.zeta()))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigRational, &Cyclo)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(Cyclo::is_zero)
    }

    fn insert_add(terms: &mut BTreeMap<BigRational, Cyclo>, e: BigRational, c: Cyclo) {
        use std::collections::btree_map::Entry;
        match terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            Self::insert_add(&mut terms, e.clone(), c.clone());
        }
        QCyclo { terms }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (e, c) in &other.terms {
            Self::insert_add(&mut self.terms, e.clone(), c.clone());
        }
    }

    pub fn neg(&self) -> Self {
        QCyclo { terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QCyclo { terms: self.terms.iter().map(|(e, x)| (e.clone(), x.scale(c))).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                Self::insert_add(&mut terms, e1 + e2, c1.mul(c2));
            }
        }
        QCyclo { terms }
    }

    /// Multiply by a single coordinate (a unit of the ring).
    pub fn mul_coordinate(&self, x: &Coordinate) -> Self {
        QCyclo {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e + x.qexp(), c.mul_root(x.zeta())))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

impl PartialEq for QCyclo {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl Eq for QCyclo {}

/// Exact zero test.
pub fn qcyclo_is_zero(x: &QCyclo) -> bool {
    x.is_zero()
}

impl fmt::Display for QCyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| if e.is_zero() { format!("{c}") } else { format!("{c}·q^({e})") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    qexp: [i64; 2],
    conductor: u64,
    coeffs: Vec<String>,
}

impl Serialize for QCyclo {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let p = e.numer().to_i64().ok_or_else(|| serde::ser::Error::custom("qexp overflow"))?;
            let q = e.denom().to_i64().ok_or_else(|| serde::ser::Error::custom("qexp overflow"))?;
            out.push(TermRepr {
                qexp: [p, q],
                conductor: c.conductor(),
                coeffs: c.coeffs().iter().map(|x| x.to_string()).collect(),
            });
        }
        out.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QCyclo {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = Vec::<TermRepr>::deserialize(d)?;
        let mut acc = QCyclo::zero();
        for t in raw {
            if t.qexp[1] <= 0 || t.conductor == 0 {
                return Err(D::Error::custom("non-positive denominator or conductor"));
            }
            let mut v = Vec::with_capacity(t.coeffs.len());
            for s in &t.coeffs {
                let r: BigRational = s.parse().map_err(|_| D::Error::custom(format!("bad rational {s:?}")))?;
                v.push(r);
            }
            let e = BigRational::new(BigInt::from(t.qexp[0]), BigInt::from(t.qexp[1]));
            acc.add_assign(&QCyclo::from_term(e, Cyclo::reduce_from(t.conductor, v)));
        }
        Ok(acc)
    }
}

impl From<&Coordinate> for QCyclo {
    fn from(x: &Coordinate) -> Self {
        QCyclo::from_coordinate(x)
    }
}

impl One for QCyclo {
    fn one() -> Self {
        QCyclo::one()
    }
}

impl std::ops::Mul for QCyclo {
    type Output = QCyclo;
    fn mul(self, rhs: QCyclo) -> QCyclo {
        QCyclo::mul(&self, &rhs)
    }
}
