use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::partition::{for_each_distinct_perm, normalize, padded, stab_size, Partition};
use crate::arith::{Coordinate, QCyclo};
use crate::error::{Error, Result};
use crate::json::{parse_with, DocError, FromJson};
use crate::satake::SatakeParam;

/// A symmetric Laurent polynomial `e_n^{-M} · Σ_λ c_λ m_λ` in `n` variables.
///
/// The body is stored in the monomial symmetric basis, keyed by dominant exponents.
#[derive(Clone, Debug)]
pub struct SymLaurent {
    nvars: usize,
    shift: u32,
    body: BTreeMap<Partition, QCyclo>,
}

impl SymLaurent {
    pub fn zero(nvars: usize) -> Self {
        SymLaurent { nvars, shift: 0, body: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, QCyclo::one())
    }

    pub fn constant(nvars: usize, c: QCyclo) -> Self {
        Self::from_terms(nvars, 0, [(Vec::new(), c)]).expect("empty partition fits")
    }

    /// Builds `e_n^{-shift} Σ c_λ m_λ`. Exponent vectors may be given in any order.
    pub fn from_terms(nvars: usize, shift: u32, terms: impl IntoIterator<Item = (Vec<u32>, QCyclo)>) -> Result<Self> {
        let mut body: BTreeMap<Partition, QCyclo> = BTreeMap::new();
        for (exps, c) in terms {
            let lambda = normalize(exps);
            if lambda.len() > nvars {
                return Err(Error::RankMismatch(format!(
                    "exponent vector {lambda:?} has more than {nvars} nonzero entries"
                )));
            }
            add_into(&mut body, lambda, c);
        }
        Ok(SymLaurent { nvars, shift, body }.normalized())
    }

    /// The monomial symmetric function `m_λ`.
    pub fn monomial(nvars: usize, lambda: &[u32]) -> Result<Self> {
        Self::from_terms(nvars, 0, [(lambda.to_vec(), QCyclo::one())])
    }

    /// Elementary symmetric polynomial `e_k`.
    pub fn elementary(nvars: usize, k: usize) -> Result<Self> {
        Self::monomial(nvars, &vec![1; k])
    }

    /// Power sum `p_k = m_(k)`.
    pub fn power_sum(nvars: usize, k: u32) -> Self {
        Self::monomial(nvars, &[k]).expect("single part fits")
    }

    /// `e_n^{-1}`.
    pub fn inverse_det(nvars: usize) -> Self {
        SymLaurent { nvars, shift: 1, body: BTreeMap::from([(Vec::new(), QCyclo::one())]) }.normalized()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    pub fn body(&self) -> &BTreeMap<Partition, QCyclo> {
        &self.body
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_empty()
    }

    /// Largest `|λ|` appearing in the body.
    pub fn degree(&self) -> u32 {
        self.body.keys().map(|l| l.iter().sum()).max().unwrap_or(0)
    }

    /// Minimal shift: strip factors of `e_n` from the body while a shift remains.
    fn normalized(mut self) -> Self {
        self.body.retain(|_, c| !c.is_zero());
        if self.body.is_empty() {
            self.shift = 0;
            return self;
        }
        while self.shift > 0 && self.nvars > 0 && self.body.keys().all(|l| l.len() == self.nvars) {
            self.body = std::mem::take(&mut self.body)
                .into_iter()
                .map(|(l, c)| (normalize(l.into_iter().map(|x| x - 1).collect()), c))
                .collect();
            self.shift -= 1;
        }
        self
    }

    /// Body multiplied by `e_n^k`, i.e. `m_λ ↦ m_{λ+k}`.
    fn body_times_det(&self, k: u32) -> BTreeMap<Partition, QCyclo> {
        if k == 0 {
            return self.body.clone();
        }
        self.body
            .iter()
            .map(|(l, c)| (padded(l, self.nvars).into_iter().map(|x| x + k).collect(), c.clone()))
            .collect()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::RankMismatch(format!("{} vs {} variables", self.nvars, other.nvars)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let shift = self.shift.max(other.shift);
        let mut body = self.body_times_det(shift - self.shift);
        for (l, c) in other.body_times_det(shift - other.shift) {
            add_into(&mut body, l, c);
        }
        Ok(SymLaurent { nvars: self.nvars, shift, body }.normalized())
    }

    pub fn neg(&self) -> Self {
        self.scale(&QCyclo::from_int(-1))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &QCyclo) -> Self {
        let body = self.body.iter().map(|(l, x)| (l.clone(), x.mul(c))).collect();
        SymLaurent { nvars: self.nvars, shift: self.shift, body }.normalized()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut body = BTreeMap::new();
        for (l1, c1) in &self.body {
            for (l2, c2) in &other.body {
                let c = c1.mul(c2);
                for (nu, mult) in monomial_product(l1, l2, self.nvars) {
                    add_into(&mut body, nu, c.scale(&BigRational::from_integer(BigInt::from(mult))));
                }
            }
        }
        Ok(SymLaurent { nvars: self.nvars, shift: self.shift + other.shift, body }.normalized())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.nvars), |acc, _| acc.mul(self).expect("same ring"))
    }

    /// Substitute the coordinates of `y`.
    pub fn eval(&self, y: &SatakeParam) -> Result<QCyclo> {
        if y.rank() != self.nvars {
            return Err(Error::RankMismatch(format!(
                "polynomial in {} variables evaluated at a rank-{} parameter",
                self.nvars,
                y.rank()
            )));
        }
        let mut total = QCyclo::zero();
        for (l, c) in &self.body {
            total.add_assign(&c.mul(&eval_monomial(l, y.coords())));
        }
        if self.shift > 0 {
            total = total.mul_coordinate(&y.product().pow(-(self.shift as i64)));
        }
        Ok(total)
    }
}

pub(crate) fn add_into(body: &mut BTreeMap<Partition, QCyclo>, l: Partition, c: QCyclo) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match body.entry(l) {
        Entry::Vacant(v) => {
            v.insert(c);
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

/// `m_λ · m_μ` in `n` variables as `(ν, c_ν)` pairs.
pub fn monomial_product(lambda: &[u32], mu: &[u32], n: usize) -> BTreeMap<Partition, u128> {
    let base = padded(lambda, n);
    let stab_l = stab_size(lambda, n);
    let mut out: BTreeMap<Partition, u128> = BTreeMap::new();
    // Each β in the orbit of μ contributes |Stab(λ+β)| / |Stab(λ)|; summing numerators first
    // keeps everything integral.
    let mut acc: BTreeMap<Partition, u128> = BTreeMap::new();
    for_each_distinct_perm(&padded(mu, n), |beta| {
        let nu = normalize(base.iter().zip(beta).map(|(a, b)| a + b).collect());
        *acc.entry(nu).or_default() += 1;
    });
    for (nu, count) in acc {
        let num = count * stab_size(&nu, n);
        debug_assert!(num.is_multiple_of(stab_l));
        out.insert(nu, num / stab_l);
    }
    out
}

/// `m_λ(y)` as an exact sum of coordinates.
pub fn eval_monomial(lambda: &[u32], y: &[Coordinate]) -> QCyclo {
    let mut tally: BTreeMap<Coordinate, i64> = BTreeMap::new();
    for_each_distinct_perm(&padded(lambda, y.len()), |beta| {
        let mono = y
            .iter()
            .zip(beta)
            .filter(|(_, &b)| b > 0)
            .fold(Coordinate::one(), |acc, (c, &b)| &acc * &c.pow(b as i64));
        *tally.entry(mono).or_default() += 1;
    });
    let mut out = QCyclo::zero();
    for (c, k) in tally {
        out.add_assign(&QCyclo::from_coordinate(&c).scale(&BigRational::from_integer(BigInt::from(k))));
    }
    out
}

/// Evaluate `f` at `y`.
pub fn satake_eval(f: &SymLaurent, y: &SatakeParam) -> Result<QCyclo> {
    f.eval(y)
}

impl PartialEq for SymLaurent {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }
}

impl Eq for SymLaurent {}

impl fmt::Display for SymLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.body.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.body.iter().map(|(l, c)| format!("({c})·m{l:?}")).collect();
        if self.shift > 0 {
            write!(f, "e{}^-{}·[{}]", self.nvars, self.shift, parts.join(" + "))
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct TermRepr<E> {
    pub exps: E,
    pub coef: QCyclo,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymRepr {
    nvars: usize,
    shift: u32,
    terms: Vec<TermRepr<Vec<u32>>>,
}

impl Serialize for SymLaurent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SymRepr {
            nvars: self.nvars,
            shift: self.shift,
            terms: self.body.iter().map(|(l, c)| TermRepr { exps: l.clone(), coef: c.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl SymRepr {
    fn build(self) -> Result<SymLaurent> {
        SymLaurent::from_terms(self.nvars, self.shift, self.terms.into_iter().map(|t| (t.exps, t.coef)))
    }
}

impl<'de> Deserialize<'de> for SymLaurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SymRepr::deserialize(d)?.build().map_err(serde::de::Error::custom)
    }
}

impl FromJson for SymLaurent {
    fn from_json(v: serde_json::Value) -> std::result::Result<Self, DocError> {
        parse_with(v, SymRepr::build)
    }
}
