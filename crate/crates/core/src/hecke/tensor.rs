use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::partition::{normalize, padded, Partition};
use super::symlaurent::{eval_monomial, SymLaurent, TermRepr};
use crate::arith::{Coordinate, QCyclo};
use crate::error::{Error, Result};
use crate::json::{parse_with, DocError, FromJson};
use crate::satake::SphericalRepE;

/// An element of `⊗_{i=1}^r Λ_m[e_m^{-1}]`: `(e_m^{-M})^{⊗r} · Σ c · m_{λ_1} ⊗ ⋯ ⊗ m_{λ_r}`.
///
/// The shift is shared by all factors, which is all that restriction from `mr` variables
/// produces.
#[derive(Clone, Debug)]
pub struct Tensor {
    m: usize,
    r: usize,
    shift: u32,
    terms: BTreeMap<Vec<Partition>, QCyclo>,
}

impl Tensor {
    pub fn from_terms(
        m: usize,
        r: usize,
        shift: u32,
        terms: impl IntoIterator<Item = (Vec<Vec<u32>>, QCyclo)>,
    ) -> Result<Self> {
        let mut out: BTreeMap<Vec<Partition>, QCyclo> = BTreeMap::new();
        for (blocks, c) in terms {
            if blocks.len() != r {
                return Err(Error::RankMismatch(format!("expected {r} tensor factors, got {}", blocks.len())));
            }
            let key: Vec<Partition> = blocks.into_iter().map(normalize).collect();
            if let Some(b) = key.iter().find(|b| b.len() > m) {
                return Err(Error::RankMismatch(format!("{b:?} has more than {m} nonzero entries")));
            }
            add_term(&mut out, key, c);
        }
        Ok(Tensor { m, r, shift, terms: out }.normalized())
    }

    /// The pure tensor `f_1 ⊗ ⋯ ⊗ f_r`.
    pub fn from_factors(factors: &[SymLaurent]) -> Result<Self> {
        let Some(first) = factors.first() else {
            return Err(Error::RankMismatch("no tensor factors".into()));
        };
        let m = first.nvars();
        if let Some(f) = factors.iter().find(|f| f.nvars() != m) {
            return Err(Error::RankMismatch(format!("factors in {m} and {} variables", f.nvars())));
        }
        let shift = factors.iter().map(SymLaurent::shift).max().unwrap_or(0);
        let mut terms: Vec<(Vec<Partition>, QCyclo)> = vec![(Vec::new(), QCyclo::one())];
        for f in factors {
            // Bring every factor to the common shift: m_λ e_m^k = m_{λ+k}.
            let k = shift - f.shift();
            let body: Vec<(Partition, QCyclo)> = f
                .body()
                .iter()
                .map(|(l, c)| {
                    let l = if k == 0 { l.clone() } else { padded(l, m).into_iter().map(|x| x + k).collect() };
                    (l, c.clone())
                })
                .collect();
            terms = terms
                .into_iter()
                .flat_map(|(key, c)| {
                    body.iter().map(move |(l, x)| {
                        let mut key = key.clone();
                        key.push(l.clone());
                        (key, c.mul(x))
                    })
                })
                .collect();
        }
        Self::from_terms(m, factors.len(), shift, terms)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Partition>, QCyclo> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn normalized(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        if self.terms.is_empty() {
            self.shift = 0;
            return self;
        }
        while self.shift > 0 && self.m > 0 && self.terms.keys().all(|ls| ls.iter().all(|l| l.len() == self.m)) {
            self.terms = std::mem::take(&mut self.terms)
                .into_iter()
                .map(|(ls, c)| (ls.into_iter().map(|l| normalize(l.into_iter().map(|x| x - 1).collect())).collect(), c))
                .collect();
            self.shift -= 1;
        }
        self
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.m, self.r) != (other.m, other.r) {
            return Err(Error::RankMismatch("tensors of different shape".into()));
        }
        let shift = self.shift.max(other.shift);
        let mut terms = self.terms_times_det(shift - self.shift);
        for (k, c) in other.terms_times_det(shift - other.shift) {
            add_term(&mut terms, k, c);
        }
        Ok(Tensor { m: self.m, r: self.r, shift, terms }.normalized())
    }

    fn terms_times_det(&self, k: u32) -> BTreeMap<Vec<Partition>, QCyclo> {
        if k == 0 {
            return self.terms.clone();
        }
        self.terms
            .iter()
            .map(|(ls, c)| {
                (ls.iter().map(|l| padded(l, self.m).into_iter().map(|x| x + k).collect()).collect(), c.clone())
            })
            .collect()
    }

    /// Evaluate block `i` at `y(i)`.
    pub fn eval(&self, y: &SphericalRepE) -> Result<QCyclo> {
        if y.blocks().len() != self.r || y.m() != self.m {
            return Err(Error::RankMismatch(format!(
                "tensor of {} factors in {} variables evaluated at {} blocks of rank {}",
                self.r,
                self.m,
                y.blocks().len(),
                y.m()
            )));
        }
        let mut total = QCyclo::zero();
        for (ls, c) in &self.terms {
            let mut v = c.clone();
            for (l, b) in ls.iter().zip(y.blocks()) {
                v = v.mul(&eval_monomial(l, b.coords()));
            }
            total.add_assign(&v);
        }
        if self.shift > 0 {
            let det = y.blocks().iter().fold(Coordinate::one(), |a, b| &a * &b.product());
            total = total.mul_coordinate(&det.pow(-(self.shift as i64)));
        }
        Ok(total)
    }
}

fn add_term(terms: &mut BTreeMap<Vec<Partition>, QCyclo>, key: Vec<Partition>, c: QCyclo) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(key) {
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

/// Every sub-multiset of size `k` of a multiset given as value counts.
fn sub_multisets(pool: &[(u32, usize)], k: usize) -> Vec<Vec<u32>> {
    let Some((&(v, avail), rest)) = pool.split_first() else {
        return if k == 0 { vec![Vec::new()] } else { Vec::new() };
    };
    let mut out = Vec::new();
    for take in 0..=avail.min(k) {
        for mut tail in sub_multisets(rest, k - take) {
            tail.splice(0..0, std::iter::repeat_n(v, take));
            out.push(tail);
        }
    }
    out
}

/// Ordered tuples of `r` sub-multisets of size `m` exhausting the pool.
fn splits(pool: &mut BTreeMap<u32, usize>, r: usize, m: usize) -> Vec<Vec<Partition>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    let counts: Vec<(u32, usize)> = pool.iter().map(|(&v, &c)| (v, c)).collect();
    let mut out = Vec::new();
    for block in sub_multisets(&counts, m) {
        for v in &block {
            *pool.get_mut(v).expect("drawn from pool") -= 1;
        }
        for mut rest in splits(pool, r - 1, m) {
            rest.insert(0, normalize(block.clone()));
            out.push(rest);
        }
        for v in &block {
            *pool.get_mut(v).expect("drawn from pool") += 1;
        }
    }
    out
}

/// Restrict a symmetric function in `m·r` variables to `r` blocks of `m` variables.
pub fn constant_term(f: &SymLaurent, r: usize) -> Result<Tensor> {
    let n = f.nvars();
    if r == 0 || !n.is_multiple_of(r) {
        return Err(Error::RankMismatch(format!("{n} variables do not split into {r} equal blocks")));
    }
    let m = n / r;
    let mut terms: Vec<(Vec<Partition>, QCyclo)> = Vec::new();
    for (lambda, c) in f.body() {
        let mut pool: BTreeMap<u32, usize> = BTreeMap::new();
        for x in padded(lambda, n) {
            *pool.entry(x).or_default() += 1;
        }
        terms.extend(splits(&mut pool, r, m).into_iter().map(|k| (k, c.clone())));
    }
    Tensor::from_terms(m, r, f.shift(), terms)
}

impl PartialEq for Tensor {
    fn eq(&self, other: &Self) -> bool {
        self.add(&other.neg()).map(|d| d.is_zero()).unwrap_or(false)
    }
}

impl Eq for Tensor {}

impl Tensor {
    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect();
        Tensor { m: self.m, r: self.r, shift: self.shift, terms }
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(ls, c)| {
                let t: Vec<String> = ls.iter().map(|l| format!("m{l:?}")).collect();
                format!("({c})·{}", t.join("⊗"))
            })
            .collect();
        if self.shift > 0 {
            write!(f, "det^-{}·[{}]", self.shift, parts.join(" + "))
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorRepr {
    m: usize,
    r: usize,
    shift: u32,
    terms: Vec<TermRepr<Vec<Vec<u32>>>>,
}

impl Serialize for Tensor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TensorRepr {
            m: self.m,
            r: self.r,
            shift: self.shift,
            terms: self.terms.iter().map(|(k, c)| TermRepr { exps: k.clone(), coef: c.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl TensorRepr {
    fn build(self) -> Result<Tensor> {
        Tensor::from_terms(self.m, self.r, self.shift, self.terms.into_iter().map(|x| (x.exps, x.coef)))
    }
}

impl<'de> Deserialize<'de> for Tensor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        TensorRepr::deserialize(d)?.build().map_err(serde::de::Error::custom)
    }
}

impl FromJson for Tensor {
    fn from_json(v: serde_json::Value) -> std::result::Result<Self, DocError> {
        parse_with(v, TensorRepr::build)
    }
}
