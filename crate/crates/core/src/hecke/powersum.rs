use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::partition::{partitions_of, Partition};
use super::symlaurent::{add_into, SymLaurent};
use crate::arith::QCyclo;
use crate::error::{Error, Result};

/// Default cap on `|λ|` for conversions between the monomial and power-sum bases.
pub const DEFAULT_DEGREE_BUDGET: u32 = 12;

/// A linear combination `Σ c_μ p_μ` of power-sum products.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PowerSumExpr {
    terms: BTreeMap<Partition, QCyclo>,
}

impl PowerSumExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> &BTreeMap<Partition, QCyclo> {
        &self.terms
    }

    pub fn add_term(&mut self, mu: Partition, c: QCyclo) {
        add_into(&mut self.terms, mu, c);
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }
}

impl fmt::Display for PowerSumExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})·p{m:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

type Memo<K, V> = OnceLock<RwLock<HashMap<K, V>>>;

fn memo_get<K: std::hash::Hash + Eq + Clone, V: Clone>(
    memo: &'static Memo<K, V>,
    key: &K,
    compute: impl FnOnce() -> V,
) -> V {
    let table = memo.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(v) = table.read().expect("memo poisoned").get(key) {
        return v.clone();
    }
    let v = compute();
    table.write().expect("memo poisoned").entry(key.clone()).or_insert(v).clone()
}

/// Coefficient of `x^λ` in `p_μ`: the number of ways to send the parts of `μ` to
/// positions so that position `j` receives total `λ_j`.
pub fn p_to_m_coeff(mu: &[u32], lambda: &[u32]) -> u128 {
    static MEMO: Memo<(Partition, Partition), u128> = OnceLock::new();
    if mu.iter().sum::<u32>() != lambda.iter().sum::<u32>() || lambda.len() > mu.len() {
        return 0;
    }
    memo_get(&MEMO, &(mu.to_vec(), lambda.to_vec()), || {
        let mut inner: HashMap<(usize, Vec<u32>), u128> = HashMap::new();
        count_fillings(mu, 0, lambda.to_vec(), &mut inner)
    })
}

fn count_fillings(mu: &[u32], i: usize, mut rem: Vec<u32>, memo: &mut HashMap<(usize, Vec<u32>), u128>) -> u128 {
    if i == mu.len() {
        return u128::from(rem.iter().all(|&x| x == 0));
    }
    rem.sort_unstable();
    if let Some(&v) = memo.get(&(i, rem.clone())) {
        return v;
    }
    let part = mu[i];
    let mut total = 0;
    let mut j = 0;
    while j < rem.len() {
        let v = rem[j];
        let mut k = j;
        while k < rem.len() && rem[k] == v {
            k += 1;
        }
        if v >= part {
            let mut next = rem.clone();
            next[j] -= part;
            total += (k - j) as u128 * count_fillings(mu, i + 1, next, memo);
        }
        j = k;
    }
    memo.insert((i, rem), total);
    total
}

/// `m_λ` in the power-sum basis of the ring of symmetric functions.
///
/// `p_λ = L_{λλ} m_λ + Σ_{ℓ(ν)<ℓ(λ)} L_{λν} m_ν`, so the inverse is built by recursion on length.
pub fn m_in_p(lambda: &[u32]) -> Arc<BTreeMap<Partition, BigRational>> {
    static MEMO: Memo<Partition, Arc<BTreeMap<Partition, BigRational>>> = OnceLock::new();
    memo_get(&MEMO, &lambda.to_vec(), || {
        let k: u32 = lambda.iter().sum();
        let mut acc: BTreeMap<Partition, BigRational> = BTreeMap::new();
        acc.insert(lambda.to_vec(), BigRational::from_integer(1.into()));
        if !lambda.is_empty() {
            for nu in partitions_of(k, lambda.len() - 1) {
                let l = p_to_m_coeff(lambda, &nu);
                if l == 0 {
                    continue;
                }
                let lc = BigRational::from_integer(BigInt::from(l));
                for (mu, c) in m_in_p(&nu).iter() {
                    let e = acc.entry(mu.clone()).or_insert_with(BigRational::zero);
                    *e -= &lc * c;
                }
            }
        }
        let diag = BigRational::from_integer(BigInt::from(p_to_m_coeff(lambda, lambda)));
        Arc::new(
            acc.into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(mu, c)| (mu, c / &diag))
                .collect(),
        )
    })
}

/// Express the body of `f` in power sums; returns it with the shift `M`.
pub fn to_power_sums(f: &SymLaurent, budget: u32) -> Result<(PowerSumExpr, u32)> {
    if f.degree() > budget {
        return Err(Error::DegreeBudget(format!("degree {} exceeds budget {budget}", f.degree())));
    }
    let mut out = PowerSumExpr::new();
    for (lambda, c) in f.body() {
        for (mu, r) in m_in_p(lambda).iter() {
            out.add_term(mu.clone(), c.scale(r));
        }
    }
    Ok((out, f.shift()))
}

/// `e_n^{-shift} · Σ c_μ p_μ` in `n` variables, expanded in monomials.
pub fn from_power_sums(expr: &PowerSumExpr, shift: u32, n: usize, budget: u32) -> Result<SymLaurent> {
    if expr.degree() > budget {
        return Err(Error::DegreeBudget(format!("degree {} exceeds budget {budget}", expr.degree())));
    }
    let mut terms: BTreeMap<Partition, QCyclo> = BTreeMap::new();
    for (mu, c) in expr.terms() {
        let k = mu.iter().sum();
        for lambda in partitions_of(k, n.min(mu.len())) {
            let l = p_to_m_coeff(mu, &lambda);
            if l != 0 {
                add_into(&mut terms, lambda, c.scale(&BigRational::from_integer(BigInt::from(l))));
            }
        }
    }
    SymLaurent::from_terms(n, shift, terms)
}
