use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::coordinate::RootOfUnity;

type Poly = Arc<Vec<BigInt>>;

fn phi_cache() -> &'static RwLock<HashMap<u64, Poly>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Poly>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Exact quotient of integer polynomials (coefficients low to high), divisor monic.
fn exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    let mut quo = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..quo.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quo[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "division was not exact");
    quo
}

/// The `n`-th cyclotomic polynomial, coefficients low to high. Memoised.
pub fn cyclotomic_poly(n: u64) -> Poly {
    assert!(n >= 1);
    if let Some(p) = phi_cache().read().expect("cyclotomic cache poisoned").get(&n) {
        return p.clone();
    }
    // X^n - 1 divided by Φ_k for every proper divisor k of n.
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = BigInt::from(-1);
    p[n as usize] = BigInt::one();
    for k in 1..n {
        if n.is_multiple_of(k) {
            p = exact_div(&p, &cyclotomic_poly(k));
        }
    }
    let p = Arc::new(p);
    phi_cache()
        .write()
        .expect("cyclotomic cache poisoned")
        .entry(n)
        .or_insert(p)
        .clone()
}

/// Degree of Φ_n, i.e. Euler's totient.
pub fn totient(n: u64) -> usize {
    cyclotomic_poly(n).len() - 1
}

/// Prime-power parts `p^k ‖ N` with the cofactor `N/p^k` and its inverse mod `p^k`.
#[derive(Debug)]
struct Part {
    p: u64,
    pk: u64,
    cof: u64,
    inv: u64,
}

fn parts(n: u64) -> Arc<Vec<Part>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Vec<Part>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(v) = cache.read().expect("parts cache poisoned").get(&n) {
        return v.clone();
    }
    let mut out = Vec::new();
    let (mut m, mut p) = (n, 2);
    while m > 1 {
        if p * p > m {
            p = m;
        }
        if m % p == 0 {
            let mut pk = 1;
            while m % p == 0 {
                m /= p;
                pk *= p;
            }
            let cof = n / pk;
            let inv = (1..=pk).find(|x| (cof % pk) * x % pk == 1 % pk).expect("cofactor is a unit mod p^k");
            out.push(Part { p, pk, cof, inv });
        }
        p += 1;
    }
    let v = Arc::new(out);
    cache.write().expect("parts cache poisoned").entry(n).or_insert(v).clone()
}

/// Rewrite `ζ_N^e` in the tensor basis: signed basis exponents.
///
/// A component `ζ_{p^k}^a` with `a ≥ φ(p^k)` is reduced with
/// `x^{(p-1)p^{k-1}} = -Σ_{i<p-1} x^{i·p^{k-1}}`, which lands below `φ(p^k)` in one step.
fn to_basis(n: u64, e: u64, parts: &[Part]) -> Vec<(u64, bool)> {
    let mut out = vec![(0u64, false)];
    for part in parts {
        let a = (e % part.pk) * part.inv % part.pk;
        let step = part.pk / part.p;
        let phi = part.pk - step;
        let choices: Vec<(u64, bool)> = if a < phi {
            vec![(a, false)]
        } else {
            (0..part.p - 1).map(|i| (a - phi + i * step, true)).collect()
        };
        out = out
            .iter()
            .flat_map(|&(acc, neg)| choices.iter().map(move |&(b, nb)| ((acc + b * part.cof) % n, neg ^ nb)))
            .collect();
    }
    out
}

/// An element of ℚ(ζ_N).
///
/// Stored sparsely in the tensor product of the power bases of ℚ(ζ_{p^k}) over
/// `p^k ‖ N`; a basis element is keyed by its exponent as a power of ζ_N. In this basis
/// raising the conductor only relabels keys.
#[derive(Clone, Debug)]
pub struct Cyclo {
    conductor: u64,
    terms: BTreeMap<u64, BigRational>,
}

impl Cyclo {
    pub fn zero() -> Self {
        Cyclo { conductor: 1, terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(0, c);
        }
        Cyclo { conductor: 1, terms }
    }

    pub fn from_root(z: RootOfUnity) -> Self {
        Self::monomial(z, BigRational::one())
    }

    /// `c · z`.
    pub fn monomial(z: RootOfUnity, c: BigRational) -> Self {
        let n = z.order();
        let mut out = Cyclo { conductor: n, terms: BTreeMap::new() };
        out.add_power(z.num(), &c, &parts(n));
        out
    }

    fn add_power(&mut self, e: u64, c: &BigRational, parts: &[Part]) {
        if c.is_zero() {
            return;
        }
        for (k, neg) in to_basis(self.conductor, e, parts) {
            let v = if neg { -c } else { c.clone() };
            add_entry(&mut self.terms, k, v);
        }
    }

    /// `Σ raw[i] ζ_n^i` for a vector of any length.
    pub fn reduce_from(n: u64, raw: Vec<BigRational>) -> Self {
        let ps = parts(n);
        let mut out = Cyclo { conductor: n, terms: BTreeMap::new() };
        for (i, c) in raw.iter().enumerate() {
            out.add_power(i as u64 % n, c, &ps);
        }
        out
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Coefficients in the power basis `1, ζ_N, …, ζ_N^{φ(N)-1}`.
    pub fn coeffs(&self) -> Vec<BigRational> {
        let n = self.conductor as usize;
        let mut dense = vec![BigRational::zero(); n];
        for (e, c) in &self.terms {
            dense[*e as usize] += c;
        }
        let phi = cyclotomic_poly(self.conductor);
        let deg = phi.len() - 1;
        for i in (deg..n).rev() {
            let c = std::mem::replace(&mut dense[i], BigRational::zero());
            if c.is_zero() {
                continue;
            }
            for (j, pj) in phi.iter().enumerate().take(deg) {
                if !pj.is_zero() {
                    dense[i - deg + j] -= &c * BigRational::from_integer(pj.clone());
                }
            }
        }
        dense.truncate(deg);
        dense
    }

    /// Re-express in conductor `l`, a multiple of the current conductor.
    pub fn lift(&self, l: u64) -> Self {
        assert!(l.is_multiple_of(self.conductor), "lift target must be a multiple of the conductor");
        let step = l / self.conductor;
        Cyclo { conductor: l, terms: self.terms.iter().map(|(e, c)| (e * step, c.clone())).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let l = self.conductor.lcm(&other.conductor);
        let mut out = self.lift(l);
        let step = l / other.conductor;
        for (e, c) in &other.terms {
            add_entry(&mut out.terms, e * step, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Cyclo { conductor: self.conductor, terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Cyclo { conductor: self.conductor, terms: BTreeMap::new() };
        }
        Cyclo { conductor: self.conductor, terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let l = self.conductor.lcm(&other.conductor);
        let (sa, sb) = (l / self.conductor, l / other.conductor);
        let ps = parts(l);
        let mut out = Cyclo { conductor: l, terms: BTreeMap::new() };
        for (e1, x) in &self.terms {
            for (e2, y) in &other.terms {
                out.add_power((e1 * sa + e2 * sb) % l, &(x * y), &ps);
            }
        }
        out
    }

    /// Multiply by a root of unity.
    pub fn mul_root(&self, z: RootOfUnity) -> Self {
        if z.is_one() {
            return self.clone();
        }
        let l = self.conductor.lcm(&z.order());
        let step = l / self.conductor;
        let shift = z.num() * (l / z.order());
        let ps = parts(l);
        let mut out = Cyclo { conductor: l, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            out.add_power((e * step + shift) % l, c, &ps);
        }
        out
    }

    /// The rational value, if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.iter().next() {
            None => Some(BigRational::zero()),
            Some((0, c)) if self.terms.len() == 1 => Some(c.clone()),
            _ => None,
        }
    }
}

fn add_entry(terms: &mut BTreeMap<u64, BigRational>, k: u64, v: BigRational) {
    use std::collections::btree_map::Entry;
    match terms.entry(k) {
        Entry::Vacant(slot) => {
            if !v.is_zero() {
                slot.insert(v);
            }
        }
        Entry::Occupied(mut slot) => {
            *slot.get_mut() += v;
            if slot.get().is_zero() {
                slot.remove();
            }
        }
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        let l = self.conductor.lcm(&other.conductor);
        self.lift(l).terms == other.lift(l).terms
    }
}

impl Eq for Cyclo {}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        write!(f, "(")?;
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match e {
                0 => write!(f, "{c}")?,
                _ => write!(f, "{c}·ζ{}^{e}", self.conductor)?,
            }
        }
        write!(f, ")")
    }
}
