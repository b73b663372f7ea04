use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A root of unity `exp(2πi·num/den)`, kept as a reduced fraction in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    num: u64,
    den: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { num: 0, den: 1 };

    /// Builds `num/den mod 1`. Panics on `den == 0`.
    pub fn new(num: i64, den: u64) -> Self {
        assert!(den > 0, "root of unity with zero denominator");
        let den_i = den as i128;
        let a = (num as i128).rem_euclid(den_i) as u64;
        let g = a.gcd(&den);
        if a == 0 {
            return Self::ONE;
        }
        RootOfUnity { num: a / g, den: den / g }
    }

    /// Primitive `n`-th root `exp(2πi/n)`.
    pub fn primitive(n: u64) -> Self {
        Self::new(1, n)
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    /// The conductor, i.e. the exact multiplicative order.
    pub fn order(&self) -> u64 {
        self.den
    }


    pub fn pow(self, k: i64) -> Self {
        let a = (self.num as i128 * k as i128).rem_euclid(self.den as i128);
        Self::new(a as i64, self.den)
    }

    pub fn inv(self) -> Self {
        self.pow(-1)
    }

    /// Canonical `k`-th root: `(num/den)/k`.
    pub fn root(self, k: u64) -> Self {
        Self::new(self.num as i64, self.den * k)
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }
}

impl Ord for RootOfUnity {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.den, self.num).cmp(&(other.den, other.num))
    }
}

impl PartialOrd for RootOfUnity {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One Satake eigenvalue: a root of unity times a rational power of the formal
/// residue cardinality `q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coordinate {
    zeta: RootOfUnity,
    qexp: BigRational,
}

impl Coordinate {
    pub fn new(zeta: RootOfUnity, qexp: BigRational) -> Self {
        Coordinate { zeta, qexp }
    }

    /// `exp(2πi a/n) · q^(p/r)`.
    pub fn from_parts(a: i64, n: u64, p: i64, r: i64) -> Self {
        Coordinate {
            zeta: RootOfUnity::new(a, n),
            qexp: BigRational::new(BigInt::from(p), BigInt::from(r)),
        }
    }

    pub fn one() -> Self {
        Coordinate { zeta: RootOfUnity::ONE, qexp: BigRational::zero() }
    }

    pub fn root_of_unity(zeta: RootOfUnity) -> Self {
        Coordinate { zeta, qexp: BigRational::zero() }
    }

    /// `q^e` for a rational exponent.
    pub fn q_power(e: BigRational) -> Self {
        Coordinate { zeta: RootOfUnity::ONE, qexp: e }
    }

    pub fn zeta(&self) -> RootOfUnity {
        self.zeta
    }

    pub fn qexp(&self) -> &BigRational {
        &self.qexp
    }

    pub fn is_one(&self) -> bool {
        self.zeta.is_one() && self.qexp.is_zero()
    }

    pub fn inv(&self) -> Self {
        Coordinate { zeta: self.zeta.inv(), qexp: -self.qexp.clone() }
    }

    pub fn pow(&self, k: i64) -> Self {
        Coordinate { zeta: self.zeta.pow(k), qexp: &self.qexp * BigInt::from(k) }
    }

    /// The canonical `k`-th root. All `k`-th roots are this value times the
    /// `k`-th roots of unity.
    pub fn root(&self, k: u64) -> Self {
        assert!(k >= 1, "root index must be positive");
        Coordinate { zeta: self.zeta.root(k), qexp: &self.qexp / BigInt::from(k) }
    }

    /// All `k` distinct `k`-th roots, canonical root first.
    pub fn all_roots(&self, k: u64) -> Vec<Coordinate> {
        let base = self.root(k);
        let w = RootOfUnity::primitive(k);
        (0..k as i64).map(|j| base.twist(w.pow(j))).collect()
    }

    /// Multiply by a root of unity.
    pub fn twist(&self, w: RootOfUnity) -> Self {
        Coordinate { zeta: self.zeta.mul(w), qexp: self.qexp.clone() }
    }

    /// Multiply by `q^e`.
    pub fn shift_q(&self, e: &BigRational) -> Self {
        Coordinate { zeta: self.zeta, qexp: &self.qexp + e }
    }
}

impl Mul for RootOfUnity {
    type Output = RootOfUnity;
    fn mul(self, other: Self) -> Self {
        let l = self.den.lcm(&other.den);
        let a = (self.num as u128) * (l / self.den) as u128 + (other.num as u128) * (l / other.den) as u128;
        Self::new((a % l as u128) as i64, l)
    }
}

impl Mul for &Coordinate {
    type Output = Coordinate;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Coordinate) -> Coordinate {
        Coordinate { zeta: self.zeta.mul(rhs.zeta), qexp: &self.qexp + &rhs.qexp }
    }
}

impl Mul for Coordinate {
    type Output = Coordinate;
    fn mul(self, rhs: Coordinate) -> Coordinate {
        &self * &rhs
    }
}

/// Multiply two coordinates (componentwise group law).
pub fn coord_mul(a: &Coordinate, b: &Coordinate) -> Coordinate {
    a * b
}

/// Canonical `k`-th root of a coordinate.
pub fn coord_root(a: &Coordinate, k: u64) -> Coordinate {
    a.root(k)
}

impl Ord for Coordinate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.qexp.cmp(&other.qexp).then_with(|| self.zeta.cmp(&other.zeta))
    }
}

impl PartialOrd for Coordinate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.zeta;
        let zs = if z.is_one() {
            String::new()
        } else if z.den == 2 {
            "-".to_string()
        } else {
            format!("ζ[{}/{}]", z.num, z.den)
        };
        if self.qexp.is_zero() {
            if zs.is_empty() {
                write!(f, "1")
            } else if zs == "-" {
                write!(f, "-1")
            } else {
                write!(f, "{zs}")
            }
        } else if self.qexp.is_one() {
            write!(f, "{zs}q")
        } else {
            write!(f, "{zs}q^({})", self.qexp)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CoordinateRepr {
    zeta: [i64; 2],
    qexp: [i64; 2],
}

fn small(x: &BigInt) -> Result<i64, String> {
    x.to_i64().ok_or_else(|| format!("integer {x} does not fit in 64 bits"))
}

impl Serialize for Coordinate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let p = small(self.qexp.numer()).map_err(serde::ser::Error::custom)?;
        let q = small(self.qexp.denom()).map_err(serde::ser::Error::custom)?;
        CoordinateRepr { zeta: [self.zeta.num as i64, self.zeta.den as i64], qexp: [p, q] }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Coordinate {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = CoordinateRepr::deserialize(d)?;
        if r.zeta[1] <= 0 || r.qexp[1] <= 0 {
            return Err(serde::de::Error::custom("denominators must be positive"));
        }
        let zeta = RootOfUnity::new(r.zeta[0], r.zeta[1] as u64);
        if (zeta.num as i64, zeta.den as i64) != (r.zeta[0], r.zeta[1]) {
            return Err(serde::de::Error::custom(format!(
                "zeta fraction {}/{} is not reduced to [0,1)",
                r.zeta[0], r.zeta[1]
            )));
        }
        let qexp = BigRational::new(BigInt::from(r.qexp[0]), BigInt::from(r.qexp[1]));
        if qexp.numer() != &BigInt::from(r.qexp[0]) || qexp.denom() != &BigInt::from(r.qexp[1]) {
            return Err(serde::de::Error::custom(format!(
                "qexp fraction {}/{} is not reduced",
                r.qexp[0], r.qexp[1]
            )));
        }
        Ok(Coordinate { zeta, qexp })
    }
}

/// Rational helper used throughout the crate.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}
