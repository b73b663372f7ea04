//! Deterministic fixtures shared by the benchmarks.

use kappalift::hecke::Tensor;
use kappalift::verify::{random_poly, random_rep_e};
use kappalift::{CyclicAlgebra, SatakeParam, SphericalRepE, SymLaurent};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xbe4c_0000 ^ tag)
}

pub fn algebra(d: u64, r: u64) -> CyclicAlgebra {
    CyclicAlgebra::new(d, r).expect("r divides d")
}

/// A representation over the algebra `(d, r)` with blocks of rank `m`.
pub fn rep(d: u64, r: u64, m: usize) -> SphericalRepE {
    random_rep_e(&mut rng(d * 100 + r * 10 + m as u64), algebra(d, r), m)
}

/// A symmetric Laurent polynomial in `n` variables of degree at most `deg`.
pub fn poly(n: usize, deg: u32) -> SymLaurent {
    random_poly(&mut rng(1000 + n as u64 * 10 + deg as u64), n, deg)
}

/// A pure tensor of `r` polynomials in `n` variables.
pub fn tensor(r: usize, n: usize, deg: u32) -> Tensor {
    let factors: Vec<SymLaurent> = (0..r).map(|i| random_poly(&mut rng(2000 + i as u64), n, deg)).collect();
    Tensor::from_factors(&factors).expect("same arity")
}

pub fn flat(y: &SphericalRepE) -> SatakeParam {
    SatakeParam::new(y.flatten())
}
