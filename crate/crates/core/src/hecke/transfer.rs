use num_bigint::BigInt;
use num_rational::BigRational;

use super::powersum::{from_power_sums, to_power_sums, PowerSumExpr};
use super::symlaurent::SymLaurent;
use super::tensor::{constant_term, Tensor};
use crate::arith::QCyclo;
use crate::error::{Error, Result};
use crate::satake::{central_twist, CyclicAlgebra};

/// The field-stage restriction `b_1`: `p_k ↦ s·p_{k/s}` when `s | k`, else `0`, from
/// `n = mrs` variables to `mr` variables.
///
/// On the determinant, `e_n(δ(y)) = ζ^{mr·s(s-1)/2} e_{mr}(y)`, which fixes the image of the
/// shift. Evaluating the result at `y` equals evaluating `f` at `δ(y)`.
pub fn ai_transfer(f: &SymLaurent, algebra: CyclicAlgebra, budget: u32) -> Result<SymLaurent> {
    let n = f.nvars();
    let d = algebra.d() as usize;
    let s = algebra.s();
    if !n.is_multiple_of(d) {
        return Err(Error::RankMismatch(format!("{n} variables is not a multiple of d={d}")));
    }
    let target = n / s as usize;
    let (expr, shift) = to_power_sums(f, budget)?;
    let mut image = PowerSumExpr::new();
    let s_rat = BigRational::from_integer(BigInt::from(s));
    for (mu, c) in expr.terms() {
        if mu.iter().all(|&k| (k as u64).is_multiple_of(s)) {
            let nu: Vec<u32> = mu.iter().map(|&k| k / s as u32).collect();
            let scale = num_traits::pow(s_rat.clone(), mu.len());
            image.add_term(nu, c.scale(&scale));
        }
    }
    let mut out = from_power_sums(&image, shift, target, budget)?;
    if shift > 0 {
        let m = n / d;
        let c = central_twist(algebra, m).pow(-(shift as i64));
        out = out.scale(&QCyclo::from_coordinate(&c));
    }
    Ok(out)
}

/// `ai_transfer` followed by restriction to the `r` factors of `E`.
pub fn ai_transfer_tensor(f: &SymLaurent, algebra: CyclicAlgebra, budget: u32) -> Result<Tensor> {
    constant_term(&ai_transfer(f, algebra, budget)?, algebra.r() as usize)
}

/// Base change on spherical Hecke algebras, from `E` to `F`.
///
/// The `r` factors are multiplied (convolution of the factor components; `σ` acts trivially
/// on spherical transforms), then `p_k ↦ p_{ks}`. Evaluating the result at `y` equals
/// evaluating `f` at `bc_map(y)`.
pub fn bc_transfer(f: &Tensor, algebra: CyclicAlgebra, budget: u32) -> Result<SymLaurent> {
    if f.r() as u64 != algebra.r() {
        return Err(Error::RankMismatch(format!("{} tensor factors for r={}", f.r(), algebra.r())));
    }
    let n = f.m();
    let s = algebra.s() as u32;
    let mut prod = SymLaurent::zero(n);
    for (ls, c) in f.terms() {
        let mut term = SymLaurent::constant(n, c.clone());
        for l in ls {
            term = term.mul(&SymLaurent::monomial(n, l)?)?;
        }
        prod = prod.add(&term)?;
    }
    // Every factor carries e_n^{-M}.
    let shift = f.shift() * f.r() as u32;
    let (expr, _) = to_power_sums(&prod, budget)?;
    let mut image = PowerSumExpr::new();
    for (mu, c) in expr.terms() {
        image.add_term(mu.iter().map(|&k| k * s).collect(), c.clone());
    }
    from_power_sums(&image, shift * s, n, budget)
}

/// `bc_transfer` of the pure tensor `f_1 ⊗ ⋯ ⊗ f_r`.
pub fn bc_transfer_factors(factors: &[SymLaurent], algebra: CyclicAlgebra, budget: u32) -> Result<SymLaurent> {
    bc_transfer(&Tensor::from_factors(factors)?, algebra, budget)
}
