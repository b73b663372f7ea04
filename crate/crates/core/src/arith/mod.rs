//! Exact arithmetic in the value group `μ∞ × q^ℚ` and its cyclotomic group ring.

mod coordinate;
mod cyclo;
mod qcyclo;

pub use coordinate::{coord_mul, coord_root, rat, Coordinate, RootOfUnity};
pub use cyclo::{cyclotomic_poly, totient, Cyclo};
pub use qcyclo::{qcyclo_is_zero, QCyclo};

#[cfg(test)]
mod props;
