//! Spherical Hecke algebras through their Satake transforms: symmetric Laurent
//! polynomials, evaluation, and the induction and base-change transfer maps.

pub mod partition;
mod powersum;
mod symlaurent;
mod tensor;
mod transfer;

pub use partition::Partition;
pub use powersum::{from_power_sums, m_in_p, p_to_m_coeff, to_power_sums, PowerSumExpr, DEFAULT_DEGREE_BUDGET};
pub use symlaurent::{eval_monomial, monomial_product, satake_eval, SymLaurent};
pub use tensor::{constant_term, Tensor};
pub use transfer::{ai_transfer, ai_transfer_tensor, bc_transfer, bc_transfer_factors};
