//! Large sieve inequality for integer polynomial amplitudes.
//!
//! Computes, exactly where possible, every quantity in the inequality
//!
//! ```text
//! Σ_{x∈F(Q)} |Σ_{i∈I} a_i e(x P(i))|²  ≪  Q(N+Q)(log Q)^{ω(c₀)+θ(k)} ‖a‖²
//! ```
//!
//! for an integer polynomial `P` of degree `k` with leading coefficient
//! `c₀`: root counts `ρ(m)` of `P` modulo `m`, Farey sequences, the exact
//! Ramanujan-sum kernel of the quadratic form, the power-sum examples
//! showing the bound cannot be improved much, and the analogous sum over
//! primitive Dirichlet characters.
//!
//! Floating-point paths are generic over [`Real`] (`f32`, `f64`); rational
//! sums are generic over [`Field`], which includes the exact [`Rational`].

pub mod arith;
pub mod characters;
pub mod error;
pub mod farey;
pub mod oracle;
pub mod polynomial;
pub mod polyroots;
pub mod scalar;
pub mod sharpness;
pub mod sieve;
pub mod suite;

pub use error::{Error, Result};
pub use polynomial::IntPolynomial;
pub use scalar::{Field, Real};

/// Exact rational used for root-count sums and bound chains.
pub type Rational = num_rational::BigRational;
pub type Complex64 = num_complex::Complex<f64>;
pub type Complex32 = num_complex::Complex<f32>;

pub type SieveInstance64 = sieve::SieveInstance<f64>;
pub type SieveInstance32 = sieve::SieveInstance<f32>;
pub type SieveReport64 = sieve::SieveReport<f64>;
pub type SieveReport32 = sieve::SieveReport<f32>;
pub type CorollaryReport64 = characters::CorollaryReport<f64>;
