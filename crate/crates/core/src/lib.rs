//! Instruments for classifying the automorphisms of the noncommutative
//! 2-torus induced by SL(2,Z) matrices.
//!
//! The toolkit has three legs:
//!
//! * **Exact spectral side** ([`sl2z`], [`weyl`], [`afl`]): integer matrix
//!   classification with surd eigenvalues and the entropy formula
//!   `ln(lambda)` for trace above 2; the symbolic Weyl algebra with
//!   tracial state and matrix automorphisms; operational partitions,
//!   correlation matrices and finite-n entropy-production profiles.
//! * **Classical symbolic side** ([`dynamics`], [`codec`], [`entropy`]):
//!   the toral automorphism in exact rational or fixed-point arithmetic,
//!   grid partitions, n-adic codecs, plug-in block entropies and the
//!   incremental-parse compression rate.
//! * **Description-length side** ([`depth`]): a toy prefix machine with an
//!   exhaustively enumerable halting set, canonical programs,
//!   s-incompressibility and logical-depth brackets.
//!
//! [`report`] combines the legs into a single classification verdict.
//!
//! Floating-point routines are generic over a [`scalar::Scalar`]; the
//! aliases below pin the default `f64` instantiations.

pub mod afl;
pub mod codec;
pub mod depth;
pub mod dynamics;
pub mod entropy;
pub mod error;
pub mod hiprec;
pub mod jacobi;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod sl2z;
pub mod weyl;
pub mod words;

pub use error::{Error, Result};

/// Default working scalar.
pub type Real = f64;
/// Complex number over the default scalar.
pub type Cplx = num_complex::Complex<f64>;

pub type WeylElement64 = weyl::WeylElement<f64>;
pub type WeylElement32 = weyl::WeylElement<f32>;
pub type OperationalPartition64 = afl::OperationalPartition<f64>;
pub type CorrelationMatrix64 = afl::CorrelationMatrix<f64>;
pub type HermitianMatrix64 = jacobi::HermitianMatrix<f64>;
pub type StochasticVector64 = entropy::StochasticVector<f64>;
