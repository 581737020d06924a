//! Computation and verification of `A_n/G_n`, the ratio of the arithmetic
//! and geometric means of the first n primes.
//!
//! - [`sieve`] streams primes in order.
//! - [`kernel`] keeps the running sums and derives every quantity of
//!   interest with a rigorous error radius.
//! - [`series`] builds the asymptotic expansions with exact rationals.
//! - [`catalog`] holds the published inequalities as data.
//! - [`verifier`] checks catalog entries over ranges of n, with checkpoints.

pub mod catalog;
pub mod dd;
pub mod hexfloat;
pub mod kernel;
pub mod quantity;
pub mod series;
pub mod sieve;
pub mod verifier;

pub use catalog::{catalog, lookup, BoundSpec, Check, ClaimedRange, Side, Target, Verdict};
pub use dd::DoubleDouble;
pub use kernel::{Precision, PrimeState, Quantities};
pub use quantity::{DomainError, Quantity, Scalar};
pub use series::{ratio_expansion, SeriesError, SeriesPoly};
pub use sieve::{PrimeStream, SieveConfig};
