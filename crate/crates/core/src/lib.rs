//! Exact-arithmetic engine for multivariate Bailey transform matrices,
//! Bailey pairs, and Bailey lemma steps, in two families tagged A and C.
//!
//! Everything is computed over the rationals with arbitrary-precision
//! integer parts; there is no floating point and no tolerance anywhere.
//! A verification verdict of "pass" means exact equality of reduced
//! fractions at every checked cell.
//!
//! Module map:
//!
//! * `qfield` — rational scalars and the q-shifted factorial (q-Pochhammer
//!   symbol) for all integer subscripts;
//! * `lattice` — multi-indices, componentwise and lexicographic orders,
//!   and enumeration of bounded boxes;
//! * `transforms` — entrywise evaluation of the inverse lower-triangular
//!   matrix pair (M, M*) for both families, block assembly, and
//!   admissibility scans;
//! * `bailey` — Bailey pairs over a box, the lemma step constructions
//!   that map a pair to a new pair with fresh parameters, and iterated
//!   chains;
//! * `verify` — exhaustive exact checks (matrix inversion, pair relation,
//!   round trip, lemma preservation, rank-1 classical reduction) with
//!   per-cell witnesses, deterministic parameter sampling, and stable
//!   human/machine report formats.

pub mod bailey;
pub mod error;
pub mod lattice;
pub mod qfield;
pub mod transforms;
pub mod verify;

pub use error::Error;
pub use qfield::Rational;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
