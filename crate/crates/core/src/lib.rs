//! Exact decompositions `4/n = 1/x + 1/y + 1/z`.
//!
//! - [`exactmath`]: primality, factorization, divisors.
//! - [`decomposition`]: the triple type and the exact verifier.
//! - [`identities`]: closed-form families and the residue atlas.
//! - [`splitsearch`]: divisor-pair split search and the exception sieve.
//! - [`parametric`]: `(w5, u5)` search, `p = 3 mod 4` closed forms, `w2 = 1` families.
//! - [`oracle`]: exhaustive enumeration for small `n`.
//! - [`harness`]: the solve pipeline, range sieve, cache and reports.

pub mod decomposition;
pub mod error;
pub mod exactmath;
pub mod harness;
pub mod identities;
pub mod oracle;
pub mod parametric;
pub mod splitsearch;

pub use decomposition::{
    canonicalize, verify_triple, x_bounds, Decomposition, FamilyId, Method, Params, UnitTriple,
};
pub use error::{Error, Result};
