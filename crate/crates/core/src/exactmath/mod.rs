//! Exact unsigned arithmetic: primality, factorization, divisor enumeration.
//!
//! Every magnitude is a `u128`. Products that can leave that range go through
//! checked arithmetic (and `num-bigint` where a full product is needed), so
//! nothing ever wraps silently.

mod divisors;
mod factor;
mod primality;
mod table;

pub use divisors::{divisors, divisors_capped, divisors_up_to, DEFAULT_DIVISOR_CAP};
pub use factor::{factorize, Factorization, Factorizer, DEFAULT_WORK_BUDGET};
pub use primality::{is_prime, is_prime_seeded};
pub use table::SmallFactorTable;

/// Greatest common divisor. `gcd(0, 0)` is 0.
pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Floor of the square root.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    // the float estimate can be off by a few units for large n
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}
